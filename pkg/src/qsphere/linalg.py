"""Sparse exact linear algebra over the coefficient field.

Vectors are dicts ``{key: coeff}``; any exact field (``mpq`` or ``RatQ``)
works as long as it supports ``+ - * /`` and truthiness.
"""

from __future__ import annotations

from .ncpoly import add_into


class Echelon:
    """Incrementally maintained echelon basis, remembering combinations."""

    def __init__(self, order_key=None):
        self.rows = []  # (pivot, vector, combination)
        self.pivots = {}
        self.key = order_key

    def reduce(self, vec: dict, comb: dict | None = None):
        vec = dict(vec)
        comb = dict(comb or {})
        changed = True
        while vec and changed:
            changed = False
            for k in list(vec):
                idx = self.pivots.get(k)
                if idx is not None and k in vec:
                    _, v, c = self.rows[idx]
                    f = vec[k] / v[k]
                    add_into(vec, v, -f)
                    add_into(comb, c, -f)
                    changed = True
        return vec, comb

    def add(self, vec: dict, tag=None):
        """Insert a vector; returns the dependency combination if it is dependent."""
        comb = {tag: 1} if tag is not None else {}
        vec, comb = self.reduce(vec, comb)
        if not vec:
            return comb
        pivot = min(vec, key=self.key) if self.key else min(vec, key=repr)
        self.pivots[pivot] = len(self.rows)
        self.rows.append((pivot, vec, comb))
        return None

    @property
    def rank(self):
        return len(self.rows)

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)[0]


def rank(vectors) -> int:
    E = Echelon()
    for v in vectors:
        E.add(v)
    return E.rank


def nullspace(columns: list[dict]) -> list[dict]:
    """Basis of ``{c : sum_j c_j columns[j] = 0}`` as dicts ``{j: c_j}``."""
    E = Echelon()
    out = []
    for j, col in enumerate(columns):
        dep = E.add(col, tag=j)
        if dep is not None:
            out.append({k: v for k, v in dep.items() if v})
    return out
