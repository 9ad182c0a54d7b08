"""Command line entry point: named verification suites with text or JSON reports.

    qsphere <suite> [verb] [--q p/r] [--cutoff N] [--degree d] [--json]

Exit status is 0 when every check passes, 1 when any fails, 2 on a bad configuration.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import os
import re
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__

SUITES = ["presentations", "quotient", "bundle", "poisson", "fock", "chern"]
DEFAULT_STEP_LIMIT = 10_000


class ConfigError(ValueError):
    pass


@dataclass
class Config:
    suite: str
    verb: str | None = None
    q0: Fraction = Fraction(1, 2)
    cutoff: int = 40
    degree: int = 4
    step_limit: int = DEFAULT_STEP_LIMIT
    n: int = 1
    subgroup: str | None = None
    expr: str | None = None
    output: str = "text"

    def as_dict(self):
        return {
            "suite": self.suite, "verb": self.verb, "q0": str(self.q0), "cutoff": self.cutoff,
            "degree": self.degree, "step_limit": self.step_limit, "n": self.n,
            "subgroup": self.subgroup, "expr": self.expr,
        }


@dataclass
class Report:
    config: Config
    checks: list = field(default_factory=list)

    def check(self, cid, anchor, expected, fn, vacuous=False):
        """Run ``fn() -> (ok, actual)``; failures and exceptions are recorded, not raised."""
        t = time.perf_counter()
        try:
            ok, actual = fn()
        except Exception as e:  # a crashing check is a failing check
            ok, actual = False, f"{type(e).__name__}: {e}"
        self.checks.append({
            "id": cid,
            "paper_anchor": anchor,
            "status": "pass" if ok else "fail",
            "flag": "vacuous" if vacuous and ok else None,
            "expected": str(expected),
            "actual": str(actual),
            "elapsed": round(time.perf_counter() - t, 3),
        })

    @property
    def failed(self):
        return sum(c["status"] == "fail" for c in self.checks)

    def as_dict(self):
        return {
            "version": __version__,
            "config": self.config.as_dict(),
            "checks": self.checks,
            "summary": {"pass": len(self.checks) - self.failed, "fail": self.failed},
        }

    def text(self):
        lines = []
        for c in self.checks:
            tag = c["status"].upper() + (" (vacuous)" if c["flag"] else "")
            lines.append(f"{tag:16} {c['id']:40} expected: {c['expected']}")
            lines.append(f"{'':16} {'':40} actual:   {c['actual']}")
        lines.append(f"{len(self.checks) - self.failed} passed, {self.failed} failed")
        return "\n".join(lines)


def parse_q(text: str) -> Fraction:
    if not re.fullmatch(r"\s*\d+\s*(/\s*\d+\s*)?", text):
        raise ConfigError(f"--q expects an exact rational p/r, got {text!r}")
    q = Fraction(text.replace(" ", ""))
    if not 0 < q < 1:
        raise ConfigError("--q must lie strictly between 0 and 1")
    return q


def env_step_limit() -> int:
    raw = os.environ.get("QSPHERE_STEP_LIMIT")
    if raw is None:
        return DEFAULT_STEP_LIMIT
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"QSPHERE_STEP_LIMIT must be an integer, got {raw!r}") from None
    if n < 1:
        raise ConfigError("QSPHERE_STEP_LIMIT must be positive")
    return n


@contextlib.contextmanager
def step_limit(rs, n):
    old = rs.step_limit
    rs.step_limit = n
    try:
        yield
    finally:
        rs.step_limit = old


# --- suites ---


def run_presentations(cfg, rep, verb=None):
    from . import algebras as al

    for name in ("uq4", "s7q", "sigma4q", "sigma4q-loc"):
        def confluent(name=name):
            P = al.get(name)
            obs = P.rs.obstructions()
            return not obs, f"{len(P.rs.rules)} rules, {len(obs)} obstructions"
        rep.check(f"presentations.confluence.{name}", "completed presentation", "0 obstructions", confluent)

    def pattern():
        rows = al.basis_pattern_check(al.build_sigma4q(), 4)
        return all(r["ok"] for r in rows), [(r["degree"], r["normal"]) for r in rows]
    rep.check("presentations.sigma4.basis", "ordered monomial basis, k1 k2 = 0",
              "a*^i a^j R^k b*^l b^m, lm = 0", pattern)

    def flat():
        S, C = al.build_sigma4q(), al.build_sigma4q(1)
        dims = [(len(S.normal_words(d)), len(C.normal_words(d))) for d in range(5)]
        return all(x == y for x, y in dims), dims
    rep.check("presentations.sigma4.flat", "basis independent of q", "equal dimensions at q and q=1", flat)

    def embedding():
        res = al.verify_embedding(al.build_sigma4q(), al.build_s7q())
        bad = [t for t, r in res if r.terms]
        return not bad, f"{len(res) - len(bad)}/{len(res)} relations vanish"
    rep.check("presentations.embedding", "Sigma^4_q relations inside S^7_q", "7/7 relations vanish", embedding)

    def zeta():
        res = al.zeta_relation_residuals(al.build_sigma4q_localized())
        bad = [t for t, r in res if r.terms]
        return not bad, f"{len(res) - len(bad)}/{len(res)} relations vanish"
    rep.check("presentations.zeta", "stereographic relations", "4/4 relations vanish", zeta)

    def antipode():
        U = al.build_uq4()
        bad = 0
        for i in range(1, 5):
            for j in range(1, 5):
                s = sum((U.mul(U.antipode(U.t(i, k)), U.t(k, j)) for k in range(1, 5)), U.scalar(0))
                t = sum((U.mul(U.t(i, k), U.antipode(U.t(k, j))) for k in range(1, 5)), U.scalar(0))
                target = U.scalar(1 if i == j else 0)
                bad += (not U.equal(s, target)) + (not U.equal(t, target))
        return bad == 0, f"{32 - bad}/32 identities"
    rep.check("presentations.antipode", "antipode from quantum minors", "S(t)t = tS(t) = 1", antipode)


def run_quotient(cfg, rep, verb=None):
    from .algebras import build_sigma4q, embed, embedding_images
    from .quotient import get_quotient, span_check

    Q = get_quotient()
    if verb in (None, "check-coideal"):
        def dq():
            r = Q.reduce_mod_R(Q.U.qdet)
            return r.rep == Q.U.one(), r.render()
        rep.check("quotient.reduce_qdet", "D_q maps to 1", "[1]", dq)

        def coideal():
            rows = Q.check_coideal()
            bad = [t for t, proj, eps in rows if proj or eps != 0]
            return not bad, f"{len(rows) - len(bad)}/{len(rows)} elements: projection 0 and counit 0"
        rep.check("quotient.coideal", "two-sided coideal", "13/13", coideal)

        def absorb():
            bad = Q.absorption_failures(3)
            return not bad, f"{len(bad)} nonzero r(rho u)"
        rep.check("quotient.right_ideal", "right ideal absorption", "r(rho u) = 0 for deg u <= 3", absorb)
    if verb == "reduce":
        def red():
            p = Q.parse(cfg.expr)
            with step_limit(Q.U.rs, cfg.step_limit):
                r = Q.reduce_mod_R(p)
            return True, r.render()
        rep.check("quotient.reduce", "plumbing", "class of the input", red)
    if verb in (None, "coinvariants"):
        d = cfg.degree if verb == "coinvariants" else 2

        def slice_():
            basis = Q.coinvariant_slice(d)
            if d != 2:
                return True, f"dimension {len(basis)}: " + "; ".join(b.render() for b in basis)
            S, s7 = build_sigma4q(), Q.S7
            images = embedding_images(s7)
            expected = [s7.one()] + [embed(S.gen(g), s7, images) for g in ("R", "a", "a*", "b", "b*")]
            ranks = span_check(Q, basis, expected)
            return ranks == {"slice": 6, "expected": 6, "union": 6}, ranks
        exp = "span{1, R, a, a*, b, b*}" if d == 2 else "basis of coinvariants"
        rep.check(f"quotient.coinvariants.deg{d}", "coinvariants of the coaction", exp, slice_)


def run_bundle(cfg, rep, verb=None):
    from . import bundle as bd
    from .linalg import rank
    from .quotient import get_quotient

    if verb in (None, "build-G"):
        def build():
            G, E = bd.build_G(), bd.expected_G()
            if verb or G != E:
                return G == E, G.render()
            return True, "16/16 entries match"
        rep.check("bundle.G_entries", "projector entries", "G_ij = <f_i, f_j> as tabulated", build)
    if verb in (None, "verify-projector"):
        def proj():
            v = bd.verify_projector(bd.expected_G())
            return v["idempotent"] and v["selfadjoint"], f"G^2-G: {v['G^2 - G']}; G-G^dagger: {v['G - G^dagger']}"
        rep.check("bundle.projector", "G^2 = G = G^dagger", "both zero", proj)

        def trace():
            G = bd.expected_G()
            t = G.trace()
            return G.P.equal(t, G.P.parse(bd.TRACE_G)), t.render()
        rep.check("bundle.trace", "trace of the projector", bd.TRACE_G, trace)

        def cotensor():
            Q = get_quotient()
            fs = bd.sections(Q.S7)
            ok = [n for n, f in fs.items() if bd.check_cotensor(f, Q)]
            return len(ok) == len(fs), f"{len(ok)}/{len(fs)} sections equivariant"
        rep.check("bundle.sections", "equivariant sections f_1..f_4", "4/4", cotensor)
    if verb in (None, "classical-check"):
        def classical():
            r = bd.classical_crosscheck()
            ok = all(v for k, v in r.items() if k != "section_signs")
            return ok, r
        rep.check("bundle.classical", "instanton projector at q = 1", "all identities hold", classical)
    if verb in (None, "sections"):
        d = cfg.degree if verb == "sections" else 3

        def span():
            Q = get_quotient()
            ss = bd.section_slice(d, Q)
            ms = [bd.Section(Q.S7.nf(s.F1), Q.S7.nf(s.F2)) for s in bd.module_span(d, Q)]
            vs = [bd.section_vector(s) for s in ss]
            vm = [bd.section_vector(s) for s in ms]
            r = (rank(vs), rank(vm), rank(vs + vm))
            return r[0] == r[1] == r[2], f"ranks slice/module/union = {r}"
        rep.check(f"bundle.sections.deg{d}", "sections form the module generated by f_i",
                  "equal spans", span)


def run_poisson(cfg, rep, verb=None):
    from . import poisson as po

    if verb in (None, "coisotropy"):
        def cocycle():
            bad = po.u4().cocycle_defects()
            return not bad, f"{len(bad)} defective pairs over the 16-element basis"
        rep.check("poisson.cocycle", "coboundary bialgebra on u(4)", "delta is a 1-cocycle", cocycle)
        names = [cfg.subgroup] if verb == "coisotropy" and cfg.subgroup else list(po.SUBGROUPS)
        for name in names:
            def cois(name=name):
                r = po.coisotropy_report(name)
                return r["ok"], {k: r[k] for k in ("dim", "coisotropic", "poisson_lie")}
            rep.check(f"poisson.coisotropy.{name}", "coisotropic subgroups of U(4)",
                      po.SUBGROUPS[name][2], cois)
    if verb in (None, "brackets"):
        for row in po.bracket_table_check():
            rep.check(f"poisson.bracket.{row['bracket']}", "S^4 and stereographic brackets", "holds on the sphere",
                      lambda row=row: (row["ok"], row["ok"]))

        def jac():
            r = po.jacobi_check(sample_degree=2, samples=5)
            return r["ok"], f"{len(r['generator_failures'])} generator, {r['random_failures']} random failures"
        rep.check("poisson.jacobi", "plumbing", "0 residuals", jac)

        def cas():
            r = po.casimir_check()
            return r["s4_relation_respected"] and r["sphere_casimir"], {k: r[k] for k in ("s4_relation_respected", "sphere_casimir")}
        rep.check("poisson.casimir", "sphere relation is respected", "both True", cas)

        def ranks():
            r = po.rank_report()
            return r == {"rank_at_R0": 0, "stereographic_rank": 4}, r
        rep.check("poisson.rank", "rank zero at R = 0, symplectic chart", "ranks 0 and 4", ranks)
    if verb in (None, "limit-check"):
        def limit():
            r = po.semiclassical_limit_check()
            return r["ok"], {
                "s": r["global_sign"], "pairs": len(r["rows"]),
                "literal_offdiagonal_relative_sign": r["literal_offdiagonal_relative_sign"],
                "literal_diagonal_consistent": r["literal_diagonal_consistent"],
                **r["diagonal_forms"],
            }
        rep.check("poisson.limit", "q -> 1 limit of the commutators", "one global sign s", limit)


def run_fock(cfg, rep, verb=None):
    from . import fock as fk

    N, q0 = cfg.cutoff, cfg.q0
    if verb in (None, "relations"):
        for row in fk.check_relations_on_truncation(N, q0):
            rep.check(f"fock.relation.{row['check']}", "Fock representation", "0 interior entries",
                      lambda row=row: (row["ok"], f"{row['interior_nonzero']} nonzero"), vacuous=row["vacuous"])
    if verb in (None, "zeta"):
        for row in fk.rep_zeta_check(N, q0):
            rep.check(f"fock.zeta.{row['check']}", "stereographic relations in the representation",
                      "0 interior entries", lambda row=row: (row["ok"], f"{row['interior_nonzero']} nonzero"),
                      vacuous=row["vacuous"])
    if verb in (None, "traces"):
        for row in fk.trace_report(N, q0):
            def tr(row=row):
                ok = row["exact_matches"] and row["delta"] <= 1e-12
                return ok, f"exact {row['exact']}, truncated {row['truncated']!r}, |delta| {row['delta']:.3e}"
            rep.check(f"fock.{row['check']}", "traces of the representation", row["expected"], tr)
    if verb in (None, "trace-class"):
        for row in fk.trace_class_diagnostics(N, q0):
            rep.check(f"fock.{row['check']}.claimed", "trace-class bounds", f"<= {row['claimed_bound']:.6f}",
                      lambda row=row: (row["below_claimed"] and row["monotone"], f"{row['partial_sum']:.6f}"))
            rep.check(f"fock.{row['check']}.valid", "plumbing", f"<= {row['valid_bound']:.6f}",
                      lambda row=row: (row["below_valid"] and row["monotone"], f"{row['partial_sum']:.6f}"))


def run_chern(cfg, rep, verb=None):
    from . import chern as ch
    from .bundle import TRACE_G

    if verb == "class":
        def cls():
            c = ch.chern(cfg.n)
            return True, f"{c.size()} terms: {c.render(8)}"
        rep.check(f"chern.class.{cfg.n}", "Chern character", "ch_n", cls)
        return
    if verb in (None, "pairing"):
        def ch0():
            c = ch.chern(0)
            return c.P.equal(c.as_element(), c.P.parse(TRACE_G)), c.as_element().render()
        rep.check("chern.ch0", "ch_0 = trace of G", TRACE_G, ch0)

        def pairing():
            v = ch.pairing_with_trace(ch.chern(0))
            return v == -1, v
        rep.check("chern.pairing", "pairing with tr_sigma", "-1", pairing)
    if verb in (None, "cycle-check"):
        ns = [cfg.n] if verb == "cycle-check" else [1, 2]
        for n in ns:
            def cyc(n=n):
                c = ch.chern(n)
                return ch.cyclic_cycle_check(c), f"{c.size()} terms"
            rep.check(f"chern.cycle.ch{n}", "ch_n is a cyclic cycle", "beta(ch_n) in im(1 - t)", cyc)
    if verb is None:
        for n in (1, 2):
            def srel(n=n):
                r = ch.s_relation_check(n)
                return r["trivial"], r
            rep.check(f"chern.S.ch{n}", "periodicity S(ch_n) and ch_(n-1)", f"S(ch_{n}) = -1/{2 * (2 * n - 1)} ch_{n - 1}", srel)

        def trp():
            r = ch.trace_property_check(100, 3, seed=0)
            return r["ok"], f"{len(r['failures'])} failures in {r['samples']}"
        rep.check("chern.trace_property", "tr_sigma is a trace", "tr(xy) = tr(yx) on 100 pairs", trp)


RUNNERS = {
    "presentations": run_presentations, "quotient": run_quotient, "bundle": run_bundle,
    "poisson": run_poisson, "fock": run_fock, "chern": run_chern,
}

VERBS = {
    "quotient": ["check-coideal", "reduce", "coinvariants"],
    "bundle": ["build-G", "verify-projector", "classical-check", "sections"],
    "poisson": ["coisotropy", "brackets", "limit-check"],
    "fock": ["traces", "relations", "zeta", "trace-class"],
    "chern": ["class", "pairing", "cycle-check"],
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", default="1/2", help="rational parameter p/r for numeric suites")
    common.add_argument("--cutoff", type=int, default=40, help="Fock truncation N")
    common.add_argument("--degree", type=int, default=4, help="degree bound")
    common.add_argument("--n", type=int, default=1, help="Chern degree")
    common.add_argument("--subgroup", choices=["diag", "conjugated", "u3"])
    common.add_argument("--json", action="store_true", help="machine-readable report")
    p = argparse.ArgumentParser(prog="qsphere", description="Exact verification suites for the quantum Hopf bundle.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="suite", required=True)
    sub.add_parser("all", parents=[common])
    for s in SUITES:
        sp_ = sub.add_parser(s, parents=[common])
        if s in VERBS:
            sp_.add_argument("verb", nargs="?", choices=VERBS[s])
            if s == "quotient":
                sp_.add_argument("expr", nargs="?", help="U_q(4) expression for 'reduce'")
    return p


def make_config(args) -> Config:
    cfg = Config(suite=args.suite, verb=getattr(args, "verb", None), expr=getattr(args, "expr", None))
    cfg.q0 = parse_q(args.q)
    if args.cutoff < 1:
        raise ConfigError("--cutoff must be at least 1")
    if args.degree < 2:
        raise ConfigError("--degree must be at least 2")
    if args.n < 0:
        raise ConfigError("--n must be non-negative")
    cfg.cutoff, cfg.degree, cfg.n, cfg.subgroup = args.cutoff, args.degree, args.n, args.subgroup
    cfg.step_limit = env_step_limit()
    cfg.output = "json" if args.json else "text"
    if cfg.verb == "reduce" and not cfg.expr:
        raise ConfigError("'quotient reduce' needs an expression")
    return cfg


def run(cfg: Config) -> Report:
    rep = Report(cfg)
    suites = SUITES if cfg.suite == "all" else [cfg.suite]
    for s in suites:
        RUNNERS[s](cfg, rep, cfg.verb)
    return rep


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = make_config(args)
    except ConfigError as e:
        print(f"qsphere: error: {e}", file=sys.stderr)
        return 2
    rep = run(cfg)
    if cfg.output == "json":
        print(json.dumps(rep.as_dict(), indent=2, sort_keys=True))
    else:
        print(rep.text())
    return 1 if rep.failed else 0


if __name__ == "__main__":
    sys.exit(main())
