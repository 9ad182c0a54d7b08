"""Exact algebra for the quantum Hopf bundle S^7_q -> Sigma^4_q."""

__version__ = "0.1.0"
