"""Combinatorial invariants of finite higher-rank graphs and Ore monoid actions."""

__version__ = "0.1.0"
