"""Assembly of the closed-form tables and exact rendering of their entries.

Entries of the tables are all of the form (p/q) * sqrt(2)^e with small
denominators, so they are rendered both as floats and as exact strings.
Table keys use the 1-based labels e1..e4.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product

import numpy as np

from .algebra import BASIS, GRAM, SQRT2, bracket, k_form, killing_matrix
from .curvature import (
    CURVATURE_OPERATOR_PRINTED,
    K0,
    K1,
    K2,
    christoffel_left_invariant,
    curvature_operator_nonflat,
    metric_index,
    ricci_matrix,
    riemann,
    scalar_curvature,
    sectional,
    weyl_case_value,
    weyl_tensor,
)

EXACT_TOL = 1e-12
MAX_DENOMINATOR = 64


def rational_radical(x: float, tol: float = EXACT_TOL) -> str | None:
    """Render ``x`` as "p/q*sqrt(2)^e" (e in {0, 1}) or None if no match."""
    if abs(x) <= tol:
        return "0"
    for e in (0, 1):
        r = x / SQRT2**e
        f = Fraction(r).limit_denominator(MAX_DENOMINATOR)
        if abs(float(f) * SQRT2**e - x) <= tol:
            return f"{f.numerator}/{f.denominator}*sqrt(2)^{e}"
    return None


def snap(x: float, tol: float = EXACT_TOL) -> float:
    """Replace ``x`` by the nearest (p/q) * sqrt(2)^e value when within tol."""
    if abs(x) <= tol:
        return 0.0
    for e in (0, 1):
        f = Fraction(x / SQRT2**e).limit_denominator(MAX_DENOMINATOR)
        val = float(f) * SQRT2**e
        if abs(val - x) <= tol:
            return float(val)
    return float(x)


def _key(*idx) -> str:
    return ",".join(str(i + 1) for i in idx)


def _nonzero(entries: dict, tol: float = EXACT_TOL) -> dict:
    return {k: float(v) for k, v in entries.items() if abs(v) > tol}


def build_tables() -> dict:
    """Every table as ``{name: {key: float}}``. Only nonzero entries are
    kept, except for the metric-like tables that are listed in full."""
    t: dict[str, dict[str, float]] = {}
    t["k"] = {_key(i, j): k_form(BASIS[i], BASIS[j]) for i, j in product(range(4), repeat=2)}
    t["bracket"] = {}
    for i, j in product(range(4), repeat=2):
        if i < j:
            for m, c in enumerate(bracket(BASIS[i], BASIS[j]).coeffs):
                if abs(c) > EXACT_TOL:
                    t["bracket"][f"{_key(i, j)}->{m + 1}"] = float(c)
    t["riemann"] = {}
    for i, j, k in product(range(4), repeat=3):
        for m, c in enumerate(riemann(BASIS[i], BASIS[j], BASIS[k]).coeffs):
            if abs(c) > EXACT_TOL:
                t["riemann"][f"{_key(i, j, k)}->{m + 1}"] = float(c)
    t["sectional"] = {_key(i, j): sectional(BASIS[i], BASIS[j]) for i in range(4) for j in range(i + 1, 4)}
    t["scalar"] = {"S": scalar_curvature()}
    B = killing_matrix()
    t["killing"] = {_key(i, j): float(B[i, j]) for i, j in product(range(4), repeat=2)}
    ric = ricci_matrix().data
    t["ricci"] = {_key(i, j): float(ric[i, j]) for i, j in product(range(4), repeat=2)}
    # printed case table, restricted to the cells it covers
    weyl = {}
    for idx in product(range(4), repeat=4):
        v = weyl_case_value(*(n + 1 for n in idx))
        if v is not None and v != 0.0:
            weyl[_key(*idx)] = v
    t["weyl"] = weyl
    w = weyl_tensor().data
    t["weyl_computed"] = _nonzero({_key(*idx): w[idx] for idx in product(range(4), repeat=4)})
    for name, metric in (("K0", K0), ("K1", K1), ("K2", K2)):
        g = metric.data
        t[f"gram_{name}"] = {_key(i, j): float(g[i, j]) for i, j in product(range(4), repeat=2)}
        t[f"index_{name}"] = {"index": float(metric_index(metric))}
        gam = christoffel_left_invariant(metric)
        t[f"christoffel_{name}"] = _nonzero({_key(*idx): gam[idx] for idx in product(range(4), repeat=3)})
    for (name, i, j) in CURVATURE_OPERATOR_PRINTED:
        metric = {"K0": K0, "K2": K2}[name]
        op = curvature_operator_nonflat(metric, i, j)
        t[f"curvature_operator_{name}_{i + 1}{j + 1}"] = _nonzero(
            {_key(a, b): op[a, b] for a, b in product(range(4), repeat=2)}
        )
    return {name: {k: snap(v) for k, v in tab.items()} for name, tab in t.items()}


def exact_strings(tables: dict) -> dict:
    return {name: {k: rational_radical(v) for k, v in tab.items()} for name, tab in tables.items()}


def table_rows(tables: dict) -> list[tuple[str, str, float, str | None]]:
    """(table, key, value, exact) rows with zero entries dropped."""
    rows = []
    for name, tab in tables.items():
        for k, v in tab.items():
            if abs(v) > EXACT_TOL:
                rows.append((name, k, v, rational_radical(v)))
    return rows


def gram_matrix_check() -> float:
    """max |k table - diag(-1, 1, 1, 1)|."""
    k = np.array([[k_form(a, b) for b in BASIS] for a in BASIS])
    return float(np.max(np.abs(k - GRAM)))
