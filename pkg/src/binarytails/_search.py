"""One-dimensional maximisation helpers."""

from __future__ import annotations

import math

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
NEG_INF = -math.inf


def _safe(v: float) -> float:
    # NaN compares false against everything; treat it as -inf.
    return NEG_INF if v != v else v


def golden_max(f, lo: float, hi: float, *, rel_tol: float = 1e-10,
               abs_tol: float = 0.0, max_iter: int = 200):
    """Maximise a unimodal ``f`` on ``[lo, hi]`` by golden-section search.

    Returns ``(x, f(x))`` for the best point seen, endpoints included. The
    objective may be ``-inf`` outside a sub-interval (extended-valued concave
    functions); when both probes are infinite the bracket keeps the side whose
    endpoint is finite.
    """
    if hi < lo:
        lo, hi = hi, lo
    a, b = lo, hi
    fa, fb = _safe(f(a)), _safe(f(b))
    best_x, best_f = (a, fa) if fa >= fb else (b, fb)
    x1 = b - INV_PHI * (b - a)
    x2 = a + INV_PHI * (b - a)
    f1, f2 = _safe(f(x1)), _safe(f(x2))
    for _ in range(max_iter):
        if b - a <= max(rel_tol * max(abs(a), abs(b)), abs_tol):
            break
        if f1 == NEG_INF and f2 == NEG_INF:
            go_right = fb > NEG_INF and fa == NEG_INF
        else:
            go_right = f1 < f2
        if go_right:
            a, fa = x1, f1
            x1, f1 = x2, f2
            x2 = a + INV_PHI * (b - a)
            f2 = _safe(f(x2))
        else:
            b, fb = x2, f2
            x2, f2 = x1, f1
            x1 = b - INV_PHI * (b - a)
            f1 = _safe(f(x1))
    for x, fx in ((x1, f1), (x2, f2)):
        if fx > best_f:
            best_x, best_f = x, fx
    return best_x, best_f
