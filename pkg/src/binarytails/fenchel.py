"""Young-Fenchel (Legendre) conjugation.

``conjugate`` maximises the concave objective ``lam * u - f(lam)`` by
exponential bracket expansion followed by golden-section search. Conjugates
that are infinite (``u`` outside the slope range of ``f``) are returned as
``math.inf``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from ._search import golden_max
from .errors import DomainError, NotConvex

#: Bracket expansion stops here; still increasing means the conjugate is +inf.
DOMAIN_CAP = 1e12
REL_TOL = 1e-10
MAX_ITER = 200


@dataclass(frozen=True)
class ConjugableFunction:
    """A convex function on ``[domain_lo, domain_hi]`` (``+inf`` outside)."""

    evaluate: Callable[[float], float]
    domain_lo: float = -math.inf
    domain_hi: float = math.inf
    convex_certified: bool = False
    label: str = ""

    def __call__(self, lam: float) -> float:
        if lam < self.domain_lo or lam > self.domain_hi:
            return math.inf
        return float(self.evaluate(lam))

    def certify(self, n_pairs: int = 10_000, *, span: float = 100.0,
                seed: int = 0, tol: float = 1e-10) -> "ConjugableFunction":
        """Return a certified copy after a sampled midpoint-convexity test.

        Pairs are drawn from the domain clipped to a window of width
        ``2 * span``; raises `NotConvex` on the first violation.
        """
        lo = self.domain_lo if math.isfinite(self.domain_lo) else (
            self.domain_hi - 2 * span if math.isfinite(self.domain_hi) else -span)
        hi = self.domain_hi if math.isfinite(self.domain_hi) else lo + 2 * span
        rng = np.random.default_rng(seed)
        pts = rng.uniform(lo, hi, size=(n_pairs, 2))
        for a, b in pts:
            fa, fb, fm = self(a), self(b), self(0.5 * (a + b))
            avg = 0.5 * (fa + fb)
            if fm > avg + tol * max(1.0, abs(avg)):
                raise NotConvex(
                    f"{self.label or 'function'}: midpoint test fails at ({a:.6g}, {b:.6g})")
        return replace(self, convex_certified=True)


def _expand(h, x0: float, h0: float, direction: int, edge: float):
    """Walk from ``x0`` in doubling steps until ``h`` stops increasing.

    Returns the bracket end, or ``None`` when the objective still increases
    at the domain cap.
    """
    prev_h = h0
    step = 1.0
    while True:
        x = x0 + direction * step
        at_edge = (direction > 0 and x >= edge) or (direction < 0 and x <= edge)
        if at_edge:
            x = edge
        hx = h(x)
        if not hx > prev_h or at_edge:
            return x
        if abs(x) >= DOMAIN_CAP:
            return None
        prev_h = hx
        step *= 2.0


def conjugate_point(f: ConjugableFunction, u: float):
    """Conjugate value ``f*(u)`` together with its maximising ``lam``."""
    if not f.convex_certified:
        raise NotConvex(f"{f.label or 'function'} has no convexity certificate")
    if u != u:
        raise DomainError("conjugate: NaN argument")

    def h(lam):
        v = lam * u - f(lam)
        return -math.inf if v != v else v

    lo, hi = f.domain_lo, f.domain_hi
    x0 = min(max(0.0, lo), hi)
    h0 = h(x0)
    right = x0 if hi <= x0 else _expand(h, x0, h0, +1, hi)
    left = x0 if lo >= x0 else _expand(h, x0, h0, -1, lo)
    if right is None:
        return math.inf, math.inf
    if left is None:
        return math.inf, -math.inf
    x, v = golden_max(h, left, right, rel_tol=REL_TOL, abs_tol=1e-13, max_iter=MAX_ITER)
    candidates = [(x, v), (x0, h0)]
    if math.isfinite(lo):
        candidates.append((lo, h(lo)))
    if math.isfinite(hi):
        candidates.append((hi, h(hi)))
    x, v = max(candidates, key=lambda c: c[1])
    return v, x


def conjugate(f: ConjugableFunction, u: float) -> float:
    """``sup_lam (lam * u - f(lam))`` over the domain of ``f``; may be ``inf``."""
    return conjugate_point(f, u)[0]


def conjugate_power_law(a_exponent: float, scale: float, u: float) -> float:
    """Closed-form conjugate of ``scale * lam**a`` over ``lam >= 0``.

    For ``u > 0`` the maximiser is ``(u / (a * scale))**(1/(a-1))`` and the value
    ``(a - 1) * scale * (u / (a * scale))**(a/(a-1))``; for ``u <= 0`` it is 0.
    """
    a = float(a_exponent)
    if not a > 1.0:
        raise DomainError("conjugate_power_law requires exponent > 1")
    if not scale > 0.0:
        raise DomainError("conjugate_power_law requires scale > 0")
    if u <= 0.0:
        return 0.0
    log_ratio = math.log(u) - math.log(a * scale)
    return (a - 1.0) * scale * math.exp(a / (a - 1.0) * log_ratio)


def fenchel_moreau_check(f: ConjugableFunction, sample_points) -> float:
    """Largest ``|f**(lam) - f(lam)|`` over ``sample_points``.

    The biconjugate is computed by conjugating the numeric conjugate, so the
    inner transform adapts to each outer argument.
    """
    if not f.convex_certified:
        raise NotConvex(f"{f.label or 'function'} has no convexity certificate")
    fstar = ConjugableFunction(lambda u: conjugate(f, u), convex_certified=True,
                               label=f"({f.label})*")
    worst = 0.0
    for lam in np.asarray(sample_points, dtype=float).ravel():
        dev = abs(conjugate(fstar, float(lam)) - f(float(lam)))
        worst = max(worst, dev)
    return worst
