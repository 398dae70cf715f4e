"""Generator functions, Bφ-norm fitting, subgaussian norms and tail bounds.

A centered variable ``xi`` has ``||xi||_phi = tau`` when ``tau`` is the least
value with ``ln E exp(lam xi) <= phi(lam tau)`` for every ``lam``. Both the fit
and the subgaussian norm are suprema over ``lam`` of a per-point ratio; they
are computed on a mirrored log grid, refined by golden section around the
grid maximiser, and extended towards ``lam -> 0`` and ``lam -> inf``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ._search import golden_max
from .errors import DomainError, Unbounded
from .fenchel import ConjugableFunction, conjugate
from .specials import log_cosh

#: Point at which the ``lam -> 0`` limit of a ratio functional is evaluated.
LIMIT_EPS = 1e-5
#: Bisection in tau stops at this relative bracket width.
TAU_REL_TOL = 1e-8
CENTERING_EPS = 1e-6
CENTERING_TOL = 1e-8
_TAU_CAP = 1e12


@dataclass(frozen=True)
class PhiFunction:
    """Even convex generator with ``phi(0) = 0``.

    ``evaluate`` must accept numpy arrays.
    """

    evaluate: Callable
    lambda0: float = math.inf
    label: str = "phi"
    second_deriv_at_zero: float | None = None

    def __call__(self, lam):
        return self.evaluate(lam)

    def check(self, grid=None, *, seed: int = 0) -> dict:
        """Sampled checks of evenness, positivity and midpoint convexity."""
        if grid is None:
            top = min(50.0, 0.999 * self.lambda0)
            grid = np.linspace(-top, top, 1001)
        grid = np.asarray(grid, dtype=float)
        vals = np.asarray(self.evaluate(grid), dtype=float)
        mirror = np.asarray(self.evaluate(-grid), dtype=float)
        rng = np.random.default_rng(seed)
        a = rng.choice(grid, 2000)
        b = rng.choice(grid, 2000)
        mid = np.asarray(self.evaluate(0.5 * (a + b)), dtype=float)
        avg = 0.5 * (np.asarray(self.evaluate(a)) + np.asarray(self.evaluate(b)))
        return {
            "zero": float(np.asarray(self.evaluate(np.array([0.0])))[0]) == 0.0,
            "even": bool(np.all(np.abs(vals - mirror) <= 1e-12 * np.maximum(1.0, np.abs(vals)))),
            "positive": bool(np.all(vals[grid > 0] > 0)),
            "convex": bool(np.all(mid <= avg + 1e-10 * np.maximum(1.0, np.abs(avg)))),
        }

    def as_conjugable(self) -> ConjugableFunction:
        lo = -self.lambda0
        return ConjugableFunction(lambda lam: float(self.evaluate(lam)), lo, self.lambda0,
                                  convex_certified=True, label=self.label)


def phi_rademacher() -> PhiFunction:
    """``ln cosh(lam / 2)``: the log-mgf of the symmetric ±1/2 variable."""
    return PhiFunction(lambda lam: log_cosh(np.asarray(lam, dtype=float) / 2.0),
                       label="ln cosh(lam/2)", second_deriv_at_zero=0.25)


def phi_subgaussian() -> PhiFunction:
    """``lam**2`` (the subgaussian generator)."""
    return PhiFunction(lambda lam: np.square(np.asarray(lam, dtype=float)),
                       label="lam^2", second_deriv_at_zero=2.0)


@dataclass(frozen=True)
class MgfOracle:
    """``log_mgf(lam) = ln E exp(lam xi)`` of a centered variable.

    ``log_mgf`` must accept numpy arrays.
    """

    log_mgf: Callable
    domain: tuple[float, float] = (-math.inf, math.inf)
    label: str = ""

    def __call__(self, lam):
        return self.log_mgf(lam)

    def scaled(self, c: float) -> "MgfOracle":
        """Oracle of ``c * xi``."""
        lo, hi = self.domain
        return MgfOracle(lambda lam: self.log_mgf(c * np.asarray(lam, dtype=float)),
                         (lo / c, hi / c), label=f"{c}*{self.label}")


def gaussian_mgf(sigma: float = 1.0) -> MgfOracle:
    return MgfOracle(lambda lam: 0.5 * sigma ** 2 * np.square(np.asarray(lam, dtype=float)),
                     label=f"N(0,{sigma}^2)")


def zero_mgf() -> MgfOracle:
    return MgfOracle(lambda lam: np.zeros_like(np.asarray(lam, dtype=float)), label="0")


@dataclass(frozen=True)
class LambdaGrid:
    """Mirrored log grid ``±[lo, hi]`` with automatic extension up to ``hi_cap``."""

    lo: float = 1e-6
    hi: float = 1e4
    per_decade: int = 400
    hi_cap: float = 1e8

    def positive(self) -> np.ndarray:
        decades = math.log10(self.hi / self.lo)
        return np.logspace(math.log10(self.lo), math.log10(self.hi),
                           int(round(decades * self.per_decade)) + 1)

    def points(self) -> np.ndarray:
        pos = self.positive()
        return np.concatenate([-pos[::-1], pos])


@dataclass(frozen=True)
class BphiNorm:
    tau: float
    phi: PhiFunction = field(repr=False)
    achieved_at: float


def _check_centered(mgf: MgfOracle) -> None:
    e = CENTERING_EPS
    vals = np.asarray(mgf(np.array([-e, 0.0, e])), dtype=float)
    if abs(vals[1]) > 1e-12:
        raise DomainError("log_mgf(0) must be 0")
    slope = (vals[2] - vals[0]) / (2 * e)
    if abs(slope) > CENTERING_TOL:
        raise DomainError(f"variable is not centered (estimated mean {slope:.3g})")


def _required_tau(phi: PhiFunction, lam: np.ndarray, target: np.ndarray) -> np.ndarray:
    """Least ``tau`` with ``phi(lam * tau) >= target``, by vectorised bisection."""
    lam = np.abs(lam)
    tau = np.zeros_like(target)
    active = target > 0
    if not active.any():
        return tau
    lam_a, tgt = lam[active], target[active]
    hi = np.ones_like(tgt)
    for _ in range(200):
        short = phi(lam_a * hi) < tgt
        if not short.any():
            break
        hi = np.where(short, hi * 2.0, hi)
        if (hi > _TAU_CAP).any():
            raise Unbounded("required tau exceeds 1e12")
    lo = np.where(phi(lam_a * hi / 2.0) >= tgt, 0.0, hi / 2.0)
    for _ in range(200):
        if np.all(hi - lo <= TAU_REL_TOL * hi):
            break
        mid = 0.5 * (lo + hi)
        ok = phi(lam_a * mid) >= tgt
        hi = np.where(ok, mid, hi)
        lo = np.where(ok, lo, mid)
    tau[active] = hi
    return tau


def _supremum(ratio, grid: LambdaGrid, *, name: str):
    """Grid supremum of ``ratio`` (vectorised) with refinement and limits."""
    pts = grid.points()
    vals = ratio(pts)
    k = int(np.argmax(vals))
    best, arg = float(vals[k]), float(pts[k])
    # golden-section refinement between the neighbours of the grid maximiser
    if 0 < k < len(pts) - 1 and np.sign(pts[k - 1]) == np.sign(pts[k + 1]):
        x, v = golden_max(lambda lam: float(ratio(np.array([lam]))[0]),
                          float(pts[k - 1]), float(pts[k + 1]), rel_tol=1e-12)
        if v > best:
            best, arg = v, x
    # lam -> 0 limit with a Richardson-style consistency check
    lim = ratio(np.array([-LIMIT_EPS, LIMIT_EPS, -LIMIT_EPS / 2, LIMIT_EPS / 2]))
    if max(abs(lim[0] - lim[2]), abs(lim[1] - lim[3])) > 1e-4:
        warnings.warn(f"{name}: lam -> 0 limit not settled at eps={LIMIT_EPS}", RuntimeWarning)
    if lim[:2].max() > best:
        best, arg = float(lim[:2].max()), 0.0
    # lam -> inf: extend the grid while the running supremum still grows
    top = grid.hi
    prev_gain = None
    while top < grid.hi_cap:
        new_top = min(2.0 * top, grid.hi_cap)
        seg = np.logspace(math.log10(top), math.log10(new_top), 121)[1:]
        seg = np.concatenate([-seg, seg])
        seg_vals = ratio(seg)
        i = int(np.argmax(seg_vals))
        gain = (float(seg_vals[i]) - best) / math.log2(new_top / top)
        if gain > 0:
            best, arg = float(seg_vals[i]), float(seg[i])
        top = new_top
        if gain <= 1e-8:
            break
        if top >= grid.hi_cap and prev_gain is not None and gain > 0.75 * prev_gain:
            raise Unbounded(f"{name}: supremum still growing at lam = {top:.3g}")
        prev_gain = gain
    return best, arg


def fit_bphi_norm(mgf: MgfOracle, phi: PhiFunction, lambda_grid: LambdaGrid | None = None) -> BphiNorm:
    """Fit ``||xi||_phi``: the least ``tau`` with ``log_mgf(lam) <= phi(lam tau)``.

    Raises
    ------
    DomainError
        If the oracle is not centered.
    Unbounded
        If the per-``lam`` requirement keeps growing (``phi`` is too weak for
        the tail of ``xi``).
    """
    grid = lambda_grid or LambdaGrid()
    _check_centered(mgf)

    def ratio(lam):
        lam = np.asarray(lam, dtype=float)
        return _required_tau(phi, lam, np.asarray(mgf(lam), dtype=float))

    tau, arg = _supremum(ratio, grid, name="fit_bphi_norm")
    if tau == 0.0:
        arg = 0.0
    return BphiNorm(tau=tau, phi=phi, achieved_at=arg)


def subgaussian_norm(mgf: MgfOracle, lambda_grid: LambdaGrid | None = None) -> float:
    """``sup_{lam != 0} sqrt(log_mgf(lam)) / |lam|``."""
    grid = lambda_grid or LambdaGrid()

    def ratio(lam):
        lam = np.asarray(lam, dtype=float)
        return np.sqrt(np.maximum(np.asarray(mgf(lam), dtype=float), 0.0)) / np.abs(lam)

    best, _ = _supremum(ratio, grid, name="subgaussian_norm")
    return best


def tail_bound_from_norm(norm: BphiNorm, x: float) -> float:
    """Chernoff bound ``exp(-phi*(x / tau))`` on ``max(P(xi > x), P(xi < -x))``."""
    if not norm.tau > 0:
        raise DomainError("tail_bound_from_norm requires tau > 0")
    if not x > 0:
        raise DomainError("tail_bound_from_norm requires x > 0")
    rate = conjugate(norm.phi.as_conjugable(), x / norm.tau)
    if rate == math.inf:
        return 0.0
    return math.exp(-rate) if rate > 0 else 1.0
