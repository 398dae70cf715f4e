"""Tail bounds for ``S(n) = w(n)^{-1} sum_i zeta(i)`` under non-standard norming.

``theta(lam) = sup_n n ln cosh(g_bar lam / (2 w(n)))`` bounds
``ln sup_n E exp(lam S(n))`` whenever every summand has Rademacher norm at most
``g_bar``. With ``g_bar = 2`` (the cap over all centered indicators) this is
``sup_n n ln cosh(lam / w(n))``, the envelope used for the uniform tail
functional ``T_w``; ``g_bar = 1`` is the exact log-mgf of symmetric summands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import _kernels
from .binary import g_norm, q_norm
from .errors import ConditionViolated, DomainError
from .fenchel import ConjugableFunction, conjugate, conjugate_point, conjugate_power_law
from .specials import C_QUAD, log_cosh

#: A1-A5 sample grid: log-spaced points per decade over ``[1, CONDITION_GRID_HI]``.
CONDITION_GRID_PER_DECADE = 64
CONDITION_GRID_HI = 1e8
#: Above this ``|lam|`` the n-scan in ``theta`` switches to a geometric grid.
GEOMETRIC_SCAN_LAMBDA = 1e6
INVERSE_REL_TOL = 1e-10
DELTA2_CAP = 1e6


@dataclass(frozen=True)
class NormingFunction:
    """Strictly increasing ``w`` on ``[1, inf)`` with ``w(1) = 1``.

    ``evaluate`` and ``inverse`` must accept numpy arrays. For the power-law
    family ``exponent`` holds ``a`` and the n-scan uses a compiled kernel.
    """

    evaluate: Callable
    inverse: Callable
    kind: str = "user"
    exponent: float | None = None

    def __call__(self, lam):
        return self.evaluate(lam)

    @property
    def w_at_1(self) -> float:
        return float(self.evaluate(np.array([1.0]))[0])

    @property
    def label(self) -> str:
        return f"pow:{self.exponent:g}" if self.kind == "power" else self.kind


def power_law(a: float) -> NormingFunction:
    """``w(lam) = lam**a`` with analytic inverse ``y**(1/a)``."""
    a = float(a)
    if not a > 0:
        raise DomainError("power-law exponent must be positive")
    return NormingFunction(
        evaluate=lambda lam: np.power(np.asarray(lam, dtype=float), a),
        inverse=lambda y: np.power(np.asarray(y, dtype=float), 1.0 / a),
        kind="power", exponent=a)


def from_callable(w: Callable, label: str = "user") -> NormingFunction:
    """Wrap an increasing ``w``; the inverse is found by bisection."""

    def evaluate(lam):
        return np.asarray(w(np.asarray(lam, dtype=float)), dtype=float)

    def inverse(y):
        y = np.atleast_1d(np.asarray(y, dtype=float))
        lo = np.ones_like(y)
        hi = np.full_like(y, 2.0)
        for _ in range(2000):
            short = evaluate(hi) < y
            if not short.any():
                break
            hi = np.where(short, hi * 2.0, hi)
        for _ in range(200):
            if np.all(hi - lo <= INVERSE_REL_TOL * hi):
                break
            mid = 0.5 * (lo + hi)
            up = evaluate(mid) >= y
            hi = np.where(up, mid, hi)
            lo = np.where(up, lo, mid)
        return 0.5 * (lo + hi)

    return NormingFunction(evaluate=evaluate, inverse=inverse, kind=label)


def parse_norming(spec: str) -> NormingFunction:
    """Parse a family string such as ``pow:0.75``."""
    family, _, arg = spec.partition(":")
    if family == "pow" and arg:
        try:
            return power_law(float(arg))
        except ValueError as exc:
            raise DomainError(f"bad power-law exponent in {spec!r}") from exc
    raise DomainError(f"unknown norming family {spec!r} (expected pow:<a>)")


@dataclass(frozen=True)
class ConditionCheck:
    name: str
    passed: bool
    worst_margin: float
    detail: str = ""


@dataclass(frozen=True)
class ConditionReport:
    """Sampled (finite-grid) verification of A1-A5."""

    checks: tuple[ConditionCheck, ...]
    grid_points: int

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def first_failure(self) -> ConditionCheck | None:
        return next((c for c in self.checks if not c.passed), None)


def condition_grid() -> np.ndarray:
    decades = math.log10(CONDITION_GRID_HI)
    return np.logspace(0.0, decades, int(decades * CONDITION_GRID_PER_DECADE) + 1)


def check_conditions(w: NormingFunction, grid=None) -> ConditionReport:
    """Sampled checks of A1-A5 for ``w``; margins are relative."""
    lam = condition_grid() if grid is None else np.asarray(grid, dtype=float)
    vals = np.asarray(w(lam), dtype=float)
    checks = []

    # A1: finite real-argument evaluation with w(1) = 1 and increasing values.
    w1 = w.w_at_1
    frac = np.asarray(w(lam[:-1] + 0.5 * np.diff(lam)), dtype=float)
    a1_ok = bool(np.all(np.isfinite(vals)) and np.all(np.isfinite(frac))
                 and abs(w1 - 1.0) <= 1e-12 and np.all(np.diff(vals) > 0))
    checks.append(ConditionCheck("A1", a1_ok, abs(w1 - 1.0),
                                 "w defined on real lam >= 1, strictly increasing, w(1) = 1"))

    # A2: w/lam non-increasing towards 0.
    ratio = vals / lam
    rise = float(np.max(np.diff(ratio) / ratio[:-1]))
    a2_ok = rise <= 1e-12 and ratio[-1] < ratio[0]
    checks.append(ConditionCheck("A2", bool(a2_ok), rise, "w(lam)/lam decreasing to 0"))

    # A3: w/sqrt(lam) non-decreasing and growing.
    ratio = vals / np.sqrt(lam)
    drop = float(np.max(-np.diff(ratio) / ratio[:-1]))
    a3_ok = drop <= 1e-12 and ratio[-1] > ratio[0] * (1.0 + 1e-9)
    checks.append(ConditionCheck("A3", bool(a3_ok), drop, "w(lam)/sqrt(lam) increasing to inf"))

    # A4: midpoint convexity of the inverse on [1, w(max)].
    y = np.logspace(0.0, math.log10(vals[-1]), 257)
    a, b = np.meshgrid(y, y[::7])
    inv_mid = np.asarray(w.inverse(0.5 * (a + b).ravel()), dtype=float)
    inv_avg = 0.5 * (np.asarray(w.inverse(a.ravel())) + np.asarray(w.inverse(b.ravel())))
    excess = float(np.max((inv_mid - inv_avg) / inv_avg))
    checks.append(ConditionCheck("A4", excess <= 1e-9, excess, "w^{-1} convex"))

    # A5: Delta_2 doubling ratio.
    doubling = float(np.max(np.asarray(w(2.0 * lam)) / vals))
    a5_ok = math.isfinite(doubling) and doubling <= DELTA2_CAP
    checks.append(ConditionCheck("A5", a5_ok, doubling, "sup w(2 lam)/w(lam) finite"))
    return ConditionReport(tuple(checks), len(lam))


def require_conditions(w: NormingFunction) -> ConditionReport:
    report = check_conditions(w)
    bad = report.first_failure()
    if bad is not None:
        raise ConditionViolated(bad.name, f"{bad.detail} fails for {w.label} "
                                          f"(sampled margin {bad.worst_margin:.3g})")
    return report


@dataclass(frozen=True)
class SumModel:
    """Independent centered indicators normed by ``w``.

    ``g_bar`` caps the Rademacher norms of the summands; ``p_list`` is kept for
    reports and simulations (``None`` for the uniform envelope over all
    centered indicators).
    """

    w: NormingFunction
    g_bar: float
    p_list: tuple[float, ...] | None = None
    label: str = ""

    def __post_init__(self):
        if not 1.0 - 1e-9 <= self.g_bar <= 2.0 + 1e-9:
            raise DomainError("g_bar must lie in [1, 2]")

    @classmethod
    def rademacher(cls, w: NormingFunction) -> "SumModel":
        """Symmetric ±1/2 summands (``g_bar = 1``)."""
        return cls(w=w, g_bar=1.0, p_list=(0.5,), label="rademacher")

    @classmethod
    def universal(cls, w: NormingFunction) -> "SumModel":
        """Envelope over every centered indicator (``g_bar = 2``)."""
        return cls(w=w, g_bar=2.0, label="universal")

    @classmethod
    def from_probabilities(cls, p_list, w: NormingFunction) -> "SumModel":
        ps = tuple(float(p) for p in p_list)
        if not ps:
            raise DomainError("p_list must be non-empty")
        g_bar = max(g_norm(p).value for p in set(ps))
        return cls(w=w, g_bar=min(max(g_bar, 1.0), 2.0), p_list=ps, label="heterogeneous")

    @classmethod
    def homogeneous(cls, p: float, n: int, w: NormingFunction) -> "SumModel":
        return cls.from_probabilities([p] * int(n), w)

    @property
    def envelope_scale(self) -> float:
        """Factor ``s = g_bar / 2`` in ``theta(lam) = sup_n n ln cosh(s lam / w(n))``."""
        return self.g_bar / 2.0


def _scan_window(w: NormingFunction, c: float) -> int:
    return max(2, int(math.ceil(4.0 * float(w.inverse(np.array([c + 1.0]))[0]))))


def _theta_exhaustive(w: NormingFunction, c: float, n_lo: int, n_hi: int):
    if w.kind == "power":
        return _kernels.theta_scan_power(c, float(w.exponent), n_lo, n_hi)
    best, arg = -1.0, n_lo
    chunk = 1 << 20
    for start in range(n_lo, n_hi + 1, chunk):
        n = np.arange(start, min(n_hi, start + chunk - 1) + 1, dtype=float)
        v, a = _kernels.theta_scan_values(c, np.asarray(w(n), dtype=float), start)
        if v > best:
            best, arg = v, a
    return best, arg


def _theta_term(w: NormingFunction, c: float, n: int) -> float:
    return n * log_cosh(c / float(w(np.array([float(n)]))[0]))


def _theta_geometric(w: NormingFunction, c: float, n_hi: int):
    grid = np.unique(np.round(np.geomspace(1.0, n_hi, 2000)).astype(np.int64))
    vals = grid * np.asarray(log_cosh(c / np.asarray(w(grid.astype(float)), dtype=float)))
    k = int(np.argmax(vals))
    lo = int(grid[max(k - 1, 0)])
    hi = int(grid[min(k + 1, len(grid) - 1)])
    return _theta_exhaustive(w, c, lo, hi)


def theta_with_argmax(model: SumModel, lam: float):
    """``(theta(lam), n_star)``: value and maximising ``n`` of the envelope."""
    if not math.isfinite(lam):
        raise DomainError("theta requires finite lam")
    c = model.envelope_scale * abs(float(lam))
    if c == 0.0:
        return 0.0, 1
    n_hi = _scan_window(model.w, c)
    if abs(lam) > GEOMETRIC_SCAN_LAMBDA:
        best, arg = _theta_geometric(model.w, c, n_hi)
    else:
        best, arg = _theta_exhaustive(model.w, c, 1, n_hi)
    # decay confirmation past the window guards user-supplied w
    for mult in (2, 4):
        far = max(n_hi, mult * arg)
        if _theta_term(model.w, c, far) > best:
            best, arg = _theta_exhaustive(model.w, c, 1, far)
    return best, arg


def theta(model: SumModel, lam: float) -> float:
    """``sup_{n >= 1} n ln cosh(g_bar lam / (2 w(n)))``."""
    return theta_with_argmax(model, lam)[0]


def theta_function(model: SumModel) -> ConjugableFunction:
    """``theta`` as a conjugable function (a supremum of convex functions)."""
    return ConjugableFunction(lambda lam: theta(model, lam), convex_certified=True,
                              label=f"theta[{model.w.label}, g_bar={model.g_bar:g}]")


def theta_star(model: SumModel, u: float) -> float:
    return conjugate(theta_function(model), u)


def lower_constant(w: NormingFunction) -> float:
    """``C1(w) = 1 / (1 + w(1))``."""
    return 1.0 / (1.0 + w.w_at_1)


def certified_lower_constant(model: SumModel) -> float:
    """Constant ``k`` with ``theta(lam) >= k w^{-1}(lam)`` for ``lam >= 1``.

    The witness ``n0 = ceil(w^{-1}(lam))`` has ``lam / w(n0) >= C1(w)``, so
    ``theta(lam) >= n0 ln cosh(s C1(w)) >= ln cosh(s C1(w)) w^{-1}(lam)``.
    """
    return log_cosh(model.envelope_scale * lower_constant(model.w))


def mgf_bilateral_check(model: SumModel, lam: float):
    """``(C1(w) w^{-1}(lam), theta(lam), C w^{-1}(lam))`` with ``C = e + 1/e - 2``.

    Raises `ConditionViolated` when ``theta`` leaves the band.
    """
    if not lam > 1.0:
        raise DomainError("mgf_bilateral_check requires lam > 1")
    inv = float(model.w.inverse(np.array([float(lam)]))[0])
    lower = lower_constant(model.w) * inv
    upper = C_QUAD * inv
    value = theta(model, lam)
    if not lower <= value:
        raise ConditionViolated("bilateral-lower", f"theta({lam:g}) = {value:.10g} < "
                                                   f"C1 w^-1 = {lower:.10g}")
    if not value <= upper:
        raise ConditionViolated("bilateral-upper", f"theta({lam:g}) = {value:.10g} > "
                                                   f"C w^-1 = {upper:.10g}")
    return lower, value, upper


def inverse_function(w: NormingFunction) -> ConjugableFunction:
    """``w^{-1}`` on ``[1, inf)`` as a conjugable function."""
    f = ConjugableFunction(lambda y: float(w.inverse(np.array([y]))[0]), 1.0, math.inf,
                           label=f"inv[{w.label}]")
    if w.kind == "power" and w.exponent <= 1.0:
        return ConjugableFunction(f.evaluate, 1.0, math.inf, convex_certified=True, label=f.label)
    return f.certify(2_000)


def rate_v(w: NormingFunction, u: float) -> float:
    """``v_w(u) = sup_{lam >= 1} (lam u - w^{-1}(lam))``."""
    if not u > 1.0:
        raise DomainError("rate_v requires u > 1")
    return conjugate(inverse_function(w), u)


def rate_v_closed_form(w: NormingFunction, u: float) -> float:
    """Power-law ``v_w`` from the closed-form conjugate of ``lam**(1/a)``.

    Falls back to ``u - 1`` when the interior maximiser lies below 1.
    """
    if w.kind != "power":
        raise DomainError("closed form only for power-law norming")
    b = 1.0 / w.exponent
    interior = (u / b) ** (1.0 / (b - 1.0))
    if interior < 1.0:
        return u - 1.0
    return conjugate_power_law(b, 1.0, u)


@dataclass(frozen=True)
class TailBoundReport:
    """Bounds for ``T_w(u)`` from the envelope ``theta``.

    ``upper_log_tail = -theta*(u)`` is the log of a valid upper bound on the
    tail. The band ``[band_lo, band_hi]`` brackets ``theta*(u)`` through
    ``v_w``: ``band_lo = C v(u / C)`` and
    ``band_hi = max(u, k v(u / k))`` with ``k`` the certified lower constant;
    ``lower_log_tail = -band_hi`` is the most negative exponent the envelope
    can produce.
    """

    u: float
    upper_log_tail: float
    lower_log_tail: float
    theta_star: float
    v_value: float
    band_lo: float
    band_hi: float
    c_upper: float
    c_lower: float
    c_lower_certified: float
    g_bar: float
    n_star: int
    lambda_star: float
    nominal_band_holds: bool
    conditions: ConditionReport = field(repr=False)

    @property
    def certified(self) -> bool:
        return self.band_lo <= self.theta_star * (1 + 1e-9) and self.theta_star <= self.band_hi * (1 + 1e-9)

    @property
    def upper_bound(self) -> float:
        return math.exp(self.upper_log_tail)


def tail_bounds(model: SumModel, u: float) -> TailBoundReport:
    """Chernoff upper bound on ``T_w(u)`` plus the ``v_w`` constant band.

    Raises
    ------
    DomainError
        If ``u <= 1``.
    ConditionViolated
        If the norming function fails a sampled A1-A5 check.
    """
    if not u > 1.0:
        raise DomainError("tail bounds are defined for u > 1")
    conditions = require_conditions(model.w)
    ts, lam_star = conjugate_point(theta_function(model), u)
    n_star = theta_with_argmax(model, lam_star)[1] if math.isfinite(lam_star) else 0
    c1 = lower_constant(model.w)
    k = certified_lower_constant(model)
    v = rate_v(model.w, u)
    band_lo = max(0.0, C_QUAD * rate_v(model.w, u / C_QUAD)) if u / C_QUAD > 1.0 else 0.0
    band_hi = max(u, k * rate_v(model.w, u / k))
    nominal_hi = max(u, c1 * rate_v(model.w, u / c1))
    return TailBoundReport(
        u=float(u), upper_log_tail=-ts, lower_log_tail=-band_hi, theta_star=ts, v_value=v,
        band_lo=band_lo, band_hi=band_hi, c_upper=C_QUAD, c_lower=c1, c_lower_certified=k,
        g_bar=model.g_bar, n_star=int(n_star), lambda_star=float(lam_star),
        nominal_band_holds=bool(band_lo <= ts <= nominal_hi * (1 + 1e-9)), conditions=conditions)


def classical_norming_reference(k_exponent: float, u: float, c_k: float = 1.0) -> float:
    """Reference exponent ``min(k, 2) ln u + ln C(k)`` for square-root norming."""
    if not k_exponent > 0:
        raise DomainError("k must be positive")
    if not u > 0 or not c_k > 0:
        raise DomainError("u and C(k) must be positive")
    return min(k_exponent, 2.0) * math.log(u) + math.log(c_k)


def subgaussian_sum_bound(p_list) -> float:
    """``sqrt(sum Q(p_i)^2)``: bound on the subgaussian norm of ``sum zeta(i)``."""
    return math.sqrt(math.fsum(q_norm(p) ** 2 for p in p_list))
