"""Centered indicators ``eta_p = I(A) - p`` and their norms.

``beta_r(lam) = E exp(lam eta_r) = r e^{lam(1-r)} + (1-r) e^{-lam r}`` is the
natural generator of the family. The Rademacher norm ``g(r)`` is the Bφ norm of
``eta_r`` for ``phi = ln cosh(lam/2)``, i.e. ``sup acosh(beta_r(lam)) / (|lam|/2)``;
``Q(p)`` is its subgaussian norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._search import golden_max
from .errors import DomainError
from .phi_spaces import MgfOracle
from .specials import acosh1p, acosh_exp, log_cosh, log_sum_exp

#: Grid of the interior scan in ``g_norm`` (log-spaced magnitudes, both signs).
G_SCAN_LO = 1e-4
G_SCAN_HI = 1e4
G_SCAN_PER_DECADE = 400
#: ``q_norm`` switches to its series within this distance of 1/2.
Q_SERIES_RADIUS = 1e-6
_LOG_BETA_SWITCH = 30.0


def _check_prob(r, name="r"):
    r = np.asarray(r, dtype=float)
    if np.isnan(r).any() or (r <= 0).any() or (r >= 1).any():
        raise DomainError(f"{name} must lie strictly inside (0, 1)")
    return r


@dataclass(frozen=True)
class BinaryVariable:
    """``eta_p``: equals ``1 - p`` with probability ``p`` and ``-p`` otherwise."""

    p: float

    def __post_init__(self):
        _check_prob(self.p, "p")

    @property
    def atoms(self) -> tuple[float, float]:
        return (1.0 - self.p, -self.p)

    @property
    def masses(self) -> tuple[float, float]:
        return (self.p, 1.0 - self.p)

    def log_mgf(self, lam):
        return log_beta(self.p, lam)

    def mgf(self) -> MgfOracle:
        return MgfOracle(lambda lam: log_beta(self.p, lam), label=f"eta_{self.p}")

    def tail(self, x: float) -> float:
        """Exact ``max(P(eta > x), P(eta < -x))`` for ``x >= 0``."""
        up = self.p if 1.0 - self.p > x else 0.0
        down = 1.0 - self.p if -self.p < -x else 0.0
        return max(up, down)


def log_beta(r, lam):
    """``ln beta_r(lam)``; exact mirror law ``log_beta(r, -lam) == log_beta(1-r, lam)``."""
    r = _check_prob(r)
    lam = np.asarray(lam, dtype=float)
    out = log_sum_exp(lam * (1.0 - r), r, -lam * r, 1.0 - r)
    return out


def beta_minus_one(r, lam):
    """``beta_r(lam) - 1`` without forming ``beta_r``; accurate for small ``|lam|``."""
    r = _check_prob(r)
    lam = np.asarray(lam, dtype=float)
    with np.errstate(over="ignore"):
        out = r * np.expm1(lam * (1.0 - r)) + (1.0 - r) * np.expm1(-lam * r)
    return float(out) if out.ndim == 0 else out


def g_ratio(r: float, lam):
    """``acosh(beta_r(lam)) / (|lam| / 2)`` for ``lam != 0``."""
    lam = np.asarray(lam, dtype=float)
    lb = np.maximum(np.asarray(log_beta(r, lam), dtype=float), 0.0)
    small = lb < _LOG_BETA_SWITCH
    num = np.empty_like(lb)
    if small.any():
        num[small] = acosh1p(np.maximum(np.atleast_1d(beta_minus_one(r, lam[small])), 0.0))
    if (~small).any():
        num[~small] = acosh_exp(lb[~small])
    out = num / (np.abs(lam) / 2.0)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class GNormResult:
    """Rademacher norm ``g(r)``.

    ``arg_lambda`` is 0 when the supremum is the ``lam -> 0`` limit and ``inf``
    when it is the ``|lam| -> inf`` limit.
    """

    value: float
    arg_lambda: float
    lower_bound_zero_limit: float
    lower_bound_inf_limit: float


def g_norm(r: float) -> GNormResult:
    """Rademacher norm of ``eta_r``.

    The value is the largest of the two analytic limits ``2 sqrt(r(1-r))``
    (``lam -> 0``) and ``2 max(r, 1-r)`` (``|lam| -> inf``) and of a refined
    scan over ``±[1e-4, 1e4]``.
    """
    r = float(_check_prob(r))
    zero_lim = 2.0 * math.sqrt(r * (1.0 - r))
    inf_lim = 2.0 * max(r, 1.0 - r)
    n = int(round(math.log10(G_SCAN_HI / G_SCAN_LO) * G_SCAN_PER_DECADE)) + 1
    pos = np.logspace(math.log10(G_SCAN_LO), math.log10(G_SCAN_HI), n)
    best, arg = -math.inf, math.nan
    for sign in (1.0, -1.0):
        lam = sign * pos
        vals = g_ratio(r, lam)
        k = int(np.argmax(vals))
        lo, hi = lam[max(k - 1, 0)], lam[min(k + 1, n - 1)]
        x, v = golden_max(lambda t: float(g_ratio(r, t)), float(lo), float(hi), rel_tol=1e-12)
        if vals[k] > v:
            x, v = float(lam[k]), float(vals[k])
        if v > best:
            best, arg = v, x
    value = best
    if inf_lim > value:
        value, arg = inf_lim, math.inf
    if zero_lim > value:
        value, arg = zero_lim, 0.0
    return GNormResult(value=value, arg_lambda=arg,
                       lower_bound_zero_limit=zero_lim, lower_bound_inf_limit=inf_lim)


def q_norm(p: float) -> float:
    """Subgaussian norm ``Q(p) = sqrt((1 - 2p) / (4 ln((1-p)/p)))`` of ``eta_p``."""
    p = float(_check_prob(p, "p"))
    x = 1.0 - 2.0 * p
    if abs(p - 0.5) < Q_SERIES_RADIUS:
        # x / atanh(x) = 1 - x^2/3 - 4x^4/45 + ...
        return math.sqrt((1.0 - x * x / 3.0) / 8.0)
    log_odds = math.log1p(-p) - math.log(p)
    return math.sqrt(x / (4.0 * log_odds))


def check_quadrant_inequality(r: float, lam):
    """Signed margin ``cosh(lam/2) - beta_r(lam)`` for ``r >= 1/2``, ``lam >= 0``.

    With ``r = 1/2 + delta`` the margin factors as
    ``e^{-lam delta} cosh(lam/2) [expm1(lam delta) - 2 delta tanh(lam/2)]``;
    the bracket is a difference of two non-negative terms and is assembled in
    log space, so the sign stays reliable where the two sides are huge.
    """
    r = float(r)
    if not 0.5 <= r < 1.0:
        raise DomainError("check_quadrant_inequality requires 1/2 <= r < 1")
    lam = np.asarray(lam, dtype=float)
    if (lam < 0).any() or np.isnan(lam).any():
        raise DomainError("check_quadrant_inequality requires lam >= 0")
    delta = r - 0.5
    bracket = np.expm1(lam * delta) - 2.0 * delta * np.tanh(lam / 2.0)
    with np.errstate(divide="ignore", over="ignore"):
        scale = np.exp(np.log(np.abs(bracket)) + log_cosh(lam / 2.0) - lam * delta)
    out = np.where(bracket == 0.0, 0.0, np.sign(bracket) * scale)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class AuditRow:
    lam: float
    r_argmax: float
    log_sup_beta: float
    log_cosh_half: float
    log_cosh_full: float


@dataclass(frozen=True)
class AuditFlag:
    r: float
    lam: float
    log_beta: float
    log_cosh_half: float

    @property
    def in_proven_quadrant(self) -> bool:
        return self.lam * (2.0 * self.r - 1.0) >= 0.0


@dataclass(frozen=True)
class EnvelopeAudit:
    """Where ``sup_r beta_r(lam) = cosh(lam/2)`` holds on the audited grid."""

    rows: list[AuditRow] = field(default_factory=list)
    flags: list[AuditFlag] = field(default_factory=list)

    @property
    def quadrant_holds(self) -> bool:
        return not any(f.in_proven_quadrant for f in self.flags)

    @property
    def global_claim_holds(self) -> bool:
        return not self.flags


def audit_cosh_envelope(r_grid, lambda_grid, *, rel_tol: float = 1e-12) -> EnvelopeAudit:
    """Compare ``beta_r(lam)`` with ``cosh(lam/2)`` over a grid.

    Every pair with ``ln beta_r(lam) > ln cosh(lam/2)`` (beyond ``rel_tol``) is
    flagged; flags and rows are sorted by ``(lam, r)``. Nothing is asserted.
    """
    r_grid = np.sort(np.unique(np.asarray(r_grid, dtype=float)))
    _check_prob(r_grid)
    lams = np.sort(np.unique(np.asarray(lambda_grid, dtype=float)))
    rows, flags = [], []
    for lam in lams:
        lb = np.asarray(log_beta(r_grid, lam), dtype=float)
        lch = log_cosh(lam / 2.0)
        k = int(np.argmax(lb))
        rows.append(AuditRow(float(lam), float(r_grid[k]), float(lb[k]), lch, log_cosh(lam)))
        bad = lb - lch > rel_tol * max(1.0, abs(lch))
        for r, v in zip(r_grid[bad], lb[bad]):
            flags.append(AuditFlag(float(r), float(lam), float(v), lch))
    return EnvelopeAudit(rows=rows, flags=flags)


# Name kept for callers that use the original operation name.
audit_proposition_2_2 = audit_cosh_envelope
