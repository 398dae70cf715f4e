"""Numerically stable elementary functions and small analytic inequalities.

Every function accepts a scalar or an array and returns the same shape
(a Python float for scalar input).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

LN2 = math.log(2.0)

#: Crossover in ``z - 1`` below which acosh uses its square-root expansion.
ACOSH_SERIES_CUTOFF = 1e-8
#: Inputs in ``[1 - ACOSH_CLAMP, 1)`` are clamped to 1.
ACOSH_CLAMP = 1e-12
# Beyond this acosh(z) = ln(2z) to full double precision.
_ACOSH_LARGE = 1e8


@dataclass(frozen=True)
class EnvelopeConstants:
    """Constants of the quadratic ``ln cosh`` envelope.

    ``c_quad`` bounds ``cosh x <= 1 + c_quad * x**2 / 2`` on ``|x| < 1``.
    """

    c_quad: float = math.e + 1.0 / math.e - 2.0


C_QUAD = EnvelopeConstants().c_quad


def _out(arr, scalar: bool):
    return float(arr) if scalar else arr


def _as_array(x, name: str):
    scalar = np.ndim(x) == 0
    arr = np.asarray(x, dtype=float)
    if np.isnan(arr).any():
        raise DomainError(f"{name}: NaN input")
    return arr, scalar


def acosh1p(t):
    """``acosh(1 + t)`` for ``t >= 0`` without forming ``1 + t``."""
    t, scalar = _as_array(t, "acosh1p")
    if (t < 0).any():
        raise DomainError("acosh1p requires t >= 0")
    with np.errstate(over="ignore", invalid="ignore"):
        small = np.sqrt(2.0 * t) * (1.0 - t / 12.0)
        mid = np.log1p(t + np.sqrt(t * (t + 2.0)))
        large = LN2 + np.log1p(t)
    out = np.where(t < ACOSH_SERIES_CUTOFF, small, np.where(t < _ACOSH_LARGE, mid, large))
    return _out(out, scalar)


def acosh_stable(z):
    """Non-negative branch of the inverse hyperbolic cosine.

    Near ``z = 1`` the result follows ``sqrt(2(z-1))`` with a second-order
    correction; for large ``z`` it reduces to ``ln(2z)``.

    Raises
    ------
    DomainError
        If ``z < 1 - 1e-12`` or ``z`` is NaN.
    """
    z, scalar = _as_array(z, "acosh_stable")
    if (z < 1.0 - ACOSH_CLAMP).any():
        raise DomainError("acosh_stable requires z >= 1")
    z = np.maximum(z, 1.0)
    with np.errstate(over="ignore"):
        large = LN2 + np.log(z)
    out = np.where(z < _ACOSH_LARGE, acosh1p(np.minimum(z, _ACOSH_LARGE) - 1.0), large)
    return _out(out, scalar)


def acosh_exp(y):
    """``acosh(exp(y))`` for ``y >= 0``; finite for any finite ``y``."""
    y, scalar = _as_array(y, "acosh_exp")
    if (y < 0).any():
        raise DomainError("acosh_exp requires y >= 0")
    with np.errstate(over="ignore"):
        small = acosh1p(np.expm1(np.minimum(y, 30.0)))
        inv_sq = np.exp(-2.0 * y)
        large = y + LN2 + np.log1p(-inv_sq / (2.0 * (1.0 + np.sqrt(1.0 - inv_sq))))
    out = np.where(y < 30.0, small, large)
    return _out(out, scalar)


def log_cosh(x):
    """``ln cosh x`` without overflow; relative error near 1e-16."""
    x, scalar = _as_array(x, "log_cosh")
    ax = np.abs(x)
    with np.errstate(over="ignore"):
        near = np.log1p(2.0 * np.sinh(np.minimum(ax, 1.0) / 2.0) ** 2)
        far = ax - LN2 + np.log1p(np.exp(-2.0 * ax))
    return _out(np.where(ax < 1.0, near, far), scalar)


def log_sum_exp(a, wa, b, wb):
    """``ln(wa e^a + wb e^b)`` for weights summing to one.

    The larger exponent is factored out and the remainder written as
    ``log1p(w * expm1(d))``, which keeps the result accurate when the two
    terms nearly cancel against the leading exponent.
    """
    a, sa = _as_array(a, "log_sum_exp")
    b, sb = _as_array(b, "log_sum_exp")
    wa = np.asarray(wa, dtype=float)
    wb = np.asarray(wb, dtype=float)
    if (np.abs(wa + wb - 1.0) > 1e-12).any():
        raise DomainError("log_sum_exp weights must sum to 1")
    a_top = a >= b
    top = np.where(a_top, a, b)
    low = np.where(a_top, b, a)
    w_low = np.where(a_top, wb, wa)
    out = top + np.log1p(w_low * np.expm1(low - top))
    return _out(out, sa and sb and np.ndim(out) == 0)


def check_sinh_envelope(mu):
    """Truth of ``sinh mu <= 2 mu cosh mu`` (evaluated as ``tanh mu <= 2 mu``)."""
    mu, scalar = _as_array(mu, "check_sinh_envelope")
    if (mu <= 0).any():
        raise DomainError("check_sinh_envelope requires mu > 0")
    ok = np.tanh(mu) <= 2.0 * mu
    return bool(ok) if scalar else ok


def log_cosh_envelope(x):
    """Piecewise majorant of ``ln cosh``: ``C x^2/2`` inside ``|x| < 1``, ``|x|`` outside."""
    x, scalar = _as_array(x, "log_cosh_envelope")
    ax = np.abs(x)
    return _out(np.where(ax < 1.0, C_QUAD * x * x / 2.0, ax), scalar)
