import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from binarytails import fenchel, specials
from binarytails.errors import DomainError, NotConvex

SQUARE = fenchel.ConjugableFunction(lambda x: x * x, convex_certified=True, label="sq")
LOGCOSH = fenchel.ConjugableFunction(lambda x: specials.log_cosh(x / 2), convex_certified=True)
POW43 = fenchel.ConjugableFunction(lambda x: x ** (4 / 3), 1.0, math.inf, convex_certified=True)
ABS = fenchel.ConjugableFunction(abs, convex_certified=True)


def brute_conjugate(f, u, lo, hi, n):
    """Grid maximum of ``lam u - f(lam)``, rescanned finely around the coarse argmax."""
    lam = np.linspace(lo, hi, n)
    k = int(np.argmax(lam * u - f(lam)))
    fine = np.linspace(lam[max(k - 1, 0)], lam[min(k + 1, n - 1)], n)
    return float(np.max(fine * u - f(fine)))


def test_conjugate_examples():
    assert fenchel.conjugate(SQUARE, 2.0) == pytest.approx(1.0, rel=1e-12)
    assert fenchel.conjugate(LOGCOSH, 0.0) == 0.0
    brute = brute_conjugate(lambda x: x ** (4 / 3), 2.0, 1.0, 1e6, 10_000_001)
    assert fenchel.conjugate(POW43, 2.0) == pytest.approx(brute, rel=1e-6)
    assert fenchel.conjugate(POW43, 2.0) == pytest.approx(27 / 16, rel=1e-12)


def test_requires_certificate():
    with pytest.raises(NotConvex):
        fenchel.conjugate(fenchel.ConjugableFunction(lambda x: x * x), 1.0)


def test_certify_accepts_convex_and_rejects_concave():
    assert fenchel.ConjugableFunction(lambda x: x * x).certify().convex_certified
    with pytest.raises(NotConvex):
        fenchel.ConjugableFunction(lambda x: -x * x).certify()


def test_bounded_slope_gives_infinity():
    assert fenchel.conjugate(LOGCOSH, 0.6) == math.inf
    assert fenchel.conjugate(ABS, 0.5) == pytest.approx(0.0, abs=1e-12)
    assert fenchel.conjugate(ABS, 1.5) == math.inf


def test_boundary_pinned_maximiser():
    # for u below the slope at 1, the maximiser of lam u - lam^(4/3) over [1, inf) is 1
    value, arg = fenchel.conjugate_point(POW43, 1.0)
    assert arg == 1.0
    assert value == pytest.approx(0.0, abs=1e-15)


def test_power_law_closed_form_examples():
    for u in (0.5, 2.0, 7.0):
        assert fenchel.conjugate_power_law(2, 1, u) == pytest.approx(u * u / 4, rel=1e-14)
    assert fenchel.conjugate_power_law(4 / 3, 1, 2) == pytest.approx(1.6875, rel=1e-14)
    assert fenchel.conjugate_power_law(4 / 3, 1, 0) == 0.0
    with pytest.raises(DomainError):
        fenchel.conjugate_power_law(1.0, 1.0, 1.0)


@pytest.mark.parametrize("a", [4 / 3, 3 / 2, 2.0, 3.0])
def test_power_law_numeric_agreement(a):
    f = fenchel.ConjugableFunction(lambda x: x ** a, 0.0, math.inf, convex_certified=True)
    for u in np.geomspace(0.1, 100, 25):
        assert fenchel.conjugate(f, u) == pytest.approx(fenchel.conjugate_power_law(a, 1, u), rel=1e-6)


def test_fenchel_moreau_examples():
    assert fenchel.fenchel_moreau_check(SQUARE, np.linspace(-10, 10, 41)) <= 1e-6
    assert fenchel.fenchel_moreau_check(LOGCOSH, np.linspace(-20, 20, 41)) <= 1e-5
    assert fenchel.fenchel_moreau_check(ABS, np.linspace(-5, 5, 21)) <= 1e-6


def test_conjugate_is_convex():
    u = np.linspace(-0.49, 0.49, 99)
    vals = np.array([fenchel.conjugate(LOGCOSH, x) for x in u])
    mid = np.array([fenchel.conjugate(LOGCOSH, x) for x in 0.5 * (u[:-2] + u[2:])])
    assert np.all(mid <= 0.5 * (vals[:-2] + vals[2:]) + 1e-9)


def test_young_inequality():
    # 100 random u values, each paired with 100 random lam values
    rng = np.random.default_rng(5)
    for u in rng.uniform(-0.49, 0.49, 100):
        fstar = fenchel.conjugate(LOGCOSH, u)
        lam = rng.uniform(-30, 30, 100)
        assert np.all(lam * u <= specials.log_cosh(lam / 2) + fstar + 1e-9)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.1, 10.0), st.floats(-0.45, 0.45))
def test_scaling_identity(c, u):
    scaled = fenchel.ConjugableFunction(lambda x: c * specials.log_cosh(x / 2), convex_certified=True)
    lhs = fenchel.conjugate(scaled, u)
    rhs = c * fenchel.conjugate(LOGCOSH, u / c) if abs(u / c) < 0.5 else math.inf
    if math.isinf(rhs):
        assert math.isinf(lhs)
    else:
        assert lhs == pytest.approx(rhs, rel=1e-7, abs=1e-12)
