import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from binarytails import specials
from binarytails.errors import DomainError


def mp_acosh(z):
    return float(mpmath.acosh(mpmath.mpf(z)))


def test_constant_value():
    c = specials.C_QUAD
    assert 1.086 < c < 1.087
    assert c == pytest.approx(float(mpmath.e + 1 / mpmath.e - 2), rel=1e-15)


@pytest.mark.parametrize("z", [1.0, 1 + 5e-9, 1 + 1e-8, 1 + 2e-8, 1.5, math.cosh(3.0), 1e8, 1e300])
def test_acosh_stable_against_mpmath(z):
    assert specials.acosh_stable(z) == pytest.approx(mp_acosh(z), rel=1e-12, abs=0)


def test_acosh_examples():
    assert specials.acosh_stable(1.0) == 0.0
    assert specials.acosh_stable(math.cosh(3.0)) == pytest.approx(3.0, rel=1e-14)
    # the float nearest 1 + 5e-9 is not exactly that; compare on the stored value
    z = 1 + 5e-9
    assert specials.acosh_stable(z) == pytest.approx(math.sqrt(2 * (z - 1)), rel=1e-9)


def test_acosh_clamp_and_domain():
    assert specials.acosh_stable(1 - 5e-13) == 0.0
    with pytest.raises(DomainError):
        specials.acosh_stable(1 - 1e-11)
    with pytest.raises(DomainError):
        specials.acosh_stable(float("nan"))


def test_acosh_seam_is_continuous():
    below = specials.acosh1p(np.nextafter(1e-8, 0))
    above = specials.acosh1p(1e-8)
    assert abs(above - below) / above < 1e-12


def test_acosh_round_trip():
    z = np.logspace(0, 10, 2001)
    y = specials.acosh_stable(z)
    assert np.max(np.abs(np.cosh(y) - z) / z) <= 1e-10


def test_acosh_exp_large_argument():
    assert specials.acosh_exp(1000.0) == pytest.approx(1000.0 + math.log(2.0), rel=1e-15)


def test_log_cosh_examples(mp):
    assert specials.log_cosh(0.0) == 0.0
    assert specials.log_cosh(1000.0) == pytest.approx(1000 - math.log(2), abs=1e-10)
    assert specials.log_cosh(0.5) == pytest.approx(float(mpmath.log(mpmath.cosh(0.5))), rel=1e-14)
    assert math.isfinite(specials.log_cosh(1e308))


@settings(max_examples=300, deadline=None)
@given(st.floats(-700, 700, allow_nan=False))
def test_log_cosh_even_and_below_abs(x):
    assert specials.log_cosh(x) == specials.log_cosh(-x)
    assert specials.log_cosh(x) <= abs(x)


@settings(max_examples=200, deadline=None)
@given(st.floats(-50, 50, allow_nan=False))
def test_log_cosh_relative_error(x):
    ref = float(mpmath.log1p(2 * mpmath.sinh(mpmath.mpf(x) / 2) ** 2))
    got = specials.log_cosh(x)
    assert got == pytest.approx(ref, rel=1e-14, abs=1e-300)


def test_log_sum_exp_examples():
    assert specials.log_sum_exp(0.0, 0.5, 0.0, 0.5) == 0.0
    ref = float(mpmath.log(mpmath.mpf("0.1") * mpmath.e ** 18 + mpmath.mpf("0.9") * mpmath.e ** -2))
    assert specials.log_sum_exp(18.0, 0.1, -2.0, 0.9) == pytest.approx(ref, rel=1e-14)
    for x in (0.3, 5.0, 800.0):
        assert specials.log_sum_exp(x, 0.5, -x, 0.5) == pytest.approx(specials.log_cosh(x), rel=1e-14)


def test_log_sum_exp_rejects_bad_weights():
    with pytest.raises(DomainError):
        specials.log_sum_exp(0.0, 0.5, 0.0, 0.6)


def test_sinh_envelope_examples():
    for mu in (1.0, 1e-8, 50.0):
        assert specials.check_sinh_envelope(mu)
    mu = np.random.default_rng(1).uniform(0, 700, 100_000)
    mu = mu[mu > 0]
    assert np.all(specials.check_sinh_envelope(mu))


def test_log_cosh_envelope():
    assert specials.log_cosh_envelope(0.0) == 0.0
    assert specials.log_cosh_envelope(0.5) == pytest.approx(specials.C_QUAD * 0.125, rel=1e-15)
    assert specials.log_cosh_envelope(2.0) == 2.0
    x = np.random.default_rng(2).uniform(-30, 30, 100_000)
    assert np.all(specials.log_cosh_envelope(x) >= specials.log_cosh(x))
