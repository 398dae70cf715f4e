import math

import mpmath
import numpy as np
import pytest

from binarytails import binary, specials
from binarytails.errors import DomainError


def test_binary_variable_law():
    eta = binary.BinaryVariable(0.3)
    assert eta.atoms == pytest.approx((0.7, -0.3))
    assert eta.masses == pytest.approx((0.3, 0.7))
    assert eta.tail(0.0) == pytest.approx(0.7)
    assert eta.tail(0.5) == pytest.approx(0.3)
    assert eta.tail(0.7) == 0.0
    for p in (0.0, 1.0, -0.1):
        with pytest.raises(DomainError):
            binary.BinaryVariable(p)


def test_log_beta_examples():
    lam = np.linspace(-50, 50, 101)
    assert np.allclose(binary.log_beta(0.5, lam), specials.log_cosh(lam / 2), rtol=1e-14, atol=0)
    assert binary.log_beta(0.37, 0.0) == 0.0
    ref = float(mpmath.log(mpmath.mpf("0.1") * mpmath.e ** 18 + mpmath.mpf("0.9") * mpmath.e ** -2))
    assert binary.log_beta(0.1, 20.0) == pytest.approx(ref, rel=1e-14)


def test_mirror_law():
    lam = np.linspace(-40, 40, 81)
    for r in (0.1, 0.25, 0.6):
        assert np.allclose(binary.log_beta(r, -lam), binary.log_beta(1 - r, lam), rtol=1e-13, atol=1e-15)


def test_g_norm_examples():
    assert binary.g_norm(0.5).value == pytest.approx(1.0, abs=1e-6)
    g = binary.g_norm(0.2)
    assert g.value >= 1.6 - 1e-9
    assert 1.99 < binary.g_norm(1e-4).value <= 2.0


def test_g_norm_limit_attained_at_infinity():
    g = binary.g_norm(0.2)
    assert g.value == pytest.approx(1.6, abs=1e-9)
    assert g.arg_lambda == math.inf


def test_g_norm_property_grid():
    grid = np.linspace(0.01, 0.97, 97)
    for r in grid:
        g, m = binary.g_norm(r), binary.g_norm(1 - r)
        assert abs(g.value - m.value) <= 1e-6
        assert g.lower_bound_inf_limit <= g.value <= 2 + 1e-9
        assert g.value >= g.lower_bound_zero_limit - 1e-9


def test_q_norm_examples():
    assert binary.q_norm(0.5) == pytest.approx(math.sqrt(1 / 8), abs=1e-12)
    assert binary.q_norm(0.2) == pytest.approx(math.sqrt(0.6 / (4 * math.log(4))), rel=1e-14)
    p = 1e-12
    assert binary.q_norm(p) * math.sqrt(abs(math.log(p))) == pytest.approx(0.5, rel=0.02)


def test_q_norm_series_seam():
    p = 0.5 + 1e-6
    ref = mpmath.sqrt((1 - 2 * mpmath.mpf(p)) / (4 * mpmath.log((1 - mpmath.mpf(p)) / mpmath.mpf(p))))
    assert binary.q_norm(p) == pytest.approx(float(ref), rel=1e-12)
    assert binary.q_norm(0.5 + 5e-7) == pytest.approx(binary.q_norm(0.5 - 5e-7), rel=1e-15)


def test_quadrant_examples():
    assert binary.check_quadrant_inequality(0.9, 10.0) > 0
    ref = float(mpmath.cosh(5) - (mpmath.mpf("0.9") * mpmath.e + mpmath.mpf("0.1") * mpmath.e ** -9))
    assert binary.check_quadrant_inequality(0.9, 10.0) == pytest.approx(ref, rel=1e-12)
    assert binary.check_quadrant_inequality(0.7, 0.0) == 0.0
    lam = np.linspace(0, 700, 2001)
    assert np.all(binary.check_quadrant_inequality(0.5 + 1e-9, lam) >= -1e-12)


def test_quadrant_domain():
    with pytest.raises(DomainError):
        binary.check_quadrant_inequality(0.3, 1.0)
    with pytest.raises(DomainError):
        binary.check_quadrant_inequality(0.7, -1.0)


def test_audit_flags_the_counterexample():
    audit = binary.audit_cosh_envelope(np.linspace(0.01, 0.99, 99), [20.0])
    flags = {(round(f.r, 12), f.lam) for f in audit.flags}
    assert (0.1, 20.0) in flags
    flag = next(f for f in audit.flags if round(f.r, 12) == 0.1)
    assert math.exp(flag.log_beta) == pytest.approx(6.566e6, rel=1e-3)
    assert math.exp(flag.log_cosh_half) == pytest.approx(1.1013e4, rel=1e-4)
    assert audit.quadrant_holds and not audit.global_claim_holds


def test_audit_restricted_to_quadrant_has_no_flags():
    audit = binary.audit_cosh_envelope(np.linspace(0.5, 0.99, 50), [0.0, 5.0, 20.0, 300.0])
    assert audit.flags == []


def test_audit_half_equals_cosh():
    audit = binary.audit_cosh_envelope([0.5], [-30.0, -1.0, 2.0, 30.0])
    for row in audit.rows:
        assert row.log_sup_beta == pytest.approx(row.log_cosh_half, abs=1e-12)
