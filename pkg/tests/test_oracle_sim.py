import itertools
import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from binarytails import oracle_sim as osim
from binarytails import sum_tails as st
from binarytails.errors import DomainError

W34 = st.power_law(0.75)


def enumerate_tail(n, p, threshold):
    """Exact P(K - n p > threshold) by listing all 2^n outcomes."""
    p = Fraction(p)
    total = Fraction(0)
    for bits in itertools.product((0, 1), repeat=n):
        k = sum(bits)
        if k - n * p > Fraction(threshold):
            total += p ** k * (1 - p) ** (n - k)
    return float(total)


def comb_tail(n, p, threshold, lower=False):
    p = Fraction(p)
    total = Fraction(0)
    for k in range(n + 1):
        s = k - n * p
        if (s < -Fraction(threshold)) if lower else (s > Fraction(threshold)):
            total += math.comb(n, k) * p ** k * (1 - p) ** (n - k)
    return float(total)


def test_exact_tail_examples():
    assert osim.exact_tail(osim.ExactTailQuery(4, 0.5, 1.0)) == 0.0625
    assert osim.exact_tail(osim.ExactTailQuery(1, 0.3, 0.0)) == pytest.approx(0.3, rel=1e-15)
    assert osim.exact_tail(osim.ExactTailQuery(2, 0.5, 0.9)) == 0.25


@pytest.mark.parametrize("n,p,t", [(6, 0.5, 0.5), (9, 0.3, 1.2), (12, 0.8, -2.0), (10, 0.05, 0.4)])
def test_exact_tail_against_enumeration(n, p, t):
    assert osim.exact_tail(osim.ExactTailQuery(n, p, t)) == pytest.approx(enumerate_tail(n, p, t), rel=1e-13)


def mp_tail(n, p, threshold):
    """Upper tail summed term by term in 50-digit arithmetic."""
    p = mpmath.mpf(p)
    k0 = osim.first_exceeding_count(n, float(p), threshold)
    return float(mpmath.fsum(mpmath.binomial(n, k) * p ** k * (1 - p) ** (n - k)
                             for k in range(k0, n + 1)))


@pytest.mark.parametrize("n,p,t", [(200, 0.5, 17.3), (3000, 0.1, 40.0), (10_000, 0.5, 150.0)])
def test_exact_tail_relative_precision(n, p, t):
    assert osim.exact_tail(osim.ExactTailQuery(n, p, t)) == pytest.approx(mp_tail(n, p, t), rel=1e-13)


def test_large_n_matches_incomplete_beta_identity():
    n, p, t = 200_000, 0.5, 700.0
    via_sum = osim._kernels.upper_tail_np(n, p, osim.first_exceeding_count(n, p, t))
    assert osim.exact_tail(osim.ExactTailQuery(n, p, t)) == pytest.approx(via_sum, rel=1e-10)


def test_symmetry_at_half():
    for n, t in [(11, 1.5), (20, 3.0), (31, 0.2)]:
        assert comb_tail(n, 0.5, t) == comb_tail(n, 0.5, t, lower=True)
        assert osim.exact_tail(osim.ExactTailQuery(n, 0.5, t)) == pytest.approx(
            comb_tail(n, 0.5, t, lower=True), rel=1e-14)


def test_vectorised_tails_agree():
    n = np.array([3, 50, 20_000, 40_000])
    thr = np.array([0.2, 4.0, 100.0, 1e9])
    scalar = [osim.exact_tail(osim.ExactTailQuery(int(a), 0.4, float(b))) for a, b in zip(n, thr)]
    assert np.allclose(osim.exact_tails(n, 0.4, thr), scalar, rtol=1e-14, atol=0)


def test_query_validation():
    for args in [(0, 0.5, 1.0), (5, 1.0, 1.0), (5, 0.5, float("nan")), (2.5, 0.5, 0.0)]:
        with pytest.raises(DomainError):
            osim.ExactTailQuery(*args)


def test_simulation_matches_exact_small_case():
    w4 = 4 ** 0.75
    res = osim.simulate_tail([0.5] * 4, w4, 1.0 / w4, 200_000, seed=7)
    assert res.ci_lo <= 1 / 16 <= res.ci_hi
    assert res.estimate == res.hits / res.samples
    assert res.ci_lo <= res.estimate <= res.ci_hi


def test_simulation_support_bound():
    res = osim.simulate_tail([0.2, 0.6, 0.5], 1.0, 1.71, 10_000, seed=1)
    assert res.hits == 0 and res.estimate == 0.0


def test_simulation_deterministic_across_workers():
    args = ([0.1, 0.4, 0.5, 0.9, 0.33], 2.0, 0.4, 300_000, 12345)
    one = osim.simulate_tail(*args, workers=1)
    many = osim.simulate_tail(*args, workers=4)
    assert one == many == osim.simulate_tail(*args, workers=3)


def test_simulation_validation():
    with pytest.raises(DomainError):
        osim.simulate_tail([0.5], 1.0, 1.0, 100, 0)
    with pytest.raises(DomainError):
        osim.simulate_tail([], 1.0, 1.0, 10_000, 0)
    with pytest.raises(DomainError):
        osim.simulate_tail([0.5], 1.0, 1.0, 10_000, -1)


def test_clopper_pearson_edges():
    lo, hi = osim.clopper_pearson(0, 1000)
    assert lo == 0.0 and hi == pytest.approx(1 - 0.005 ** (1 / 1000), rel=1e-10)
    lo, hi = osim.clopper_pearson(1000, 1000)
    assert hi == 1.0


def test_sup_tail_matches_exhaustive_scan():
    for u in (1.05, 1.3, 1.8):
        value, arg = osim.sup_tail_over_n(W34, 0.5, u, 10_000)
        ns = np.arange(1, 10_001)
        tails = osim.exact_tails(ns, 0.5, u * ns ** 0.75)
        assert value == pytest.approx(tails.max(), rel=1e-14)
        assert tails[arg - 1] == value


def test_sup_tail_examples():
    value, arg = osim.sup_tail_over_n(W34, 0.5, 1.05, 1_000_000)
    assert value > 0 and arg >= 1
    assert osim.sup_tail_over_n(W34, 0.5, 50.0, 10) == (0.0, 1)
    values = [osim.sup_tail_over_n(W34, 0.5, u, 20_000)[0] for u in np.linspace(1.05, 2.5, 10)]
    assert all(a >= b for a, b in zip(values, values[1:]))


def test_envelope_examples():
    lam = np.linspace(-60, 60, 241)
    assert osim.bounded_variable_envelope_check([-0.5, 0.5], [0.5, 0.5], lam) == pytest.approx(0, abs=1e-14)
    three = osim.bounded_variable_envelope_check([-0.5, 0.0, 0.5], [0.25, 0.5, 0.25], lam[lam != 0])
    assert three < 0
    assert osim.bounded_variable_envelope_check([0.0], [1.0], [2.0]) == pytest.approx(-math.log(math.cosh(1)))


def test_envelope_rejects_bad_laws():
    with pytest.raises(DomainError):
        osim.bounded_variable_envelope_check([-0.6, 0.6], [0.5, 0.5], [1.0])
    with pytest.raises(DomainError):
        osim.bounded_variable_envelope_check([-0.5, 0.5], [0.4, 0.6], [1.0])
