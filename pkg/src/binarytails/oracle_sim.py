"""Ground truth for the bounds: exact binomial tails and seeded Monte Carlo.

Randomness in `simulate_tail` is counter-based (Philox4x32-10 keyed by the
seed, counter = (sample index, block)), so the result depends only on
``(p_list, threshold, samples, seed)`` and not on how samples are sharded.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import special, stats

from . import _kernels
from ._accel import worker_count
from .errors import DomainError
from .sum_tails import NormingFunction
from .specials import log_cosh

EXACT_SUM_MAX_N = 10_000
MAX_N = 10_000_000
CI_LEVEL = 0.99
MIN_SAMPLES = 10_000
N_GRID_RATIO = 1.05
_SHARD = 1 << 16


@dataclass(frozen=True)
class ExactTailQuery:
    """``P(sum zeta(i) > threshold)`` for ``n`` i.i.d. centered indicators."""

    n: int
    p: float
    threshold: float

    def __post_init__(self):
        if int(self.n) != self.n or not 1 <= self.n <= MAX_N:
            raise DomainError(f"n must be an integer in [1, {MAX_N}]")
        if not 0.0 < self.p < 1.0:
            raise DomainError("p must lie strictly inside (0, 1)")
        if self.threshold != self.threshold:
            raise DomainError("threshold is NaN")


def first_exceeding_count(n: int, p: float, threshold: float) -> int:
    """Smallest integer ``k`` with ``k - n p > threshold``."""
    x = n * p + threshold
    if x < 0:
        return 0
    return min(int(math.floor(x)) + 1, n + 1)


def exact_tail(query: ExactTailQuery) -> float:
    """``P(K - n p > threshold)`` with ``K ~ Binomial(n, p)``.

    Up to ``n = 10**4`` the upper-tail masses are summed directly (saddle-point
    log masses, compensated summation); larger ``n`` uses the identity
    ``P(K >= k) = I_p(k, n - k + 1)``.
    """
    n, p = int(query.n), float(query.p)
    k0 = first_exceeding_count(n, p, query.threshold)
    if k0 <= 0:
        return 1.0
    if k0 > n:
        return 0.0
    if n <= EXACT_SUM_MAX_N:
        return float(_kernels.upper_tail(n, p, k0))
    return float(special.betainc(k0, n - k0 + 1, p))


def exact_tails(n, p: float, thresholds) -> np.ndarray:
    """Vectorised `exact_tail` over arrays of ``n`` and thresholds."""
    n = np.asarray(n, dtype=np.int64)
    thr = np.broadcast_to(np.asarray(thresholds, dtype=float), n.shape)
    out = np.empty(n.shape, dtype=float)
    k0 = np.clip(np.floor(n * p + thr).astype(np.int64) + 1, 0, n + 1)
    k0 = np.where(n * p + thr < 0, 0, k0)
    small = n <= EXACT_SUM_MAX_N
    for i in np.flatnonzero(small):
        out.flat[i] = exact_tail(ExactTailQuery(int(n.flat[i]), p, float(thr.flat[i])))
    big = ~small
    if big.any():
        kb, nb = k0[big], n[big]
        vals = special.betainc(np.maximum(kb, 1), np.maximum(nb - kb + 1, 1), p)
        vals = np.where(kb <= 0, 1.0, np.where(kb > nb, 0.0, vals))
        out[big] = vals
    return out


def clopper_pearson(hits: int, samples: int, level: float = CI_LEVEL):
    alpha = 1.0 - level
    lo = 0.0 if hits == 0 else float(stats.beta.ppf(alpha / 2, hits, samples - hits + 1))
    hi = 1.0 if hits == samples else float(stats.beta.ppf(1 - alpha / 2, hits + 1, samples - hits))
    return lo, hi


@dataclass(frozen=True)
class SimulationResult:
    estimate: float
    ci_lo: float
    ci_hi: float
    samples: int
    seed: int
    hits: int
    threshold: float


def count_hits(p: np.ndarray, threshold: float, seed: int, samples: int, workers: int | None = None) -> int:
    """Samples whose success count exceeds ``threshold``, sharded over threads."""
    workers = workers or worker_count()
    shards = [(s, min(samples, s + _SHARD)) for s in range(0, samples, _SHARD)]
    if workers <= 1 or len(shards) == 1:
        return sum(_kernels.sim_hits(p, threshold, seed, a, b) for a, b in shards)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = pool.map(lambda ab: _kernels.sim_hits(p, threshold, seed, ab[0], ab[1]), shards)
        return int(sum(parts))


def simulate_tail(p_list, w_value: float, u: float, samples: int, seed: int,
                  *, workers: int | None = None) -> SimulationResult:
    """Monte Carlo estimate of ``P(w_value^{-1} sum (I(i) - p(i)) > u)``.

    The event is evaluated as ``K > sum p(i) + u * w_value`` with ``K`` the
    integer success count, matching `exact_tail` for homogeneous inputs.
    """
    p = np.ascontiguousarray(p_list, dtype=float).ravel()
    if p.size == 0:
        raise DomainError("p_list must be non-empty")
    if ((p <= 0) | (p >= 1)).any():
        raise DomainError("probabilities must lie strictly inside (0, 1)")
    if samples < MIN_SAMPLES:
        raise DomainError(f"samples must be at least {MIN_SAMPLES}")
    if not w_value > 0:
        raise DomainError("w_value must be positive")
    seed = int(seed)
    if not 0 <= seed < 2 ** 64:
        raise DomainError("seed must be a 64-bit unsigned integer")
    uniq = np.unique(p)
    total_p = p.size * float(uniq[0]) if uniq.size == 1 else math.fsum(p)
    threshold = total_p + u * w_value
    hits = count_hits(p, threshold, seed, int(samples), workers)
    lo, hi = clopper_pearson(hits, int(samples))
    return SimulationResult(estimate=hits / samples, ci_lo=lo, ci_hi=hi, samples=int(samples),
                            seed=seed, hits=hits, threshold=threshold)


def geometric_n_grid(n_max: int, ratio: float = N_GRID_RATIO) -> np.ndarray:
    """Distinct integers ``round(ratio**k)`` in ``[1, n_max]`` (``n_max`` included)."""
    steps = int(math.ceil(math.log(n_max) / math.log(ratio))) + 1 if n_max > 1 else 1
    grid = np.unique(np.round(ratio ** np.arange(steps)).astype(np.int64))
    grid = grid[grid <= n_max]
    return np.unique(np.append(grid, n_max))


def sup_tail_over_n(w: NormingFunction, p: float, u: float, n_max: int, *, refine_cap: int = 200_000):
    """``max_{1 <= n <= n_max} P(S(n) > u)`` and its maximiser.

    Scans the 1.05-geometric grid, then every integer between the grid
    neighbours of the grid maximiser (at least ±2).
    """
    if not 1 <= n_max <= MAX_N:
        raise DomainError(f"n_max must lie in [1, {MAX_N}]")

    def tails(ns):
        return exact_tails(ns, p, u * np.asarray(w(ns.astype(float)), dtype=float))

    grid = geometric_n_grid(int(n_max))
    vals = tails(grid)
    k = int(np.argmax(vals))
    if vals[k] <= 0.0:
        return 0.0, 1
    lo = int(grid[max(k - 1, 0)])
    hi = int(grid[min(k + 1, len(grid) - 1)])
    lo, hi = max(1, min(lo, int(grid[k]) - 2)), min(int(n_max), max(hi, int(grid[k]) + 2))
    if hi - lo > refine_cap:
        lo, hi = max(1, int(grid[k]) - refine_cap // 2), min(int(n_max), int(grid[k]) + refine_cap // 2)
    ns = np.arange(lo, hi + 1, dtype=np.int64)
    fine = tails(ns)
    j = int(np.argmax(fine))
    return float(fine[j]), int(ns[j])


def bounded_variable_envelope_check(atoms, masses, lambda_grid) -> float:
    """``max_lam [ln E exp(lam X) - ln cosh(lam/2)]`` for a finite law on [-1/2, 1/2].

    Raises `DomainError` if the support leaves ``[-1/2, 1/2]``, the masses are
    not a probability vector, or the mean is not zero within 1e-12.
    """
    x = np.asarray(atoms, dtype=float).ravel()
    m = np.asarray(masses, dtype=float).ravel()
    if x.shape != m.shape or x.size == 0:
        raise DomainError("atoms and masses must be non-empty and aligned")
    if (np.abs(x) > 0.5 + 1e-12).any():
        raise DomainError("support must lie in [-1/2, 1/2]")
    if (m < 0).any() or abs(m.sum() - 1.0) > 1e-12:
        raise DomainError("masses must be non-negative and sum to 1")
    if abs(math.fsum(x * m)) > 1e-12:
        raise DomainError("law must have mean zero")
    lam = np.asarray(lambda_grid, dtype=float).ravel()
    keep = m > 0
    lme = special.logsumexp(np.outer(lam, x[keep]), b=m[keep], axis=1)
    return float(np.max(lme - log_cosh(lam / 2.0)))
