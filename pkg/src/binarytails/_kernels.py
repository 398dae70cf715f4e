"""Hot inner loops, each in a numba-compiled form and a pure-numpy form.

The public names at the bottom pick one of the two according to
``_accel.USE_NUMBA``. Both variants stay importable (``*_nb`` / ``*_np``) so
tests and the benchmark can compare them directly.
"""

from __future__ import annotations

import math

import numpy as np

from ._accel import USE_NUMBA, njit

LN2 = math.log(2.0)
HALF_LN_2PI = 0.5 * math.log(2.0 * math.pi)

# Philox4x32-10 round constants.
PHILOX_M0 = 0xD2511F53
PHILOX_M1 = 0xCD9E8D57
PHILOX_W0 = 0x9E3779B9
PHILOX_W1 = 0xBB67AE85
MASK32 = 0xFFFFFFFF

_NP_CHUNK = 1 << 20


# ---------------------------------------------------------------- theta scan


def _log_cosh_scalar(x):
    ax = abs(x)
    if ax < 1.0:
        s = math.sinh(ax / 2.0)
        return math.log1p(2.0 * s * s)
    return ax - LN2 + math.log1p(math.exp(-2.0 * ax))


_log_cosh_nb = njit(_log_cosh_scalar)


def _theta_scan_power_loop(c, a, n_lo, n_hi):
    best = -1.0
    arg = n_lo
    for n in range(n_lo, n_hi + 1):
        fn = float(n)
        v = fn * _log_cosh_nb(c / fn ** a)
        if v > best:
            best = v
            arg = n
    return best, arg


def _theta_scan_values_loop(c, w_values, n_first):
    best = -1.0
    arg = n_first
    for i in range(w_values.shape[0]):
        fn = float(n_first + i)
        v = fn * _log_cosh_nb(c / w_values[i])
        if v > best:
            best = v
            arg = n_first + i
    return best, arg


theta_scan_power_nb = njit(_theta_scan_power_loop)
theta_scan_values_nb = njit(_theta_scan_values_loop)


def _log_cosh_np(x):
    ax = np.abs(x)
    with np.errstate(over="ignore"):
        near = np.log1p(2.0 * np.sinh(np.minimum(ax, 1.0) / 2.0) ** 2)
        far = ax - LN2 + np.log1p(np.exp(-2.0 * ax))
    return np.where(ax < 1.0, near, far)


def theta_scan_power_np(c, a, n_lo, n_hi):
    best, arg = -1.0, n_lo
    for start in range(n_lo, n_hi + 1, _NP_CHUNK):
        n = np.arange(start, min(n_hi, start + _NP_CHUNK - 1) + 1, dtype=float)
        vals = n * _log_cosh_np(c / n ** a)
        i = int(np.argmax(vals))
        if vals[i] > best:
            best, arg = float(vals[i]), int(n[i])
    return best, arg


def theta_scan_values_np(c, w_values, n_first):
    n = np.arange(n_first, n_first + w_values.shape[0], dtype=float)
    vals = n * _log_cosh_np(c / w_values)
    i = int(np.argmax(vals))
    return float(vals[i]), n_first + i


# ------------------------------------------------------------------ Philox


def _philox_scalar(c0, c1, c2, c3, k0, k1):
    m0 = np.uint64(PHILOX_M0)
    m1 = np.uint64(PHILOX_M1)
    w0 = np.uint64(PHILOX_W0)
    w1 = np.uint64(PHILOX_W1)
    mask = np.uint64(MASK32)
    s32 = np.uint64(32)
    for _ in range(10):
        p0 = c0 * m0
        p1 = c2 * m1
        n0 = (p1 >> s32) ^ c1 ^ k0
        n1 = p1 & mask
        n2 = (p0 >> s32) ^ c3 ^ k1
        n3 = p0 & mask
        c0, c1, c2, c3 = n0, n1, n2, n3
        k0 = (k0 + w0) & mask
        k1 = (k1 + w1) & mask
    return c0, c1, c2, c3


philox4x32_nb = njit(_philox_scalar)


def philox4x32_np(c0, c1, c2, c3, k0, k1):
    """Vectorised Philox4x32-10 over uint64 arrays holding 32-bit words."""
    c0, c1, c2, c3 = (np.asarray(c, dtype=np.uint64) for c in (c0, c1, c2, c3))
    k0 = np.asarray(k0, dtype=np.uint64)
    k1 = np.asarray(k1, dtype=np.uint64)
    m0, m1 = np.uint64(PHILOX_M0), np.uint64(PHILOX_M1)
    mask, s32 = np.uint64(MASK32), np.uint64(32)
    for _ in range(10):
        p0 = c0 * m0
        p1 = c2 * m1
        c0, c1, c2, c3 = (p1 >> s32) ^ c1 ^ k0, p1 & mask, (p0 >> s32) ^ c3 ^ k1, p0 & mask
        k0 = (k0 + np.uint64(PHILOX_W0)) & mask
        k1 = (k1 + np.uint64(PHILOX_W1)) & mask
    return c0, c1, c2, c3


def _words_to_unit(hi, lo):
    # 53-bit uniform in [0, 1) from two 32-bit words.
    return ((hi >> np.uint64(5)) * np.uint64(67108864) + (lo >> np.uint64(6))) * (1.0 / 9007199254740992.0)


_words_to_unit_nb = njit(_words_to_unit)


def _sim_hits_loop(p, threshold, seed, start, stop):
    k0 = np.uint64(seed & MASK32)
    k1 = np.uint64((seed >> 32) & MASK32)
    mask = np.uint64(MASK32)
    n = p.shape[0]
    hits = 0
    for i in range(start, stop):
        ui = np.uint64(i)
        lo = ui & mask
        hi = ui >> np.uint64(32)
        count = 0
        j = 0
        block = 0
        while j < n:
            r0, r1, r2, r3 = philox4x32_nb(lo, hi, np.uint64(block), np.uint64(0), k0, k1)
            if _words_to_unit_nb(r0, r1) < p[j]:
                count += 1
            j += 1
            if j < n:
                if _words_to_unit_nb(r2, r3) < p[j]:
                    count += 1
                j += 1
            block += 1
        if count > threshold:
            hits += 1
    return hits


sim_hits_nb = njit(_sim_hits_loop)


def sim_hits_np(p, threshold, seed, start, stop):
    n = p.shape[0]
    blocks = (n + 1) // 2
    k0 = np.uint64(seed & MASK32)
    k1 = np.uint64((seed >> 32) & MASK32)
    rows = max(1, _NP_CHUNK // max(blocks, 1))
    b = np.arange(blocks, dtype=np.uint64)
    hits = 0
    for s in range(start, stop, rows):
        idx = np.arange(s, min(stop, s + rows), dtype=np.uint64)[:, None]
        lo = np.broadcast_to(idx & np.uint64(MASK32), (idx.shape[0], blocks))
        hi = np.broadcast_to(idx >> np.uint64(32), (idx.shape[0], blocks))
        cb = np.broadcast_to(b, lo.shape)
        r0, r1, r2, r3 = philox4x32_np(lo, hi, cb, np.zeros_like(lo), k0, k1)
        u = np.empty((lo.shape[0], 2 * blocks))
        u[:, 0::2] = _words_to_unit(r0, r1)
        u[:, 1::2] = _words_to_unit(r2, r3)
        counts = (u[:, :n] < p).sum(axis=1)
        hits += int((counts > threshold).sum())
    return hits


# -------------------------------------------------- binomial probabilities
# Saddle-point form of the binomial mass (Loader's algorithm): the log mass is
# assembled from Stirling remainders and the deviance term bd0, both of which
# avoid the cancellation of lgamma differences.

_S0 = 1.0 / 12.0
_S1 = 1.0 / 360.0
_S2 = 1.0 / 1260.0
_S3 = 1.0 / 1680.0
_S4 = 1.0 / 1188.0


def _stirlerr(n):
    if n <= 15.0:
        return math.lgamma(n + 1.0) - (n + 0.5) * math.log(n) + n - HALF_LN_2PI
    nn = n * n
    if n > 500.0:
        return (_S0 - _S1 / nn) / n
    if n > 80.0:
        return (_S0 - (_S1 - _S2 / nn) / nn) / n
    if n > 35.0:
        return (_S0 - (_S1 - (_S2 - _S3 / nn) / nn) / nn) / n
    return (_S0 - (_S1 - (_S2 - (_S3 - _S4 / nn) / nn) / nn) / nn) / n


def _bd0(x, m):
    if abs(x - m) < 0.1 * (x + m):
        v = (x - m) / (x + m)
        s = (x - m) * v
        ej = 2.0 * x * v
        v2 = v * v
        j = 1
        while j < 1000:
            ej *= v2
            s1 = s + ej / (2 * j + 1)
            if s1 == s:
                return s1
            s = s1
            j += 1
        return s
    return x * math.log(x / m) + m - x


def _log_dbinom(k, n, p, q):
    if k == 0:
        return n * math.log1p(-p) if p < 0.5 else n * math.log(q)
    if k == n:
        return n * math.log(p)
    lc = _stirlerr(n) - _stirlerr(k) - _stirlerr(n - k) - _bd0(k, n * p) - _bd0(n - k, n * q)
    lf = 2.0 * HALF_LN_2PI + math.log(k) + math.log1p(-k / n)
    return lc - 0.5 * lf


_stirlerr_nb = njit(_stirlerr)
_bd0_nb = njit(_bd0)


def _log_dbinom_jit(k, n, p, q):
    if k == 0:
        return n * math.log1p(-p) if p < 0.5 else n * math.log(q)
    if k == n:
        return n * math.log(p)
    lc = _stirlerr_nb(n) - _stirlerr_nb(k) - _stirlerr_nb(n - k) - _bd0_nb(k, n * p) - _bd0_nb(n - k, n * q)
    lf = 2.0 * HALF_LN_2PI + math.log(k) + math.log1p(-k / n)
    return lc - 0.5 * lf


log_dbinom_nb = njit(_log_dbinom_jit)


def _upper_tail_loop(n, p, k0):
    # Kahan-compensated sum of P(K = k), k = k0..n, stopping once terms are
    # negligible past the mode.
    if k0 <= 0:
        return 1.0
    if k0 > n:
        return 0.0
    q = 1.0 - p
    fn = float(n)
    mode = math.floor((fn + 1.0) * p)
    total = 0.0
    comp = 0.0
    for k in range(k0, n + 1):
        term = math.exp(log_dbinom_nb(float(k), fn, p, q))
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        if k > mode and term < 1e-300 + total * 1e-18:
            break
    return total


upper_tail_nb = njit(_upper_tail_loop)


def upper_tail_np(n, p, k0):
    if k0 <= 0:
        return 1.0
    if k0 > n:
        return 0.0
    q = 1.0 - p
    terms = [math.exp(_log_dbinom(float(k), float(n), p, q)) for k in range(k0, n + 1)]
    return math.fsum(terms)


def log_dbinom(k, n, p):
    """Log binomial mass ``ln P(K = k)`` for ``K ~ Binomial(n, p)``."""
    return _log_dbinom(float(k), float(n), p, 1.0 - p)


if USE_NUMBA:
    theta_scan_power = theta_scan_power_nb
    theta_scan_values = theta_scan_values_nb
    sim_hits = sim_hits_nb
    upper_tail = upper_tail_nb
else:
    theta_scan_power = theta_scan_power_np
    theta_scan_values = theta_scan_values_np
    sim_hits = sim_hits_np
    upper_tail = upper_tail_np
