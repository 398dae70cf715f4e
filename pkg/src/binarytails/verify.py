"""Invariant suites behind ``binarytails verify``.

Each suite returns a list of `CheckResult`. Sizes are chosen so that the full
run stays well under a minute; the pytest suite covers the same ground at the
acceptance sizes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import binary, fenchel, oracle_sim, phi_spaces, specials, sum_tails

SUITES = ("specials", "binary", "fenchel", "sum_tails", "oracle")


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    passed: bool
    margin: float
    detail: str = ""


def _check(suite, name, margin, ok, detail=""):
    return CheckResult(suite, name, bool(ok), float(margin), detail)


def specials_suite(seed: int = 0):
    rng = np.random.default_rng(seed)
    z = 10.0 ** rng.uniform(0, 10, 10_000)
    rt = float(np.max(np.abs(np.cosh(specials.acosh_stable(z)) - z) / z))
    x = rng.uniform(-700, 700, 100_000)
    lc = specials.log_cosh(x)
    even = float(np.max(np.abs(lc - specials.log_cosh(-x))))
    below = float(np.max(lc - np.abs(x)))
    env = float(np.max(lc - specials.log_cosh_envelope(x)))
    mu = rng.uniform(0, 700, 100_000) + 1e-300
    return [
        _check("specials", "acosh round trip", rt, rt <= 1e-10),
        _check("specials", "log_cosh even", even, even == 0.0),
        _check("specials", "log_cosh <= |x|", below, below <= 0.0),
        _check("specials", "envelope >= log_cosh", env, env <= 0.0),
        _check("specials", "sinh mu <= 2 mu cosh mu", 0.0,
               bool(np.all(specials.check_sinh_envelope(mu)))),
        _check("specials", "C in (1.086, 1.087)", specials.C_QUAD, 1.086 < specials.C_QUAD < 1.087),
    ]


def binary_suite():
    out = []
    grid = np.linspace(0.01, 0.97, 97)
    g = np.array([binary.g_norm(r).value for r in grid])
    g_mirror = np.array([binary.g_norm(1.0 - r).value for r in grid])
    sym = float(np.max(np.abs(g - g_mirror)))
    out.append(_check("binary", "g(r) = g(1-r)", sym, sym <= 1e-6))
    inf_lim = 2.0 * np.maximum(grid, 1.0 - grid)
    zero_lim = 2.0 * np.sqrt(grid * (1.0 - grid))
    lo_gap = float(np.min(g - np.maximum(inf_lim, zero_lim)))
    out.append(_check("binary", "g >= both limits", lo_gap, lo_gap >= -1e-9))
    hi_gap = float(np.max(g) - 2.0)
    out.append(_check("binary", "g <= 2", hi_gap, hi_gap <= 1e-9))
    r = np.linspace(0.5 + 1e-9, 1.0 - 1e-9, 200)
    lam = np.linspace(0.0, 700.0, 500)
    worst = min(float(np.min(binary.check_quadrant_inequality(ri, lam))) for ri in r)
    out.append(_check("binary", "quadrant inequality", worst, worst >= -1e-12))
    qs = np.arange(0.05, 0.951, 0.05)
    qdev = max(abs(phi_spaces.subgaussian_norm(binary.BinaryVariable(p).mgf()) - binary.q_norm(p))
               for p in qs)
    out.append(_check("binary", "||eta_p||_Sub = Q(p)", qdev, qdev <= 1e-4))
    phi_r = phi_spaces.phi_rademacher()
    fdev = 0.0
    for rr in np.arange(0.1, 0.91, 0.1):
        fit = phi_spaces.fit_bphi_norm(binary.BinaryVariable(rr).mgf(), phi_r).tau
        gv = binary.g_norm(rr).value
        fdev = max(fdev, abs(fit - gv) / gv)
    out.append(_check("binary", "B(phi_R) fit = g(r)", fdev, fdev <= 1e-5))
    return out


def audit_report():
    """Numerics of the sup_r beta_r(lam) = cosh(lam/2) claim on a default grid."""
    r_grid = np.round(np.arange(0.01, 0.991, 0.01), 12)
    lam_grid = np.arange(-20.0, 20.01, 1.0)
    return binary.audit_cosh_envelope(r_grid, lam_grid)


def fenchel_suite():
    out = []
    sq = fenchel.ConjugableFunction(lambda x: x * x, convex_certified=True, label="lam^2")
    lc = fenchel.ConjugableFunction(lambda x: specials.log_cosh(x / 2.0), convex_certified=True,
                                    label="ln cosh(lam/2)")
    pw = fenchel.ConjugableFunction(lambda x: x ** (4.0 / 3.0), 1.0, math.inf, True, "lam^(4/3)")
    for f, pts in ((sq, np.linspace(-10, 10, 21)), (lc, np.linspace(-20, 20, 41)),
                   (pw, np.linspace(1, 20, 39))):
        dev = fenchel.fenchel_moreau_check(f, pts)
        out.append(_check("fenchel", f"f** = f for {f.label}", dev, dev <= 1e-5))
    rng = np.random.default_rng(1)
    worst = -math.inf
    for lam, u in zip(rng.uniform(-20, 20, 300), rng.uniform(-0.49, 0.49, 300)):
        worst = max(worst, lam * u - lc(lam) - fenchel.conjugate(lc, u))
    out.append(_check("fenchel", "Young inequality", worst, worst <= 1e-9))
    w = sum_tails.power_law(0.75)
    rel = max(abs(sum_tails.rate_v(w, u) - 27 * u ** 4 / 256) / (27 * u ** 4 / 256)
              for u in np.linspace(2, 100, 50))
    out.append(_check("fenchel", "v_w = 27u^4/256 for w = lam^(3/4)", rel, rel <= 1e-5))
    return out


def sum_tails_suite():
    out = []
    w = sum_tails.power_law(0.75)
    model = sum_tails.SumModel.universal(w)
    lam = np.linspace(-30, 30, 61)
    th = np.array([sum_tails.theta(model, x) for x in lam])
    even = float(np.max(np.abs(th - th[::-1])))
    out.append(_check("sum_tails", "theta even", even, even <= 1e-12))
    mid = np.array([sum_tails.theta(model, 0.5 * (a + b)) for a, b in zip(lam[:-2], lam[2:])])
    conv = float(np.max(mid - 0.5 * (th[:-2] + th[2:])))
    out.append(_check("sum_tails", "theta midpoint convex", conv, conv <= 1e-9))
    worst = math.inf
    for a in (0.6, 0.7, 0.75, 0.8, 0.9):
        m = sum_tails.SumModel.universal(sum_tails.power_law(a))
        k = sum_tails.certified_lower_constant(m)
        for x in [1.5] + [2.0 ** j for j in range(1, 11)]:
            inv = float(m.w.inverse(np.array([x]))[0])
            t = sum_tails.theta(m, x)
            worst = min(worst, t - k * inv, specials.C_QUAD * inv - t)
    out.append(_check("sum_tails", "certified band k w^-1 <= theta <= C w^-1", worst, worst >= 0.0))
    us = np.linspace(1.2, 3.0, 10)
    ts = np.array([sum_tails.theta_star(model, u) for u in us])
    slope = float(np.polyfit(np.log(us), np.log(ts), 1)[0])
    out.append(_check("sum_tails", "ln theta* slope on [1.2, 3]", slope, 3.5 <= slope <= 4.5))
    out.append(_check("sum_tails", "theta* increasing", float(np.min(np.diff(ts))),
                      bool(np.all(np.diff(ts) > 0))))
    report = sum_tails.check_conditions(w)
    out.append(_check("sum_tails", "A1-A5 sampled for pow:0.75", 0.0, report.passed))
    return out


def nominal_band_findings():
    """Where ``C1 w^-1 <= theta`` with ``C1 = 1/(1 + w(1))`` fails (descriptive)."""
    rows = []
    for a in (0.6, 0.7, 0.75, 0.8, 0.9):
        m = sum_tails.SumModel.universal(sum_tails.power_law(a))
        for x in [1.5] + [2.0 ** j for j in range(1, 11)]:
            inv = float(m.w.inverse(np.array([x]))[0])
            t = sum_tails.theta(m, x)
            rows.append({"a": a, "lam": x, "theta_over_inverse": t / inv,
                         "holds": t >= sum_tails.lower_constant(m.w) * inv})
    return rows


def oracle_suite(seed: int = 2024):
    out = []
    rng = np.random.default_rng(seed)
    misses = 0
    trials = 10
    for i in range(trials):
        n = int(rng.integers(1, 40))
        p = float(rng.uniform(0.05, 0.95))
        thr = float(rng.uniform(-0.5, 0.5) * math.sqrt(n * p * (1 - p)) + 0.25)
        sim = oracle_sim.simulate_tail([p] * n, 1.0, thr, 200_000, seed + i)
        exact = oracle_sim.exact_tail(oracle_sim.ExactTailQuery(n, p, thr))
        misses += not sim.ci_lo <= exact <= sim.ci_hi
    out.append(_check("oracle", "MC 99% CI covers exact tail", misses, misses <= 2,
                      f"{trials - misses}/{trials} covered"))
    w = sum_tails.power_law(0.75)
    model = sum_tails.SumModel.universal(w)
    grid = oracle_sim.geometric_n_grid(10 ** 5)
    worst = math.inf
    for u in (1.05, 1.5, 2.0):
        bound = math.exp(-sum_tails.theta_star(model, u))
        tails = oracle_sim.exact_tails(grid, 0.5, u * w(grid.astype(float)))
        worst = min(worst, bound - float(tails.max()))
    out.append(_check("oracle", "Chernoff dominance", worst, worst >= 0.0))
    sym = 0.0
    for n in (5, 16, 101):
        for t in (0.3, 1.7, 4.2):
            up = oracle_sim.exact_tail(oracle_sim.ExactTailQuery(n, 0.5, t))
            # P(sum < -t) = P(K < n/2 - t) = 1 - P(K - n/2 > -t) - P(K - n/2 = -t)
            down = math.fsum(math.exp(oracle_sim._kernels.log_dbinom(k, n, 0.5))
                             for k in range(n + 1) if k - n / 2 < -t)
            sym = max(sym, abs(up - down))
    out.append(_check("oracle", "p = 1/2 tail symmetry", sym, sym <= 1e-15))
    worst = -math.inf
    lam = np.linspace(-60, 60, 241)
    for _ in range(200):
        atoms, masses = random_centered_law(rng)
        worst = max(worst, oracle_sim.bounded_variable_envelope_check(atoms, masses, lam))
    out.append(_check("oracle", "bounded mean-zero law below cosh(lam/2)", worst, worst <= 1e-12))
    return out


def random_centered_law(rng, max_atoms: int = 6):
    """Random finite mean-zero law on [-1/2, 1/2] (re-centered with a ±1/2 atom)."""
    k = int(rng.integers(1, max_atoms + 1))
    atoms = rng.uniform(-0.5, 0.5, k)
    masses = rng.dirichlet(np.ones(k))
    mean = float(np.dot(atoms, masses))
    extra = 2.0 * abs(mean)
    atoms = np.append(atoms, -0.5 if mean > 0 else 0.5)
    masses = np.append(masses, extra) / (1.0 + extra)
    # remove the rounding residue of the mean through the added atom
    resid = math.fsum(atoms * masses)
    masses[-1] += resid / (0.5 if atoms[-1] < 0 else -0.5)
    masses /= masses.sum()
    return atoms, masses


def run(suite: str):
    runners = {
        "specials": specials_suite,
        "binary": binary_suite,
        "fenchel": fenchel_suite,
        "sum_tails": sum_tails_suite,
        "oracle": oracle_suite,
    }
    names = SUITES if suite == "all" else (suite,)
    results = []
    for name in names:
        results.extend(runners[name]())
    return results
