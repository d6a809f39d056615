"""End-to-end acceptance criteria, one test per criterion.

Each test records a one-line summary that the terminal report prints as
``criterion N: PASS|FAIL  detail``.
"""

import math
import time

import numpy as np

from fptlevy.checks import run_catalog
from fptlevy.cumulant import psi_derivatives
from fptlevy.esscher import find_lambda_star, tilt_density_relation
from fptlevy.fpt import FptModel, asymptote, asymptote_eval, fpt_density, stable_constant, stable_limit_integral
from fptlevy.levy_model import ExponentialJumps, LevyTriplet, StableTail, TemperedStableTail
from fptlevy.mc import SimConfig, ks_distance, simulate_fpt, simulate_increments
from fptlevy.pricing import MarketSpec, discounted_fpt_integral, laplace_fpt, risk_neutral_triplet, urc_gap_asymptote, urc_value

EXP_SIGMA = LevyTriplet(0.5, 0.0, ExponentialJumps(2.0, 3.0))
STABLE = LevyTriplet(0.0, 0.0, StableTail(1.0, 1.5))


def brownian_fpt(t, b, m):
    return b / math.sqrt(2 * math.pi * t**3) * math.exp(-((m * t - b) ** 2) / (2 * t))


def strictly_decreasing(values):
    return all(a > b for a, b in zip(values, values[1:]))


def test_brownian_exactness(criterion):
    start = time.perf_counter()
    worst = 0.0
    for m in (0.0, 0.3):
        for b in (0.5, 1.0, 2.0):
            model = FptModel(LevyTriplet(1.0, m), b)
            for t in np.geomspace(0.1, 50.0, 20):
                exact = brownian_fpt(t, b, m)
                worst = max(worst, abs(fpt_density(model, t)[0] / exact - 1.0))
    elapsed = time.perf_counter() - start
    criterion(1, f"max relative error {worst:.2e} (limit 1e-8), {elapsed:.2f} s (limit 10 s)")
    assert worst < 1e-8
    assert elapsed < 10.0


def test_gaussian_regime_anchor(criterion):
    brownian = FptModel(LevyTriplet(1.0, 0.0), 1.0)
    rep = asymptote(brownian, "gaussian")
    anchor = max(
        abs(fpt_density(brownian, t)[0] / asymptote_eval(rep, t) / math.exp(-1 / (2 * t)) - 1.0) for t in (10.0, 100.0)
    )
    jumps = FptModel(EXP_SIGMA, 1.0)
    jrep = asymptote(jumps, "gaussian")
    ratios = [fpt_density(jumps, t)[0] / asymptote_eval(jrep, t) for t in (10.0, 100.0, 1000.0)]
    gaps = [abs(r - 1.0) for r in ratios]
    criterion(
        2,
        f"Brownian anchor error {anchor:.2e} (limit 1e-8); jump-model c^2={jrep.auxiliary['c_squared']:.4f} "
        f"ratios {', '.join(f'{r:.5f}' for r in ratios)} at t=10,1e2,1e3",
    )
    assert anchor < 1e-8
    assert gaps[-1] <= 0.10
    assert strictly_decreasing(gaps)


def test_stable_regime_anchor(criterion):
    model = FptModel(STABLE, 1.0)
    rep = asymptote(model, "stable")
    feasible = []
    for t in 10.0 ** np.arange(1, 9):
        value, err = fpt_density(model, t)
        if value > 0 and err < 0.01 * value:
            feasible.append((t, value / asymptote_eval(rep, t)))
    t_max, last = feasible[-1]
    gaps = [abs(r - 1.0) for _, r in feasible]
    k_err = abs(stable_limit_integral(1.5) / (2 * math.pi) - stable_constant(1.5))
    criterion(
        3,
        f"largest feasible t={t_max:.0e}, ratio there {last:.6f}; ratios by decade "
        f"{', '.join(f'{r:.5f}' for _, r in feasible[:4])}...; K_1.5={stable_constant(1.5):.6f}, integral check {k_err:.1e}",
    )
    assert abs(last - 1.0) <= 0.10
    assert strictly_decreasing(gaps)
    assert k_err < 1e-8


def test_tilted_regime_anchor(criterion):
    brownian = FptModel(LevyTriplet(1.0, 0.4), 1.0)
    anchor = 0.0
    for t in (10.0, 40.0):
        target = t**-1.5 / math.sqrt(2 * math.pi) * math.exp(0.4 - 0.08 * t)
        anchor = max(anchor, abs(fpt_density(brownian, t)[0] / target / math.exp(-1 / (2 * t)) - 1.0))
    trip = LevyTriplet(0.3, 0.5, TemperedStableTail(1.0, 1.5, 2.0))
    sol = find_lambda_star(trip)
    excess = -math.inf
    for b in (0.5, 1.0, 2.0):
        model = FptModel(trip, b)
        for t in (1.0, 2.0, 5.0, 10.0, 20.0):
            rel = tilt_density_relation(model, sol, t)
            excess = max(excess, abs(rel.lhs - rel.rhs) - (rel.lhs_error + rel.rhs_error))
    criterion(
        4,
        f"Brownian anchor error {anchor:.2e} (limit 1e-6); tempered lambda*={sol.lambda_star:.6f}, "
        f"max |lhs-rhs| minus error bound {excess:.2e} over 5x3 grid",
    )
    assert anchor < 1e-6
    assert excess <= 0.0


def test_laplace_identity(criterion):
    start = time.perf_counter()
    worst = 0.0
    for trip in (LevyTriplet(1.0, 0.0), EXP_SIGMA, STABLE):
        model = FptModel(trip, 1.0)
        for r in (0.05, 0.5):
            worst = max(worst, abs(discounted_fpt_integral(model, r) / laplace_fpt(model, r) - 1.0))
    elapsed = time.perf_counter() - start
    criterion(5, f"max relative deviation {worst:.2e} (limit 1e-4), {elapsed:.1f} s (limit 60 s)")
    assert worst < 1e-4
    assert elapsed < 60.0


def test_gap_asymptote(criterion):
    market = MarketSpec(0.05, 0.6)
    model = FptModel(risk_neutral_triplet(0.05, 1.0), market.b)
    rep = urc_gap_asymptote(model, market)
    bound = laplace_fpt(model, 0.05)
    ratios = [(bound - urc_value(model, MarketSpec(0.05, 0.6, T))) / asymptote_eval(rep, T) for T in (20.0, 40.0, 60.0)]
    gaps = [abs(r - 1.0) for r in ratios]
    criterion(6, f"gap ratios {', '.join(f'{r:.5f}' for r in ratios)} at T=20,40,60 (need |ratio-1| <= 0.10 at T=60)")
    assert strictly_decreasing(gaps)
    assert gaps[-1] <= 0.10


def test_monte_carlo_cross_validation(criterion):
    start = time.perf_counter()
    cases = {"brownian": (LevyTriplet(1.0, 0.0), 1.0, 1), "exponential+sigma": (EXP_SIGMA, 4.0, 2)}
    report, ok = [], True
    for name, (trip, horizon, seed) in cases.items():
        samples = simulate_fpt(trip, 1.0, SimConfig(100_000, 1e-3, horizon, seed=seed))
        ks = ks_distance(samples, FptModel(trip, 1.0))
        x = simulate_increments(trip, 100_000, seed=seed)
        _, mean, var = psi_derivatives(trip, 0.0)
        dev = (x - x.mean()) ** 2
        z_mean = abs(x.mean() - mean) / (x.std(ddof=1) / math.sqrt(x.size))
        z_var = abs(dev.mean() - var) / (dev.std(ddof=1) / math.sqrt(x.size))
        ok &= ks < 0.01 and z_mean < 3 and z_var < 3
        report.append(f"{name}: KS {ks:.4f}, mean {z_mean:.2f} SE, var {z_var:.2f} SE")
    elapsed = time.perf_counter() - start
    criterion(7, f"{'; '.join(report)}; {elapsed:.0f} s (limit 120 s)")
    assert ok
    assert elapsed < 120.0


def test_property_suites(criterion):
    results = run_catalog()
    failed = [f"{r.model}/{r.name}" for r in results if not r.passed]
    counts = {s: sum(r.status == s for r in results) for s in ("pass", "fail", "skip")}
    criterion(8, f"{counts['pass']} passed, {counts['fail']} failed, {counts['skip']} not applicable" + (f": {failed}" if failed else ""))
    assert not failed
