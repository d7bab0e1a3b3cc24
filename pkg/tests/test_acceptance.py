"""Exit criteria, one test per criterion; a PASS/FAIL line per criterion is
printed in the terminal summary."""

import io
import json
import math
import time

import numpy as np
import pytest
from scipy import stats

from dudecap import (AssociationPolicy, EULER_GAMMA, LinkBudget, McConfig, PlanRequest,
                     bound_from_alpha, bound_general, bound_general_approx, bound_macro_only,
                     bound_sc_only, integral_xlogx, plan_min_density, rho,
                     sample_fading_gain, sample_nearest_sc_distance, simulate_ergodic_rate)
from dudecap.cli import main
from dudecap.montecarlo import simulate_rates

from conftest import GRID_D0, GRID_LAMBDA, LAMBDA_REF, POLICIES, make

SEED = 20240601


@pytest.fixture(scope="module")
def jensen_grid():
    link = LinkBudget()
    rows = []
    start = time.perf_counter()
    for kind in POLICIES:
        for d0 in GRID_D0:
            for lam in GRID_LAMBDA:
                s = make(kind, lam=lam, d0=d0, link=link)
                est = simulate_ergodic_rate(s, McConfig(n_samples=100_000, seed=SEED))
                rows.append((kind, d0, lam, bound_general(s).total_nats, est))
    return rows, time.perf_counter() - start


@pytest.mark.criterion(1, "link budget: noise power -104 dBm, coupled alpha 0.01^0.25")
def test_c01_table_consistency(record_property):
    link = LinkBudget()
    coupled = make("coupled").alpha
    record_property("noise_dbm", f"{link.noise_power_dbm:.4f}")
    record_property("alpha_coupled", f"{coupled:.4f}")
    assert abs(link.noise_power_dbm - (-104.0)) <= 0.01
    assert coupled == pytest.approx(0.01 ** 0.25, rel=1e-12)
    assert round(coupled, 4) == 0.3162
    assert round(coupled, 1) == 0.3


@pytest.mark.criterion(2, "bound <= MC mean + 3 stderr on 4x8x8 grid, 1e5 samples")
def test_c02_bound_validity(jensen_grid, record_property):
    rows, elapsed = jensen_grid
    violations = [(k, d0, lam, b, e.mean_nats, e.stderr_nats) for k, d0, lam, b, e in rows
                  if b > e.mean_nats + 3 * e.stderr_nats]
    record_property("points", len(rows))
    record_property("violations", len(violations))
    record_property("seconds", f"{elapsed:.1f}")
    assert len(rows) == 256
    assert violations == []
    assert elapsed < 120


@pytest.mark.criterion(3, "tightness: median (MC - bound)/MC over the grid (expected < 5%)",
                       report_only=True)
def test_c03_tightness_report(jensen_grid, record_property):
    rows, _ = jensen_grid
    gaps = np.array([(e.mean_nats - b) / e.mean_nats for _, _, _, b, e in rows])
    median = float(np.median(gaps))
    record_property("median_gap", f"{100 * median:.2f}%")
    record_property("expectation_met", median < 0.05)
    for kind in POLICIES:
        sub = [(e.mean_nats - b) / e.mean_nats for k, _, _, b, e in rows if k == kind]
        record_property(f"median_{kind}", f"{100 * float(np.median(sub)):.2f}%")
    # report-only: the hard gate on the bound is criterion 2
    assert np.all(np.isfinite(gaps))


@pytest.mark.criterion(4, "degenerate collapse: alpha=0 exact, alpha=1e6 within 1e-9")
def test_c04_degenerate_collapse(record_property):
    link = LinkBudget()
    g, b, r = link.gamma, link.beta, rho(1)
    worst = 0.0
    for d0 in GRID_D0:
        for lam in GRID_LAMBDA:
            assert bound_from_alpha(0.0, lam, d0, g, b, r, r).total_nats == bound_macro_only(d0, g, b, r)
            big = bound_from_alpha(1e6, lam, d0, g, b, r, r).total_nats
            sc = bound_sc_only(lam, g, b, r)
            worst = max(worst, abs(big - sc) / sc)
    record_property("max_rel_error", f"{worst:.2e}")
    assert worst <= 1e-9
    assert bound_general(make("macro")).total_nats == bound_macro_only(250.0, g, b, r)


@pytest.mark.criterion(5, "saturation: approx within 1e-3 rel where arg >= 4; integral flat past 4")
def test_c05_corollary(record_property):
    checked, worst = 0, 0.0
    d0s = sorted(set(GRID_D0) | set(np.linspace(50.0, 2000.0, 40)))
    lams = sorted(set(GRID_LAMBDA) | set(np.geomspace(1e-7, 1e-4, 40)))
    for kind in POLICIES:
        for d0 in d0s:
            for lam in lams:
                s = make(kind, lam=float(lam), d0=float(d0))
                if s.saturation_arg < 4.0:
                    continue
                exact = bound_general(s).total_nats
                worst = max(worst, abs(bound_general_approx(s).total_nats - exact) / exact)
                checked += 1
    flat = max(abs(integral_xlogx(u) - integral_xlogx(4.0)) for u in np.linspace(4.0, 60.0, 200))
    record_property("points", checked)
    record_property("max_rel_error", f"{worst:.2e}")
    record_property("integral_spread", f"{flat:.2e}")
    assert checked > 0
    assert worst <= 1e-3
    assert flat <= 1e-6
    assert abs(integral_xlogx(math.inf) + EULER_GAMMA / 4) <= 1e-12


@pytest.mark.criterion(6, "decoupled -> SC-only: gap decreasing for d0 >= 500, < 1e-3 once arg >= 6")
def test_c06_convergence(record_property):
    link = LinkBudget()
    sc = bound_sc_only(LAMBDA_REF, link.gamma, link.beta, rho(1))
    d0s = np.linspace(500.0, 2000.0, 301)
    gaps = np.array([abs(bound_general(make("decoupled", d0=float(d))).total_nats - sc) for d in d0s])
    args = np.array([make("decoupled", d0=float(d)).saturation_arg for d in d0s])
    # rounding in the ~4.56-nat totals is ~1e-15; allow a few ulps once the gap reaches it
    ulps = 8 * np.finfo(float).eps * sc
    rises = np.diff(gaps)
    record_property("max_rise", f"{rises.max():.1e}")
    record_property("max_gap_arg_ge_6", f"{gaps[args >= 6].max():.1e}")
    assert np.all(rises <= ulps)
    assert gaps[0] > 1e-3
    assert np.all(gaps[args >= 6] < 1e-3)


@pytest.mark.criterion(7, "policy dominance: CRN per-realization (1e6) and analytic bounds grid-wide")
def test_c07_policy_dominance(record_property):
    cfg = McConfig(n_samples=1_000_000, seed=SEED)
    dec, _ = simulate_rates(make("decoupled"), cfg)
    cpl, _ = simulate_rates(make("coupled"), cfg)
    share = float(np.mean(dec >= cpl))
    record_property("crn_share", share)
    inversions = []
    for d0 in GRID_D0:
        for lam in GRID_LAMBDA:
            d = bound_general(make("decoupled", lam=lam, d0=d0)).total_nats
            c = bound_general(make("coupled", lam=lam, d0=d0)).total_nats
            if d < c:
                inversions.append((round(d0, 1), f"{lam:.2e}", round(c - d, 4)))
    record_property("analytic_inversions", f"{len(inversions)}/64")
    if inversions:
        record_property("first_inversion", inversions[0])
    assert share == 1.0
    assert inversions == []


@pytest.mark.criterion(8, "samplers: KS < 0.002 at 1e6; fading E[g]=n, exp(E log g)=rho(n)")
def test_c08_distributions(record_property):
    rng = np.random.Generator(np.random.Philox(SEED))
    u = 1.0 - rng.random(1_000_000)
    d = sample_nearest_sc_distance(LAMBDA_REF, u)
    ks = stats.kstest(d, lambda x: -np.expm1(-LAMBDA_REF * np.pi * x * x)).statistic
    record_property("ks", f"{ks:.5f}")
    assert ks < 0.002
    for n in (1, 2, 4):
        g = sample_fading_gain(n, rng, size=1_000_000)
        se = g.std(ddof=1) / 1000.0
        logs = np.log(g)
        log_se = logs.std(ddof=1) / 1000.0
        assert abs(g.mean() - n) < 3 * se
        geo = math.exp(logs.mean())
        # delta-method standard error of exp(mean log g)
        assert abs(geo - rho(n)) < 3 * geo * log_se


@pytest.mark.criterion(9, "planner: closed-form SC-only inversion (20 targets), round trip all policies")
def test_c09_planner(record_property):
    link = LinkBudget()
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for target in rng.uniform(0.1, 10.0, 20):
        oracle = ((math.expm1(target) / (link.gamma * rho(1) * math.exp(2 * EULER_GAMMA))) ** 0.5) / math.pi
        got = plan_min_density(PlanRequest(float(target), 250.0, AssociationPolicy("sc"), link))
        worst = max(worst, abs(got.lambda_min / oracle - 1))
    record_property("max_rel_error_sc", f"{worst:.2e}")
    assert worst <= 1e-6
    for kind in ("sc", "decoupled", "coupled"):
        for lam_star in (3e-7, 4e-6, 5e-5):
            target = bound_general(make(kind, lam=lam_star, d0=600.0)).total_nats
            req = PlanRequest(target, 600.0, AssociationPolicy(kind), link, lambda_bracket=(1e-7, 1e-3))
            got = plan_min_density(req)
            assert got.achieved_bound.total_nats >= target
            assert got.lambda_min == pytest.approx(lam_star, rel=req.tolerance)


def _cli(argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(argv, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.criterion(10, "determinism: every subcommand byte-identical on rerun and across workers")
def test_c10_determinism(tmp_path, record_property):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"axis": "lambda", "range": [1e-6, 1e-4], "points": 4,
                                "spacing": "log", "d0_m": 400.0, "n_samples": 40000, "seed": 7}))
    commands = [
        ["bound", "--policy", "coupled", "--d0", "300", "--lambda", "2e-5"],
        ["simulate", "--policy", "decoupled", "--d0", "300", "--lambda", "2e-5",
         "--n-samples", "100000", "--seed", "11"],
        ["simulate", "--policy", "decoupled", "--d0", "300", "--lambda", "2e-5",
         "--n-samples", "30000", "--seed", "11", "--sampling-mode", "finite_ppp"],
        ["sweep", "--spec", str(spec)],
        ["plan", "--policy", "decoupled", "--d0", "700", "--target", "5"],
        ["selftest", "--n-samples", "5000"],
    ]
    for argv in commands:
        first = _cli(argv)
        assert first[0] == 0, first[2]
        assert _cli(argv) == first
        if argv[0] in ("simulate", "sweep", "selftest"):
            assert _cli(argv + ["--workers", "4"]) == first
    record_property("commands", len(commands))
