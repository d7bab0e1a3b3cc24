"""Reduced-size invariant suite behind the ``selftest`` subcommand."""

from __future__ import annotations

import math

import numpy as np

from .bounds import (EULER_GAMMA, bound_from_alpha, bound_general, bound_general_approx,
                     bound_macro_only, bound_sc_only, integral_xlogx)
from .link_budget import AssociationPolicy, LinkBudget, Scenario, rho
from .montecarlo import McConfig, simulate_ergodic_rate, simulate_rates
from .planner import PlanRequest, plan_min_density

POLICIES = ("macro", "sc", "decoupled", "coupled")


def _check(name, passed, **detail):
    return {"name": name, "passed": bool(passed), **detail}


def run_selftest(n_samples: int = 20_000, seed: int = 0, workers: int = 1) -> dict:
    link = LinkBudget()
    checks = []

    coupled = Scenario(link, AssociationPolicy("coupled"), 6.25e-6, 250.0)
    checks.append(_check("link_budget", abs(link.noise_power_dbm + 104.0) <= 0.01
                         and abs(coupled.alpha - 0.01 ** 0.25) < 1e-12,
                         noise_power_dbm=link.noise_power_dbm, coupled_alpha=coupled.alpha))

    d0s = (50.0, 500.0, 2000.0)
    lams = (1e-7, 3e-6, 1e-4)
    worst_decomp = 0.0
    violations = []
    for kind in POLICIES:
        for d0 in d0s:
            for lam in lams:
                s = Scenario(link, AssociationPolicy(kind), lam, d0)
                b = bound_general(s)
                worst_decomp = max(worst_decomp, abs(b.total_nats - (b.p_mc * b.macro_term_nats
                                                                     + b.p_sc * b.sc_term_nats)))
                est = simulate_ergodic_rate(s, McConfig(n_samples=n_samples, seed=seed, workers=workers))
                if b.total_nats > est.mean_nats + 3.0 * est.stderr_nats:
                    violations.append([kind, d0, lam, b.total_nats, est.mean_nats, est.stderr_nats])
    checks.append(_check("decomposition", worst_decomp <= 1e-12, max_abs_error=worst_decomp))
    checks.append(_check("bound_validity", not violations, violations=violations))

    g, r1 = link.gamma, rho(1)
    at_zero = bound_from_alpha(0.0, 6.25e-6, 250.0, g, link.beta, r1, r1).total_nats
    at_big = bound_from_alpha(1e6, 6.25e-6, 250.0, g, link.beta, r1, r1).total_nats
    sc_only = bound_sc_only(6.25e-6, g, link.beta, r1)
    checks.append(_check("degenerate_collapse",
                         at_zero == bound_macro_only(250.0, g, link.beta, r1)
                         and abs(at_big - sc_only) <= 1e-9 * sc_only))

    sat = max(abs(integral_xlogx(u) + EULER_GAMMA / 4) for u in (4.0, 5.0, 8.0, 50.0))
    s = Scenario(link, AssociationPolicy("decoupled"), 1e-4, 500.0)
    exact, approx = bound_general(s).total_nats, bound_general_approx(s).total_nats
    checks.append(_check("saturation", sat <= 1e-6 and abs(approx - exact) <= 1e-3 * exact,
                         max_integral_gap=sat))

    lam = 6.25e-6
    dec = simulate_rates(Scenario(link, AssociationPolicy("decoupled"), lam, 250.0),
                         McConfig(n_samples=n_samples, seed=seed, workers=workers))[0]
    cpl = simulate_rates(Scenario(link, AssociationPolicy("coupled"), lam, 250.0),
                         McConfig(n_samples=n_samples, seed=seed, workers=workers))[0]
    checks.append(_check("policy_dominance", bool(np.all(dec >= cpl))))

    target = 5.0
    oracle = ((math.expm1(target) / (g * r1 * math.exp(2 * EULER_GAMMA))) ** 0.5) / math.pi
    plan = plan_min_density(PlanRequest(target, 250.0, AssociationPolicy("sc"), link))
    checks.append(_check("planner_oracle", abs(plan.lambda_min / oracle - 1) <= 1e-6,
                         lambda_min=plan.lambda_min, closed_form=oracle))

    return {"passed": all(c["passed"] for c in checks), "n_samples": n_samples, "seed": seed,
            "checks": checks}
