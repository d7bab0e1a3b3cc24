"""
Planning the minimum small-cell density
=======================================

Invert the bound: the smallest lambda whose bound reaches a target rate.
Because the bound is a lower bound, the actual ergodic rate at that density
meets the target too.
"""

# %%
import numpy as np

from dudecap import (AssociationPolicy, LinkBudget, McConfig, PlanRequest, Scenario,
                     plan_min_density, rate_to_target_units, simulate_ergodic_rate)

link = LinkBudget()

# %%
for d0 in (250.0, 500.0, 1000.0):
    for target_bits in (6.0, 8.0, 10.0):
        target = target_bits / np.log2(np.e)
        r = plan_min_density(PlanRequest(target, d0, AssociationPolicy("decoupled"), link))
        print(f"d0={d0:6.0f} m  target={target_bits:4.1f} bit/s/Hz  lambda_min={r.lambda_min:.3e} SC/m^2"
              f"  ({r.lambda_min * 1e6:.1f} SC/km^2)")

# %%
# Check the guarantee by simulation at the planned density.
r = plan_min_density(PlanRequest(6.0, 800.0, AssociationPolicy("decoupled"), link))
est = simulate_ergodic_rate(Scenario(link, AssociationPolicy("decoupled"), r.lambda_min, 800.0),
                            McConfig(n_samples=500_000, seed=4))
print(r.achieved_bound.total_nats, est.mean_nats)
print(rate_to_target_units(est.mean_nats, link.bandwidth_hz))
