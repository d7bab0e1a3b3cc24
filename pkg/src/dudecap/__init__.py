"""Uplink ergodic-rate bounds for decoupled (DUDe) heterogeneous networks.

Closed-form lower bounds, an exact Monte Carlo simulator to validate them,
and a planner that inverts the bound into a minimum small-cell density.
"""

__version__ = "0.1.0"

from .bounds import (BoundBreakdown, bound_from_alpha, bound_general, bound_general_approx,
                     bound_macro_only, bound_sc_only, expected_log_d_given_sc, integral_xlogx,
                     prob_sc)
from .errors import (ApproximationDomainError, ConfigError, DegenerateConditioningError,
                     DudecapError, InvalidPolicyError, NonMonotoneError,
                     SamplingInconsistencyError, UnreachableTargetError)
from .experiments import SweepRow, SweepSpec, run_sweep
from .link_budget import (EULER_GAMMA, AssociationPolicy, LinkBudget, PolicyKind, Scenario,
                          alpha_for_policy, compute_gamma, dbm_to_watts, noise_power_dbm, rho,
                          watts_to_dbm)
from .montecarlo import (McConfig, McEstimate, SamplingMode, sample_fading_gain,
                         sample_nearest_sc_distance, simulate_ergodic_rate,
                         validate_sampling_modes)
from .planner import PlanRequest, PlanResult, plan_min_density, rate_to_target_units
