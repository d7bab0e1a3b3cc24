"""Minimum small-cell density meeting a rate target.

The planner certifies against the analytic lower bound, so the true ergodic
rate at the returned density also meets the target.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import BoundBreakdown, bound_general
from .errors import ConfigError, InvalidPolicyError, NonMonotoneError, UnreachableTargetError
from .link_budget import AssociationPolicy, LinkBudget, PolicyKind, Scenario

LOG2_E = math.log2(math.e)
PRESCAN_POINTS = 64
# relative slack for the pre-scan: quadrature noise must not flag a flat region
_MONOTONE_SLACK = 1e-12


def rate_to_target_units(rate_nats: float, bandwidth_hz: float) -> dict:
    """Express a rate in nats/use, bit/s/Hz and Mbit/s."""
    if rate_nats < 0:
        raise ValueError(f"rate must be >= 0, got {rate_nats!r}")
    bits = rate_nats * LOG2_E
    return {"nats": rate_nats, "bits": bits, "mbps": bits * bandwidth_hz / 1e6}


def rate_from_units(value: float, units: str, bandwidth_hz: float) -> float:
    """Inverse of :func:`rate_to_target_units` for a single unit."""
    if units == "nats":
        return value
    if units == "bits":
        return value / LOG2_E
    if units == "mbps":
        return value * 1e6 / bandwidth_hz / LOG2_E
    raise ConfigError(f"unknown units {units!r}", key="units")


@dataclass(frozen=True)
class PlanRequest:
    target_rate: float
    d0_m: float
    policy: AssociationPolicy
    link: LinkBudget
    lambda_bracket: tuple = (1e-8, 1e-2)
    tolerance: float = 1e-6

    def __post_init__(self):
        object.__setattr__(self, "lambda_bracket", tuple(float(x) for x in self.lambda_bracket))
        if len(self.lambda_bracket) != 2:
            raise ConfigError("lambda_bracket must have two entries", key="lambda_bracket")
        lo, hi = self.lambda_bracket
        if not 0 < lo < hi or math.isinf(hi):
            raise ConfigError(f"lambda_bracket must satisfy 0 < lo < hi, got {self.lambda_bracket}",
                              key="lambda_bracket")
        if not self.target_rate > 0:
            raise ConfigError(f"target_rate must be > 0, got {self.target_rate!r}", key="target_rate")
        if not 0 < self.tolerance < 0.1:
            raise ConfigError(f"tolerance must lie in (0, 0.1), got {self.tolerance!r}", key="tolerance")
        if not self.d0_m > 0 and self.policy.kind is not PolicyKind.SMALL_CELL_ONLY:
            raise ConfigError("d0_m must be > 0", key="d0_m")


@dataclass(frozen=True)
class PlanResult:
    lambda_min: float
    achieved_bound: BoundBreakdown
    monotonic_on_bracket: bool
    iterations: int

    def to_dict(self) -> dict:
        return {"lambda_min": self.lambda_min,
                "achieved_bound": self.achieved_bound.to_dict(),
                "monotonic_on_bracket": self.monotonic_on_bracket,
                "iterations": self.iterations}


def plan_min_density(request: PlanRequest, prescan_points: int = PRESCAN_POINTS) -> PlanResult:
    """Smallest density in the bracket whose bound reaches ``target_rate``.

    Bisects on log(lambda) after checking that the bound is nondecreasing on
    a logarithmic pre-scan grid.
    """
    if request.policy.kind is PolicyKind.MACRO_ONLY:
        raise InvalidPolicyError("the macro-only bound does not depend on the small-cell density")

    def bound_at(lam):
        return bound_general(Scenario(request.link, request.policy, float(lam), request.d0_m))

    lo, hi = request.lambda_bracket
    target = request.target_rate

    grid = np.geomspace(lo, hi, prescan_points)
    values = [bound_at(lam).total_nats for lam in grid]
    for i in range(len(values) - 1):
        if values[i + 1] < values[i] - _MONOTONE_SLACK * abs(values[i]):
            pair = ((float(grid[i]), values[i]), (float(grid[i + 1]), values[i + 1]))
            raise NonMonotoneError(
                f"bound decreases from {values[i]:.9g} at lambda={grid[i]:.6g} to "
                f"{values[i + 1]:.9g} at lambda={grid[i + 1]:.6g}; subdivide the bracket", pair)

    top = bound_at(hi)
    if top.total_nats < target:
        raise UnreachableTargetError(
            f"target {target:.6g} nats exceeds the bound {top.total_nats:.6g} at lambda_hi={hi:.6g}",
            bound_at_upper=top.total_nats)

    bottom = bound_at(lo)
    if bottom.total_nats >= target:
        return PlanResult(lo, bottom, True, 0)

    # invariant: bound(lo) < target <= bound(hi)
    log_lo, log_hi = math.log(lo), math.log(hi)
    stop = math.log1p(request.tolerance)
    lam_min, best = hi, top
    iterations = 0
    while log_hi - log_lo > stop:
        mid = 0.5 * (log_lo + log_hi)
        lam = math.exp(mid)
        b = bound_at(lam)
        if b.total_nats >= target:
            log_hi, lam_min, best = mid, lam, b
        else:
            log_lo = mid
        iterations += 1
    return PlanResult(lam_min, best, True, iterations)
