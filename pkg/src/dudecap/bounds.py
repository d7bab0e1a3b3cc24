"""Closed-form lower bounds on the ergodic uplink rate.

All rates are in nats per channel use. The general bound splits the
expectation into the macro branch (weight P(MC)) and the nearest-small-cell
branch (weight P(SC)); the degenerate policies alpha = 0 and alpha = inf are
dispatched before any arithmetic so 0*inf never appears.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy import integrate

from .errors import ApproximationDomainError, DegenerateConditioningError
from .link_budget import EULER_GAMMA, Scenario, rho

__all__ = [
    "EULER_GAMMA",
    "SATURATION_THRESHOLD",
    "BoundBreakdown",
    "rho",
    "integral_xlogx",
    "bound_macro_only",
    "bound_sc_only",
    "prob_sc",
    "expected_log_d_given_sc",
    "bound_from_alpha",
    "bound_general",
    "bound_general_approx",
]

# Beyond this upper limit the integral of x log(x) exp(-x^2) is flat.
SATURATION_THRESHOLD = 4.0
# exp(-x^2) underflows well before this; the tail past it is < 1e-60.
_INTEGRAND_CUTOFF = 12.0
_INTEGRAL_AT_INF = -EULER_GAMMA / 4.0


@dataclass(frozen=True)
class BoundBreakdown:
    total_nats: float
    p_sc: float
    p_mc: float
    macro_term_nats: float
    sc_term_nats: float
    used_approximation: bool = False

    def to_dict(self) -> dict:
        return asdict(self)


def _xlogx_gauss(x):
    if x == 0.0:
        return 0.0
    return x * math.log(x) * math.exp(-x * x)


def integral_xlogx(upper: float) -> float:
    """Integral of x*log(x)*exp(-x^2) over [0, upper].

    The integrand has a removable singularity at 0 (value 0). Adaptive
    Gauss-Kronrod quadrature (QUADPACK) with a 1e-14 absolute target;
    ``upper = inf`` returns -psi/4 exactly.
    """
    upper = float(upper)
    if math.isnan(upper) or upper < 0:
        raise ValueError(f"upper limit must be >= 0, got {upper!r}")
    if upper == 0.0:
        return 0.0
    if math.isinf(upper):
        return _INTEGRAL_AT_INF
    b = min(upper, _INTEGRAND_CUTOFF)
    # split at the integrand's sign change (x = 1) so each panel is smooth and one-signed
    pieces = [(0.0, min(b, 1.0))]
    if b > 1.0:
        pieces.append((1.0, b))
    total = 0.0
    for lo, hi in pieces:
        value, _ = integrate.quad(_xlogx_gauss, lo, hi, epsabs=1e-15, epsrel=1e-13, limit=200)
        total += value
    return total


def _log1p_exp(log_x: float) -> float:
    # log(1 + exp(log_x)) without overflow
    return float(np.logaddexp(0.0, log_x))


def bound_macro_only(d0: float, gamma: float, beta: float, rho_m: float) -> float:
    """log(1 + gamma * d0^-beta * rho(M))."""
    return math.log1p(gamma * d0 ** (-beta) * rho_m)


def bound_sc_only(lam: float, gamma: float, beta: float, rho_n: float) -> float:
    """log(1 + gamma * (lam*pi)^(beta/2) * rho(N) * exp(beta*psi/2))."""
    if gamma == 0.0:
        return 0.0
    log_arg = (math.log(gamma) + 0.5 * beta * math.log(lam * math.pi)
               + math.log(rho_n) + 0.5 * beta * EULER_GAMMA)
    return _log1p_exp(log_arg)


def _exponent(lam, alpha, d0):
    return lam * math.pi * alpha * alpha * d0 * d0


def prob_sc(lam: float, alpha: float, d0: float) -> float:
    """P(d <= alpha*d0) for the nearest point of a PPP of density ``lam``."""
    if alpha < 0 or lam < 0:
        raise ValueError("alpha and lambda must be non-negative")
    if alpha == 0.0 or lam == 0.0:
        return 0.0
    if math.isinf(alpha):
        return 1.0
    return -math.expm1(-_exponent(lam, alpha, d0))


def expected_log_d_given_sc(lam: float, alpha: float, d0: float) -> float:
    """E[log d | d <= alpha*d0] for the nearest-SC distance (log-meters)."""
    p = prob_sc(lam, alpha, d0)
    if p == 0.0:
        raise DegenerateConditioningError(
            "P(SC) = 0: the small-cell branch is never selected, use the macro-only bound")
    half_log = 0.5 * math.log(math.pi * lam)
    if math.isinf(alpha):
        return -EULER_GAMMA / 2.0 - half_log
    upper = alpha * d0 * math.sqrt(lam * math.pi)
    return 2.0 * integral_xlogx(upper) / p - half_log


def bound_from_alpha(alpha: float, lam: float, d0: float, gamma: float, beta: float,
                     rho_m: float, rho_n: float, approximate: bool = False) -> BoundBreakdown:
    """General bound for an explicit decision factor ``alpha``.

    ``approximate=True`` replaces the truncated-distance integral by its
    saturated value -psi/4, which requires alpha*d0*sqrt(lam*pi) >= 4.
    """
    if alpha < 0 or math.isnan(alpha):
        raise ValueError(f"alpha must be >= 0, got {alpha!r}")

    if math.isinf(alpha):
        upper = math.inf
    elif alpha == 0.0 or lam == 0.0:
        upper = 0.0
    else:
        upper = alpha * d0 * math.sqrt(lam * math.pi)
    if approximate and not upper >= SATURATION_THRESHOLD:
        raise ApproximationDomainError(
            f"saturated-integral approximation needs alpha*d0*sqrt(lambda*pi) >= "
            f"{SATURATION_THRESHOLD:g}, got {upper:.6g}", saturation_arg=upper)

    macro = bound_macro_only(d0, gamma, beta, rho_m) if d0 > 0 else 0.0

    p_sc = prob_sc(lam, alpha, d0)
    if p_sc == 0.0:
        return BoundBreakdown(macro, 0.0, 1.0, macro, 0.0, approximate)
    if math.isinf(alpha):
        sc = bound_sc_only(lam, gamma, beta, rho_n)
        return BoundBreakdown(sc, 1.0, 0.0, macro, sc, approximate)

    p_mc = math.exp(-_exponent(lam, alpha, d0))
    if approximate:
        distance_exp = 0.5 * beta * EULER_GAMMA / p_sc
    else:
        distance_exp = -2.0 * beta * integral_xlogx(upper) / p_sc
    if gamma == 0.0:
        sc = 0.0
    else:
        log_arg = (math.log(gamma) + 0.5 * beta * math.log(lam * math.pi)
                   + math.log(rho_n) + distance_exp)
        sc = _log1p_exp(log_arg)
    total = p_mc * macro + p_sc * sc
    return BoundBreakdown(total, p_sc, p_mc, macro, sc, approximate)


def bound_general(scenario: Scenario) -> BoundBreakdown:
    """Lower bound on the ergodic uplink rate for any association policy."""
    s = scenario
    return bound_from_alpha(s.alpha, s.lambda_sc, s.d0_m, s.gamma, s.beta, s.rho_m, s.rho_n)


def bound_general_approx(scenario: Scenario) -> BoundBreakdown:
    """Like :func:`bound_general` with the integral replaced by -psi/4.

    Raises :class:`ApproximationDomainError` when alpha*d0*sqrt(lambda*pi) < 4.
    """
    s = scenario
    return bound_from_alpha(s.alpha, s.lambda_sc, s.d0_m, s.gamma, s.beta, s.rho_m, s.rho_n,
                            approximate=True)
