"""Radio link budget, unit conversions and association policies.

User-facing quantities are expressed in dB/dBm; everything downstream works
with the linear values derived here once, at construction time.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .errors import ConfigError

EULER_GAMMA = 0.57721566490153286060651209008240243


def dbm_to_watts(x: float) -> float:
    if not math.isfinite(x):
        raise ValueError(f"power must be finite, got {x!r}")
    return 10.0 ** ((x - 30.0) / 10.0)


def watts_to_dbm(w: float) -> float:
    if not (w > 0 and math.isfinite(w)):
        raise ValueError(f"power must be positive and finite, got {w!r}")
    return 10.0 * math.log10(w) + 30.0


def db_to_linear(x: float) -> float:
    if not math.isfinite(x):
        raise ValueError(f"dB value must be finite, got {x!r}")
    return 10.0 ** (x / 10.0)


def linear_to_db(x: float) -> float:
    if not (x > 0 and math.isfinite(x)):
        raise ValueError(f"linear value must be positive and finite, got {x!r}")
    return 10.0 * math.log10(x)


def rho(n: int) -> float:
    """exp(E[log ||h||^2]) for ``n`` i.i.d. unit-variance Rayleigh branches.

    Equals ``exp(-psi + H_{n-1})`` where ``H`` is the harmonic number.
    """
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ValueError(f"antenna count must be an integer >= 1, got {n!r}")
    n = int(n)
    return math.exp(-EULER_GAMMA + math.fsum(1.0 / j for j in range(1, n)))


@dataclass(frozen=True)
class LinkBudget:
    """Link budget in the dB domain (defaults: the reference macro/small-cell deployment)."""

    p_ue_dbm: float = 33.0
    p_sc_dbm: float = 33.0
    p_mc_dbm: float = 53.0
    bandwidth_hz: float = 10e6
    noise_psd_dbm_hz: float = -174.0
    l_ref_db: float = 25.6
    beta: float = 4.0

    def __post_init__(self):
        for name in ("p_ue_dbm", "p_sc_dbm", "p_mc_dbm", "bandwidth_hz",
                     "noise_psd_dbm_hz", "l_ref_db", "beta"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigError(f"{name} must be a number, got {value!r}", key=name)
            if not math.isfinite(value):
                raise ConfigError(f"{name} must be finite, got {value!r}", key=name)
        if self.bandwidth_hz <= 0:
            raise ConfigError(f"bandwidth_hz must be > 0, got {self.bandwidth_hz}", key="bandwidth_hz")
        if self.beta <= 2:
            raise ConfigError(f"beta must be > 2, got {self.beta}", key="beta")

    @property
    def noise_power_dbm(self) -> float:
        return noise_power_dbm(self)

    @property
    def gamma(self) -> float:
        return compute_gamma(self)


def noise_power_dbm(link: LinkBudget) -> float:
    """Thermal noise power over the system bandwidth, in dBm."""
    return link.noise_psd_dbm_hz + 10.0 * math.log10(link.bandwidth_hz)


def compute_gamma(link: LinkBudget) -> float:
    """Linear SNR at the 1 m reference distance, P_UE / (sigma^2 L_ref)."""
    return 10.0 ** ((link.p_ue_dbm - noise_power_dbm(link) - link.l_ref_db) / 10.0)


class PolicyKind(enum.Enum):
    MACRO_ONLY = "macro"
    SMALL_CELL_ONLY = "sc"
    DECOUPLED = "decoupled"
    COUPLED = "coupled"

    @classmethod
    def parse(cls, value) -> "PolicyKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            choices = ", ".join(k.value for k in cls)
            raise ConfigError(f"unknown policy {value!r} (expected one of {choices})",
                              key="policy") from None


@dataclass(frozen=True)
class AssociationPolicy:
    kind: PolicyKind
    m_antennas: int = 1
    n_antennas: int = 1

    def __post_init__(self):
        object.__setattr__(self, "kind", PolicyKind.parse(self.kind))
        for name in ("m_antennas", "n_antennas"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise ConfigError(f"{name} must be an integer >= 1, got {value!r}", key=name)

    @property
    def name(self) -> str:
        return self.kind.value


def alpha_for_policy(policy: AssociationPolicy, link: LinkBudget) -> float:
    """Decision factor: the UE picks the nearest SC iff d <= alpha * d0.

    Returns 0 for macro-only and ``math.inf`` for small-cell-only.
    """
    kind = policy.kind
    if kind is PolicyKind.MACRO_ONLY:
        return 0.0
    if kind is PolicyKind.SMALL_CELL_ONLY:
        return math.inf
    rho_m = rho(policy.m_antennas)
    rho_n = rho(policy.n_antennas)
    if kind is PolicyKind.DECOUPLED:
        return (rho_n / rho_m) ** (1.0 / link.beta)
    # downlink received-rate criterion; powers in watts
    ratio = (policy.m_antennas * rho_n * dbm_to_watts(link.p_sc_dbm)) / (
        policy.n_antennas * rho_m * dbm_to_watts(link.p_mc_dbm))
    return ratio ** (1.0 / link.beta)


@dataclass(frozen=True)
class Scenario:
    """Everything a bound or a simulation needs.

    ``gamma``, ``alpha``, ``rho_m`` and ``rho_n`` are derived once here.
    """

    link: LinkBudget
    policy: AssociationPolicy
    lambda_sc: float
    d0_m: float
    gamma: float = field(init=False, repr=False)
    alpha: float = field(init=False, repr=False)
    rho_m: float = field(init=False, repr=False)
    rho_n: float = field(init=False, repr=False)

    def __post_init__(self):
        kind = self.policy.kind
        for name in ("lambda_sc", "d0_m"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)) or math.isnan(value):
                raise ConfigError(f"{name} must be a number, got {value!r}", key=name)
            if value < 0 or math.isinf(value):
                raise ConfigError(f"{name} must be finite and >= 0, got {value!r}", key=name)
        if kind is not PolicyKind.MACRO_ONLY and not self.lambda_sc > 0:
            raise ConfigError("lambda_sc must be > 0 unless the policy is macro-only", key="lambda_sc")
        if kind is not PolicyKind.SMALL_CELL_ONLY and not self.d0_m > 0:
            raise ConfigError("d0_m must be > 0 unless the policy is small-cell-only", key="d0_m")
        object.__setattr__(self, "gamma", compute_gamma(self.link))
        object.__setattr__(self, "alpha", alpha_for_policy(self.policy, self.link))
        object.__setattr__(self, "rho_m", rho(self.policy.m_antennas))
        object.__setattr__(self, "rho_n", rho(self.policy.n_antennas))

    @property
    def beta(self) -> float:
        return self.link.beta

    @property
    def saturation_arg(self) -> float:
        """alpha * d0 * sqrt(lambda * pi), the upper limit of the x log x integral."""
        if self.alpha == 0.0:
            return 0.0
        if math.isinf(self.alpha):
            return math.inf
        return self.alpha * self.d0_m * math.sqrt(self.lambda_sc * math.pi)

    def replace(self, **changes) -> "Scenario":
        kwargs = {"link": self.link, "policy": self.policy,
                  "lambda_sc": self.lambda_sc, "d0_m": self.d0_m}
        kwargs.update(changes)
        return Scenario(**kwargs)
