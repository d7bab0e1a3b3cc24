"""Monte Carlo simulator of the single-macro + PPP small-cell uplink.

Randomness is counter-based: realizations are grouped in fixed-size blocks
and block ``b`` draws from a Philox stream keyed by ``(seed, b)``. Results
therefore do not depend on how many workers evaluate the blocks.

Fading is drawn as per-antenna unit exponentials; the macro gain sums the
first M of them and the small-cell gain the first N. Each realization uses
only the serving link, so sharing the draws leaves the rate distribution
unchanged while making policy comparisons pointwise (common random numbers).
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .errors import ConfigError, SamplingInconsistencyError
from .link_budget import Scenario

BLOCK_SIZE = 1 << 14
PPP_TRUNCATION = 1e-9
_U64_MASK = (1 << 64) - 1


class SamplingMode(enum.Enum):
    INVERSE_CDF = "inverse_cdf"
    FINITE_PPP = "finite_ppp"

    @classmethod
    def parse(cls, value) -> "SamplingMode":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ConfigError(f"unknown sampling_mode {value!r}", key="sampling_mode") from None


@dataclass(frozen=True)
class McConfig:
    n_samples: int = 1_000_000
    seed: int = 0
    sampling_mode: SamplingMode = SamplingMode.INVERSE_CDF
    ppp_window_radius_factor: float = 1.0
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "sampling_mode", SamplingMode.parse(self.sampling_mode))
        if isinstance(self.n_samples, bool) or not isinstance(self.n_samples, int) or self.n_samples < 1:
            raise ConfigError(f"n_samples must be an integer >= 1, got {self.n_samples!r}",
                              key="n_samples")
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or not 0 <= self.seed <= _U64_MASK:
            raise ConfigError(f"seed must be an integer in [0, 2**64), got {self.seed!r}", key="seed")
        if not self.ppp_window_radius_factor >= 1.0:
            raise ConfigError("ppp_window_radius_factor must be >= 1 so that the empty-window "
                              f"probability stays <= {PPP_TRUNCATION:g}",
                              key="ppp_window_radius_factor")
        if isinstance(self.workers, bool) or not isinstance(self.workers, int) or self.workers < 1:
            raise ConfigError(f"workers must be an integer >= 1, got {self.workers!r}", key="workers")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["sampling_mode"] = self.sampling_mode.value
        return d


@dataclass(frozen=True)
class McEstimate:
    mean_nats: float
    stderr_nats: float
    n_samples: int
    p_sc_empirical: float
    seed: int
    mean_given_sc_nats: float | None = None
    mean_given_mc_nats: float | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def ppp_window_radius(lam: float, factor: float = 1.0) -> float:
    """Disk radius R with exp(-lam*pi*R^2) <= 1e-9 (times ``factor``)."""
    return factor * math.sqrt(-math.log(PPP_TRUNCATION) / (lam * math.pi))


def sample_nearest_sc_distance(lam, draw):
    """Inverse CDF of the nearest-point distance: sqrt(-log(u) / (lam*pi)).

    ``draw`` may be a scalar or an array of variates in the open interval (0, 1).
    """
    if not lam > 0:
        raise ValueError(f"lambda must be > 0, got {lam!r}")
    u = np.asarray(draw, dtype=float)
    if np.any(~((u > 0.0) & (u < 1.0))):
        raise ValueError("uniform draws must lie in the open interval (0, 1)")
    d = np.sqrt(-np.log(u) / (lam * math.pi))
    return float(d) if d.ndim == 0 else d


def _open_uniform(bitgen, size):
    # 52 random bits centred in their cell: every value lies strictly inside (0, 1)
    raw = bitgen.random_raw(size) >> np.uint64(12)
    return (raw.astype(np.float64) + 0.5) * 2.0 ** -52


def _block_bitgen(seed: int, block: int):
    return np.random.Philox(key=np.array([seed, block], dtype=np.uint64))


def sample_fading_gain(n: int, rng, size=None):
    """Squared norm of an n-branch unit-variance Rayleigh channel.

    Sum of ``n`` unit exponentials, each drawn as -log(U). ``rng`` is a numpy
    ``Generator`` or bit generator.
    """
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ValueError(f"antenna count must be an integer >= 1, got {n!r}")
    bitgen = getattr(rng, "bit_generator", rng)
    count = 1 if size is None else int(np.prod(size))
    u = _open_uniform(bitgen, count * int(n)).reshape(count, int(n))
    g = -np.log(u).sum(axis=1)
    return float(g[0]) if size is None else g.reshape(size)


def _nearest_distance_finite_ppp(bitgen, lam, n, radius):
    # explicit PPP realization on a disk of radius R centred on the user
    gen = np.random.Generator(bitgen)
    counts = gen.poisson(lam * math.pi * radius * radius, size=n)
    total = int(counts.sum())
    r = radius * np.sqrt(gen.random(total))
    theta = 2.0 * math.pi * gen.random(total)
    dist = np.hypot(r * np.cos(theta), r * np.sin(theta))
    out = np.full(n, np.inf)
    nonempty = counts > 0
    starts = np.concatenate(([0], np.cumsum(counts)[:-1]))
    if total:
        out[nonempty] = np.minimum.reduceat(dist, starts[nonempty])
    return out


def _block_rates(scenario: Scenario, config: McConfig, block: int, n: int):
    s = scenario
    m, k = s.policy.m_antennas, s.policy.n_antennas
    branches = max(m, k)
    bitgen = _block_bitgen(config.seed, block)
    u_dist = _open_uniform(bitgen, n)
    fading = -np.log(_open_uniform(bitgen, n * branches)).reshape(n, branches)
    g_mc = fading[:, :m].sum(axis=1)
    g_sc = fading[:, :k].sum(axis=1)

    alpha = s.alpha
    if alpha == 0.0:
        d = np.full(n, np.inf)
    elif config.sampling_mode is SamplingMode.INVERSE_CDF:
        d = np.sqrt(-np.log(u_dist) / (s.lambda_sc * math.pi))
    else:
        radius = ppp_window_radius(s.lambda_sc, config.ppp_window_radius_factor)
        d = _nearest_distance_finite_ppp(bitgen, s.lambda_sc, n, radius)

    if math.isinf(alpha):
        use_sc = np.isfinite(d)
    else:
        use_sc = d <= alpha * s.d0_m
    with np.errstate(divide="ignore"):
        snr_sc = s.gamma * g_sc * d ** (-s.beta)
    snr_mc = s.gamma * g_mc * s.d0_m ** (-s.beta) if s.d0_m > 0 else np.zeros(n)
    rates = np.log1p(np.where(use_sc, snr_sc, snr_mc))
    return rates, use_sc


def simulate_rates(scenario: Scenario, config: McConfig):
    """Per-realization rates (nats) and serving-SC indicators, in realization order."""
    n_total = config.n_samples
    blocks = [(b, min(BLOCK_SIZE, n_total - b * BLOCK_SIZE))
              for b in range(math.ceil(n_total / BLOCK_SIZE))]
    if config.workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            parts = list(pool.map(lambda bn: _block_rates(scenario, config, *bn), blocks))
    else:
        parts = [_block_rates(scenario, config, b, n) for b, n in blocks]
    rates = np.concatenate([p[0] for p in parts])
    use_sc = np.concatenate([p[1] for p in parts])
    return rates, use_sc


def estimate_from_rates(rates, use_sc, seed: int) -> McEstimate:
    n = rates.size
    mean = float(np.mean(rates))
    stderr = float(np.std(rates, ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    n_sc = int(np.count_nonzero(use_sc))
    mean_sc = float(np.mean(rates[use_sc])) if n_sc else None
    mean_mc = float(np.mean(rates[~use_sc])) if n_sc < n else None
    return McEstimate(mean, stderr, n, n_sc / n, seed, mean_sc, mean_mc)


def simulate_ergodic_rate(scenario: Scenario, config: McConfig = McConfig()) -> McEstimate:
    """Unbiased Monte Carlo estimate of the ergodic uplink rate for one scenario."""
    rates, use_sc = simulate_rates(scenario, config)
    return estimate_from_rates(rates, use_sc, config.seed)


@dataclass(frozen=True)
class SamplingComparison:
    inverse_cdf: McEstimate
    finite_ppp: McEstimate
    difference: float
    tolerance: float

    @property
    def consistent(self) -> bool:
        return abs(self.difference) <= self.tolerance


def validate_sampling_modes(scenario: Scenario, config: McConfig = McConfig()) -> SamplingComparison:
    """Cross-check the inverse-CDF sampler against an explicit PPP realization.

    Raises :class:`SamplingInconsistencyError` if the means differ by more
    than three combined standard errors.
    """
    base = {"n_samples": config.n_samples, "seed": config.seed,
            "ppp_window_radius_factor": config.ppp_window_radius_factor, "workers": config.workers}
    inv = simulate_ergodic_rate(scenario, McConfig(sampling_mode=SamplingMode.INVERSE_CDF, **base))
    ppp = simulate_ergodic_rate(scenario, McConfig(sampling_mode=SamplingMode.FINITE_PPP, **base))
    report = SamplingComparison(inv, ppp, inv.mean_nats - ppp.mean_nats,
                                3.0 * math.hypot(inv.stderr_nats, ppp.stderr_nats))
    if not report.consistent:
        raise SamplingInconsistencyError(
            f"sampling modes disagree: inverse_cdf={inv.mean_nats:.6g}, "
            f"finite_ppp={ppp.mean_nats:.6g}, |diff|={abs(report.difference):.3g} "
            f"> {report.tolerance:.3g}")
    return report
