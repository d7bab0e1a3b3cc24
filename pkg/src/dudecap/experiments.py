"""Bound/simulation sweeps over d0 or lambda, with CSV output."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .bounds import SATURATION_THRESHOLD, bound_general, bound_general_approx
from .config import _number, link_from_config, mc_from_config
from .errors import ConfigError
from .link_budget import AssociationPolicy, LinkBudget, PolicyKind, Scenario
from .montecarlo import McConfig, simulate_ergodic_rate

ALL_POLICIES = ("macro", "sc", "decoupled", "coupled")
CSV_COLUMNS = ("d0_m", "lambda_sc", "policy", "alpha", "bound_nats", "approx_bound_nats",
               "mc_mean_nats", "mc_stderr_nats", "p_sc_analytic", "p_sc_empirical",
               "n_samples", "seed")


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    range: tuple
    points: int
    link: LinkBudget = LinkBudget()
    spacing: str = "linear"
    policies: tuple = ALL_POLICIES
    m_antennas: int = 1
    n_antennas: int = 1
    lambda_sc: float | None = None
    d0_m: float | None = None
    mc: McConfig | None = None

    def __post_init__(self):
        if self.axis not in ("d0", "lambda"):
            raise ConfigError(f"axis must be 'd0' or 'lambda', got {self.axis!r}", key="axis")
        if self.spacing not in ("linear", "log"):
            raise ConfigError(f"spacing must be 'linear' or 'log', got {self.spacing!r}", key="spacing")
        try:
            lo, hi = (float(x) for x in self.range)
        except (TypeError, ValueError):
            raise ConfigError(f"range must be [min, max], got {self.range!r}", key="range") from None
        object.__setattr__(self, "range", (lo, hi))
        if not lo < hi:
            raise ConfigError(f"range requires min < max, got {self.range}", key="range")
        if self.spacing == "log" and not lo > 0:
            raise ConfigError("log spacing requires min > 0", key="range")
        if isinstance(self.points, bool) or not isinstance(self.points, int) or self.points < 2:
            raise ConfigError(f"points must be an integer >= 2, got {self.points!r}", key="points")
        if not self.policies:
            raise ConfigError("policies must be non-empty", key="policies")
        object.__setattr__(self, "policies", tuple(AssociationPolicy(p).name for p in self.policies))
        fixed = "lambda_sc" if self.axis == "d0" else "d0_m"
        if getattr(self, fixed) is None:
            raise ConfigError(f"a sweep over {self.axis} needs a fixed {fixed}", key=fixed)

    def grid(self):
        lo, hi = self.range
        if self.spacing == "log":
            return np.geomspace(lo, hi, self.points)
        return np.linspace(lo, hi, self.points)


@dataclass(frozen=True)
class SweepRow:
    d0_m: float
    lambda_sc: float
    policy: str
    alpha: float
    bound_nats: float
    approx_bound_nats: float | None
    mc_mean_nats: float | None
    mc_stderr_nats: float | None
    p_sc_analytic: float
    p_sc_empirical: float | None
    n_samples: int | None
    seed: int | None

    @property
    def bound_valid(self) -> bool:
        if self.mc_mean_nats is None:
            return True
        return self.bound_nats <= self.mc_mean_nats + 3.0 * self.mc_stderr_nats


def sweep_from_config(raw: dict, workers: int = 1) -> SweepSpec:
    for key in ("axis", "range", "points"):
        if key not in raw:
            raise ConfigError(f"missing required key {key!r}", key=key)
    mc = mc_from_config(raw, workers) if "n_samples" in raw else None
    return SweepSpec(
        axis=raw["axis"],
        range=raw["range"],
        points=_number(raw, "points", integer=True),
        link=link_from_config(raw),
        spacing=raw.get("spacing", "linear"),
        policies=tuple(raw.get("policies", ALL_POLICIES)),
        m_antennas=_number(raw, "m_antennas", 1, integer=True),
        n_antennas=_number(raw, "n_antennas", 1, integer=True),
        lambda_sc=_number(raw, "lambda_sc") if "lambda_sc" in raw else None,
        d0_m=_number(raw, "d0_m") if "d0_m" in raw else None,
        mc=mc,
    )


def sweep_row(scenario: Scenario, mc: McConfig | None = None) -> SweepRow:
    breakdown = bound_general(scenario)
    approx = None
    if scenario.saturation_arg >= SATURATION_THRESHOLD:
        approx = bound_general_approx(scenario).total_nats
    est = simulate_ergodic_rate(scenario, mc) if mc is not None else None
    return SweepRow(
        d0_m=scenario.d0_m,
        lambda_sc=scenario.lambda_sc,
        policy=scenario.policy.name,
        alpha=scenario.alpha,
        bound_nats=breakdown.total_nats,
        approx_bound_nats=approx,
        mc_mean_nats=est.mean_nats if est else None,
        mc_stderr_nats=est.stderr_nats if est else None,
        p_sc_analytic=breakdown.p_sc,
        p_sc_empirical=est.p_sc_empirical if est else None,
        n_samples=est.n_samples if est else None,
        seed=est.seed if est else None,
    )


def run_sweep(spec: SweepSpec) -> list[SweepRow]:
    """One row per (grid value, policy), ordered by grid value then policy order.

    Every row of a grid point reuses the same seed, so policies are compared
    on common random numbers.
    """
    rows = []
    for value in spec.grid():
        value = float(value)
        lam = value if spec.axis == "lambda" else spec.lambda_sc
        d0 = value if spec.axis == "d0" else spec.d0_m
        for name in spec.policies:
            policy = AssociationPolicy(name, spec.m_antennas, spec.n_antennas)
            # macro-only ignores lambda and sc-only ignores d0, but both are kept in the row
            scenario = Scenario(spec.link, policy, lam, d0)
            rows.append(sweep_row(scenario, spec.mc))
    return rows


def format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return format(value, ".17g")
    return str(value)


def write_csv(rows, stream) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([format_value(getattr(row, c)) for c in CSV_COLUMNS])


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    write_csv(rows, buf)
    return buf.getvalue()


def read_csv(text: str) -> list[dict]:
    """Parse sweep CSV back to dicts with floats (empty fields become None)."""
    out = []
    for rec in csv.DictReader(io.StringIO(text)):
        parsed = {}
        for key, raw in rec.items():
            if key == "policy":
                parsed[key] = raw
            elif raw == "":
                parsed[key] = None
            elif key in ("n_samples", "seed"):
                parsed[key] = int(raw)
            else:
                parsed[key] = float(raw)
        out.append(parsed)
    return out

