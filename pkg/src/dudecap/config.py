"""Flat JSON configuration files.

One key namespace is shared by every subcommand; a key outside it is
rejected so typos never fall back silently to a default.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

from .errors import ConfigError
from .link_budget import AssociationPolicy, LinkBudget, Scenario

LINK_KEYS = ("p_ue_dbm", "p_sc_dbm", "p_mc_dbm", "bandwidth_hz", "noise_psd_dbm_hz", "l_ref_db", "beta")
SCENARIO_KEYS = LINK_KEYS + ("policy", "m_antennas", "n_antennas", "lambda_sc", "d0_m")
SWEEP_KEYS = ("axis", "range", "points", "spacing", "policies")
PLAN_KEYS = ("target_rate", "lambda_bracket", "tolerance")
MC_KEYS = ("n_samples", "seed", "sampling_mode", "ppp_window_radius_factor")
KNOWN_KEYS = frozenset(SCENARIO_KEYS + SWEEP_KEYS + PLAN_KEYS + MC_KEYS)


def check_keys(raw: dict) -> dict:
    if not isinstance(raw, dict):
        raise ConfigError("configuration must be a JSON object")
    for key in raw:
        if key not in KNOWN_KEYS:
            raise ConfigError(f"unknown configuration key {key!r}", key=key)
    return raw


def load_config(path) -> dict:
    """Read a flat JSON config file, rejecting unknown keys."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {str(path)!r}: {exc.strerror}") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON in {str(path)!r}: {exc}") from None
    return check_keys(raw)


def _number(raw, key, default=None, integer=False):
    value = raw.get(key, default)
    if value is None:
        raise ConfigError(f"missing required key {key!r}", key=key)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{key} must be a number, got {value!r}", key=key)
    if integer:
        if int(value) != value:
            raise ConfigError(f"{key} must be an integer, got {value!r}", key=key)
        return int(value)
    if not math.isfinite(value):
        raise ConfigError(f"{key} must be finite, got {value!r}", key=key)
    return float(value)


def link_from_config(raw: dict) -> LinkBudget:
    defaults = LinkBudget()
    return LinkBudget(**{k: _number(raw, k, getattr(defaults, k)) for k in LINK_KEYS})


def policy_from_config(raw: dict, kind=None) -> AssociationPolicy:
    return AssociationPolicy(
        kind if kind is not None else raw.get("policy", "decoupled"),
        m_antennas=_number(raw, "m_antennas", 1, integer=True),
        n_antennas=_number(raw, "n_antennas", 1, integer=True),
    )


def scenario_from_config(raw: dict, kind=None) -> Scenario:
    policy = policy_from_config(raw, kind)
    lam = _number(raw, "lambda_sc", 0.0 if policy.name == "macro" else None)
    d0 = _number(raw, "d0_m", 0.0 if policy.name == "sc" else None)
    return Scenario(link_from_config(raw), policy, lam, d0)


def mc_from_config(raw: dict, workers: int = 1):
    from .montecarlo import McConfig

    kwargs = {"workers": workers}
    if "n_samples" in raw:
        kwargs["n_samples"] = _number(raw, "n_samples", integer=True)
    if "seed" in raw:
        kwargs["seed"] = _number(raw, "seed", integer=True)
    if "sampling_mode" in raw:
        kwargs["sampling_mode"] = raw["sampling_mode"]
    if "ppp_window_radius_factor" in raw:
        kwargs["ppp_window_radius_factor"] = _number(raw, "ppp_window_radius_factor")
    return McConfig(**kwargs)
