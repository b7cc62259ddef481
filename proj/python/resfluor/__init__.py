"""Entanglement witnesses for resonance fluorescence from independent two-level atoms."""

import json

from ._core import (
    AtomicSteadyState,
    AtomParameters,
    ResfluorError,
    chain_minor,
    coherence_ratio,
    entanglement_rabi_bound,
    equilibrium_positions,
    max_scale,
    oracle_chain_minor,
    position_uncertainty,
    rabi_for_ratio,
    resolved_config,
    run_experiment,
    scan_angle,
    state_for_ratio,
    steady_state,
)


def run(kind, config="", seed=None, workers=1):
    """Run an experiment and return its JSON document as a dict."""
    return json.loads(run_experiment(kind, config, seed, workers, "json"))


__all__ = [
    "AtomParameters",
    "AtomicSteadyState",
    "ResfluorError",
    "chain_minor",
    "coherence_ratio",
    "entanglement_rabi_bound",
    "equilibrium_positions",
    "max_scale",
    "oracle_chain_minor",
    "position_uncertainty",
    "rabi_for_ratio",
    "resolved_config",
    "run",
    "run_experiment",
    "scan_angle",
    "state_for_ratio",
    "steady_state",
]
