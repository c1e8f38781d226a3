"""Exact simulation and verification of no-input steering on ring networks."""

from ._core import (
    CorrelationTable,
    certify,
    certify_ideal,
    grid_bound,
    noisy_witness_value,
    simulate_ideal,
    simulate_noisy,
    swap_identity_errors,
    threshold,
    tsohs_bound,
    universal_score,
    witness_support,
    witness_value,
)

__all__ = [
    "CorrelationTable",
    "certify",
    "certify_ideal",
    "grid_bound",
    "noisy_witness_value",
    "simulate_ideal",
    "simulate_noisy",
    "swap_identity_errors",
    "threshold",
    "tsohs_bound",
    "universal_score",
    "witness_support",
    "witness_value",
]
