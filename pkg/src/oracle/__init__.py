"""
Brute-force Fock-space oracle for the AMDI-QKD circuit.

Usage:
    from src.oracle import oracle_pipeline

    probs = oracle_pipeline(roles, params)
"""

from src.oracle.fock import (
    DetectionPattern,
    FockOperator,
    ModeIndex,
    apply_beam_splitter,
    apply_hadamard,
    apply_linear_optics,
    apply_loss,
    build_pair_source,
    fock_state,
    modes_for,
    partial_trace,
    postselect_probability,
    postselect_state,
    pure_state,
    relabel,
    tensor,
    vacuum,
)
from src.oracle.pipeline import (
    apply_bsm_optics,
    bsm_success_patterns,
    bsm_success_probability,
    heralded_side,
    oracle_pipeline,
    spurious_pair_filter_probability,
)

__all__ = [
    # Register and states
    "ModeIndex",
    "modes_for",
    "FockOperator",
    "DetectionPattern",
    "pure_state",
    "fock_state",
    "vacuum",
    "build_pair_source",
    "tensor",
    "partial_trace",
    "relabel",
    # Devices
    "apply_linear_optics",
    "apply_beam_splitter",
    "apply_hadamard",
    "apply_loss",
    "postselect_state",
    "postselect_probability",
    # Circuit
    "apply_bsm_optics",
    "bsm_success_patterns",
    "bsm_success_probability",
    "heralded_side",
    "oracle_pipeline",
    "spurious_pair_filter_probability",
]
