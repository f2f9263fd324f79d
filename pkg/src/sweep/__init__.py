"""Configuration documents, sweeps, Q^max maps, verification runs and result writers."""

from src.sweep.config_io import build_config, emit_config, parse_config, parse_config_fields
from src.sweep.runner import (
    distance_grid,
    evaluate_qmax_cell,
    evaluate_row,
    run_qmax,
    run_sweep,
    source_roles,
)
from src.sweep.verify import (
    VERIFY_COLUMNS,
    PointReport,
    ProbabilityCheck,
    VerificationReport,
    draw_points,
    run_verify,
    verify_point,
)
from src.sweep.writers import render_csv, render_json, write_csv, write_json

__all__ = [
    # Configuration
    "parse_config_fields",
    "build_config",
    "parse_config",
    "emit_config",
    # Sweeps
    "source_roles",
    "distance_grid",
    "evaluate_row",
    "run_sweep",
    "evaluate_qmax_cell",
    "run_qmax",
    # Verification
    "ProbabilityCheck",
    "PointReport",
    "VerificationReport",
    "VERIFY_COLUMNS",
    "draw_points",
    "verify_point",
    "run_verify",
    # Output
    "render_csv",
    "render_json",
    "write_csv",
    "write_json",
]
