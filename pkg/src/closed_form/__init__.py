"""
Closed-form evaluation of the heralding, Z-basis and X-basis probabilities.

Usage:
    from src.closed_form import compute_probabilities

    probs = compute_probabilities(ctx)
    print(probs.p_qnd, probs.p_c_z)
"""

from src.closed_form.bsm import (
    BsmOutcome,
    bsm_amplitude,
    bsm_kernel,
    bsm_kernel_z,
    g_term,
    p_c_z,
    p_nc_z,
)
from src.closed_form.qnd import lambda_term, p_qnd, qnd_index_tuples, qnd_output_weights
from src.closed_form.unit_efficiency import (
    unit_efficiency_probabilities,
    unit_efficiency_probability_set,
    unit_efficiency_rate,
)
from src.closed_form.x_basis import (
    d_weight,
    f_hadamard,
    g_norm,
    lambda_qnd_x,
    p_c_x,
    p_nc_x,
    sigma_entries,
)
from src.core.telemetry import get_tracer, traced_operation
from src.models.rate import ProbabilitySet, SumContext

tracer = get_tracer("amdiqkd.closed_form")


def compute_probabilities(ctx: SumContext) -> ProbabilitySet:
    """All five probabilities at one operating point."""
    with traced_operation(
        tracer, "compute_probabilities", {"eta_ch": ctx.eta_ch, "eta_det": ctx.eta_det}
    ):
        return ProbabilitySet(
            p_qnd=float(p_qnd(ctx)),
            p_c_z=float(p_c_z(ctx)),
            p_nc_z=float(p_nc_z(ctx)),
            p_c_x=p_c_x(ctx),
            p_nc_x=p_nc_x(ctx),
        )


__all__ = [
    "compute_probabilities",
    # Heralding
    "lambda_term",
    "qnd_index_tuples",
    "qnd_output_weights",
    "p_qnd",
    # Z basis
    "BsmOutcome",
    "g_term",
    "bsm_amplitude",
    "bsm_kernel",
    "bsm_kernel_z",
    "p_c_z",
    "p_nc_z",
    # X basis
    "lambda_qnd_x",
    "sigma_entries",
    "f_hadamard",
    "g_norm",
    "d_weight",
    "p_c_x",
    "p_nc_x",
    # Unit efficiency
    "unit_efficiency_probabilities",
    "unit_efficiency_probability_set",
    "unit_efficiency_rate",
]
