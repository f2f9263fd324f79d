"""
Brute-force simulation of the full AMDI-QKD optical circuit.

Each user side: a user pair source (a kept, c sent) and a QND pair source
(f, b). Mode c crosses half the channel, meets f on a 50:50 splitter and the
QND heralds on one H and one V photon in the c output port. In the Z basis
the kept photon a is measured at once; in the X basis it is kept until the
end. The heralded b modes of both sides then enter Charlie's
Hadamard-augmented BSM (feedforward loss folded into its detectors).
"""

import structlog

from src.core.exceptions import CapExceeded
from src.core.telemetry import get_tracer, traced_operation
from src.devices.channel_detector import (
    bsm_detector_efficiency,
    channel_transmittance,
)
from src.models.rate import ProbabilitySet
from src.models.sources import SourceRoles
from src.models.system import SystemParams
from src.oracle.fock import (
    DetectionPattern,
    FockOperator,
    apply_beam_splitter,
    apply_hadamard,
    apply_loss,
    build_pair_source,
    fock_state,
    postselect_probability,
    postselect_state,
    relabel,
    tensor,
    vacuum,
)

logger = structlog.get_logger(__name__)
tracer = get_tracer("amdiqkd.oracle.pipeline")

# Alice's side uses these labels; Bob's side is the relabelled copy
_BOB_LABELS = {"a": "a2", "b": "b2"}


def _bob_copy(state: FockOperator) -> FockOperator:
    return relabel(state, {k: v for k, v in _BOB_LABELS.items() if k in state.labels})


# =============================================================================
# Detection Patterns
# =============================================================================


def _qnd_pattern(eta_det: float, z_basis: bool) -> DetectionPattern:
    counts = {"c_H": 1, "c_V": 1, "f_H": 0, "f_V": 0}
    if z_basis:
        counts |= {"a_H": 1, "a_V": 0}
    return DetectionPattern.from_labels(counts, eta_det)


def _bsm_correct(eta: float, x: str = "b", y: str = "b2") -> DetectionPattern:
    return DetectionPattern.from_labels(
        {f"{x}_H": 1, f"{x}_V": 1, f"{y}_H": 0, f"{y}_V": 0}, eta
    )


def _bsm_non_correct(eta: float, x: str = "b", y: str = "b2") -> DetectionPattern:
    return DetectionPattern.from_labels(
        {f"{x}_H": 1, f"{x}_V": 0, f"{y}_H": 0, f"{y}_V": 1}, eta
    )


def bsm_success_patterns(x: str, y: str, efficiency: float) -> list[DetectionPattern]:
    """The four one-H-one-V detection patterns of a linear-optics BSM."""
    layouts = [
        {f"{x}_H": 1, f"{x}_V": 1, f"{y}_H": 0, f"{y}_V": 0},
        {f"{x}_H": 0, f"{x}_V": 0, f"{y}_H": 1, f"{y}_V": 1},
        {f"{x}_H": 1, f"{x}_V": 0, f"{y}_H": 0, f"{y}_V": 1},
        {f"{x}_H": 0, f"{x}_V": 1, f"{y}_H": 1, f"{y}_V": 0},
    ]
    return [DetectionPattern.from_labels(layout, efficiency) for layout in layouts]


# =============================================================================
# Circuit Stages
# =============================================================================


def apply_bsm_optics(state: FockOperator, x: str, y: str, hadamard: bool = True) -> FockOperator:
    """Charlie's splitter followed by a Hadamard on each output port."""
    state = apply_beam_splitter(state, x, y)
    if hadamard:
        state = apply_hadamard(apply_hadamard(state, x), y)
    return state


def heralded_side(
    roles: SourceRoles,
    eta_ch: float,
    eta_det: float,
    *,
    z_basis: bool,
    photon_cap: int,
    coherent_sources: bool = False,
) -> FockOperator:
    """
    Unnormalized state of one user side after a successful QND.

    Returns the operator on b (Z basis, a already measured as H) or on a, b
    (X basis).
    """
    source_cap = photon_cap // 2
    state = tensor(
        build_pair_source(roles.alice_bob, "a", "c", source_cap, coherent=coherent_sources),
        build_pair_source(roles.qnd, "f", "b", source_cap, coherent=coherent_sources),
    )
    state = apply_loss(state, "c", eta_ch)
    state = apply_beam_splitter(state, "c", "f")
    return postselect_state(state, _qnd_pattern(eta_det, z_basis))


def bsm_success_probability(
    state: FockOperator, x: str, y: str, efficiency: float, hadamard: bool = True
) -> float:
    """Total probability of the four BSM success patterns on labels x, y."""
    optics = apply_bsm_optics(state, x, y, hadamard=hadamard)
    return sum(postselect_probability(optics, p) for p in bsm_success_patterns(x, y, efficiency))


def spurious_pair_filter_probability(efficiency: float, hadamard: bool = True) -> float:
    """
    BSM success probability for two photons (one H, one V) in one input port.

    With the Hadamards this event can never herald; without them it succeeds
    with probability efficiency**2.
    """
    state = tensor(fock_state(["e"], {"e_H": 1, "e_V": 1}, photon_cap=2), vacuum(["f"]))
    return bsm_success_probability(state, "e", "f", efficiency, hadamard=hadamard)


# =============================================================================
# Full Pipeline
# =============================================================================


def oracle_pipeline(
    roles: SourceRoles,
    params: SystemParams,
    *,
    photon_cap: int | None = None,
    coherent_sources: bool = False,
) -> ProbabilitySet:
    """
    Oracle values of p_QND, p_c^Z, p_nc^Z, p_c^X and p_nc^X.

    Args:
        roles: User and QND source statistics.
        params: Channel, detector and feedforward parameters.
        photon_cap: Register bound; defaults to 4 * n_max + 2.
        coherent_sources: Use pure superposition sources instead of mixtures.

    Raises:
        CapExceeded: The sources cannot fit under photon_cap.
    """
    n_max = roles.n_max
    cap = photon_cap if photon_cap is not None else 4 * n_max + 2
    if 4 * n_max > cap:
        raise CapExceeded(f"n_max={n_max} needs photon_cap >= {4 * n_max}, got {cap}")

    eta_ch = channel_transmittance(params)
    eta_bsm = bsm_detector_efficiency(params)

    with traced_operation(
        tracer,
        "oracle_pipeline",
        {"distance_km": params.distance_km, "eta_det": params.eta_det, "n_max": n_max},
    ) as span:
        # Z basis: Gamma_b on each side, then the BSM
        gamma = heralded_side(
            roles, eta_ch, params.eta_det, z_basis=True, photon_cap=cap,
            coherent_sources=coherent_sources,
        )
        p_qnd = gamma.trace()
        z_joint = apply_bsm_optics(tensor(gamma, _bob_copy(gamma)), "b", "b2")
        p_c_z = postselect_probability(z_joint, _bsm_correct(eta_bsm))
        p_nc_z = postselect_probability(z_joint, _bsm_non_correct(eta_bsm))

        # X basis: sigma_ab on each side, BSM, then Hadamards on a and a2
        sigma = heralded_side(
            roles, eta_ch, params.eta_det, z_basis=False, photon_cap=cap,
            coherent_sources=coherent_sources,
        )
        x_joint = apply_bsm_optics(tensor(sigma, _bob_copy(sigma)), "b", "b2")
        swapped = postselect_state(x_joint, _bsm_correct(eta_bsm))
        rotated = apply_hadamard(apply_hadamard(swapped, "a"), "a2")
        p_c_x = postselect_probability(
            rotated,
            DetectionPattern.from_labels(
                {"a_H": 1, "a_V": 0, "a2_H": 0, "a2_V": 1}, params.eta_det
            ),
        )
        p_nc_x = postselect_probability(
            rotated,
            DetectionPattern.from_labels(
                {"a_H": 1, "a_V": 0, "a2_H": 1, "a2_V": 0}, params.eta_det
            ),
        )

        span.set_attribute("p_qnd", p_qnd)
        logger.debug(
            "oracle pipeline evaluated",
            distance_km=params.distance_km,
            p_qnd=p_qnd,
            p_c_z=p_c_z,
            p_c_x=p_c_x,
        )

    return ProbabilitySet(
        p_qnd=p_qnd, p_c_z=p_c_z, p_nc_z=p_nc_z, p_c_x=p_c_x, p_nc_x=p_nc_x
    )
