"""Source statistics, channel transmittances and detector POVM weights."""

from src.devices.channel_detector import (
    attenuation_length_from_loss,
    bsm_detector_efficiency,
    channel_transmittance,
    feedforward_transmittance,
    pnr_weight,
    sum_context,
)
from src.devices.sources import (
    make_statistics,
    pdc_statistics,
    perfect_source,
    statistics_from_ratios,
    tail_mass,
    vacuum_source,
)

__all__ = [
    # Sources
    "make_statistics",
    "pdc_statistics",
    "tail_mass",
    "statistics_from_ratios",
    "perfect_source",
    "vacuum_source",
    # Channel and detectors
    "channel_transmittance",
    "feedforward_transmittance",
    "bsm_detector_efficiency",
    "attenuation_length_from_loss",
    "pnr_weight",
    "sum_context",
]
