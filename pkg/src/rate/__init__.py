"""Secret key rate, repeaterless-bound comparisons and the Q^max search."""

from src.rate.engine import (
    beats_bound,
    binary_entropy,
    default_distance_grid,
    necessary_condition_holds,
    necessary_q2_max,
    pdc_condition_check,
    plob_bound,
    rate_from_probabilities,
    secret_key_rate,
)
from src.rate.qmax import q_max_ratio, q_max_search

__all__ = [
    "binary_entropy",
    "rate_from_probabilities",
    "secret_key_rate",
    "plob_bound",
    "necessary_q2_max",
    "necessary_condition_holds",
    "pdc_condition_check",
    "default_distance_grid",
    "beats_bound",
    "q_max_search",
    "q_max_ratio",
]
