"""
Charlie's Hadamard-augmented Bell-state measurement.

Inputs are the heralded b modes of both sides, |o, m - o> from Alice and
|O, M - O> from Bob. After the splitter I photons leave toward the first
detector pair and Omega are H-polarized behind the Hadamards; omega of them
are H at the first pair. A pattern succeeds when exactly one H and one V
photon are detected: at the first pair (correct outcome) or H at the first
and V at the second (non-correct outcome).

The Z-basis probabilities use the squared-amplitude terms G; off-diagonal
inputs (needed by the X basis) use the signed amplitude directly. Both go
through one kernel parameterized by the outcome.
"""

import math
from collections.abc import Iterator
from enum import Enum
from fractions import Fraction
from functools import lru_cache

from src.closed_form.combinatorics import (
    Number,
    accumulate,
    binom,
    factorial as f,
    ratio,
    sign,
    span,
    to_number,
)
from src.closed_form.qnd import qnd_output_weights
from src.models.rate import SumContext

AmplitudeIndices = tuple[int, int, int, int, int]


# =============================================================================
# Outcomes
# =============================================================================


class BsmOutcome(str, Enum):
    """Detection pattern class of a successful BSM."""

    CORRECT = "c"
    NON_CORRECT = "nc"

    def omega_range(self, I: int, Omega: int, total: int) -> range:
        """Admissible omega for the pattern."""
        if self is BsmOutcome.CORRECT:
            return span(max(1, Omega + I - total), min(Omega, I - 1))
        return span(max(1, 1 + Omega + I - total), min(Omega, I))

    def detector_weight(
        self, omega: int, I: int, Omega: int, total: int, eta: Number
    ) -> Number:
        """POVM factor for one H and one V click among total photons."""
        if total < 2:
            return eta * 0
        if self is BsmOutcome.CORRECT:
            clicks = omega * (I - omega)
        else:
            clicks = omega * (total + omega - I - Omega)
        return clicks * eta**2 * (1 - eta) ** (total - 2)


# =============================================================================
# Amplitude Terms
# =============================================================================


def bsm_amplitude_tuples(
    m: int, o: int, M: int, O: int, I: int, Omega: int, omega: int
) -> Iterator[AmplitudeIndices]:
    """Admissible (i, l, q, alpha, phi) for one output configuration."""
    for i in span(max(0, I + o + O - m - M), min(I, o + O)):
        for l in span(max(0, i - O), min(i, o)):
            for q in span(max(0, I + O - i - M), min(I - i, m - o)):
                for alpha in span(max(0, omega + i - I), min(omega, i)):
                    for phi in span(
                        max(0, Omega + O + I + o - omega - i - m - M),
                        min(Omega - omega, o + O - i),
                    ):
                        yield (i, l, q, alpha, phi)


def _binomial_product(
    m: int, o: int, M: int, O: int, I: int, Omega: int, omega: int, t: AmplitudeIndices
) -> int:
    i, l, q, alpha, phi = t
    return (
        binom(o, l) * binom(O, i - l) * binom(m - o, q) * binom(M - O, I - i - q)
        * binom(i, alpha) * binom(I - i, omega - alpha)
        * binom(o + O - i, phi) * binom(m + M + i - o - O - I, Omega - omega - phi)
    )


def g_term(indices: tuple[int, ...], exact: bool = False) -> Number:
    """
    Squared-amplitude term G for diagonal inputs.

    Args:
        indices: (m, o, M, O, I, Omega, i, omega, l, q, alpha, phi,
            i', l', q', alpha', phi').
        exact: Return a Fraction.
    """
    m, o, M, O, I, Omega, i, omega, l, q, alpha, phi, i2, l2, q2, alpha2, phi2 = indices
    numerator = (
        f(omega) * f(I - omega) * f(Omega - omega) * f(m + M + omega - I - Omega)
        * _binomial_product(m, o, M, O, I, Omega, omega, (i, l, q, alpha, phi))
        * _binomial_product(m, o, M, O, I, Omega, omega, (i2, l2, q2, alpha2, phi2))
    )
    denominator = f(o) * f(m - o) * f(O) * f(M - O) * 4 ** (m + M)
    parity = phi + alpha + phi2 + alpha2 - l - q - l2 - q2
    return ratio(sign(parity) * numerator, denominator, exact)


def bsm_amplitude(m: int, o: int, M: int, O: int, I: int, Omega: int, omega: int) -> float:
    """Signed amplitude of one BSM output configuration for input |o, m-o>|O, M-O>."""
    signed_sum = sum(
        sign(M + t[4] + t[3] - t[1] - t[2] - o - O - Omega)
        * _binomial_product(m, o, M, O, I, Omega, omega, t)
        for t in bsm_amplitude_tuples(m, o, M, O, I, Omega, omega)
    )
    if signed_sum == 0:
        return 0.0
    norm = math.sqrt(
        Fraction(
            f(omega) * f(I - omega) * f(Omega - omega) * f(m + M + omega - I - Omega),
            f(o) * f(m - o) * f(O) * f(M - O),
        )
    )
    return norm * signed_sum / 2 ** (m + M)


# =============================================================================
# Kernels
# =============================================================================


@lru_cache(maxsize=None)
def _z_block(m: int, o: int, M: int, O: int, I: int, Omega: int, omega: int) -> Fraction:
    """Sum of G over all primed and unprimed amplitude tuples."""
    tuples = list(bsm_amplitude_tuples(m, o, M, O, I, Omega, omega))
    return sum(
        (
            Fraction(g_term((m, o, M, O, I, Omega, t[0], omega, *t[1:], *t2), exact=True))
            for t in tuples
            for t2 in tuples
        ),
        Fraction(0),
    )


def _configurations(total: int, outcome: BsmOutcome) -> Iterator[tuple[int, int, int]]:
    for I in span(1, total):
        for Omega in span(1, total):
            for omega in outcome.omega_range(I, Omega, total):
                yield I, Omega, omega


@lru_cache(maxsize=8192)
def bsm_kernel_z(
    m: int, o: int, M: int, O: int, eta: float, outcome: BsmOutcome, exact: bool = False
) -> Number:
    """Success probability of the outcome for diagonal input |o, m-o>|O, M-O>."""
    total = m + M
    eta_n = to_number(eta, exact)
    return accumulate(
        (
            outcome.detector_weight(omega, I, Omega, total, eta_n)
            * to_number(_z_block(m, o, M, O, I, Omega, omega), exact)
            for I, Omega, omega in _configurations(total, outcome)
        ),
        exact,
    )


@lru_cache(maxsize=65536)
def bsm_kernel(
    m: int, M: int, o: int, O: int, o_bra: int, O_bra: int, eta: float, outcome: BsmOutcome
) -> float:
    """
    Outcome probability functional on |o, O><o_bra, O_bra| (photon numbers m, M fixed).
    """
    total = m + M
    return math.fsum(
        outcome.detector_weight(omega, I, Omega, total, eta)
        * bsm_amplitude(m, o, M, O, I, Omega, omega)
        * bsm_amplitude(m, o_bra, M, O_bra, I, Omega, omega)
        for I, Omega, omega in _configurations(total, outcome)
    )


# =============================================================================
# Z-Basis Probabilities
# =============================================================================


def _p_z(ctx: SumContext, outcome: BsmOutcome, exact: bool) -> Number:
    weights = qnd_output_weights(ctx, exact)
    return accumulate(
        (
            w_alice * w_bob * bsm_kernel_z(m, o, M, O, ctx.eta_det_bsm, outcome, exact)
            for (m, o), w_alice in weights.items()
            for (M, O), w_bob in weights.items()
        ),
        exact,
    )


def p_c_z(ctx: SumContext, exact: bool = False) -> Number:
    """Probability of a correct Z-basis detection pattern."""
    return _p_z(ctx, BsmOutcome.CORRECT, exact)


def p_nc_z(ctx: SumContext, exact: bool = False) -> Number:
    """Probability of a non-correct Z-basis detection pattern."""
    return _p_z(ctx, BsmOutcome.NON_CORRECT, exact)
