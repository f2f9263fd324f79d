"""
X-basis key-generation probabilities.

In the X basis the kept photons a are measured only after the BSM, so the
heralded state of each side keeps coherences between |k, n-k>_a |o, m-o>_b
and |k', n-k'>_a |o+k-k', m-o-k+k'>_b. Those coherences pass through the
BSM kernel off the diagonal and through the final Hadamard-and-detect step
on a and a2.
"""

import math
from collections import defaultdict
from collections.abc import Iterator
from fractions import Fraction
from functools import lru_cache

from src.closed_form.bsm import BsmOutcome, bsm_kernel
from src.closed_form.combinatorics import binom, factorial as f, sign, span
from src.models.rate import SumContext

QndXIndices = tuple[int, int, int, int, int, int, int]
SigmaKey = tuple[int, int, int, int, int]


# =============================================================================
# Heralded Coherent State
# =============================================================================


def qnd_x_index_tuples(n: int, m: int) -> Iterator[QndXIndices]:
    """Admissible (n, m, k, x, y, o, k') for fixed n, m."""
    for k in span(0, n):
        for x in span(0, k):
            for y in span(0, n - k):
                for o in span(0, m):
                    for k2 in span(max(x, o + k - m), min(n - y, o + k)):
                        yield (n, m, k, x, y, o, k2)


@lru_cache(maxsize=None)
def _lambda_qnd_core(indices: QndXIndices) -> Fraction:
    """Six-fold inner sum over u, v, w, z, u', v'."""
    n, m, k, x, y, o, k2 = indices
    total = Fraction(0)
    for u in span(0, o):
        for v in span(0, m - o):
            for w in span(max(0, 1 - u), k - x):
                for z in span(max(0, 1 - v), n - k - y):
                    s, t = u + w, v + z
                    for u2 in span(max(0, s + x - k2), min(s, o + k - k2)):
                        for v2 in span(max(0, t + y + k2 - n), min(t, m - o - k + k2)):
                            numerator = (
                                s * t * f(s) * f(t)
                                * f(o - u + k - x - w) * f(n - k - y - z + m - o - v)
                            )
                            denominator = (
                                f(u) * f(v) * f(w) * f(z) * f(u2) * f(v2)
                                * f(k - x - w) * f(n - k - y - z) * f(o - u) * f(m - o - v)
                                * f(s - u2) * f(k2 - x - s + u2)
                                * f(t - v2) * f(n - k2 - y - t + v2)
                                * f(o + k - k2 - u2) * f(m - o - k + k2 - v2)
                            )
                            total += Fraction(sign(u2 + v2 - u - v) * numerator, denominator)
    return total


def lambda_qnd_x(indices: QndXIndices, ctx: SumContext) -> float:
    """
    Heralded-state element for the X basis.

    Args:
        indices: (n, m, k, x, y, o, k'): ket |k, n-k>_a |o, m-o>_b, bra with k'
            H photons in a, x and y photons lost.
        ctx: Efficiencies at the operating point.
    """
    n, m, k, x, y, o, k2 = indices
    exponent = n + m - x - y - 2
    if exponent < 0:
        return 0.0
    core = _lambda_qnd_core(indices)
    if core == 0:
        return 0.0
    o2 = o + k - k2
    overlap = math.sqrt(
        f(k) * f(n - k) * f(k2) * f(n - k2) * f(o) * f(m - o) * f(o2) * f(m - o2)
    )
    efficiency = (
        ctx.eta_det**2 * (1 - ctx.eta_det) ** exponent
        * ctx.eta_ch ** (n - x - y) * (1 - ctx.eta_ch) ** (x + y)
    )
    denominator = (n + 1) * (m + 1) * f(x) * f(y) * 2 ** (n + m - x - y)
    return efficiency * overlap * float(core) / denominator


def sigma_entries(ctx: SumContext) -> dict[SigmaKey, float]:
    """
    Heralded state of one side keyed by (n, m, k, o, k').

    Loss patterns (x, y) are summed out; source probabilities are included.
    """
    p = ctx.roles.alice_bob
    q = ctx.roles.qnd
    terms: dict[SigmaKey, list[float]] = defaultdict(list)
    for n in p.support():
        for m in q.support():
            pq = p.p(n) * q.p(m)
            for indices in qnd_x_index_tuples(n, m):
                value = lambda_qnd_x(indices, ctx)
                if value:
                    _, _, k, _, _, o, k2 = indices
                    terms[(n, m, k, o, k2)].append(pq * value)
    return {key: math.fsum(values) for key, values in sorted(terms.items())}


# =============================================================================
# Final Hadamard and Detection
# =============================================================================


def f_hadamard(n: int, N: int, k: int, K: int, tau: int, nu: int, chi: int, omega: int) -> float:
    """
    Expansion coefficient of the Hadamards on a and a2.

    tau of Alice's k H photons and nu of her n-k V photons exit as H; chi and
    omega likewise for Bob.
    """
    return (
        sign(k + K + nu + omega)
        * binom(k, tau) * binom(n - k, nu) * binom(K, chi) * binom(N - K, omega)
        / math.sqrt(2) ** (n + N)
    )


def g_norm(n: int, N: int, k: int, K: int, k2: int, K2: int) -> float:
    """Normalization of the ket and bra Fock states entering the Hadamards."""
    return 1 / math.sqrt(
        f(k) * f(n - k) * f(K) * f(N - K) * f(k2) * f(n - k2) * f(K2) * f(N - K2)
    )


def d_weight(m: int, M: int, x: int, y: int, eta: float) -> float:
    """POVM weight of one click on each of two detectors seeing x and y photons."""
    if x * y == 0:
        return 0.0
    return x * y * eta**2 * (1 - eta) ** (m + M - 2)


def _hadamard_amplitude(n: int, N: int, k: int, K: int, j: int, J: int) -> float:
    return math.fsum(
        f_hadamard(n, N, k, K, tau, j - tau, chi, J - chi)
        for tau in span(max(0, j - (n - k)), min(k, j))
        for chi in span(max(0, J - (N - K)), min(K, J))
    )


@lru_cache(maxsize=65536)
def _x_blocks(
    n: int, N: int, k: int, K: int, k2: int, K2: int
) -> tuple[tuple[int, int, float], ...]:
    """Efficiency-free contributions per output H counts (j, J)."""
    norm = g_norm(n, N, k, K, k2, K2)
    blocks = []
    for j in span(0, n):
        for J in span(0, N):
            product = _hadamard_amplitude(n, N, k, K, j, J) * _hadamard_amplitude(
                n, N, k2, K2, j, J
            )
            if product:
                blocks.append((j, J, norm * f(j) * f(n - j) * f(J) * f(N - J) * product))
    return tuple(blocks)


@lru_cache(maxsize=65536)
def x_kernel(
    n: int, N: int, k: int, K: int, k2: int, K2: int, eta: float, outcome: BsmOutcome
) -> float:
    """Probability functional of the final X measurement on |k, K><k', K'|."""
    if outcome is BsmOutcome.CORRECT:
        return math.fsum(
            d_weight(n, N, j, N - J, eta) * value for j, J, value in _x_blocks(n, N, k, K, k2, K2)
        )
    return math.fsum(
        d_weight(n, N, j, J, eta) * value for j, J, value in _x_blocks(n, N, k, K, k2, K2)
    )


# =============================================================================
# X-Basis Probabilities
# =============================================================================


def _p_x(ctx: SumContext, outcome: BsmOutcome) -> float:
    # Alice and Bob must each detect a photon at the end
    sigma = [(key, value) for key, value in sigma_entries(ctx).items() if key[0] >= 1]
    eta_bsm = ctx.eta_det_bsm
    terms = []
    for (n, m, k, o, k2), value_a in sigma:
        for (N, M, K, O, K2), value_b in sigma:
            swap = bsm_kernel(m, M, o, O, o + k - k2, O + K - K2, eta_bsm, BsmOutcome.CORRECT)
            if not swap:
                continue
            terms.append(value_a * value_b * swap * x_kernel(n, N, k, K, k2, K2, ctx.eta_det, outcome))
    return math.fsum(terms)


def p_c_x(ctx: SumContext) -> float:
    """Probability of a correct X-basis detection pattern."""
    return _p_x(ctx, BsmOutcome.CORRECT)


def p_nc_x(ctx: SumContext) -> float:
    """Probability of a non-correct X-basis detection pattern."""
    return _p_x(ctx, BsmOutcome.NON_CORRECT)
