"""
QND heralding with a Z-basis local detection.

Index meaning: the user source emits n pairs and the QND source m pairs;
k of Alice's kept photons are H (she requires exactly one H, none V), x H
and y V photons are lost in the channel, o QND photons in mode b are H, and
s, t count H and V photons reaching the heralding port. u, v (and the
mirrored u', v' of the bra) split those between the two sources.

The heralded state of b is diagonal in |o, m - o>, so the sums collapse to
the weights W(m, o) that feed the BSM stage.
"""

from collections import defaultdict
from collections.abc import Iterator
from fractions import Fraction
from functools import lru_cache

from src.closed_form.combinatorics import (
    Number,
    accumulate,
    factorial as f,
    ratio,
    sign,
    span,
    to_number,
)
from src.models.rate import SumContext

QndIndices = tuple[int, int, int, int, int, int, int, int, int, int, int, int]


# =============================================================================
# Index Enumeration
# =============================================================================


def qnd_index_tuples(n: int, m: int) -> Iterator[QndIndices]:
    """Admissible (n, m, k, x, y, o, s, t, u, v, u', v') for fixed n, m."""
    for k in span(1, n):
        for x in span(0, k):
            for y in span(0, n - k):
                for o in span(0, m):
                    for s in span(1, o + k - x):
                        for t in span(1, m - o + n - k - y):
                            u_range = span(max(0, s - (k - x)), min(o, s))
                            v_range = span(max(0, t - (n - k - y)), min(m - o, t))
                            for u in u_range:
                                for v in v_range:
                                    for u2 in u_range:
                                        for v2 in v_range:
                                            yield (n, m, k, x, y, o, s, t, u, v, u2, v2)


# =============================================================================
# Lambda
# =============================================================================


@lru_cache(maxsize=None)
def _lambda_combinatorial(indices: QndIndices) -> tuple[int, int]:
    """Signed integer numerator and denominator of Lambda without efficiencies."""
    n, m, k, x, y, o, s, t, u, v, u2, v2 = indices
    numerator = (
        s * t * k
        * f(k) * f(n - k) * f(o) * f(m - o) * f(s) * f(t)
        * f(o + k - x - s) * f(n - k - y + m - o - t)
    )
    denominator = (
        (n + 1) * (m + 1) * f(x) * f(y)
        * f(k - x + u - s) * f(k - x + u2 - s) * f(s - u) * f(s - u2)
        * f(n - k - y + v - t) * f(t - v) * f(n - k - y + v2 - t) * f(t - v2)
        * f(o - u) * f(u) * f(o - u2) * f(u2)
        * f(m - o - v) * f(v) * f(m - o - v2) * f(v2)
        * 2 ** (n + m - x - y)
    )
    return sign(u + v + u2 + v2) * numerator, denominator


def _lambda_efficiency(
    n: int, m: int, x: int, y: int, ctx: SumContext, exact: bool
) -> Number:
    """eta_det^3 (1-eta_det)^(2n+m-x-y-3) eta_ch^(n-x-y) (1-eta_ch)^(x+y)."""
    exponent = 2 * n + m - x - y - 3
    if exponent < 0:
        return to_number(0.0, exact)
    eta_det = to_number(ctx.eta_det, exact)
    eta_ch = to_number(ctx.eta_ch, exact)
    return eta_det**3 * (1 - eta_det) ** exponent * eta_ch ** (n - x - y) * (1 - eta_ch) ** (x + y)


def lambda_term(indices: QndIndices, ctx: SumContext, exact: bool = False) -> Number:
    """
    One term of the heralding sum.

    Args:
        indices: (n, m, k, x, y, o, s, t, u, v, u', v') within the admissible ranges.
        ctx: Efficiencies at the operating point.
        exact: Return a Fraction instead of a float.
    """
    n, m, _, x, y = indices[:5]
    numerator, denominator = _lambda_combinatorial(indices)
    return ratio(numerator, denominator, exact) * _lambda_efficiency(n, m, x, y, ctx, exact)


@lru_cache(maxsize=None)
def _qnd_blocks(n: int, m: int) -> dict[tuple[int, int, int], Fraction]:
    """Sum of the combinatorial parts of Lambda grouped by (x, y, o)."""
    blocks: dict[tuple[int, int, int], Fraction] = defaultdict(Fraction)
    for indices in qnd_index_tuples(n, m):
        numerator, denominator = _lambda_combinatorial(indices)
        _, _, _, x, y, o = indices[:6]
        blocks[(x, y, o)] += Fraction(numerator, denominator)
    return dict(blocks)


# =============================================================================
# Heralding Probability
# =============================================================================


def qnd_output_weights(ctx: SumContext, exact: bool = False) -> dict[tuple[int, int], Number]:
    """
    Weight of the heralded b state |o, m - o> for every (m, o).

    Source probabilities are included, so the weights sum to p_QND.
    """
    p = ctx.roles.alice_bob
    q = ctx.roles.qnd
    terms: dict[tuple[int, int], list[Number]] = defaultdict(list)
    for n in p.support():
        if n < 1:
            continue
        for m in q.support():
            pq = to_number(p.p(n), exact) * to_number(q.p(m), exact)
            for (x, y, o), block in _qnd_blocks(n, m).items():
                efficiency = _lambda_efficiency(n, m, x, y, ctx, exact)
                terms[(m, o)].append(pq * efficiency * to_number(block, exact))
    return {key: accumulate(values, exact) for key, values in sorted(terms.items())}


def p_qnd(ctx: SumContext, exact: bool = False) -> Number:
    """Probability that the QND heralds and Alice's Z detection reads H."""
    return accumulate(qnd_output_weights(ctx, exact).values(), exact)
