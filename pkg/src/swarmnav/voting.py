"""Closed-form analytics for majority-vote navigation quality.

A swarm of ``m`` vehicles makes a binary decision (landmark recognized /
advice interpreted) by adopting any outcome shared by at least ``ceil(m/2)``
of them.  With per-vehicle error probability ``p``, the majority decision is
wrong with probability

    p_m = 1 - sum_{i=ceil(m/2)}^{m} C(m, i) (1-p)^i p^(m-i)

and a flight plan of ``k`` segments succeeds with probability
``(1-p)^k (1-q)^k`` for a single vehicle (recognition error ``p``, advice
error ``q``), or the analogue with ``p_m``/``q_m`` for a voting swarm.  The
"fractional gain" ``(1-p_m)/(1-p)`` measures how much voting improves the
per-decision correctness; for ``p < 1/2`` it exceeds 1 and has an interior
maximum in ``p`` for every swarm size ``m >= 3``.

Numerics: binomial tail sums are evaluated term-by-term in log space
(``math.lgamma`` for the log binomial coefficients) and accumulated with
compensated summation, so they stay accurate for swarm sizes in the
thousands where direct ``C(m, i)`` overflows.  The normal approximation of
the majority probability uses the standard normal CDF via ``math.erf``
(``Phi(x) = (1 + erf(x / sqrt(2))) / 2``, absolute error well below 1e-7);
no continuity correction is applied.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "GainPoint",
    "majority_error",
    "single_path_success",
    "swarm_path_success",
    "fractional_gain",
    "gain_polynomial",
    "optimal_gain",
    "normal_approx_majority_success",
]

#: Golden-section step used by the local refinement in :func:`optimal_gain`.
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def _check_probability(value: float, name: str) -> float:
    value = float(value)
    if not (0.0 <= value <= 1.0) or math.isnan(value):
        raise ValueError(f"{name} must be in [0, 1], got {value!r}")
    return value


def _check_swarm_size(m: int) -> int:
    if not isinstance(m, (int, np.integer)) or isinstance(m, bool) or m < 1:
        raise ValueError(f"swarm size must be an integer >= 1, got {m!r}")
    return int(m)


def _check_path_length(k: int) -> int:
    if not isinstance(k, (int, np.integer)) or isinstance(k, bool) or k < 0:
        raise ValueError(f"path length must be an integer >= 0, got {k!r}")
    return int(k)


def _majority_threshold(m: int) -> int:
    """Smallest vote count that forms a majority: ceil(m/2)."""
    return (m + 1) // 2


def _log_binom(m: int, i: int) -> float:
    return math.lgamma(m + 1) - math.lgamma(i + 1) - math.lgamma(m - i + 1)


def majority_error(p: float, m: int) -> float:
    """Probability that the majority decision of ``m`` voters is wrong.

    Each voter independently errs with probability ``p``; the decision is
    wrong when fewer than ``ceil(m/2)`` voters are correct, so an exact
    even split still counts as a correct swarm decision.
    """
    p = _check_probability(p, "p")
    m = _check_swarm_size(m)
    if m == 1:
        return p
    if p == 0.0:
        return 0.0
    if p == 1.0:
        return 1.0
    h = _majority_threshold(m)
    log_p = math.log(p)
    log_1mp = math.log1p(-p)
    # Pr[#correct < h]: all terms positive, no cancellation.
    terms = [
        math.exp(_log_binom(m, i) + i * log_1mp + (m - i) * log_p)
        for i in range(h)
    ]
    return min(1.0, math.fsum(terms))


def single_path_success(p: float, q: float, k: int) -> float:
    """Probability a lone vehicle completes a ``k``-segment flight plan.

    Every segment needs valid advice at its tail vertex and a correct
    recognition at its head vertex: ``(1-p)^k * (1-q)^k``.
    """
    p = _check_probability(p, "p")
    q = _check_probability(q, "q")
    k = _check_path_length(k)
    return (1.0 - p) ** k * (1.0 - q) ** k


def swarm_path_success(p: float, q: float, k: int, m: int) -> float:
    """Mission success probability for an ``m``-vehicle voting swarm.

    Identical to :func:`single_path_success` with the per-decision errors
    replaced by their majority-vote counterparts.
    """
    k = _check_path_length(k)
    pm = majority_error(p, m)
    qm = majority_error(q, m)
    return (1.0 - pm) ** k * (1.0 - qm) ** k


def fractional_gain(p: float, m: int) -> float:
    """Correctness improvement ratio ``(1 - p_m) / (1 - p)`` of voting.

    Evaluated through its series form
    ``sum_{i=ceil(m/2)}^{m} C(m, i) (1-p)^(i-1) p^(m-i)`` rather than by
    dividing, which keeps it finite and accurate as ``p`` approaches 1/2
    from below and gives an independent cross-check against
    :func:`majority_error`.
    """
    p = _check_probability(p, "p")
    m = _check_swarm_size(m)
    if p == 1.0:
        raise ValueError("fractional gain is undefined at p = 1 (zero denominator)")
    if p == 0.0:
        return 1.0
    h = _majority_threshold(m)
    log_p = math.log(p)
    log_1mp = math.log1p(-p)
    terms = [
        math.exp(_log_binom(m, i) + (i - 1) * log_1mp + (m - i) * log_p)
        for i in range(h, m + 1)
    ]
    return math.fsum(terms)


def _gain_curve(m: int, ps: np.ndarray) -> np.ndarray:
    """Vectorized :func:`fractional_gain` over a grid of error probabilities."""
    h = _majority_threshold(m)
    idx = np.arange(h, m + 1, dtype=np.float64)
    log_c = np.array([_log_binom(m, int(i)) for i in range(h, m + 1)])
    with np.errstate(divide="ignore", invalid="ignore"):
        log_terms = (
            log_c[:, None]
            + (idx[:, None] - 1.0) * np.log1p(-ps[None, :])
            + (m - idx[:, None]) * np.log(ps[None, :])
        )
        gains = np.exp(log_terms).sum(axis=0)
    gains[ps == 0.0] = 1.0
    return gains


def gain_polynomial(m: int) -> tuple[int, ...]:
    """Exact integer coefficients of the fractional gain as a polynomial in p.

    Returned in ascending order of degree (degree ``m - 1``); tabulated for
    small swarms only, ``2 <= m <= 7``.  For example ``m=3`` yields
    ``(1, 1, -2)``, i.e. ``1 + p - 2 p^2``.
    """
    m = _check_swarm_size(m)
    if not 2 <= m <= 7:
        raise ValueError(f"gain polynomial is tabulated for m in [2, 7], got {m}")
    h = _majority_threshold(m)
    coeffs = [0] * m
    # Expand C(m,i) (1-p)^(i-1) p^(m-i) term by term with exact integers.
    for i in range(h, m + 1):
        c = math.comb(m, i)
        for j in range(i):
            coeffs[(m - i) + j] += c * math.comb(i - 1, j) * (-1) ** j
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


@dataclass(frozen=True)
class GainPoint:
    """Error probability maximizing the fractional gain, and the maximum."""

    p_star: float
    gain: float


#: Grid step of the global scan in :func:`optimal_gain`.
_OPT_GRID_STEP = 1e-4
#: Target accuracy of the refined maximizer location.
_OPT_XTOL = 1e-7


def optimal_gain(m: int) -> GainPoint:
    """Maximize :func:`fractional_gain` over the improvement regime p in [0, 1/2].

    Voting only reduces error for ``p < 1/2``, and for ``m = 2`` the gain
    ``1 + p`` is increasing, so the search is restricted to ``[0, 1/2]``
    (boundary maximum at 1/2 for ``m = 2``).  A dense grid scan (step 1e-4)
    locates the global maximum cell without assuming unimodality; a
    golden-section pass then refines the location to ~1e-6.
    """
    m = _check_swarm_size(m)
    if m < 2:
        raise ValueError("optimal_gain requires m >= 2 (gain is identically 1 for m = 1)")
    ps = np.arange(0.0, 0.5 + _OPT_GRID_STEP / 2.0, _OPT_GRID_STEP)
    gains = _gain_curve(m, ps)
    i = int(np.argmax(gains))
    lo = max(0.0, ps[i] - _OPT_GRID_STEP)
    hi = min(0.5, ps[i] + _OPT_GRID_STEP)

    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = fractional_gain(c, m), fractional_gain(d, m)
    while b - a > _OPT_XTOL:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = fractional_gain(c, m)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = fractional_gain(d, m)
    # Keep whichever of the refined point, its bracket ends, and the grid
    # point is best, so boundary maxima (m = 2 at 1/2) are reported exactly.
    candidates = [(a + b) / 2.0, lo, hi, float(ps[i])]
    values = [fractional_gain(x, m) for x in candidates]
    j = int(np.argmax(values))
    return GainPoint(p_star=candidates[j], gain=values[j])


def normal_approx_majority_success(p: float, m: int) -> float:
    """Central-limit approximation of the majority success probability.

    The number of erring voters is a sum of ``m`` Bernoulli(``p``)
    variables; the majority fails when that sum reaches ``ceil(m/2)``, an
    event whose normal-approximate probability is the upper tail beyond
    ``a = (ceil(m/2) - m p) / sqrt(m p (1-p))``.  This function returns one
    minus that tail, i.e. ``Phi(a)``, approximating
    ``1 - majority_error(p, m)``.  Rejects ``p`` in {0, 1} (zero variance).
    """
    p = _check_probability(p, "p")
    m = _check_swarm_size(m)
    if p in (0.0, 1.0):
        raise ValueError("normal approximation needs 0 < p < 1 (nonzero variance)")
    a = (_majority_threshold(m) - m * p) / math.sqrt(m * p * (1.0 - p))
    return 0.5 * (1.0 + math.erf(a / math.sqrt(2.0)))
