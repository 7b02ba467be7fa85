"""Wasserstein-1 distance to N(0, 1) and total variation distance to Poisson.

``W1 = integral |F(t) - Phi(t)| dt`` is evaluated segment by segment: between
atoms F is a constant ``k`` and ``|k - Phi|`` has a closed-form antiderivative.
Segments right of the origin are evaluated through the upper tail
``Q = 1 - Phi`` to avoid cancellation.
"""
from __future__ import annotations

import math
from typing import Sequence

import numpy as np
from scipy import special, stats

from .exact import DiscreteDistribution

SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)
POISSON_TAIL = 1e-15


def norm_cdf(t):
    return special.ndtr(t)


def norm_sf(t):
    return special.ndtr(-np.asarray(t, dtype=np.float64))


def norm_pdf(t):
    t = np.asarray(t, dtype=np.float64)
    return np.exp(-0.5 * t * t) / math.sqrt(2.0 * math.pi)


def _int_cdf(a, b):
    """Integral of Phi over [a, b] via ``t Phi(t) + phi(t)``."""
    return (b * norm_cdf(b) + norm_pdf(b)) - (a * norm_cdf(a) + norm_pdf(a))


def _int_sf(a, b):
    """Integral of Q = 1 - Phi over [a, b] via ``t Q(t) - phi(t)``."""
    return (b * norm_sf(b) - norm_pdf(b)) - (a * norm_sf(a) - norm_pdf(a))


def _segment_integrals(a, b, lower, upper):
    """Integral of ``|k - Phi|`` over ``[a, b]``; ``lower = k``, ``upper = 1 - k``."""
    a, b = np.asarray(a, float), np.asarray(b, float)
    right = (a + b) > 0
    # signed integral of (k - Phi) on [x, y]; left form uses k and Phi, right form 1-k and Q
    def signed(x, y):
        left_val = lower * (y - x) - _int_cdf(x, y)
        right_val = _int_sf(x, y) - upper * (y - x)
        return np.where(right, right_val, left_val)

    with np.errstate(invalid="ignore", divide="ignore"):
        t_star = np.where(right, -special.ndtri(np.clip(upper, 0, 1)), special.ndtri(np.clip(lower, 0, 1)))
    inside = (t_star > a) & (t_star < b)
    t_split = np.where(inside, t_star, a)
    whole = np.abs(signed(a, b))
    split = np.abs(signed(a, t_split)) + np.abs(signed(t_split, b))
    return np.where(inside, split, whole)


def wasserstein_to_normal(d: DiscreteDistribution) -> float:
    """Exact W1 between a finite distribution and the standard normal."""
    x = np.asarray(d.support, dtype=np.float64)
    p = np.asarray(d.probs, dtype=np.float64)
    if x.size == 0:
        raise ValueError("empty distribution")
    lower = np.cumsum(p)[:-1]
    upper = np.cumsum(p[::-1])[::-1][1:]
    left_tail = x[0] * norm_cdf(x[0]) + norm_pdf(x[0])
    right_tail = norm_pdf(x[-1]) - x[-1] * norm_sf(x[-1])
    pieces = _segment_integrals(x[:-1], x[1:], lower, upper)
    return math.fsum([float(left_tail), float(right_tail), *pieces.tolist()])


def empirical_wasserstein(samples: Sequence[float]) -> float:
    """W1 between the empirical measure of ``samples`` and N(0, 1)."""
    s = np.asarray(samples, dtype=np.float64)
    if s.size == 0:
        raise ValueError("need at least one sample")
    d = DiscreteDistribution.from_probs(s, np.full(s.size, 1.0 / s.size))
    return wasserstein_to_normal(d)


def poisson_range(lam: float) -> tuple[int, int]:
    lo = int(stats.poisson.ppf(POISSON_TAIL / 2, lam))
    hi = int(stats.poisson.isf(POISSON_TAIL / 2, lam))
    return max(lo, 0), max(hi, lo)


def tv_to_poisson(d: DiscreteDistribution, lam: float) -> float:
    """Total variation distance between an integer law and Poisson(lam).

    Poisson mass outside the union of ``d``'s support and the central
    ``1 - 1e-15`` range enters as half its total.
    """
    if not lam > 0:
        raise ValueError("lambda must be positive")
    ys = np.asarray(d.support)
    if d.standardized or not np.all(ys == np.round(ys)) or ys[0] < 0:
        raise ValueError("TV to Poisson needs a law on non-negative integers")
    lo, hi = poisson_range(lam)
    ks = np.union1d(ys.astype(np.int64), np.arange(lo, hi + 1))
    p = np.zeros(ks.size)
    p[np.searchsorted(ks, ys.astype(np.int64))] = d.probs
    q = np.exp(stats.poisson.logpmf(ks, lam))
    outside = ks[(ks < lo) | (ks > hi)]
    tail = (stats.poisson.cdf(lo - 1, lam) + stats.poisson.sf(hi, lam)
            - math.fsum(np.exp(stats.poisson.logpmf(outside, lam))))
    return 0.5 * (math.fsum(np.abs(p - q)) + max(float(tail), 0.0))


def tv_distance(p: dict[int, float], q: dict[int, float]) -> float:
    keys = set(p) | set(q)
    return 0.5 * math.fsum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)
