"""Closed-form error bounds and the lemma checkers used during verification."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .exact import edge_indicator_moments
from .graph import EdgeStats, lemma2_bound, triangle_bound
from .metrics import SQRT_2_OVER_PI

# W1(W, Z) <= E|W| + E|Z| <= 1 + sqrt(2/pi) for any standardized W.
TRIVIAL_W1_CAP = 1.0 + SQRT_2_OVER_PI
# Heuristic only: above this mean m/c a Poisson approximation is not reported as favoured.
POISSON_MEAN_THRESHOLD = 10.0


def _check_mc(m: int, c: int) -> None:
    if m < 1 or c < 2:
        raise ValueError(f"need m >= 1 and c >= 2, got m={m}, c={c}")


def wasserstein_bound(m: int, c: int) -> float:
    """Universal W1 bound ``1.5 sqrt(c/m) + 5 sqrt(2)/sqrt(c) + 2**1.75 / (sqrt(pi) m**0.25)``."""
    _check_mc(m, c)
    return (1.5 * math.sqrt(c / m) + 5.0 * math.sqrt(2.0) / math.sqrt(c)
            + 2.0**1.75 / (math.sqrt(math.pi) * m**0.25))


def poisson_tv_bound(m: int, c: int) -> float:
    _check_mc(m, c)
    return math.sqrt(8.0 * m) / c


def remark_terms(m: int, c: int, K_m: int) -> tuple[float, float, float]:
    _check_mc(m, c)
    if K_m < 0:
        raise ValueError("K_m must be non-negative")
    return math.sqrt(c / m), K_m / (math.sqrt(c) * m**1.5), m**-0.25


def remark_rate(m: int, c: int, K_m: int, C0: float = 1.0) -> float:
    """``C0 (sqrt(c/m) + K_m / (sqrt(c) m**1.5) + m**-0.25)``; C0 is caller-chosen."""
    if not C0 > 0:
        raise ValueError("C0 must be positive")
    return C0 * sum(remark_terms(m, c, K_m))


@dataclass(frozen=True)
class BoundReport:
    m: int
    c: int
    wasserstein_bound: float
    poisson_tv_bound: float
    remark_rate: float | None
    K_m: int | None
    C0: float
    wasserstein_vacuous: bool
    poisson_vacuous: bool
    regime_hint: str

    def to_dict(self) -> dict:
        return asdict(self)


def regime_hint(m: int, c: int, w1: float, tv: float,
                mean_threshold: float = POISSON_MEAN_THRESHOLD) -> str:
    poisson_ok = tv < 1.0 and m / c <= mean_threshold
    normal_ok = w1 < TRIVIAL_W1_CAP
    if poisson_ok and (not normal_ok or tv <= w1):
        return "poisson-favored"
    if normal_ok:
        return "normal-favored"
    return "both-vacuous"


def bound_report(m: int, c: int, K_m: int | None = None, C0: float = 1.0) -> BoundReport:
    w1 = wasserstein_bound(m, c)
    tv = poisson_tv_bound(m, c)
    return BoundReport(
        m=m, c=c,
        wasserstein_bound=w1,
        poisson_tv_bound=tv,
        remark_rate=None if K_m is None else remark_rate(m, c, K_m, C0),
        K_m=K_m,
        C0=C0,
        wasserstein_vacuous=w1 > TRIVIAL_W1_CAP,
        poisson_vacuous=tv > 1.0,
        regime_hint=regime_hint(m, c, w1, tv),
    )


@dataclass(frozen=True)
class LemmaCheck:
    name: str
    value: float
    bound: float

    @property
    def slack(self) -> float:
        return self.bound - self.value

    @property
    def passed(self) -> bool:
        # relative guard for exact-equality cases evaluated in floating point
        return self.value <= self.bound * (1 + 1e-12)

    def to_dict(self) -> dict:
        return {"name": self.name, "value": self.value, "bound": self.bound,
                "slack": self.slack, "passed": self.passed}


def lemma1_check(m: int, c: int) -> list[LemmaCheck]:
    """Moment bounds ``E|X| <= 2/sqrt(mc)``, ``E X^2 = 1/m``, ``E|X|^3 <= sqrt(c)/m**1.5``."""
    mo = edge_indicator_moments(m, c)
    return [
        LemmaCheck("lemma1_abs_first", mo.abs_first, 2.0 / math.sqrt(m * c)),
        LemmaCheck("lemma1_second", mo.second, 1.0 / m),
        LemmaCheck("lemma1_abs_third", mo.abs_third, math.sqrt(c) / m**1.5),
    ]


def lemma2_check(stats: EdgeStats) -> LemmaCheck:
    if stats.m < 1:
        raise ValueError("lemma 2 check needs m >= 1")
    return LemmaCheck("lemma2_min_degree_sum", float(stats.K_m), lemma2_bound(stats.m))


def lemma3_check(stats: EdgeStats) -> LemmaCheck:
    """Triangle count against ``(sqrt(2)/3) m**1.5`` (exponent 3/2, not 2/3)."""
    if stats.m < 1:
        raise ValueError("lemma 3 check needs m >= 1")
    return LemmaCheck("lemma3_triangles_m^(3/2)", float(stats.triangle_count), triangle_bound(stats.m))
