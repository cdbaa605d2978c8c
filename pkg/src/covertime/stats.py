"""Empirical distributions, two-sample tests, and closed-form tail bounds."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Sequence, Union

import numpy as np

from .errors import SampleTooSmall

MIN_TEST_SAMPLE = 50


@dataclass(frozen=True)
class EmpiricalSample:
    values: np.ndarray
    tag: str = ""

    def __post_init__(self):
        if self.values.ndim != 1 or len(self.values) < 1:
            raise ValueError("an empirical sample needs at least one scalar value")

    @classmethod
    def of(cls, data, tag: str = "") -> "EmpiricalSample":
        if isinstance(data, EmpiricalSample):
            return data
        v = np.sort(np.asarray(data, dtype=float).ravel())
        v.setflags(write=False)
        return cls(v, tag)

    @property
    def n(self) -> int:
        return len(self.values)

    def cdf(self, x) -> np.ndarray:
        return np.searchsorted(self.values, x, side="right") / self.n


SampleLike = Union[EmpiricalSample, Sequence[float], np.ndarray]


@dataclass
class TestOutcome:
    """One check: ``passed`` iff ``statistic <= threshold`` (unless ``vacuous``)."""

    __test__ = False  # not a pytest class

    name: str
    statistic: float
    threshold: float
    passed: bool
    n1: int = 0
    n2: int = 0
    alpha: float | None = None
    vacuous: bool = False
    gating: bool = True
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        for k in ("statistic", "threshold"):
            d[k] = float(d[k])
        return d


@dataclass(frozen=True)
class Bound:
    """A probability bound; ``raw`` may exceed 1, ``clamped`` never does."""

    raw: float

    @property
    def clamped(self) -> float:
        return min(max(self.raw, 0.0), 1.0)

    @property
    def vacuous(self) -> bool:
        return self.raw >= 1.0


def dkw_band(n: int, alpha: float) -> float:
    """Half-width ``sqrt(ln(2/alpha) / (2n))`` of the DKW confidence band."""
    return math.sqrt(math.log(2.0 / alpha) / (2.0 * n))


def ks_critical_value(alpha: float) -> float:
    return math.sqrt(-math.log(alpha / 2.0) / 2.0)


def _pair(a: SampleLike, b: SampleLike) -> tuple[EmpiricalSample, EmpiricalSample]:
    a, b = EmpiricalSample.of(a), EmpiricalSample.of(b)
    if a.n < MIN_TEST_SAMPLE or b.n < MIN_TEST_SAMPLE:
        raise SampleTooSmall(f"two-sample tests need n >= {MIN_TEST_SAMPLE}, got {a.n} and {b.n}")
    return a, b


def ks_statistic(a: SampleLike, b: SampleLike) -> float:
    a, b = EmpiricalSample.of(a), EmpiricalSample.of(b)
    grid = np.concatenate([a.values, b.values])
    return float(np.max(np.abs(a.cdf(grid) - b.cdf(grid))))


def ks_two_sample(a: SampleLike, b: SampleLike, alpha: float = 0.01, name: str = "ks") -> TestOutcome:
    a, b = _pair(a, b)
    stat = ks_statistic(a, b)
    thr = ks_critical_value(alpha) * math.sqrt((a.n + b.n) / (a.n * b.n))
    return TestOutcome(name, stat, thr, stat <= thr, a.n, b.n, alpha)


def dominance_test(lower: SampleLike, upper: SampleLike, alpha: float = 0.01, name: str = "dominance") -> TestOutcome:
    """One-sided check that ``lower`` is stochastically below ``upper``.

    Fails when ``F_upper(s) - F_lower(s)`` exceeds the sum of the two DKW
    half-widths at some ``s``.
    """
    lo, up = _pair(lower, upper)
    grid = np.concatenate([lo.values, up.values])
    stat = float(max(np.max(up.cdf(grid) - lo.cdf(grid)), 0.0))
    thr = dkw_band(lo.n, alpha) + dkw_band(up.n, alpha)
    return TestOutcome(name, stat, thr, stat <= thr, lo.n, up.n, alpha)


def one_sample_ks(sample: SampleLike, cdf, alpha: float = 0.01, name: str = "ks1") -> TestOutcome:
    """Sup distance to a reference CDF against the DKW band."""
    s = EmpiricalSample.of(sample)
    if s.n < MIN_TEST_SAMPLE:
        raise SampleTooSmall(f"need n >= {MIN_TEST_SAMPLE}, got {s.n}")
    x = s.values
    F = np.asarray(cdf(x), dtype=float)
    hi = np.arange(1, s.n + 1) / s.n
    lo = np.arange(0, s.n) / s.n
    stat = float(max(np.max(np.abs(hi - F)), np.max(np.abs(F - lo))))
    thr = dkw_band(s.n, alpha)
    return TestOutcome(name, stat, thr, stat <= thr, s.n, 0, alpha)


def bonferroni(alpha: float, m: int) -> float:
    return alpha / max(int(m), 1)


def binomial_se(p: float, n: int) -> float:
    return math.sqrt(max(p * (1.0 - p), 0.0) / n)


def mean_check(name: str, mean: float, se: float, target: float, k: float = 3.0, **detail) -> TestOutcome:
    """``|mean - target| <= k * se``; a zero ``se`` demands equality to rounding."""
    dev = abs(mean - target)
    thr = k * se if se > 0 else 1e-12 * max(1.0, abs(target))
    return TestOutcome(name, dev, thr, dev <= thr, detail={"mean": mean, "se": se, "target": target, **detail})


def frequency_vs_bound(name: str, hits: int, n: int, bound: Bound, k: float = 3.0, **detail) -> TestOutcome:
    """Empirical frequency must not exceed the clamped bound plus ``k`` binomial SEs.

    Vacuous bounds pass automatically and are flagged.
    """
    p = hits / n
    thr = bound.clamped + k * binomial_se(p, n)
    return TestOutcome(
        name, p, thr, bound.vacuous or p <= thr, n, 0, None, vacuous=bound.vacuous,
        detail={"hits": int(hits), "bound_raw": bound.raw, "bound_clamped": bound.clamped, **detail},
    )


# ----------------------------------------------------------------------
# closed-form bounds


def exp_sum_tail_bound(N: int, alpha: float) -> Bound:
    """``2 exp(-alpha^2 N / 4)`` for ``|S - mu N| >= alpha mu N`` with ``S`` a sum of ``N`` exponentials."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    return Bound(2.0 * math.exp(-0.25 * alpha * alpha * N))


def inverse_lt_bound(t: float, lam: float, R: float, c_tot: float) -> tuple[float, Bound]:
    """Deviation ``(sqrt(lam R t) + lam R) c_tot / 2`` of the inverse local time and its ``6 exp(-lam/16)`` bound."""
    if lam < 1:
        raise ValueError("lambda must be >= 1")
    if t <= 0 or R <= 0 or c_tot <= 0:
        raise ValueError("t, R and c_tot must be positive")
    thr = 0.5 * (math.sqrt(lam * R * t) + lam * R) * c_tot
    return thr, Bound(6.0 * math.exp(-lam / 16.0))


def cover_deviation_threshold(lam: float, R: float, M: float, edge_count_equivalent: float) -> float:
    """``|E| (sqrt(lam R) M + lam R)``."""
    if lam < 0 or R < 0 or M < 0 or edge_count_equivalent <= 0:
        raise ValueError("inputs must be non-negative (edge count positive)")
    return edge_count_equivalent * (math.sqrt(lam * R) * M + lam * R)


def log_frequency_slope(x: Sequence[float], hits: Sequence[int], n: int) -> float:
    """Least-squares slope of ``log((hits + 1/2) / (n + 1))`` against ``x``.

    The half-count offset keeps empty grid points finite.
    """
    x = np.asarray(x, dtype=float)
    y = np.log((np.asarray(hits, dtype=float) + 0.5) / (n + 1.0))
    if len(x) < 2:
        raise ValueError("need at least two grid points")
    return float(np.polyfit(x, y, 1)[0])
