"""Descriptive statistics and the paired two-sided Wilcoxon signed-rank test.

The Wilcoxon implementation reports the positive and negative rank sums, the
effective sample size after discarding zero differences, and a two-sided
p-value: exact (via a dynamic program over achievable rank sums) whenever the
absolute differences are distinct and n <= 30, otherwise a normal
approximation with tie and continuity corrections. Every comparison carries a
plus/equal/minus verdict at the chosen significance level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass
class DescriptiveStats:
    """The seven per-cell measures: location, spread, extremes, time, success counts."""

    mean: float
    std_dev: float
    best: float
    worst: float
    avg_time: float
    n_success: int
    n_fail: int


def describe(samples, times=None, successes=None) -> DescriptiveStats:
    """Summarize one cell of per-run metric values.

    std_dev uses the population convention (divide by n). times and
    successes, when given, must match samples in length.
    """
    samples = np.asarray(samples, dtype=float)
    if samples.size == 0:
        raise ValueError("describe() needs at least one sample")
    times = np.zeros_like(samples) if times is None else np.asarray(times, dtype=float)
    if successes is None:
        successes = [False] * samples.size
    if len(times) != samples.size or len(successes) != samples.size:
        raise ValueError("samples, times, successes must have equal lengths")
    n_success = int(sum(bool(s) for s in successes))
    return DescriptiveStats(
        mean=float(samples.mean()),
        std_dev=float(samples.std(ddof=0)),
        best=float(samples.min()),
        worst=float(samples.max()),
        avg_time=float(times.mean()),
        n_success=n_success,
        n_fail=samples.size - n_success,
    )


@dataclass
class WilcoxonResult:
    r_plus: float
    r_minus: float
    n_effective: int
    p_value: float
    method: str  # "exact" or "normal-approx"
    verdict: str  # "plus", "equal", "minus"

    @property
    def win_symbol(self) -> str:
        return {"plus": "+", "equal": "=", "minus": "-"}[self.verdict]


def _midranks(values: np.ndarray) -> np.ndarray:
    """Ascending ranks 1..n with tied values sharing their average rank."""
    order = np.argsort(values, kind="stable")
    ranks = np.empty(values.size)
    sv = values[order]
    base = np.arange(1.0, values.size + 1)
    i = 0
    while i < values.size:
        j = i
        while j + 1 < values.size and sv[j + 1] == sv[i]:
            j += 1
        ranks[order[i:j + 1]] = base[i:j + 1].mean()
        i = j + 1
    return ranks


def _exact_two_sided_p(n: int, r_plus: int) -> float:
    """Two-sided tail probability of the signed-rank null for distinct ranks 1..n.

    counts[s] = number of sign assignments with positive-rank sum s; both
    tails are summed exactly, so the result is count / 2^n with integer
    count (exact in double precision for n <= 30).
    """
    total = n * (n + 1) // 2
    counts = [0] * (total + 1)
    counts[0] = 1
    for rank in range(1, n + 1):
        for s in range(total, rank - 1, -1):
            counts[s] += counts[s - rank]
    lo = min(r_plus, total - r_plus)
    hi = max(r_plus, total - r_plus)
    tail = sum(counts[:lo + 1]) + sum(counts[hi:])
    return min(1.0, tail / (1 << n))


def wilcoxon_signed_rank(a, b, alpha: float = 0.05) -> WilcoxonResult:
    """Paired two-sided signed-rank test of a against b.

    Differences a_i - b_i of zero are discarded; |d| is ranked ascending with
    mid-ranks for ties. The verdict is "equal" when p >= alpha, otherwise
    "plus" when the positive rank sum dominates and "minus" when the negative
    one does.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1 or a.size < 1:
        raise ValueError("need equal-length 1-d samples with n >= 1")
    d = a - b
    d = d[d != 0.0]
    n = d.size
    if n == 0:
        return WilcoxonResult(0.0, 0.0, 0, 1.0, "exact", "equal")

    absd = np.abs(d)
    ranks = _midranks(absd)
    r_plus = float(ranks[d > 0].sum())
    r_minus = float(ranks[d < 0].sum())

    distinct = np.unique(absd).size == n
    if distinct and n <= 30:
        p = _exact_two_sided_p(n, int(round(r_plus)))
        method = "exact"
    else:
        mu = n * (n + 1) / 4.0
        _, tie_counts = np.unique(absd, return_counts=True)
        var = n * (n + 1) * (2 * n + 1) / 24.0 - float(np.sum(tie_counts ** 3 - tie_counts)) / 48.0
        if var <= 0:
            p = 1.0
        else:
            delta = r_plus - mu
            z = (delta - 0.5 * np.sign(delta)) / math.sqrt(var)
            p = min(1.0, math.erfc(abs(z) / math.sqrt(2.0)))
        method = "normal-approx"

    if p >= alpha:
        verdict = "equal"
    else:
        verdict = "plus" if r_plus > r_minus else "minus"
    return WilcoxonResult(r_plus, r_minus, n, p, method, verdict)


def verdict_summary(results) -> tuple[int, int, int]:
    """Count (plus, equal, minus) verdicts across a list of comparisons."""
    plus = sum(1 for r in results if r.verdict == "plus")
    equal = sum(1 for r in results if r.verdict == "equal")
    minus = sum(1 for r in results if r.verdict == "minus")
    return plus, equal, minus
