"""Sampling-based approximate butterfly counting.

Each edge survives independently with probability p; a butterfly survives
iff its four edges do, so exact-counting the sample and scaling by p**-4
gives an unbiased estimate.  The exact counter is an injected dependency
(the cache-aware engine by default), and all randomness flows through a
seeded generator so trials replay bit-for-bit.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .exact import CountReport, count_vpp, prepare_vpp
from .graph import BipartiteGraph

SEED_STRIDE = 1_000_003

Counter = Callable[[BipartiteGraph], CountReport]


def _default_counter(g: BipartiteGraph) -> CountReport:
    prepared, p2, _ = prepare_vpp(g)
    return count_vpp(prepared, p2)


def _check_probability(p: float) -> None:
    if not 0.0 < p <= 1.0:
        raise ValueError(f"sampling probability must be in (0, 1], got {p}")


def sparsify(g: BipartiteGraph, p: float, seed: int) -> BipartiteGraph:
    """Keep each edge independently with probability p (seeded, so the
    same seed reproduces the same subset).  The vertex set is unchanged."""
    _check_probability(p)
    rng = random.Random(seed)
    kept = [edge for edge in g.edges if rng.random() < p]
    return g.replace_edges(kept)


def estimate_butterflies(g: BipartiteGraph, p: float, seed: int,
                         counter: Counter = _default_counter) -> Fraction:
    """Unbiased estimate: exact count of the sample divided by p**4.

    Returned as an exact rational; with p = 1 it equals the exact count.
    """
    _check_probability(p)
    report = counter(sparsify(g, p, seed))
    return Fraction(report.butterflies) / Fraction(p) ** 4


@dataclass
class TrialSet:
    """Estimates from repeated independent sparsification trials."""

    estimates: list[Fraction]
    wedges: list[int]
    p: float
    seed: int
    trials: int


@dataclass
class TrialSummary:
    p: float
    trials: int
    mean: Fraction
    variance: Fraction
    exact: int | None = None
    relative_error: Fraction | None = None

    def to_dict(self) -> dict:
        out = {"p": self.p, "trials": self.trials, "mean": float(self.mean),
               "variance": float(self.variance)}
        if self.exact is not None:
            out["exact"] = self.exact
        if self.relative_error is not None:
            out["relative_error"] = float(self.relative_error)
        return out


def run_trials(g: BipartiteGraph, p: float, trials: int, seed: int,
               counter: Counter = _default_counter,
               with_exact: bool = True) -> tuple[TrialSet, TrialSummary]:
    """Run seeded trials (trial i uses seed*stride + i) and summarize.

    The summary holds the mean and the n-1 sample variance (0 for a single
    trial); when ``with_exact`` is set, the exact count and the relative
    error of the mean are included (error is omitted for a zero exact
    count).
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    _check_probability(p)
    estimates: list[Fraction] = []
    wedges: list[int] = []
    scale = Fraction(p) ** 4
    for i in range(trials):
        sample = sparsify(g, p, seed * SEED_STRIDE + i)
        report = counter(sample)
        estimates.append(Fraction(report.butterflies) / scale)
        wedges.append(report.wedges_processed)
    mean = sum(estimates, Fraction(0)) / trials
    if trials > 1:
        variance = sum((e - mean) ** 2 for e in estimates) / (trials - 1)
    else:
        variance = Fraction(0)
    exact = None
    relative_error = None
    if with_exact:
        exact = counter(g).butterflies
        if exact:
            relative_error = abs(mean - exact) / exact
    trial_set = TrialSet(estimates, wedges, p, seed, trials)
    summary = TrialSummary(p, trials, mean, variance, exact, relative_error)
    return trial_set, summary
