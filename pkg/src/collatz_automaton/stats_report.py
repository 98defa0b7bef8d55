"""One-pass moments, histograms and normal Q-Q pairs for drift samples.

Moments are population (biased) moments and kurtosis is reported as excess
kurtosis, so a normal sample gives 0.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from statistics import NormalDist
from typing import Iterable, Sequence, TextIO


@dataclass
class MomentAccumulator:
    """Running count, mean and central moment sums ``m2, m3, m4``."""

    count: int = 0
    mean: float = 0.0
    m2: float = 0.0
    m3: float = 0.0
    m4: float = 0.0

    def push(self, x: float) -> "MomentAccumulator":
        if not math.isfinite(x):
            raise ValueError(f"non-finite sample {x!r}")
        n1 = self.count
        n = n1 + 1
        delta = x - self.mean
        delta_n = delta / n
        delta_n2 = delta_n * delta_n
        term1 = delta * delta_n * n1
        self.mean += delta_n
        self.m4 += term1 * delta_n2 * (n * n - 3 * n + 3) + 6 * delta_n2 * self.m2 - 4 * delta_n * self.m3
        self.m3 += term1 * delta_n * (n - 2) - 3 * delta_n * self.m2
        self.m2 += term1
        self.count = n
        return self

    def extend(self, xs: Iterable[float]) -> "MomentAccumulator":
        for x in xs:
            self.push(x)
        return self

    def merge(self, other: "MomentAccumulator") -> "MomentAccumulator":
        return merge(self, other)

    def finalize(self) -> "MomentSummary":
        return finalize(self)


def merge(a: MomentAccumulator, b: MomentAccumulator) -> MomentAccumulator:
    """Combine two accumulators as if both streams went into one."""
    if a.count == 0:
        return MomentAccumulator(b.count, b.mean, b.m2, b.m3, b.m4)
    if b.count == 0:
        return MomentAccumulator(a.count, a.mean, a.m2, a.m3, a.m4)
    na, nb = a.count, b.count
    n = na + nb
    delta = b.mean - a.mean
    d_n = delta / n
    mean = a.mean + nb * d_n
    m2 = a.m2 + b.m2 + delta * d_n * na * nb
    m3 = (a.m3 + b.m3
          + delta * d_n * d_n * na * nb * (na - nb)
          + 3 * d_n * (na * b.m2 - nb * a.m2))
    m4 = (a.m4 + b.m4
          + delta * d_n ** 3 * na * nb * (na * na - na * nb + nb * nb)
          + 6 * d_n * d_n * (na * na * b.m2 + nb * nb * a.m2)
          + 4 * d_n * (na * b.m3 - nb * a.m3))
    return MomentAccumulator(n, mean, m2, m3, m4)


@dataclass(frozen=True)
class MomentSummary:
    count: int
    mean: float | None
    sd: float | None
    skewness: float | None
    excess_kurtosis: float | None

    def as_row(self) -> tuple:
        return tuple("" if v is None else v for v in
                     (self.count, self.mean, self.sd, self.skewness, self.excess_kurtosis))


SUMMARY_HEADER = ("count", "mean", "sd", "skew", "exkurt")


def finalize(acc: MomentAccumulator) -> MomentSummary:
    """Population moments; fields needing more samples than available are None."""
    n = acc.count
    mean = acc.mean if n >= 1 else None
    sd = math.sqrt(acc.m2 / n) if n >= 2 else None
    skew = kurt = None
    # sd**k can underflow to 0 for tiny but nonzero spreads; shape is then undefined too
    if sd and n >= 3 and sd ** 3:
        skew = (acc.m3 / n) / sd ** 3
    if sd and n >= 4 and sd ** 4:
        kurt = (acc.m4 / n) / sd ** 4 - 3.0
    return MomentSummary(n, mean, sd, skew, kurt)


def histogram(values: Iterable[float], bin_width: float, origin: float = 0.0) -> list[tuple[float, int]]:
    """Counts per bin ``[origin + k w, origin + (k+1) w)``, contiguous from the lowest to the highest occupied bin."""
    if not bin_width > 0:
        raise ValueError(f"bin_width must be positive, got {bin_width}")
    counts: dict[int, int] = {}
    for x in values:
        k = math.floor((x - origin) / bin_width)
        counts[k] = counts.get(k, 0) + 1
    if not counts:
        return []
    return [(origin + k * bin_width, counts.get(k, 0)) for k in range(min(counts), max(counts) + 1)]


def qq_points(values: Iterable[float], mu: float, sigma: float, k: int) -> list[tuple[float, float]]:
    """Pairs (normal quantile, empirical quantile) at p = (i - 0.5) / k, i = 1..k.

    Empirical quantiles use the nearest-rank rule on the sorted sample.
    """
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    if k < 1:
        raise ValueError("k must be >= 1")
    data = sorted(values)
    if not data:
        raise ValueError("empty sample")
    normal = NormalDist(mu, sigma)
    size = len(data)
    pairs = []
    for i in range(1, k + 1):
        p = (i - 0.5) / k
        rank = max(1, math.ceil(p * size))
        pairs.append((normal.inv_cdf(p), data[rank - 1]))
    return pairs


def write_csv(out: TextIO, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(["" if v is None else _fmt(v) for v in row])


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return v
