"""Binary view of Collatz orbits: trailing-bit blocks, drift, energy, peaks.

An odd ``n`` with ``to(n)`` trailing ones goes through exactly ``to(n)``
compressed odd steps ``(3n + 1) / 2`` before it turns even; the even value
reached then loses ``tz`` trailing zeros to halving.  One such pair of phases
is a block.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, NamedTuple

from .oracle import DEFAULT_BUDGET

LOG2_3_2 = math.log2(1.5)
LOG2_3_4 = math.log2(0.75)


def trailing_zeros(n: int) -> int:
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    return (n & -n).bit_length() - 1


def trailing_ones(n: int) -> int:
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    return trailing_zeros(n + 1)


def bit_length(n: int) -> int:
    return n.bit_length()


def t3(n: int) -> int:
    """The compressed odd step ``(3n + 1) / 2``."""
    if n % 2 == 0:
        raise ValueError(f"t3 needs an odd argument, got {n}")
    return (3 * n + 1) // 2


def t3_block(n: int) -> tuple[int, int]:
    """Apply ``t3`` ``to(n)`` times; returns ``(to(n), n')``."""
    k = trailing_ones(n)
    for _ in range(k):
        n = t3(n)
    return k, n


class BlockRecord(NamedTuple):
    to_count: int
    tz_count: int
    n_start: int
    n_prime: int

    @property
    def classical_steps(self) -> int:
        return 2 * self.to_count + self.tz_count


@dataclass(frozen=True)
class BlockTrace:
    blocks: tuple[BlockRecord, ...]
    truncated: bool

    @property
    def classical_steps(self) -> int:
        return sum(b.classical_steps for b in self.blocks)

    @property
    def symbolic_length(self) -> int:
        return sum(b.to_count + b.tz_count for b in self.blocks)

    def pairs(self) -> list[tuple[int, int]]:
        return [(b.to_count, b.tz_count) for b in self.blocks]


def block_decompose(n: int, budget: int = DEFAULT_BUDGET) -> BlockTrace:
    """Split the orbit of odd ``n`` into (T3-block, T2-block) pairs down to 1.

    ``budget`` caps the number of classical steps; the trace is flagged as
    truncated when it runs out.  ``n = 1`` yields the single block of the
    loop 1 -> 4 -> 2 -> 1.
    """
    if n < 1 or n % 2 == 0:
        raise ValueError(f"block_decompose needs odd n >= 1, got {n}")
    blocks = []
    steps = 0
    value = n
    while True:
        k, n_prime = t3_block(value)
        m = trailing_zeros(n_prime)
        blocks.append(BlockRecord(k, m, value, n_prime))
        steps += 2 * k + m
        value = n_prime >> m
        if value == 1:
            return BlockTrace(tuple(blocks), False)
        if steps >= budget:
            return BlockTrace(tuple(blocks), True)


class DriftSample(NamedTuple):
    n: int
    w: float


def drift(n: int) -> DriftSample:
    """Net bit-length change of the first block of odd ``n``."""
    if n < 1 or n % 2 == 0:
        raise ValueError(f"drift needs odd n >= 1, got {n}")
    k, n_prime = t3_block(n)
    return DriftSample(n, k * LOG2_3_2 - trailing_zeros(n_prime))


def block_parts(n: int) -> tuple[int, int]:
    """``(to(n), tz(n'))`` for odd ``n``."""
    k, n_prime = t3_block(n)
    return k, trailing_zeros(n_prime)


def drift_samples(n_limit: int, start: int = 3) -> Iterator[DriftSample]:
    """Drift of every odd n in [start, n_limit]."""
    first = start | 1
    for n in range(first, n_limit + 1, 2):
        yield drift(n)


def energy(n: int, n0: int) -> float:
    """Energy ``log2(n)/log2(n0) + to(n) - tz(n)`` of ``n`` relative to ``n0``."""
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    if n0 < 2:
        raise ValueError("n0 must be >= 2 (log2(n0) = 0 otherwise)")
    return math.log2(n) / math.log2(n0) + trailing_ones(n) - trailing_zeros(n)


def energy_delta(n: int) -> float:
    """Energy change across the T3-block of odd ``n >= 3``, with ``n0 = n``."""
    _, n_prime = t3_block(n)
    return energy(n_prime, n) - energy(n, n)


@dataclass(frozen=True)
class EnergyReport:
    samples: tuple[tuple[int, float], ...]
    violations: tuple[tuple[int, float], ...]

    @property
    def violation_count(self) -> int:
        return len(self.violations)


def energy_descent_scan(range_max: int) -> EnergyReport:
    """Energy change for every odd n in [3, range_max]; non-negative ones are violations."""
    if range_max < 3:
        raise ValueError("range_max must be >= 3")
    samples = tuple((n, energy_delta(n)) for n in range(3, range_max + 1, 2))
    return EnergyReport(samples, tuple(s for s in samples if s[1] >= 0))


class BitGrowth(NamedTuple):
    beta_in: int
    beta_out: int
    ok: bool


def bit_growth_check(n: int) -> BitGrowth:
    if n < 1 or n % 2 == 0:
        raise ValueError(f"bit_growth_check needs odd n >= 1, got {n}")
    beta_in, beta_out = n.bit_length(), (3 * n + 1).bit_length()
    return BitGrowth(beta_in, beta_out, beta_out <= beta_in + 2)


@dataclass(frozen=True)
class OrbitMetrics:
    n: int
    t_end: int
    L_peak: int
    t_peak: int
    L_end: int
    T_eff: Fraction | None
    constraint_holds: bool
    truncated: bool = False

    def as_row(self) -> tuple:
        t_eff = "" if self.T_eff is None else f"{float(self.T_eff):.6g}"
        return (self.n, self.t_end, self.L_peak, self.t_peak, t_eff,
                int(self.constraint_holds), int(self.truncated))


ORBIT_METRICS_HEADER = ("n", "t_end", "L_peak", "t_peak", "T_eff", "constraint", "truncated")


def orbit_metrics(n: int, budget: int = DEFAULT_BUDGET) -> OrbitMetrics:
    """Peak-position statistics of the orbit of ``n``.

    The inequality ``t_peak <= 2 (L_peak - 1)`` is evaluated and reported in
    ``constraint_holds``; nothing here assumes it.
    """
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    value = n
    t = 0
    L_peak = len(str(n))
    t_peak = 0
    while value != 1 and t < budget:
        value = value // 2 if value % 2 == 0 else 3 * value + 1
        t += 1
        digits = len(str(value))
        if digits > L_peak:
            L_peak, t_peak = digits, t
    L_end = len(str(value))
    T_eff = Fraction(t - t_peak, L_peak - L_end) if L_peak != L_end else None
    return OrbitMetrics(n, t, L_peak, t_peak, L_end, T_eff,
                        t_peak <= 2 * (L_peak - 1), value != 1)


class BitRow(NamedTuple):
    step: int
    value: int
    bits: str
    bit_count: int
    tz: int


@dataclass(frozen=True)
class BitTable:
    rows: tuple[BitRow, ...]
    truncated: bool


def bit_table(n: int, budget: int = DEFAULT_BUDGET) -> BitTable:
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    rows = []
    value, step = n, 0
    while True:
        rows.append(BitRow(step, value, format(value, "b"), value.bit_length(),
                           trailing_zeros(value)))
        if value == 1 or step >= budget:
            break
        value = value // 2 if value % 2 == 0 else 3 * value + 1
        step += 1
    return BitTable(tuple(rows), value != 1)
