"""Range scans split into chunks, optionally spread over worker processes.

Chunk functions are module-level so they pickle; their results merge with
associative operations, so the answer does not depend on the worker count.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, TypeVar

from .binary_blocks import LOG2_3_2, t3_block, trailing_zeros
from .oracle import collatz
from .stats_report import MomentAccumulator, merge
from .symbolic_core import step_detail, symbolic_step

log = logging.getLogger(__name__)

T = TypeVar("T")


def default_workers() -> int:
    return os.cpu_count() or 1


def chunk_bounds(lo: int, hi: int, pieces: int) -> list[tuple[int, int]]:
    """Split the inclusive range [lo, hi] into at most ``pieces`` inclusive sub-ranges."""
    if hi < lo:
        return []
    pieces = max(1, min(pieces, hi - lo + 1))
    size, extra = divmod(hi - lo + 1, pieces)
    out = []
    start = lo
    for k in range(pieces):
        end = start + size + (k < extra) - 1
        out.append((start, end))
        start = end + 1
    return out


def run_chunks(func: Callable[[int, int], T], lo: int, hi: int, workers: int = 1) -> list[T]:
    """Apply ``func(a, b)`` to sub-ranges of [lo, hi]; results come back in range order."""
    bounds = chunk_bounds(lo, hi, max(1, workers) * 4)
    if workers <= 1 or len(bounds) == 1:
        return [func(a, b) for a, b in bounds]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(func, a, b) for a, b in bounds]
        results = []
        for k, fut in enumerate(futures):
            results.append(fut.result())
            log.info("chunk %d/%d done", k + 1, len(futures))
        return results


@dataclass
class EmulationTally:
    checked: int = 0
    mismatches: tuple[int, ...] = ()
    bad_carries: tuple[int, ...] = ()
    max_carry: int = 0
    growth_steps: int = 0
    bad_new_digits: tuple[int, ...] = ()

    def __add__(self, other: "EmulationTally") -> "EmulationTally":
        return EmulationTally(
            self.checked + other.checked,
            self.mismatches + other.mismatches,
            self.bad_carries + other.bad_carries,
            max(self.max_carry, other.max_carry),
            self.growth_steps + other.growth_steps,
            self.bad_new_digits + other.bad_new_digits,
        )


def emulation_chunk(lo: int, hi: int) -> EmulationTally:
    """Compare both digitwise step paths with plain arithmetic for every n in [lo, hi]."""
    mismatches, bad_carries, bad_new = [], [], []
    max_carry = growth = 0
    for n in range(lo, hi + 1):
        detail = step_detail(n)
        expected = collatz(n)
        if detail.result != expected or symbolic_step(n) != expected:
            mismatches.append(n)
        top = max(detail.carries)
        if top > max_carry:
            max_carry = top
        if top > 2 or min(detail.carries) < 0:
            bad_carries.append(n)
        if detail.grew:
            growth += 1
            if detail.top_digit not in (1, 2):
                bad_new.append(n)
    return EmulationTally(hi - lo + 1, tuple(mismatches), tuple(bad_carries), max_carry,
                          growth, tuple(bad_new))


@dataclass
class DriftChunk:
    w: MomentAccumulator
    to: MomentAccumulator
    tz: MomentAccumulator
    values: list[float]

    def __add__(self, other: "DriftChunk") -> "DriftChunk":
        return DriftChunk(merge(self.w, other.w), merge(self.to, other.to),
                          merge(self.tz, other.tz), self.values + other.values)


def drift_chunk(lo: int, hi: int) -> DriftChunk:
    """Drift, to(n) and tz(n') accumulators over the odd n in [lo, hi]."""
    acc_w, acc_to, acc_tz = MomentAccumulator(), MomentAccumulator(), MomentAccumulator()
    values = []
    for n in range(lo | 1, hi + 1, 2):
        k, n_prime = t3_block(n)
        m = trailing_zeros(n_prime)
        w = k * LOG2_3_2 - m
        values.append(w)
        acc_w.push(w)
        acc_to.push(k)
        acc_tz.push(m)
    return DriftChunk(acc_w, acc_to, acc_tz, values)


def drift_statistics(n_limit: int, workers: int = 1) -> DriftChunk:
    """Drift over odd n in [3, n_limit], merged across chunks."""
    if n_limit < 3:
        raise ValueError("need n_limit >= 3 (no odd n >= 3 below it)")
    parts = run_chunks(drift_chunk, 3, n_limit, workers)
    total = parts[0]
    for part in parts[1:]:
        total = total + part
    return total
