"""Invariant suites behind ``verify-all``."""

from __future__ import annotations

import itertools
import logging
from functools import reduce
from typing import Callable, NamedTuple

from . import binary_blocks as bb
from .binary_fsm import growth_predict, symbolic_length
from .fsm_graph import (NULL_STATE, TERMINAL_CYCLE, build_table, default_reference_path,
                        descent_report, div_targets, mul_targets, ranking, verify_table)
from .oracle import return_time
from .scans import emulation_chunk, run_chunks
from .symbolic_core import (UndefinedTransition, decode, delta_even, encode, lookup_even,
                            symbolic_step)

log = logging.getLogger(__name__)


class CheckResult(NamedTuple):
    name: str
    ok: bool
    detail: str


def _first(items, k=5) -> str:
    """`` (a, b, ...)`` listing up to ``k`` items, or an empty string."""
    items = list(items)
    if not items:
        return ""
    tail = ", ..." if len(items) > k else ""
    return " (" + ", ".join(str(x) for x in items[:k]) + tail + ")"


def check_emulation(limit: int, workers: int = 1) -> list[CheckResult]:
    tally = reduce(lambda a, b: a + b, run_chunks(emulation_chunk, 1, limit, workers))
    return [
        CheckResult("oracle equivalence", not tally.mismatches,
                    f"{tally.checked} values, {len(tally.mismatches)} mismatches{_first(tally.mismatches)}"),
        CheckResult("carry bound", not tally.bad_carries,
                    f"max carry {tally.max_carry}, {len(tally.bad_carries)} violations"),
        CheckResult("digit emergence", not tally.bad_new_digits,
                    f"{tally.growth_steps} growing steps, {len(tally.bad_new_digits)} with top digit not in {{1,2}}"),
    ]


def check_round_trip(limit: int) -> CheckResult:
    bad = [n for n in range(1, limit + 1) if decode(encode(n)) != n]
    return CheckResult("encode/decode round trip", not bad, f"{len(bad)} failures{_first(bad)}")


def check_lookup_agreement() -> CheckResult:
    compared = 0
    bad = []
    for r, p, c in itertools.product(range(10), range(2), range(3)):
        try:
            closed = delta_even(r, p, c)
            table = lookup_even(r, p, c)
        except UndefinedTransition:
            continue
        compared += 1
        if closed != table:
            bad.append((r, p, c))
    return CheckResult("lookup vs closed form", not bad, f"{compared} states compared, {len(bad)} differ")


def terminal_failures(limit: int, budget: int = bb.DEFAULT_BUDGET) -> list[int]:
    """Starting values in [1, limit] whose symbolic orbit misses 1 or does not end 4, 2, 1.

    A walk stops early at any value >= 4 already shown to end in 4, 2, 1,
    since the rest of the orbit is then known.
    """
    good: set[int] = set()
    bad = []
    for n in range(1, limit + 1):
        path = [n]
        value = n
        while value != 1 and value not in good and len(path) <= budget:
            value = symbolic_step(value)
            path.append(value)
        if value in good:
            ok = True
        elif value == 1:
            tail = [4, 2, 1][-min(3, len(path)):]
            ok = path[-len(tail):] == tail
        else:
            ok = False
        if ok:
            good.update(v for v in path if v >= 4)
        else:
            bad.append(n)
    return bad


def check_terminal(limit: int, budget: int = bb.DEFAULT_BUDGET) -> CheckResult:
    bad = terminal_failures(limit, budget)
    return CheckResult("terminal cycle", not bad, f"{limit} orbits, {len(bad)} failures{_first(bad)}")


def check_table() -> list[CheckResult]:
    table = build_table()
    mismatches = verify_table(table, default_reference_path())
    rho = ranking(table)
    unreachable = [s for s, v in rho.items() if v is None]
    descent = descent_report(table, rho)
    zero = sorted(s for s, v in rho.items() if v == 0)
    null_closed = NULL_STATE in div_targets(NULL_STATE) and NULL_STATE in mul_targets(NULL_STATE)
    targets_clean = all(t.c == 0 for s in table for t in table.successors(s))
    return [
        CheckResult("transition table exactness", not mismatches,
                    f"{len(mismatches)} mismatches{_first(m.state for m in mismatches)}"),
        CheckResult("ranking reachability", not unreachable, f"{len(unreachable)} unreachable states"),
        CheckResult("ranking zero set", set(zero) == set(TERMINAL_CYCLE), f"rank-0 states{_first(zero)}"),
        CheckResult("ranking descent structure", not descent.without_descent and not descent.shortcuts,
                    f"{descent.increasing}/{descent.edges} edges raise the rank (reported only)"),
        CheckResult("null state closure", null_closed, ""),
        CheckResult("targets carry zero", targets_clean, ""),
    ]


def check_block_identity(limit: int) -> CheckResult:
    bad = []
    for n in range(1, limit + 1, 2):
        length = symbolic_length(n)
        if length.truncated or length.l_classical != return_time(n):
            bad.append(n)
    return CheckResult("block/step identity", not bad, f"{len(bad)} failures{_first(bad)}")


def check_bit_growth(limit: int) -> CheckResult:
    bad = [n for n in range(1, limit + 1, 2) if not bb.bit_growth_check(n).ok]
    return CheckResult("bit-length growth bound", not bad, f"{len(bad)} violations")


def check_growth_predict(limit: int) -> CheckResult:
    bad = [n for n in range(1, limit + 1, 2)
           if growth_predict(n) != (3 * n + 1).bit_length() - n.bit_length()]
    return CheckResult("growth prediction", not bad, f"{len(bad)} disagreements")


def check_worst_case_drift(k_max: int = 20) -> CheckResult:
    bad = [k for k in range(2, k_max + 1)
           if bb.drift(2 ** k - 1).w > k * bb.LOG2_3_4 + 1e-9]
    return CheckResult("worst-case drift", not bad, f"k in [2,{k_max}], {len(bad)} violations{_first(bad)}")


def check_energy(limit: int) -> CheckResult:
    report = bb.energy_descent_scan(limit)
    return CheckResult("energy descent", report.violation_count == 0,
                       f"{len(report.samples)} blocks, {report.violation_count} violations"
                       f"{_first(report.violations)}")


def run_all(limit: int, workers: int = 1) -> list[CheckResult]:
    suites: list[Callable[[], list[CheckResult] | CheckResult]] = [
        lambda: check_emulation(limit, workers),
        lambda: check_round_trip(limit),
        check_lookup_agreement,
        lambda: check_terminal(limit),
        check_table,
        lambda: check_block_identity(limit),
        lambda: check_bit_growth(limit),
        lambda: check_growth_predict(limit),
        check_worst_case_drift,
        lambda: check_energy(max(limit, 3)),
    ]
    results: list[CheckResult] = []
    for suite in suites:
        out = suite()
        batch = out if isinstance(out, list) else [out]
        for res in batch:
            log.info("%s: %s", res.name, "ok" if res.ok else "FAILED")
        results.extend(batch)
    return results
