"""Acceptance criteria, one PASS/FAIL line each.

``python3 tests/test_acceptance.py`` prints the report on its own; under
pytest every criterion is a test and the lines are repeated in the terminal
summary.  A failing line shows the measured value next to the expected one.
"""

from __future__ import annotations

import contextlib
import io
import math
import sys
import time
from functools import lru_cache, reduce

import pytest

from collatz_automaton import affine, binary_blocks as bb, binary_fsm as bf, stats_report as sr
from collatz_automaton.cli import main as cli_main
from collatz_automaton.fsm_graph import build_table, default_reference_path, parse_reference, verify_table
from collatz_automaton.oracle import collatz, orbit, return_time
from collatz_automaton.scans import default_workers, drift_statistics, emulation_chunk, run_chunks
from collatz_automaton.symbolic_core import (DigitState, UndefinedTransition, decode, delta_even, encode,
                                             lookup_even, step_detail, symbolic_trajectory)
from collatz_automaton.verify import terminal_failures

RESULTS: dict[int, str] = {}
WORKERS = default_workers()


def record(num: int, title: str, ok: bool, detail: str) -> bool:
    line = f"[{'PASS' if ok else 'FAIL'}] {num:2d}. {title}: {detail}"
    RESULTS[num] = line
    print(line)
    return ok


def within(measured: float, target: float, tol: float) -> bool:
    return abs(measured - target) <= tol


# -- shared scans -------------------------------------------------------------

@lru_cache(maxsize=None)
def emulation_run():
    start = time.perf_counter()
    parts = run_chunks(emulation_chunk, 1, 10**6, WORKERS)
    return reduce(lambda a, b: a + b, parts), time.perf_counter() - start


@lru_cache(maxsize=None)
def drift_run():
    start = time.perf_counter()
    stats = drift_statistics(10**6, WORKERS)
    return stats, time.perf_counter() - start


# -- criteria -----------------------------------------------------------------

def criterion_1() -> bool:
    tally, elapsed = emulation_run()
    ok = tally.checked == 10**6 and not tally.mismatches and elapsed < 60
    return record(1, "oracle equivalence", ok,
                  f"n in [1, 10^6]: {len(tally.mismatches)} mismatches, {elapsed:.1f} s on {WORKERS} worker(s)")


def criterion_2() -> bool:
    table = build_table()
    reference = parse_reference(default_reference_path())
    mismatches = verify_table(table, default_reference_path())
    ok = len(reference) == 60 and not mismatches
    return record(2, "transition-table exactness", ok,
                  f"{len(reference)} states compared (div and mul), {len(mismatches)} mismatches")


def criterion_3() -> bool:
    tally, _ = emulation_run()
    ok = not tally.bad_carries and tally.max_carry <= 2
    return record(3, "carry bound", ok,
                  f"max carry {tally.max_carry}, {len(tally.bad_carries)} values with a carry outside {{0,1,2}}")


def criterion_4() -> bool:
    limit = 10**5
    failures = terminal_failures(limit)
    visited: set[int] = set()
    for n in range(1, limit + 1):
        v = n
        while v not in visited:
            visited.add(v)
            if v == 1:
                break
            v = collatz(v)
    growth = bad_top = 0
    for v in visited:
        if v % 2:
            d = step_detail(v)
            if d.grew:
                growth += 1
                bad_top += d.top_digit not in (1, 2)
    ok = not failures and bad_top == 0
    return record(4, "terminal behaviour", ok,
                  f"{limit} orbits, {len(failures)} not ending 4,2,1; {growth} digit-count increases "
                  f"over {len(visited)} visited values, {bad_top} with top digit outside {{1,2}}")


DRIFT_TARGETS = {  # name: (target, tolerance)
    "mean": (-0.83008, 0.02),
    "sd": (1.638, 0.05),
    "skew": (-1.09, 0.15),
    "exkurt": (4.03, 0.40),
    "E[to]": (2.0, 0.01),
    "E[tz]": (2.00, 0.05),
}


def drift_measured() -> dict[str, float]:
    stats, _ = drift_run()
    s = stats.w.finalize()
    return {"mean": s.mean, "sd": s.sd, "skew": s.skewness, "exkurt": s.excess_kurtosis,
            "E[to]": stats.to.mean, "E[tz]": stats.tz.mean}


def criterion_5() -> bool:
    _, elapsed = drift_run()
    measured = drift_measured()
    bad = [k for k, (target, tol) in DRIFT_TARGETS.items() if not within(measured[k], target, tol)]
    parts = ", ".join(f"{k}={measured[k]:.5f}" + ("" if k not in bad else f" (want {DRIFT_TARGETS[k][0]})")
                      for k in DRIFT_TARGETS)
    return record(5, "drift statistics", not bad and elapsed < 300,
                  f"odd n in [3, 10^6]: {parts}; {elapsed:.1f} s")


def criterion_6() -> bool:
    rows = [(k, bb.drift(2**k - 1).w, k * bb.LOG2_3_4) for k in range(2, 21)]
    bad = [(k, w, bound) for k, w, bound in rows if w > bound + 1e-9]
    example = ""
    if bad:
        k, w, bound = bad[0]
        example = f"; e.g. k={k}: w={w:.4f} > {bound:.4f}"
    return record(6, "worst-case drift bound", not bad,
                  f"k in [2, 20]: {len(bad)} of {len(rows)} exceed k*log2(3/4){example}")


def criterion_7() -> bool:
    bad = [n for n in range(1, 10**6 + 1, 2) if (3 * n + 1).bit_length() > n.bit_length() + 2]
    return record(7, "bit-length growth bound", not bad, f"odd n <= 10^6: {len(bad)} violations")


def criterion_8() -> bool:
    report = bb.energy_descent_scan(10**4)
    listed = ", ".join(f"n={n}: {d:+.4f}" for n, d in report.violations)
    return record(8, "energy descent", report.violation_count == 0,
                  f"odd n in [3, 10^4]: {report.violation_count} violations (expected 0){' ' + listed if listed else ''}")


def criterion_9() -> bool:
    bad = [n for n in range(1, 10**5 + 1, 2)
           if (ln := bf.symbolic_length(n)).truncated or ln.l_classical != return_time(n)]
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = cli_main(["blocks", "15", "-q"])
    lines = buf.getvalue().splitlines()
    blocks_ok = code == 0 and lines[-1].startswith('"(4,4),(1,3)",17,')
    return record(9, "block/step identity", not bad and blocks_ok,
                  f"odd n <= 10^5: {len(bad)} mismatches; `blocks 15` -> {lines[-1] if lines else '?'}")


STEP_27_ROWS = [  # i, r, p, c, r', p', c_next; p is 0 at the top digit
    (0, 7, 0, 0, 2, 0, 2),
    (1, 2, 0, 2, 8, 0, 0),
]
EVEN_32 = [(2, 1, 0, 6), (3, 0, 1, 1)]  # r, p, c, r'
TRAJECTORY_13 = [  # step, value, s1, s0
    (0, 13, (1, 0, 1), (3, 1, 0)),
    (1, 40, (4, 0, 0), (0, 0, 0)),
    (2, 20, (2, 0, 0), (0, 0, 0)),
    (3, 10, (1, 0, 0), (0, 1, 0)),
    (4, 5, (0, 0, 0), (5, 0, 0)),
    (5, 16, (1, 0, 0), (6, 1, 0)),
    (6, 8, (0, 0, 0), (8, 0, 0)),
    (7, 4, (0, 0, 0), (4, 0, 0)),
    (8, 2, (0, 0, 0), (2, 0, 0)),
    (9, 1, (0, 0, 0), (1, 0, 0)),
]
BITS_23 = [
    (0, 23, "10111", 5, 0), (1, 70, "1000110", 7, 1), (2, 35, "100011", 6, 0),
    (3, 106, "1101010", 7, 1), (4, 53, "110101", 6, 0), (5, 160, "10100000", 8, 5),
    (6, 80, "1010000", 7, 4), (7, 40, "101000", 6, 3), (8, 20, "10100", 5, 2),
    (9, 10, "1010", 4, 1), (10, 5, "101", 3, 0), (11, 16, "10000", 5, 4),
    (12, 8, "1000", 4, 3), (13, 4, "100", 3, 2), (14, 2, "10", 2, 1), (15, 1, "1", 1, 0),
]
DECODE_31 = [  # i, q, b, par(q), par(b), operation
    (0, 31, 94, 1, 0, "3n+1"), (1, 15, 47, 1, 1, "3n+2"), (2, 7, 23, 1, 1, "3n+2"),
    (3, 3, 11, 1, 1, "3n+2"), (4, 1, 5, 1, 1, "3n+2"), (5, 0, 2, 0, 0, "induced"),
    (6, 0, 1, 0, 1, "induced"),
]


def examples_checked() -> dict[str, bool]:
    d27 = step_detail(27)
    d32 = step_detail(32)
    traj = symbolic_trajectory(13)
    null = DigitState(0, 0, 0)
    traj_rows = [(row.step, row.value, (row.states + (null,))[1], row.states[0]) for row in traj.rows]
    dec = bf.quotient_decode(31)
    dec_rows = [(r.i, r.q, r.b, r.parity_q, r.parity_b, r.symbol.value) for r in dec.rows]
    seq = [s.short for s in dec.symbols if s is not bf.Symbol.INDUCED]
    return {
        "T(27)": d27.result == 82 and [tuple(r) for r in d27.rows] == STEP_27_ROWS,
        "T(32)": d32.result == 16 and [(r.r, r.p, r.c, r.r_out) for r in d32.rows] == EVEN_32,
        "n=13 states": traj_rows == TRAJECTORY_13,
        "n=23 bits": [tuple(r) for r in bb.bit_table(23).rows] == BITS_23,
        "n=31 decoding": dec_rows == DECODE_31 and seq == ["+1", "+2", "+2", "+2", "+2"],
        "161 growth": bf.growth_predict(161) == 1,
    }


def criterion_10() -> bool:
    checks = examples_checked()
    bad = [k for k, ok in checks.items() if not ok]
    return record(10, "worked examples", not bad,
                  f"{len(checks) - len(bad)}/{len(checks)} exact" + (f"; differing: {', '.join(bad)}" if bad else ""))


def affine_rows() -> list[affine.DriftScanRow]:
    rows = [affine.scan_multiplier(3, 10**6)]
    rows += affine.drift_scan(range(5, 50, 2), 10**5)
    return rows


def criterion_11() -> bool:
    rows = affine_rows()
    a3 = rows[0]
    mean5 = drift_measured()["mean"]
    negatives = [r.a for r in rows if r.empirical_mean < 0]
    ok = within(a3.empirical_mean, mean5, 1e-9) and within(a3.empirical_mean, -0.83008, 0.02) and negatives == [3]
    for r in rows[1:]:
        print(f"      a={r.a:2d}: empirical {r.empirical_mean:+.4f}  theoretical {r.theoretical_mean:+.4f}")
    return record(11, "affine drift scan", ok,
                  f"a=3 mean {a3.empirical_mean:.5f} (criterion 5: {mean5:.5f}); "
                  f"negative means for a in {negatives}; {len(rows) - 1} rows for a in [5, 49]")


def criterion_12() -> bool:
    metrics = [bb.orbit_metrics(n) for n in range(1, 10**4 + 1)]
    inconsistent = []
    for m in metrics:
        lengths = [len(str(v)) for v in orbit(m.n)]
        if not (m.t_peak <= m.t_end == len(lengths) - 1 and m.L_peak == max(lengths)
                and lengths.index(m.L_peak) == m.t_peak
                and m.constraint_holds == (m.t_peak <= 2 * (m.L_peak - 1))):
            inconsistent.append(m.n)
    violations = sum(not m.constraint_holds for m in metrics)
    m23 = metrics[22]
    named = (m23.t_end, m23.L_peak, m23.t_peak, m23.T_eff) == (15, 3, 3, 6)
    return record(12, "peak-position report", not inconsistent and named,
                  f"{len(metrics)} orbits, {len(inconsistent)} inconsistent rows, {violations} orbits with "
                  f"t_peak > 2(L_peak-1); n=23: t_end={m23.t_end}, L_peak={m23.L_peak}, t_peak={m23.t_peak}, "
                  f"T_eff={m23.T_eff}")


def criterion_13() -> bool:
    # round trip
    round_trip = [n for n in range(1, 10**5 + 1) if decode(encode(n)) != n or decode(encode(n).states) != n]
    # lookup table vs closed form on every state where the even rule is defined
    compared = lookup_bad = 0
    for r in range(10):
        for p in (0, 1):
            for c in (0, 1, 2):
                try:
                    closed = delta_even(r, p, c)
                except UndefinedTransition:
                    continue
                compared += 1
                lookup_bad += lookup_even(r, p, c) != closed
    # merge at every split point of a drift stream equals the single pass
    values = [bb.drift(n).w for n in range(3, 4003, 2)]
    whole = sr.MomentAccumulator().extend(values)
    prefixes = [sr.MomentAccumulator()]
    for x in values:
        prev = prefixes[-1]
        prefixes.append(sr.MomentAccumulator(prev.count, prev.mean, prev.m2, prev.m3, prev.m4).push(x))
    suffixes = [sr.MomentAccumulator()]
    for x in reversed(values):
        prev = suffixes[-1]
        suffixes.append(sr.MomentAccumulator(prev.count, prev.mean, prev.m2, prev.m3, prev.m4).push(x))
    suffixes.reverse()
    merge_bad = 0
    for k in range(len(values) + 1):
        m = sr.merge(prefixes[k], suffixes[k])
        merge_bad += m.count != whole.count or any(
            not math.isclose(getattr(m, f), getattr(whole, f), rel_tol=1e-9, abs_tol=1e-9)
            for f in ("mean", "m2", "m3", "m4"))
    # histogram conservation across bin widths and origins
    hist_bad = sum(sum(c for _, c in sr.histogram(values, w, o)) != len(values)
                   for w in (0.05, 0.25, 1.0, 3.0) for o in (0.0, 0.1, -0.33))
    ok = not round_trip and compared == 28 and not lookup_bad and not merge_bad and not hist_bad
    return record(13, "property suites", ok,
                  f"round trip n <= 10^5: {len(round_trip)} failures; lookup vs closed form: "
                  f"{compared} states, {lookup_bad} differ; merge at {len(values) + 1} split points: "
                  f"{merge_bad} differ; histogram conservation: {hist_bad} of 12 configs lose counts")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7,
            criterion_8, criterion_9, criterion_10, criterion_11, criterion_12, criterion_13]


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda f: f.__name__)
def test_acceptance(criterion):
    assert criterion(), RESULTS.get(int(criterion.__name__.split("_")[1]))


# Measured drift moments, pinned so a regression shows even while the
# tolerances above still pass.
PINNED_DRIFT = {"mean": -0.8300860181297312, "sd": 1.6383455994930496, "skew": -1.09150315152153,
                "exkurt": 4.028167996447822}


def test_drift_baseline_pinned():
    measured = drift_measured()
    for key, value in PINNED_DRIFT.items():
        assert measured[key] == pytest.approx(value, rel=1e-9), key


if __name__ == "__main__":
    passed = [crit() for crit in CRITERIA]
    print(f"{sum(passed)}/{len(passed)} criteria pass")
    sys.exit(0 if all(passed) else 1)
