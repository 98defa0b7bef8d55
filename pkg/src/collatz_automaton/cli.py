"""Command-line front end.

Data goes to stdout (or ``--out``); progress and diagnostics go to stderr.
Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import contextlib
import io
import json
import logging
import sys
from pathlib import Path
from typing import Iterable, Sequence

from . import affine, binary_blocks as bb, binary_fsm, fsm_graph, stats_report, verify
from .oracle import DEFAULT_BUDGET, return_time
from .scans import default_workers, drift_statistics
from .symbolic_core import step_detail, symbolic_trajectory

log = logging.getLogger("collatz_automaton")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class Section:
    def __init__(self, name: str, header: Sequence[str], rows: Iterable[Sequence]):
        self.name = name
        self.header = tuple(header)
        self.rows = [tuple(r) for r in rows]

    def records(self) -> list[dict]:
        return [dict(zip(self.header, row)) for row in self.rows]


def render(sections: Sequence[Section], fmt: str, extra: dict | None = None) -> str:
    if fmt == "json":
        doc = {s.name: s.records() for s in sections}
        doc.update(extra or {})
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    buf = io.StringIO()
    for k, sec in enumerate(sections):
        if k:
            buf.write("\n")
        stats_report.write_csv(buf, sec.header, sec.rows)
    return buf.getvalue()


def emit(args, text: str) -> None:
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _state(s) -> str:
    return f"{s.r},{s.p},{s.c}"


def _positive(value: str) -> int:
    try:
        n = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {value!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {n}")
    return n


def _odd(n: int, what: str = "n") -> int:
    if n % 2 == 0:
        raise UsageError(f"{what} must be odd, got {n}")
    return n


# -- commands -----------------------------------------------------------------

def cmd_step(args) -> int:
    detail = step_detail(args.n)
    rows = Section("rows", ("i", "r", "p", "c", "r_out", "p_out", "c_next"), detail.rows)
    head = Section("step", ("n", "op", "result"), [(detail.n, detail.op_context.value, detail.result)])
    emit(args, render([head, rows], args.format))
    return EXIT_OK


def cmd_trajectory(args) -> int:
    traj = symbolic_trajectory(args.n, args.budget)
    width = max(len(row.states) for row in traj.rows)
    header = ("step", "value") + tuple(f"s{i}" for i in range(width))
    pad = fsm_graph.NULL_STATE
    rows = [(row.step, row.value) + tuple(_state(s) for s in row.states + (pad,) * (width - len(row.states)))
            for row in traj.rows]
    summary = Section("summary", ("n", "steps", "truncated"), [(args.n, traj.steps, int(traj.truncated))])
    emit(args, render([Section("trajectory", header, rows), summary], args.format))
    return EXIT_OK


def cmd_fsm(args) -> int:
    reference = args.reference or fsm_graph.default_reference_path()
    try:
        report = fsm_graph.fsm_report(fsm_graph.build_table(), reference,
                                      cycle_length=args.max_cycle_length, active_limit=args.limit)
    except fsm_graph.ReferenceFormatError as exc:
        raise UsageError(str(exc)) from exc
    emit(args, fsm_graph.dump_report(report) + "\n")
    zero = sum(1 for v in report["rho"].values() if v == 0)
    log.info("%d mismatches, %d rank-0 states, %d cycles, %d active states",
             len(report["mismatches"]), zero, report["cycles"]["count"],
             report["active_subgraph"]["size"])
    return EXIT_FAIL if report["mismatches"] else EXIT_OK


def cmd_drift(args) -> int:
    if args.limit < 3:
        raise UsageError("drift needs --limit >= 3 (no odd n >= 3 below it)")
    log.info("drift scan over odd n in [3, %d] with %d workers", args.limit, args.threads)
    stats = drift_statistics(args.limit, args.threads)
    summary = stats.w.finalize()
    head = ("count", "mean", "sd", "skew", "exkurt", "mean_to", "mean_tz")
    row = summary.as_row() + (stats.to.mean, stats.tz.mean)
    summary_sec = Section("summary", head, [row])
    hist = Section("histogram", ("bin_low", "count"),
                   stats_report.histogram(stats.values, args.bin_width, args.origin))
    qq = None
    if summary.sd:
        qq = Section("qq", ("theoretical_q", "empirical_q"),
                     stats_report.qq_points(stats.values, summary.mean, summary.sd, args.qq_points))
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        odd = range(3, args.limit + 1, 2)
        (out / "samples.csv").write_text(render([Section("samples", ("n", "w"), zip(odd, stats.values))], "csv"))
        (out / "summary.csv").write_text(render([summary_sec], "csv"))
        (out / "hist.csv").write_text(render([hist], "csv"))
        if qq:
            (out / "qq.csv").write_text(render([qq], "csv"))
        meta = {"moments": "population", "kurtosis": "excess", "n_range": [3, args.limit],
                "bin_width": args.bin_width, "origin": args.origin, "qq_points": args.qq_points,
                "quantiles": "nearest-rank at (i - 0.5) / k"}
        (out / "meta.json").write_text(json.dumps(meta, sort_keys=True, indent=2) + "\n")
    sys.stdout.write(render([summary_sec], args.format))
    return EXIT_OK


def cmd_blocks(args) -> int:
    trace = bb.block_decompose(_odd(args.n), args.budget)
    blocks = Section("blocks", ("to", "tz", "n_start", "n_prime", "classical_steps"),
                     [(b.to_count, b.tz_count, b.n_start, b.n_prime, b.classical_steps) for b in trace.blocks])
    pairs = ",".join(f"({a},{b})" for a, b in trace.pairs())
    total = Section("summary", ("blocks", "classical_steps", "symbolic_length", "truncated"),
                    [(pairs, trace.classical_steps, trace.symbolic_length, int(trace.truncated))])
    emit(args, render([blocks, total], args.format))
    return EXIT_OK


def cmd_energy(args) -> int:
    if args.limit < 3:
        raise UsageError("energy needs --limit >= 3")
    report = bb.energy_descent_scan(args.limit)
    samples = Section("samples", ("n", "delta_f"), report.samples)
    violations = Section("violations", ("n", "delta_f"), report.violations)
    summary = Section("summary", ("blocks", "violations"), [(len(report.samples), report.violation_count)])
    emit(args, render([summary, violations, samples], args.format))
    return EXIT_OK


def cmd_metrics(args) -> int:
    metrics = [bb.orbit_metrics(n, args.budget) for n in range(1, args.limit + 1)]
    rows = Section("metrics", bb.ORBIT_METRICS_HEADER, [m.as_row() for m in metrics])
    failed = sum(1 for m in metrics if not m.constraint_holds)
    summary = Section("summary", ("orbits", "constraint_violations", "truncated"),
                      [(len(metrics), failed, sum(m.truncated for m in metrics))])
    emit(args, render([summary, rows], args.format))
    return EXIT_OK


def cmd_affine(args) -> int:
    if args.a_min > args.a_max:
        raise UsageError("--a-min exceeds --a-max")
    if args.limit < 3:
        raise UsageError("affine scan needs --limit >= 3")
    a_values = [a for a in range(args.a_min, args.a_max + 1) if a % 2 == 1]
    sections = [Section("scan", affine.DRIFT_SCAN_HEADER, affine.drift_scan(a_values, args.limit))]
    if args.with_a1:
        sections.append(Section("a1", affine.DRIFT_SCAN_HEADER, affine.drift_scan([1], args.limit)))
    emit(args, render(sections, args.format))
    return EXIT_OK


def cmd_quotient(args) -> int:
    dec = binary_fsm.quotient_decode(_odd(args.n))
    rows = [(r.i, r.q, r.b, r.parity_q, r.parity_b, "" if r.clean is None else int(r.clean), r.symbol.value)
            for r in dec.rows]
    table = Section("decoding", ("i", "q", "b", "par_q", "par_b", "clean", "op"), rows)
    seq = " ".join(s.short for s in dec.symbols if s is not binary_fsm.Symbol.INDUCED)
    summary = Section("summary", ("q_chain", "b_chain", "symbols"),
                      [(" ".join(map(str, dec.q_chain)), " ".join(map(str, dec.b_chain)), seq)])
    emit(args, render([table, summary], args.format))
    return EXIT_OK


def cmd_bitfsm(args) -> int:
    tr = binary_fsm.bit_fsm_trace(_odd(args.n))
    sec = Section("bitfsm", ("n", "input_bits", "window_outputs", "growth", "predicted", "leading_bit_label"),
                  [(args.n, tr.input_bits, tr.window_outputs, f"+{tr.growth_symbol}",
                    " ".join(tr.predicted_symbols), f"+{tr.leading_bit_label}")])
    emit(args, render([sec], args.format))
    return EXIT_OK


def cmd_length(args) -> int:
    rows = []
    bad = 0
    for n in range(1, args.limit + 1, 2):
        length = binary_fsm.symbolic_length(n, args.budget)
        oracle = return_time(n, args.budget)
        match = oracle is not None and not length.truncated and length.l_classical == oracle
        bad += not match
        rows.append((n, length.l_sym, length.l_classical, "" if oracle is None else oracle, int(match)))
    table = Section("lengths", ("n", "l_sym", "l_classical", "steps_oracle", "match"), rows)
    summary = Section("summary", ("checked", "mismatches"), [(len(rows), bad)])
    emit(args, render([summary, table], args.format))
    return EXIT_FAIL if bad else EXIT_OK


def cmd_verify_all(args) -> int:
    results = verify.run_all(args.limit, args.threads)
    sec = Section("checks", ("check", "status", "detail"),
                  [(r.name, "PASS" if r.ok else "FAIL", r.detail) for r in results])
    emit(args, render([sec], args.format))
    return EXIT_OK if all(r.ok for r in results) else EXIT_FAIL


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", help="output file (a directory for drift)")
    common.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET,
                        help="step budget per orbit")
    common.add_argument("--threads", type=_positive, default=default_workers(),
                        help="worker processes for range scans")
    common.add_argument("-q", "--quiet", action="store_true", help="suppress progress on stderr")

    parser = argparse.ArgumentParser(prog="collatz-automaton",
                                     description="Digitwise Collatz automaton laboratory.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, n=False, limit=None):
        p = sub.add_parser(name, parents=[common], help=help_text)
        if n:
            p.add_argument("n", type=int)
        if limit is not None:
            p.add_argument("--limit", "--n", dest="limit", type=int, default=limit)
        p.set_defaults(func=func)
        return p

    add("step", cmd_step, "one digitwise step with per-digit rows", n=True)
    add("trajectory", cmd_trajectory, "symbolic states along an orbit", n=True)
    p = add("fsm", cmd_fsm, "build and check the 60-state transition graph", limit=10_000)
    p.add_argument("--reference", help="transcribed transition table to compare against")
    p.add_argument("--max-cycle-length", type=_positive, default=8)
    p = add("drift", cmd_drift, "drift statistics, histogram and Q-Q data", limit=1_000_000)
    p.add_argument("--bin-width", type=float, default=0.25)
    p.add_argument("--origin", type=float, default=0.0)
    p.add_argument("--qq-points", type=_positive, default=99)
    add("blocks", cmd_blocks, "block decomposition of an odd n", n=True)
    add("energy", cmd_energy, "energy change per block over odd n", limit=10_000)
    add("metrics", cmd_metrics, "peak-position metrics per orbit", limit=10_000)
    p = add("affine", cmd_affine, "mean block drift for odd multipliers", limit=100_000)
    p.add_argument("--a-min", type=_positive, default=3)
    p.add_argument("--a-max", type=_positive, default=49)
    p.add_argument("--with-a1", action="store_true", help="also report a = 1 in its own section")
    add("quotient", cmd_quotient, "quotient-chain decoding of an odd n", n=True)
    add("bitfsm", cmd_bitfsm, "bit-window machine and growth prediction", n=True)
    add("length", cmd_length, "symbolic and classical lengths over odd n", limit=10_000)
    add("verify-all", cmd_verify_all, "run every invariant suite", limit=100_000)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(levelname)s %(message)s", stream=sys.stderr, force=True)
    if getattr(args, "n", None) is not None and args.n < 1:
        print(f"error: n must be a positive integer, got {args.n}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    with contextlib.suppress(BrokenPipeError):
        sys.exit(main())
