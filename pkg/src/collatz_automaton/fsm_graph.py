"""The 60-state nondeterministic digit automaton as a graph.

A single digit state does not know the parity of the digit above it after
the step (for halving) or the carry arriving from below (for ``3n + 1``), so
each state has a small set of possible successors rather than one.
"""

from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, NamedTuple

from .symbolic_core import DigitState, automaton_view, symbolic_step

__all__ = [
    "TERMINAL_CYCLE",
    "NULL_STATE",
    "TransitionRow",
    "TransitionTable",
    "Mismatch",
    "ReferenceFormatError",
    "enumerate_states",
    "div_targets",
    "mul_targets",
    "build_table",
    "parse_reference",
    "verify_table",
    "default_reference_path",
    "ranking",
    "descent_report",
    "find_cycles",
    "active_subgraph",
    "fsm_report",
    "dump_report",
]

NULL_STATE = DigitState(0, 0, 0)
TERMINAL_CYCLE = frozenset({DigitState(1, 0, 0), DigitState(4, 0, 0), DigitState(2, 0, 0)})


class ReferenceFormatError(ValueError):
    pass


def enumerate_states() -> list[DigitState]:
    return [DigitState(*t) for t in itertools.product(range(10), range(2), range(3))]


def div_targets(s: DigitState) -> frozenset[DigitState]:
    """Halving successors of ``s``.

    The rule only has entries for states a halving step can actually see:
    carry 0 (the least significant digit, or an even digit) or a carry equal
    to the digit's own parity.
    """
    r, p, c = s
    if c not in (0, r & 1):
        return frozenset()
    r_out = (r - c) // 2 + 5 * p
    return frozenset({DigitState(r_out, 0, 0), DigitState(r_out, 1, 0)})


def mul_targets(s: DigitState) -> frozenset[DigitState]:
    r, p, c = s
    incoming = (0, 1, 2) if c == 0 else (c,)
    out = set()
    for c_in in incoming:
        v = 3 * r + c_in
        out.add(DigitState(v % 10, (p + v // 10) & 1, 0))
    return frozenset(out)


class TransitionRow(NamedTuple):
    state: DigitState
    div: tuple[DigitState, ...]
    mul: tuple[DigitState, ...]

    @property
    def successors(self) -> frozenset[DigitState]:
        return frozenset(self.div) | frozenset(self.mul)


@dataclass(frozen=True)
class TransitionTable:
    rows: Mapping[DigitState, TransitionRow]

    def __post_init__(self):
        if len(self.rows) != 60:
            raise ValueError(f"expected 60 rows, got {len(self.rows)}")

    def __getitem__(self, s) -> TransitionRow:
        return self.rows[DigitState(*s)]

    def __iter__(self):
        return iter(sorted(self.rows))

    def successors(self, s) -> frozenset[DigitState]:
        return self[s].successors

    def edges(self) -> list[tuple[DigitState, DigitState]]:
        return [(s, t) for s in self for t in sorted(self.successors(s))]


def build_table() -> TransitionTable:
    return TransitionTable({
        s: TransitionRow(s, tuple(sorted(div_targets(s))), tuple(sorted(mul_targets(s))))
        for s in enumerate_states()
    })


def default_reference_path() -> Path:
    return Path(str(resources.files("collatz_automaton") / "data" / "transition_table.txt"))


def _parse_triple(text: str, lineno: int) -> DigitState | None:
    text = text.strip()
    if text == "-":
        return None
    parts = text.split(",")
    try:
        state = DigitState(*(int(x) for x in parts))
    except (TypeError, ValueError):
        raise ReferenceFormatError(f"line {lineno}: bad state {text!r}") from None
    r, p, c = state
    if not (0 <= r <= 9 and p in (0, 1) and c in (0, 1, 2)):
        raise ReferenceFormatError(f"line {lineno}: state {text!r} out of range")
    return state


def parse_reference(path) -> dict[DigitState, tuple[tuple[DigitState, ...], tuple[DigitState, ...]]]:
    """Read a transcribed transition table.

    One data line per state, ``state; div1; div2; mul1; mul2; mul3`` with
    ``-`` for an absent target.  Lines starting with ``#`` are comments.
    """
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ReferenceFormatError(f"cannot read {path}: {exc}") from exc
    table = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split(";")
        if len(fields) != 6:
            raise ReferenceFormatError(f"line {lineno}: expected 6 fields, got {len(fields)}")
        state = _parse_triple(fields[0], lineno)
        if state is None:
            raise ReferenceFormatError(f"line {lineno}: missing state")
        if state in table:
            raise ReferenceFormatError(f"line {lineno}: duplicate state {state}")
        div = tuple(sorted(t for f in fields[1:3] if (t := _parse_triple(f, lineno))))
        mul = tuple(sorted(t for f in fields[3:6] if (t := _parse_triple(f, lineno))))
        table[state] = (div, mul)
    if len(table) != 60:
        raise ReferenceFormatError(f"expected 60 states, found {len(table)}")
    return table


class Mismatch(NamedTuple):
    state: DigitState
    expected_div: tuple[DigitState, ...]
    expected_mul: tuple[DigitState, ...]
    actual_div: tuple[DigitState, ...]
    actual_mul: tuple[DigitState, ...]


def verify_table(generated: TransitionTable, reference_path) -> list[Mismatch]:
    """States whose generated targets differ from the reference file (as sets)."""
    reference = parse_reference(reference_path)
    mismatches = []
    for s in sorted(reference):
        div, mul = reference[s]
        row = generated[s]
        if set(div) != set(row.div) or set(mul) != set(row.mul):
            mismatches.append(Mismatch(s, div, mul, row.div, row.mul))
    return mismatches


def ranking(table: TransitionTable) -> dict[DigitState, int | None]:
    """Shortest-path distance from every state to the terminal cycle.

    ``None`` marks a state with no path.
    """
    predecessors: dict[DigitState, list[DigitState]] = {s: [] for s in table}
    for s, t in table.edges():
        predecessors[t].append(s)
    rho: dict[DigitState, int | None] = {s: None for s in table}
    queue = deque()
    for s in sorted(TERMINAL_CYCLE):
        rho[s] = 0
        queue.append(s)
    while queue:
        t = queue.popleft()
        for s in predecessors[t]:
            if rho[s] is None:
                rho[s] = rho[t] + 1
                queue.append(s)
    return rho


@dataclass(frozen=True)
class DescentReport:
    edges: int
    increasing: int
    equal: int
    decreasing: int
    # states outside the cycle lacking a successor exactly one rank lower
    without_descent: tuple[DigitState, ...]
    # edges that drop the rank by more than one
    shortcuts: tuple[tuple[DigitState, DigitState], ...]


def descent_report(table: TransitionTable, rho: Mapping[DigitState, int | None]) -> DescentReport:
    inc = eq = dec = 0
    shortcuts = []
    without = []
    for s in table:
        succ = table.successors(s)
        if rho[s] is None:
            continue
        if s not in TERMINAL_CYCLE and succ and not any(rho[t] == rho[s] - 1 for t in succ):
            without.append(s)
        for t in sorted(succ):
            if rho[t] is None or rho[t] > rho[s]:
                inc += 1
            elif rho[t] == rho[s]:
                eq += 1
            else:
                dec += 1
                if rho[t] < rho[s] - 1:
                    shortcuts.append((s, t))
    return DescentReport(inc + eq + dec, inc, eq, dec, tuple(without), tuple(shortcuts))


def find_cycles(table: TransitionTable, max_length: int = 8) -> list[tuple[DigitState, ...]]:
    """All elementary directed cycles with at most ``max_length`` states.

    Each cycle is listed once, rotated so that its smallest state comes first.
    """
    adjacency = {s: sorted(table.successors(s)) for s in table}
    cycles = []
    for start in sorted(adjacency):
        path = [start]
        on_path = {start}
        stack = [iter(adjacency[start])]
        while stack:
            node = next(stack[-1], None)
            if node is None:
                stack.pop()
                on_path.discard(path.pop())
                continue
            if node == start:
                cycles.append(tuple(path))
            elif node > start and node not in on_path and len(path) < max_length:
                path.append(node)
                on_path.add(node)
                stack.append(iter(adjacency[node]))
    return sorted(cycles, key=lambda cyc: (len(cyc), cyc))


def active_subgraph(n_limit: int) -> set[DigitState]:
    """States occupied after the first transition of any orbit starting at n <= n_limit."""
    if n_limit < 2:
        raise ValueError("n_limit must be >= 2")
    seen_values: set[int] = set()
    states: set[DigitState] = set()
    for n in range(1, n_limit + 1):
        value = n
        while True:
            value = symbolic_step(value)
            if value in seen_values:
                break
            seen_values.add(value)
            states.update(automaton_view(value))
            if value == 1:
                break
    return states


def _state_key(s: DigitState) -> str:
    return f"{s.r},{s.p},{s.c}"


def fsm_report(table: TransitionTable, reference_path, *, cycle_length: int = 8,
               active_limit: int = 10_000) -> dict:
    """JSON-ready summary: mismatches, ranks, cycles and the active state set."""
    mismatches = verify_table(table, reference_path)
    rho = ranking(table)
    descent = descent_report(table, rho)
    cycles = find_cycles(table, cycle_length)
    active = sorted(active_subgraph(active_limit))

    def names(states: Iterable[DigitState]) -> list[str]:
        return [_state_key(s) for s in states]

    return {
        "mismatches": [
            {
                "state": _state_key(m.state),
                "expected": {"div": names(m.expected_div), "mul": names(m.expected_mul)},
                "actual": {"div": names(m.actual_div), "mul": names(m.actual_mul)},
            }
            for m in mismatches
        ],
        "rho": {_state_key(s): rho[s] for s in sorted(rho)},
        "descent": {
            "edges": descent.edges,
            "increasing": descent.increasing,
            "equal": descent.equal,
            "decreasing": descent.decreasing,
            "without_descent": names(descent.without_descent),
            "shortcuts": [names(e) for e in descent.shortcuts],
        },
        "cycles": {
            "max_length": cycle_length,
            "count": len(cycles),
            "list": [names(c) for c in cycles],
        },
        "active_subgraph": {"n_limit": active_limit, "size": len(active), "states": names(active)},
    }


def dump_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2)
