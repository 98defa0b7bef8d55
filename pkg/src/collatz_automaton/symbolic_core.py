"""Digitwise base-10 emulation of the Collatz map.

Every decimal digit of ``n`` is carried as a triple ``(r, p, c)``: the digit
value, the parity of the next more significant digit, and the incoming
carry (odd step) or borrow adjustment (even step).  Digit sequences are
little-endian: index 0 is the least significant digit.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

__all__ = [
    "DigitState",
    "OpContext",
    "SymbolicNumber",
    "StepRow",
    "StepDetail",
    "TrajectoryRow",
    "Trajectory",
    "UndefinedTransition",
    "EncodingError",
    "EVEN_LOOKUP",
    "encode",
    "decode",
    "delta_even",
    "lookup_even",
    "delta_odd",
    "step_detail",
    "symbolic_step",
    "automaton_view",
    "symbolic_trajectory",
]


class UndefinedTransition(ValueError):
    """A local rule was applied to a state it has no entry for."""


class EncodingError(ValueError):
    """A digit sequence violates the encoding invariants."""


class DigitState(NamedTuple):
    r: int
    p: int
    c: int

    def __str__(self):
        return f"({self.r},{self.p},{self.c})"


class OpContext(enum.Enum):
    ODD = "odd"
    EVEN = "even"


NULL_STATE = DigitState(0, 0, 0)

# rows: next-digit parity; columns: adjusted digit 0, 2, 4, 6, 8
EVEN_LOOKUP = (
    (0, 1, 2, 3, 4),
    (5, 6, 7, 8, 9),
)


def _check_state_domain(s) -> None:
    r, p, c = s
    if not (0 <= r <= 9 and p in (0, 1) and c in (0, 1, 2)):
        raise EncodingError(f"state {tuple(s)} outside {{0..9}}x{{0,1}}x{{0,1,2}}")


def _odd_carries(digits: Sequence[int]) -> list[int]:
    carries = [0]
    for i, r in enumerate(digits[:-1]):
        carries.append((3 * r + carries[-1] + (i == 0)) // 10)
    return carries


def _even_carries(digits: Sequence[int]) -> list[int]:
    return [0] + [r & 1 for r in digits[1:]]


@dataclass(frozen=True)
class SymbolicNumber:
    """Little-endian digit states of one integer plus the rule its carries serve."""

    states: tuple[DigitState, ...]
    op_context: OpContext
    _value: int = field(default=-1, repr=False, compare=False)

    def __post_init__(self):
        states = tuple(DigitState(*s) for s in self.states)
        object.__setattr__(self, "states", states)
        if not states:
            raise EncodingError("empty digit sequence")
        for s in states:
            _check_state_domain(s)
        digits = [s.r for s in states]
        if len(digits) > 1 and digits[-1] == 0:
            raise EncodingError("leading zero digit")
        parities = [d & 1 for d in digits[1:]] + [0]
        if [s.p for s in states] != parities:
            raise EncodingError("parity flags do not match next-digit parities")
        odd = bool(digits[0] & 1)
        if (self.op_context is OpContext.ODD) != odd:
            raise EncodingError("op_context disagrees with parity of r_0")
        expected = _odd_carries(digits) if odd else _even_carries(digits)
        if [s.c for s in states] != expected:
            raise EncodingError(f"carries {[s.c for s in states]} != {expected}")
        if self._value < 0:
            object.__setattr__(self, "_value", _digits_value(digits))

    @classmethod
    def _trusted(cls, states, op_context, value):
        obj = object.__new__(cls)
        object.__setattr__(obj, "states", states)
        object.__setattr__(obj, "op_context", op_context)
        object.__setattr__(obj, "_value", value)
        return obj

    @property
    def value(self) -> int:
        return self._value

    def __len__(self):
        return len(self.states)

    def __str__(self):
        return "[" + ", ".join(str(s) for s in self.states) + "]"


def _digits_of(n: int) -> list[int]:
    return [ord(ch) - 48 for ch in reversed(str(n))]


def _digits_value(digits: Sequence[int]) -> int:
    return int("".join(chr(48 + d) for d in reversed(digits)))


def encode(n: int) -> SymbolicNumber:
    """Encode ``n >= 1`` with carries for the rule its parity selects."""
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    digits = _digits_of(n)
    parities = [d & 1 for d in digits[1:]] + [0]
    odd = bool(digits[0] & 1)
    carries = _odd_carries(digits) if odd else _even_carries(digits)
    states = tuple(map(DigitState, digits, parities, carries))
    return SymbolicNumber._trusted(states, OpContext.ODD if odd else OpContext.EVEN, n)


def decode(s: SymbolicNumber | Iterable[Sequence[int]]) -> int:
    """Return the integer whose digits are the ``r`` fields of ``s``.

    Plain sequences of triples are accepted too; for those only the digit
    domains, the parity links and the absence of a leading zero are checked,
    because the carry fields are step bookkeeping and do not affect the value.
    """
    if isinstance(s, SymbolicNumber):
        return s.value
    states = [DigitState(*t) for t in s]
    if not states:
        raise EncodingError("empty digit sequence")
    for st in states:
        _check_state_domain(st)
    digits = [st.r for st in states]
    if len(digits) > 1 and digits[-1] == 0:
        raise EncodingError("leading zero digit")
    if [st.p for st in states] != [d & 1 for d in digits[1:]] + [0]:
        raise EncodingError("parity flags do not match next-digit parities")
    return _digits_value(digits)


def delta_even(r: int, p: int, c: int) -> int:
    """Halved digit ``floor((r - c) / 2) + 5p``; needs ``r - c`` even and >= 0."""
    d = r - c
    if d < 0 or d & 1:
        raise UndefinedTransition(f"even rule undefined for {(r, p, c)}")
    return d // 2 + 5 * p


def lookup_even(r: int, p: int, c: int) -> int:
    adjusted = (r - c) % 10
    if adjusted & 1:
        raise UndefinedTransition(f"lookup undefined for adjusted digit {adjusted}")
    return EVEN_LOOKUP[p][adjusted // 2]


def delta_odd(i: int, r: int, c: int) -> tuple[int, int]:
    """One column of ``3n + 1``: returns (output digit, outgoing carry)."""
    if i == 0 and c != 0:
        raise ValueError("the least significant digit takes no incoming carry")
    v = 3 * r + c + (i == 0)
    return v % 10, v // 10


class StepRow(NamedTuple):
    i: int
    r: int
    p: int
    c: int
    r_out: int
    p_out: int
    c_next: int


@dataclass(frozen=True)
class StepDetail:
    """Column-by-column record of one symbolic step."""

    n: int
    op_context: OpContext
    rows: tuple[StepRow, ...]
    result: int
    carries: tuple[int, ...]
    grew: bool

    @property
    def top_digit(self) -> int:
        return self.rows[-1].r_out if self.grew else -1


def step_detail(n: int) -> StepDetail:
    """Apply the local rules to every digit of ``encode(n)``.

    In the odd case a final carry opens one new digit; it is recorded as an
    extra row whose input state is the null state carrying that value in.
    """
    sym = encode(n)
    states = sym.states
    rows = []
    carries = [s.c for s in states]
    if sym.op_context is OpContext.ODD:
        carry = 0
        for i, (r, p, c) in enumerate(states):
            r_out, carry = delta_odd(i, r, c)
            rows.append(StepRow(i, r, p, c, r_out, r_out & 1, carry))
        grew = carry > 0
        if grew:
            carries.append(carry)
            rows.append(StepRow(len(states), 0, 0, carry, carry, carry & 1, 0))
    else:
        grew = False
        last = len(states) - 1
        for i, (r, p, c) in enumerate(states):
            r_out = delta_even(r, p, c)
            c_next = states[i + 1].c if i < last else 0
            rows.append(StepRow(i, r, p, c, r_out, r_out & 1, c_next))
    digits = [row.r_out for row in rows]
    while len(digits) > 1 and digits[-1] == 0:
        digits.pop()
    return StepDetail(n, sym.op_context, tuple(rows), _digits_value(digits),
                      tuple(carries), grew)


def symbolic_step(n: int) -> int:
    """Next Collatz iterate, computed digit by digit."""
    sym = encode(n)
    out = []
    if sym.op_context is OpContext.ODD:
        carry = 0
        for i, (r, _, c) in enumerate(sym.states):
            d, carry = delta_odd(i, r, c)
            out.append(d)
        if carry:
            out.append(carry)
    else:
        out = [delta_even(r, p, c) for r, p, c in sym.states]
        if len(out) > 1 and out[-1] == 0:
            out.pop()
    return _digits_value(out)


def automaton_view(n: int) -> tuple[DigitState, ...]:
    """Digit states of ``n`` as the automaton reaches them after a transition.

    Transition targets carry no carry; the carry of each column is only
    assigned when the next step is evaluated.
    """
    digits = _digits_of(n)
    parities = [d & 1 for d in digits[1:]] + [0]
    return tuple(DigitState(r, p, 0) for r, p in zip(digits, parities))


class TrajectoryRow(NamedTuple):
    step: int
    value: int
    states: tuple[DigitState, ...]

    @property
    def encoding(self) -> SymbolicNumber:
        return encode(self.value)


@dataclass(frozen=True)
class Trajectory:
    rows: tuple[TrajectoryRow, ...]
    truncated: bool

    @property
    def values(self) -> list[int]:
        return [row.value for row in self.rows]

    @property
    def steps(self) -> int:
        return len(self.rows) - 1


def symbolic_trajectory(n: int, max_steps: int = 100_000) -> Trajectory:
    """Iterate ``symbolic_step`` from ``n`` until 1 or ``max_steps`` steps.

    Row 0 holds the full encoding of ``n``; later rows hold the states the
    automaton arrives in (see :func:`automaton_view`).
    """
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    rows = [TrajectoryRow(0, n, encode(n).states)]
    value = n
    step = 0
    while value != 1 and step < max_steps:
        value = symbolic_step(value)
        step += 1
        rows.append(TrajectoryRow(step, value, automaton_view(value)))
    return Trajectory(tuple(rows), value != 1)
