"""Two base-2 machines for the odd step: a quotient-chain decoder and a bit-window FSM."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .binary_blocks import block_decompose, trailing_zeros
from .oracle import DEFAULT_BUDGET


class Symbol(enum.Enum):
    PLUS0 = "3n"
    PLUS1 = "3n+1"
    PLUS2 = "3n+2"
    INDUCED = "induced"

    @property
    def short(self) -> str:
        return {"3n": "+0", "3n+1": "+1", "3n+2": "+2", "induced": "induced"}[self.value]


def halving_chain(x: int) -> list[int]:
    """``x, x // 2, x // 4, ...`` down to 1."""
    if x < 1:
        raise ValueError(f"chain start must be >= 1, got {x}")
    chain = [x]
    while x > 1:
        x //= 2
        chain.append(x)
    return chain


def quotient_chains(n: int) -> tuple[list[int], list[int]]:
    if n < 1 or n % 2 == 0:
        raise ValueError(f"quotient chains need odd n >= 1, got {n}")
    return halving_chain(n), halving_chain(3 * n + 1)


class DecodeRow(NamedTuple):
    i: int
    q: int
    b: int
    parity_q: int
    parity_b: int
    clean: bool | None
    symbol: Symbol


def decode_chains(q_chain: Sequence[int], b_chain: Sequence[int]) -> list[DecodeRow]:
    """Label each index of ``b_chain`` by the first decoder rule that fires.

    Rules in order: index 0; parity mismatch; clean division with ``b = 3q``
    or ``b = 3q + 2``; dirty division; indices past the end of ``q_chain``.
    The successor of the last quotient is its floor half (0 after 1).
    """
    rows = []
    for i, b in enumerate(b_chain):
        if i >= len(q_chain):
            rows.append(DecodeRow(i, 0, b, 0, b & 1, None, Symbol.INDUCED))
            continue
        q = q_chain[i]
        q_next = q_chain[i + 1] if i + 1 < len(q_chain) else q // 2
        clean = q // 2 == q_next
        if i == 0:
            symbol = Symbol.PLUS1
            clean = None
        elif q & 1 != b & 1:
            symbol = Symbol.PLUS1
        elif clean and b == 3 * q:
            symbol = Symbol.PLUS0
        elif clean and b == 3 * q + 2:
            symbol = Symbol.PLUS2
        elif not clean:
            symbol = Symbol.PLUS2
        else:
            raise ValueError(f"no decoder rule matches q={q}, b={b} at index {i}")
        rows.append(DecodeRow(i, q, b, q & 1, b & 1, clean, symbol))
    return rows


@dataclass(frozen=True)
class QuotientDecoding:
    q_chain: tuple[int, ...]
    b_chain: tuple[int, ...]
    rows: tuple[DecodeRow, ...]

    @property
    def symbols(self) -> list[Symbol]:
        return [row.symbol for row in self.rows]


def quotient_decode(n: int) -> QuotientDecoding:
    q, b = quotient_chains(n)
    return QuotientDecoding(tuple(q), tuple(b), tuple(decode_chains(q, b)))


_WINDOW = {"00": "0", "01": "0", "10": "1", "11": "1"}


def bit_window_map(bits: str) -> str:
    """Map each adjacent pair ``(b[i+1], b[i])`` of a binary string through the window table."""
    if len(bits) < 2:
        raise ValueError("need at least two bits")
    if set(bits) - {"0", "1"}:
        raise ValueError(f"not a binary string: {bits!r}")
    return "".join(_WINDOW[bits[j:j + 2]] for j in range(len(bits) - 1))


def growth_predict(n: int) -> int:
    """+2 if ``3n + 1 >= 2**(k+1)`` for the bit length ``k`` of ``n``, else +1."""
    if n < 1 or n % 2 == 0:
        raise ValueError(f"growth prediction needs odd n >= 1, got {n}")
    return 2 if 3 * n + 1 >= 1 << (n.bit_length() + 1) else 1


def leading_bit_label(n: int) -> int:
    """The label read off the leading bits: "10..." gives +2, anything else +1."""
    return 2 if format(n, "b").startswith("10") else 1


@dataclass(frozen=True)
class BitFsmTrace:
    input_bits: str
    window_outputs: str
    growth_symbol: int
    predicted_symbols: tuple[str, ...]
    leading_bit_label: int


def bit_fsm_trace(n: int) -> BitFsmTrace:
    growth = growth_predict(n)
    bits = format(n, "b")
    windows = bit_window_map(bits) if len(bits) >= 2 else ""
    halvings = trailing_zeros(3 * n + 1)
    symbols = (f"+{growth}",) + ("/2",) * halvings
    return BitFsmTrace(bits, windows, growth, symbols, leading_bit_label(n))


class SymbolicLength(NamedTuple):
    l_sym: int
    l_classical: int
    truncated: bool


def symbolic_length(n: int, budget: int = DEFAULT_BUDGET) -> SymbolicLength:
    """Step counts from the (to, tz) block recursion of odd ``n``.

    ``l_sym`` sums ``to + tz`` per block; ``l_classical`` counts each
    compressed odd step as two ordinary steps.
    """
    trace = block_decompose(n, budget)
    return SymbolicLength(trace.symbolic_length, trace.classical_steps, trace.truncated)
