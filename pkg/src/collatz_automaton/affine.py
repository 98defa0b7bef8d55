"""Digitwise evaluation of affine maps ``a*n + b`` and their block drift."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .binary_blocks import trailing_ones, trailing_zeros


@dataclass(frozen=True)
class AffineParams:
    a: int
    b: int

    def __post_init__(self):
        if self.a < 1:
            raise ValueError(f"multiplier must be >= 1, got {self.a}")
        if self.b < 0:
            raise ValueError(f"increment must be >= 0, got {self.b}")


class DigitRun(NamedTuple):
    """Output digits (little-endian) plus every carry produced along the way."""

    digits: list[int]
    carries: list[int]

    @property
    def value(self) -> int:
        return _value(self.digits)


def _digits(n: int) -> list[int]:
    return [ord(ch) - 48 for ch in reversed(str(n))]


def _value(digits: list[int]) -> int:
    out = 0
    for d in reversed(digits):
        out = out * 10 + d
    return out


def _flush(digits: list[int], carry: int) -> None:
    while carry:
        carry, d = divmod(carry, 10)
        digits.append(d)


def multiply_digits(n: int, a: int, inject: int = 0) -> DigitRun:
    """Long multiplication ``a*n`` column by column, adding ``inject`` at column 0."""
    out, carries = [], []
    carry = 0
    for i, r in enumerate(_digits(n)):
        v = a * r + carry + (inject if i == 0 else 0)
        out.append(v % 10)
        carry = v // 10
        carries.append(carry)
    _flush(out, carry)
    return DigitRun(out, carries)


def add_digits(digits: list[int], b: int) -> DigitRun:
    """Column-wise addition of ``b`` to a little-endian digit list."""
    addend = _digits(b)
    out, carries = [], []
    carry = 0
    for i in range(max(len(digits), len(addend))):
        v = (digits[i] if i < len(digits) else 0) + (addend[i] if i < len(addend) else 0) + carry
        out.append(v % 10)
        carry = v // 10
        carries.append(carry)
    _flush(out, carry)
    return DigitRun(out, carries)


def affine_run_simple(n: int, params: AffineParams) -> DigitRun:
    if params.a >= 10 or params.b >= 10:
        raise ValueError("the single-pass rule needs a < 10 and b < 10; use the two-phase rule")
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    return multiply_digits(n, params.a, inject=params.b)


def affine_step_simple(n: int, params: AffineParams) -> int:
    """``a*n + b`` with ``b`` injected into the lowest column of the multiplication."""
    return affine_run_simple(n, params).value


def affine_run_two_phase(n: int, params: AffineParams) -> tuple[DigitRun, DigitRun]:
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    product = multiply_digits(n, params.a)
    return product, add_digits(product.digits, params.b)


def affine_step_two_phase(n: int, params: AffineParams) -> int:
    """``a*n + b``: digitwise multiplication, then digitwise addition of ``b``."""
    return affine_run_two_phase(n, params)[1].value


def carry_bound(params: AffineParams) -> int:
    return (9 * params.a + params.b) // 10


def _check_odd_multiplier(a: int) -> None:
    if a < 1 or a % 2 == 0:
        raise ValueError(f"multiplier must be odd and >= 1, got {a}")


def t3_general(x: int, a: int) -> int:
    """``(a*x + 1) // 2``; exact whenever ``x`` is odd."""
    return (a * x + 1) // 2


def drift_general(n: int, a: int) -> float:
    """Block drift ``to(n) log2(a/2) - tz(n')`` under ``x -> (a x + 1) / 2``.

    For ``a = 1 (mod 4)`` the intermediate values can turn even before
    ``to(n)`` steps are done; the step then rounds down, so the drift stays
    finite for every odd ``n``.
    """
    _check_odd_multiplier(a)
    if n < 1 or n % 2 == 0:
        raise ValueError(f"drift needs odd n >= 1, got {n}")
    k = trailing_ones(n)
    x = n
    for _ in range(k):
        x = t3_general(x, a)
    return k * math.log2(a / 2) - trailing_zeros(x)


def theoretical_mean(a: int) -> float:
    return 2 * math.log2(a / 2) - 2


class DriftScanRow(NamedTuple):
    a: int
    empirical_mean: float
    theoretical_mean: float
    sample_count: int


DRIFT_SCAN_HEADER = ("a", "empirical_mean", "theoretical_mean", "sample_count")


def scan_multiplier(a: int, n_limit: int) -> DriftScanRow:
    _check_odd_multiplier(a)
    if n_limit < 3:
        raise ValueError("n_limit must be >= 3")
    total = 0.0
    count = 0
    for n in range(3, n_limit + 1, 2):
        total += drift_general(n, a)
        count += 1
    return DriftScanRow(a, total / count, theoretical_mean(a), count)


def drift_scan(a_values: Iterable[int], n_limit: int) -> list[DriftScanRow]:
    """Mean drift over odd n in [3, n_limit] for each multiplier, beside ``2 log2(a/2) - 2``."""
    return [scan_multiplier(a, n_limit) for a in a_values]
