"""Plain big-integer Collatz arithmetic, kept free of any digit or block logic."""

from __future__ import annotations

DEFAULT_BUDGET = 100_000


def collatz(n: int) -> int:
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    return n // 2 if n % 2 == 0 else 3 * n + 1


def orbit(n: int, budget: int = DEFAULT_BUDGET) -> list[int]:
    """Values from ``n`` down to 1 inclusive (truncated after ``budget`` steps)."""
    values = [n]
    while n != 1 and len(values) <= budget:
        n = collatz(n)
        values.append(n)
    return values


def stopping_time(n: int, budget: int = DEFAULT_BUDGET) -> int | None:
    """Number of steps to reach 1, or None if the budget runs out first."""
    steps = 0
    while n != 1:
        if steps >= budget:
            return None
        n = collatz(n)
        steps += 1
    return steps


def return_time(n: int, budget: int = DEFAULT_BUDGET) -> int | None:
    """Steps until the orbit is at 1 after at least one step (3 for n = 1)."""
    if n == 1:
        return 3
    return stopping_time(n, budget)
