"""Digitwise finite-state emulation of the Collatz map, with binary block analysis."""

from .symbolic_core import (DigitState, OpContext, SymbolicNumber, decode, delta_even, delta_odd,
                            encode, lookup_even, symbolic_step, symbolic_trajectory)

__version__ = "0.1.0"

__all__ = [
    "DigitState",
    "OpContext",
    "SymbolicNumber",
    "decode",
    "delta_even",
    "delta_odd",
    "encode",
    "lookup_even",
    "symbolic_step",
    "symbolic_trajectory",
]
