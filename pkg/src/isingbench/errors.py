# Copyright (c) 2025 takotime808
"""
Exception hierarchy.

Every error raised on purpose by the library derives from
:class:`IsingBenchError` and, where it makes sense, from the matching builtin
(``ValueError``, ``KeyError``, ``ArithmeticError``) so callers that only know
the builtins still catch them.
"""

from __future__ import annotations

from typing import Optional


class IsingBenchError(Exception):
    """Root of all library errors."""


class InvalidArgumentError(IsingBenchError, ValueError):
    """An argument is outside its documented domain (e.g. ``n < 2``, ``T <= 0``)."""


class DimensionMismatchError(IsingBenchError, ValueError):
    """A state or vector does not match the instance's vertex count."""


class MissingBitplaneError(IsingBenchError, ValueError):
    """The packed kernel was asked to run on an instance without sign bitplanes."""


class UnknownSolverError(IsingBenchError, KeyError):
    """A solver id is not present in the registry."""

    def __str__(self) -> str:
        # KeyError quotes its argument; keep the plain message
        return str(self.args[0]) if self.args else ""


class EdgeListParseError(IsingBenchError, ValueError):
    """
    Malformed edge-list input.

    Attributes
    ----------
    lineno : int
        1-based line number of the offending line.
    """

    def __init__(self, message: str, lineno: int):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class DivergenceError(IsingBenchError, ArithmeticError):
    """
    A numerical integration produced a non-finite value.

    Attributes
    ----------
    step : int
        Step (Euler step or roundtrip) at which the state stopped being finite.
    """

    def __init__(self, step: int, what: Optional[str] = None):
        label = what or "state"
        super().__init__(f"{label} diverged (non-finite value) at step {step}")
        self.step = step
