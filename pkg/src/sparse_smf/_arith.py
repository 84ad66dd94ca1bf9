"""Row-batched arithmetic primitives with optional operation tallying.

Every update kernel in the package does its floating-point work through an
:class:`Arith` instance. The plain instance only computes; an instance built
with a :class:`Tally` also records how
many real additions/subtractions, multiplications and divisions an
implementation that skips discarded coefficients would execute. Both run the
exact same numpy calls, so instrumented and plain updates are bit-identical.

Arrays are 2-D ``(batch, n)`` (vectors) or 1-D ``(batch,)`` (scalars).
``rows`` is a boolean ``(batch,)`` array selecting the rows on which an
operation is considered executed; ``width`` is the per-row number of vector
elements taking part.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class OpCount:
    """Tally of real arithmetic operations."""

    add_sub: int = 0
    mul: int = 0
    div: int = 0

    def __add__(self, other: "OpCount") -> "OpCount":
        if not isinstance(other, OpCount):
            return NotImplemented
        return OpCount(self.add_sub + other.add_sub, self.mul + other.mul, self.div + other.div)

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.add_sub, self.mul, self.div)


class Tally:
    """Mutable accumulator used while an update executes."""

    __slots__ = ("add_sub", "mul", "div")

    def __init__(self) -> None:
        self.add_sub = 0
        self.mul = 0
        self.div = 0

    def freeze(self) -> OpCount:
        return OpCount(int(self.add_sub), int(self.mul), int(self.div))


def _n_rows(rows: np.ndarray) -> int:
    return int(np.count_nonzero(rows))


def _n_elems(rows: np.ndarray, width) -> int:
    if np.ndim(width) == 0:
        return _n_rows(rows) * int(width)
    return int(np.sum(np.where(rows, width, 0)))


class Arith:
    """numpy arithmetic on row batches; tallies ops when ``tally`` is given."""

    __slots__ = ("tally",)

    def __init__(self, tally: Tally | None = None) -> None:
        self.tally = tally

    def dot(self, a, b, rows, width):
        """Row-wise inner product; ``width`` products and ``width - 1`` sums per row."""
        out = np.sum(a * b, axis=-1)
        t = self.tally
        if t is not None:
            t.mul += _n_elems(rows, width)
            # an empty inner product costs nothing
            t.add_sub += _n_elems(rows, np.maximum(np.asarray(width) - 1, 0))
        return out

    def add(self, a, b, rows, width=1):
        out = a + b
        if self.tally is not None:
            self.tally.add_sub += _n_elems(rows, width)
        return out

    def sub(self, a, b, rows, width=1):
        out = a - b
        if self.tally is not None:
            self.tally.add_sub += _n_elems(rows, width)
        return out

    def mul(self, a, b, rows, width=1):
        out = a * b
        if self.tally is not None:
            self.tally.mul += _n_elems(rows, width)
        return out

    def div(self, a, b, rows, width=1):
        out = a / b
        if self.tally is not None:
            self.tally.div += _n_elems(rows, width)
        return out


PLAIN = Arith()
