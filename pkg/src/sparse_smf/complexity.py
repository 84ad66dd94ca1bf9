"""Counting real arithmetic per iteration.

Counting convention
-------------------
One iteration is the full per-sample path: filter output, a priori error,
the error gate and, when the gate fires, the weight update. Comparisons,
absolute values, sign flips, mask tests, maxima and ``exp`` are not counted.
Inner products of length ``m`` cost ``m`` multiplications and ``m - 1``
additions. Discarded taps cost nothing, as in an implementation that loops
only over the active set.

For the discarding recursions with every tap active and a fired update this
gives, with ``n = N + 1`` taps::

    output + error      n mul    n add/sub
    gamma_bar * sgn(e)  1 mul
    e - gamma_bar*sgn   1 sub
    x^T F x + delta     n mul    n add
    correction          1 div
    w + c * F x         n mul    n add
    ---------------------------------------
                    3N+4 mul  3N+4 add/sub  1 div

A non-fired iteration costs only the output and error terms.
"""

from __future__ import annotations

from ._arith import Arith, OpCount, Tally
from .algorithms import get_algorithm, update

__all__ = ["OpCount", "counted_update", "predicted_count", "PREDICTED"]

# closed-form worst-case costs per fired update, as functions of the order N
_LCSM = lambda N: OpCount(3 * N + 4, 3 * N + 4, 1)  # noqa: E731

PREDICTED = {
    "sm-nlms": _LCSM,
    "lcsm-nlms1": _LCSM,
    "lcsm-nlms2": _LCSM,
    "sm-pnlms": lambda N: OpCount(N * N + 5 * N + 5, 7 * N + 8, 2 * N + 4),
    "sm-l0-nlms": lambda N: OpCount(7 * N + 7, 9 * N + 11, N + 3),
}


def predicted_count(algorithm: str, n: int) -> OpCount:
    """Closed-form operation count of one fired update at filter order ``n``."""
    if n < 0:
        raise ValueError("order must be >= 0")
    name = get_algorithm(algorithm).name
    return PREDICTED[name](n)


def counted_update(algorithm: str, state, sample, cfg):
    """Like :func:`sparse_smf.algorithms.update`, also returning an :class:`OpCount`."""
    tally = Tally()
    new_state, outcome = update(algorithm, state, sample, cfg, Arith(tally))
    return new_state, outcome, tally.freeze()
