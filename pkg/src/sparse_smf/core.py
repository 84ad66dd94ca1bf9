"""Set-membership NLMS recursions with coefficient discarding.

Three recursions share the same error-bound gate: an update fires only when
the a priori error ``e = d - w @ x`` exceeds ``gamma_bar`` in magnitude, and
then moves the weights just far enough that the a posteriori error has
magnitude ``gamma_bar``.

``sm_nlms``
    Plain set-membership NLMS.
``lcsm_nlms1``
    Only coefficients with ``|w_i| >= epsilon`` take part in the update;
    the rest are frozen where they are.
``lcsm_nlms2``
    As ``lcsm_nlms1``, but the frozen coefficients are replaced by zero
    whenever an update fires, which also cheapens the filter output.

Each recursion exists twice: a pure single-sample function
(:func:`sm_nlms_update` and friends) operating on :class:`FilterState` and
:class:`Sample` values, and a row-batched kernel (:func:`sm_nlms_step` and
friends) operating on ``(batch, n)`` arrays, used by the Monte-Carlo harness.
The single-sample functions are thin wrappers around the kernels.

All arithmetic is float64.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from ._arith import PLAIN, Arith

_MU_MAX = np.nextafter(1.0, 0.0)


@dataclass(frozen=True, kw_only=True)
class FilterConfig:
    """Parameters of the set-membership recursions.

    ``order`` is the filter order N (the weight vector has ``order + 1``
    taps). ``epsilon`` is the discard threshold, ``gamma_bar`` the error
    bound and ``delta`` the regularizer added to the normalization.
    ``delta = 0`` is accepted for hand-checkable examples; it is only safe
    when the active part of the input never vanishes.
    """

    order: int
    gamma_bar: float
    epsilon: float = 0.0
    delta: float = 1e-12

    def __post_init__(self):
        if int(self.order) != self.order or self.order < 0:
            raise ValueError(f"order must be a nonnegative integer, got {self.order!r}")
        if not self.epsilon >= 0:
            raise ValueError(f"epsilon must be >= 0, got {self.epsilon!r}")
        if not self.gamma_bar > 0:
            raise ValueError(f"gamma_bar must be > 0, got {self.gamma_bar!r}")
        if not self.delta >= 0:
            raise ValueError(f"delta must be >= 0, got {self.delta!r}")

    @property
    def taps(self) -> int:
        return self.order + 1


def _frozen_vector(values, name: str) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be a 1-D vector, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class FilterState:
    """Weight vector ``w(k)`` and iteration counter ``k``.

    The weights are stored as a read-only float64 copy, so a state can be
    shared freely.
    """

    weights: np.ndarray
    iteration: int = 0

    def __post_init__(self):
        object.__setattr__(self, "weights", _frozen_vector(self.weights, "weights"))
        if self.iteration < 0:
            raise ValueError("iteration must be >= 0")

    @property
    def taps(self) -> int:
        return self.weights.shape[0]


@dataclass(frozen=True, eq=False)
class Sample:
    """Regressor ``x(k)`` and desired response ``d(k)``."""

    input: np.ndarray
    desired: float

    def __post_init__(self):
        object.__setattr__(self, "input", _frozen_vector(self.input, "input"))
        object.__setattr__(self, "desired", float(self.desired))


@dataclass(frozen=True)
class UpdateOutcome:
    """What happened during one call of an update function."""

    updated: bool
    error: float
    mu: float
    posterior_error: float
    active_count: int


@dataclass(frozen=True)
class DiscardMask:
    """Diagonal of the 0/1 discard matrix, as booleans.

    The matrix is its own pseudoinverse, so :meth:`apply` serves for both.
    """

    mask: np.ndarray = field()

    def __post_init__(self):
        m = np.array(self.mask, dtype=bool)
        m.setflags(write=False)
        object.__setattr__(self, "mask", m)

    def apply(self, vector) -> np.ndarray:
        """Multiply ``vector`` by the diagonal matrix."""
        return np.where(self.mask, np.asarray(vector, dtype=np.float64), 0.0)

    @property
    def active_count(self) -> int:
        return int(np.count_nonzero(self.mask))


class Step(NamedTuple):
    """Result of a batched kernel call; every field has a leading batch axis."""

    weights: np.ndarray
    error: np.ndarray
    fired: np.ndarray
    active: np.ndarray


def discard(w: float, epsilon: float) -> float:
    """Return ``w`` if ``|w| >= epsilon``, else 0."""
    if epsilon < 0:
        raise ValueError("epsilon must be >= 0")
    return w if abs(w) >= epsilon else 0.0


def discard_vector(weights, epsilon: float) -> np.ndarray:
    """Componentwise :func:`discard`."""
    w = np.asarray(weights, dtype=np.float64)
    return np.where(np.abs(w) >= epsilon, w, 0.0)


def discard_mask(weights, epsilon: float) -> DiscardMask:
    return DiscardMask(np.abs(np.asarray(weights, dtype=np.float64)) >= epsilon)


def a_priori_error(state: FilterState, sample: Sample) -> float:
    _check_dims(state, sample)
    return float(sample.desired - state.weights @ sample.input)


def step_size(error: float, gamma_bar: float) -> float:
    """Data-selective step size: ``1 - gamma_bar/|e|`` outside the bound, else 0."""
    if not gamma_bar > 0:
        raise ValueError("gamma_bar must be > 0")
    return float(_step_size(np.asarray(error, dtype=np.float64), gamma_bar))


def _step_size(error: np.ndarray, gamma_bar: float) -> np.ndarray:
    mag = np.abs(error)
    with np.errstate(divide="ignore", over="ignore"):
        mu = np.where(mag > gamma_bar, 1.0 - gamma_bar / mag, 0.0)
    # huge |e| / gamma_bar would otherwise round up to exactly 1
    return np.minimum(mu, _MU_MAX)


# ---------------------------------------------------------------------------
# batched kernels


def _output_error(W, X, d, ar: Arith, width):
    every = np.ones(d.shape[0], dtype=bool)
    return ar.sub(d, ar.dot(W, X, every, width), every)


def _correction(e, den, fired, gamma_bar, ar: Arith):
    # mu*e/den == (e - gamma_bar*sgn(e))/den; one division per fired update
    num = ar.sub(e, ar.mul(gamma_bar, np.sign(e), fired), fired)
    return ar.div(num, den, fired)


def sm_nlms_step(W, X, d, cfg: FilterConfig, ar: Arith = PLAIN) -> Step:
    """Batched SM-NLMS step. ``W``, ``X`` are ``(batch, n)``; ``d`` is ``(batch,)``."""
    n = W.shape[-1]
    e = _output_error(W, X, d, ar, n)
    fired = np.abs(e) > cfg.gamma_bar
    with np.errstate(divide="ignore", invalid="ignore"):
        den = ar.add(ar.dot(X, X, fired, n), cfg.delta, fired)
        c = _correction(e, den, fired, cfg.gamma_bar, ar)
        moved = ar.add(W, ar.mul(c[:, None], X, fired, n), fired, n)
    W_new = np.where(fired[:, None], moved, W)
    return Step(W_new, e, fired, np.full(e.shape, n, dtype=np.int64))


def _lcsm_step(W, X, d, cfg: FilterConfig, ar: Arith, zero_inactive: bool) -> Step:
    if zero_inactive:
        # zeroed taps drop out of the output computation
        out_width = np.count_nonzero(W, axis=-1)
    else:
        out_width = W.shape[-1]
    e = _output_error(W, X, d, ar, out_width)
    fired = np.abs(e) > cfg.gamma_bar
    mask = np.abs(W) >= cfg.epsilon
    active = np.count_nonzero(mask, axis=-1)
    fx = np.where(mask, X, 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        den = ar.add(ar.dot(fx, fx, fired, active), cfg.delta, fired)
        c = _correction(e, den, fired, cfg.gamma_bar, ar)
        moved = ar.add(W, ar.mul(c[:, None], fx, fired, active), fired, active)
    stepped = np.where(mask, moved, 0.0 if zero_inactive else W)
    W_new = np.where(fired[:, None], stepped, W)
    return Step(W_new, e, fired, active)


def lcsm_nlms1_step(W, X, d, cfg: FilterConfig, ar: Arith = PLAIN) -> Step:
    """Batched LCSM-NLMS1 step; sub-threshold taps are left untouched."""
    return _lcsm_step(W, X, d, cfg, ar, zero_inactive=False)


def lcsm_nlms2_step(W, X, d, cfg: FilterConfig, ar: Arith = PLAIN) -> Step:
    """Batched LCSM-NLMS2 step; sub-threshold taps are zeroed on fired updates."""
    return _lcsm_step(W, X, d, cfg, ar, zero_inactive=True)


# ---------------------------------------------------------------------------
# single-sample API


def _check_dims(state: FilterState, sample: Sample, cfg=None) -> None:
    n = state.taps
    if sample.input.shape[0] != n:
        raise ValueError(f"dimension mismatch: {n} weights but input of length {sample.input.shape[0]}")
    if cfg is not None and getattr(cfg, "order", n - 1) + 1 != n:
        raise ValueError(f"dimension mismatch: config order {cfg.order} but {n} weights")


def check_initialization(weights, epsilon: float) -> None:
    """Raise unless every initial weight lies strictly outside ``[-epsilon, epsilon]``.

    A tap starting inside the dead zone would never be updated by the
    discarding recursions.
    """
    w = np.asarray(weights, dtype=np.float64)
    bad = np.flatnonzero(~(np.abs(w) > epsilon))
    if bad.size:
        raise ValueError(
            f"initial weights must satisfy |w_i| > epsilon={epsilon}; violated at taps {bad.tolist()}"
        )


def initial_state(weights, cfg: FilterConfig | None = None) -> FilterState:
    """Build ``w(0)``, validating it for the discarding recursions when ``cfg`` is given."""
    state = FilterState(weights, 0)
    if cfg is not None:
        if state.taps != cfg.taps:
            raise ValueError(f"dimension mismatch: config order {cfg.order} but {state.taps} weights")
        check_initialization(state.weights, cfg.epsilon)
    return state


def run_single(kernel, state: FilterState, sample: Sample, cfg, ar: Arith = PLAIN):
    """Apply a batched kernel to one (state, sample) pair."""
    _check_dims(state, sample, cfg)
    W = state.weights[None, :]
    X = sample.input[None, :]
    d = np.array([sample.desired])
    step = kernel(W, X, d, cfg, ar)
    w_new = step.weights[0]
    fired = bool(step.fired[0])
    e = float(step.error[0])
    if not fired:
        w_new = state.weights
    outcome = UpdateOutcome(
        updated=fired,
        error=e,
        mu=float(_step_size(step.error[:1], cfg.gamma_bar)[0]),
        posterior_error=float(sample.desired - w_new @ sample.input),
        active_count=int(step.active[0]),
    )
    return FilterState(w_new, state.iteration + 1), outcome


def sm_nlms_update(state: FilterState, sample: Sample, cfg: FilterConfig):
    """One SM-NLMS iteration. Returns ``(next_state, outcome)``."""
    return run_single(sm_nlms_step, state, sample, cfg)


def lcsm_nlms1_update(state: FilterState, sample: Sample, cfg: FilterConfig):
    """One LCSM-NLMS1 iteration.

    Raises
    ------
    ValueError
        On a dimension mismatch, or when called at ``iteration == 0`` with a
        weight inside ``[-epsilon, epsilon]``.
    """
    if state.iteration == 0:
        check_initialization(state.weights, cfg.epsilon)
    return run_single(lcsm_nlms1_step, state, sample, cfg)


def lcsm_nlms2_update(state: FilterState, sample: Sample, cfg: FilterConfig):
    """One LCSM-NLMS2 iteration; same preconditions as :func:`lcsm_nlms1_update`."""
    if state.iteration == 0:
        check_initialization(state.weights, cfg.epsilon)
    return run_single(lcsm_nlms2_step, state, sample, cfg)
