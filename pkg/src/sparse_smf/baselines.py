"""Sparsity-aware set-membership baselines used for comparison.

SM-PNLMS
    Proportionate variant: the update direction is ``G x`` with a diagonal
    gain that favours large taps. Gains follow the classic proportionate
    rule: ``g_i ∝ max(kappa * max(1/scale, max_j |w_j|), |w_i|)``,
    normalized so that ``sum(g) = N + 1``. ``kappa`` keeps small taps from
    freezing; ``1/scale`` keeps an all-zero filter from stalling.

SM-l0-NLMS
    SM-NLMS plus a zero attractor ``-alpha * sgn(w_i) * exp(-beta |w_i|)``,
    the gradient of the Laplacian approximation of the l0 pseudo-norm. The
    attractor acts only on iterations where the error gate fires.

Both share the gate and the ``mu(k)`` rule of :mod:`sparse_smf.core`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._arith import PLAIN, Arith
from .core import FilterState, Sample, Step, _correction, _output_error, run_single


@dataclass(frozen=True, kw_only=True)
class PnlmsConfig:
    order: int
    gamma_bar: float
    delta: float = 1e-12
    kappa: float = 0.01
    scale: float = 100.0

    def __post_init__(self):
        if int(self.order) != self.order or self.order < 0:
            raise ValueError(f"order must be a nonnegative integer, got {self.order!r}")
        for name in ("gamma_bar", "delta", "kappa", "scale"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0, got {getattr(self, name)!r}")

    @property
    def taps(self) -> int:
        return self.order + 1


@dataclass(frozen=True, kw_only=True)
class L0NlmsConfig:
    order: int
    gamma_bar: float
    delta: float = 1e-12
    alpha: float = 0.005
    beta: float = 5.0

    def __post_init__(self):
        if int(self.order) != self.order or self.order < 0:
            raise ValueError(f"order must be a nonnegative integer, got {self.order!r}")
        for name in ("gamma_bar", "delta", "beta"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0, got {getattr(self, name)!r}")
        if not self.alpha >= 0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha!r}")

    @property
    def taps(self) -> int:
        return self.order + 1


def proportionate_gains(W, cfg: PnlmsConfig, rows=None, ar: Arith = PLAIN) -> np.ndarray:
    """Diagonal gains for each row of ``W``; positive, each row sums to ``n``."""
    W = np.atleast_2d(np.asarray(W, dtype=np.float64))
    n = W.shape[-1]
    if rows is None:
        rows = np.ones(W.shape[0], dtype=bool)
    mag = np.abs(W)
    floor = ar.mul(cfg.kappa, np.maximum(1.0 / cfg.scale, mag.max(axis=-1)), rows)
    raw = np.maximum(floor[:, None], mag)
    total = np.sum(raw, axis=-1)
    if ar.tally is not None:
        ar.tally.add_sub += int(np.count_nonzero(rows)) * (n - 1)
    s = ar.div(float(n), total, rows)
    return ar.mul(s[:, None], raw, rows, n)


def sm_pnlms_step(W, X, d, cfg: PnlmsConfig, ar: Arith = PLAIN) -> Step:
    n = W.shape[-1]
    e = _output_error(W, X, d, ar, n)
    fired = np.abs(e) > cfg.gamma_bar
    with np.errstate(divide="ignore", invalid="ignore"):
        gx = ar.mul(proportionate_gains(W, cfg, fired, ar), X, fired, n)
        den = ar.add(ar.dot(X, gx, fired, n), cfg.delta, fired)
        c = _correction(e, den, fired, cfg.gamma_bar, ar)
        moved = ar.add(W, ar.mul(c[:, None], gx, fired, n), fired, n)
    W_new = np.where(fired[:, None], moved, W)
    return Step(W_new, e, fired, np.full(e.shape, n, dtype=np.int64))


def zero_attractor(W, cfg: L0NlmsConfig, rows=None, ar: Arith = PLAIN) -> np.ndarray:
    """``alpha * sgn(w) * exp(-beta |w|)``; subtract it from the weights."""
    W = np.atleast_2d(np.asarray(W, dtype=np.float64))
    n = W.shape[-1]
    if rows is None:
        rows = np.ones(W.shape[0], dtype=bool)
    decay = np.exp(-ar.mul(cfg.beta, np.abs(W), rows, n))
    return np.sign(W) * ar.mul(cfg.alpha, decay, rows, n)


def sm_l0_nlms_step(W, X, d, cfg: L0NlmsConfig, ar: Arith = PLAIN) -> Step:
    n = W.shape[-1]
    e = _output_error(W, X, d, ar, n)
    fired = np.abs(e) > cfg.gamma_bar
    with np.errstate(divide="ignore", invalid="ignore"):
        den = ar.add(ar.dot(X, X, fired, n), cfg.delta, fired)
        c = _correction(e, den, fired, cfg.gamma_bar, ar)
        moved = ar.add(W, ar.mul(c[:, None], X, fired, n), fired, n)
        moved = ar.sub(moved, zero_attractor(W, cfg, fired, ar), fired, n)
    W_new = np.where(fired[:, None], moved, W)
    return Step(W_new, e, fired, np.full(e.shape, n, dtype=np.int64))


def sm_pnlms_update(state: FilterState, sample: Sample, cfg: PnlmsConfig):
    return run_single(sm_pnlms_step, state, sample, cfg)


def sm_l0_nlms_update(state: FilterState, sample: Sample, cfg: L0NlmsConfig):
    return run_single(sm_l0_nlms_step, state, sample, cfg)
