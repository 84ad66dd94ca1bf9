"""Monte-Carlo system identification.

Every run draws an i.i.d. standard-Gaussian input, feeds it through a
tapped delay line (zero pre-history) into an unknown FIR system and adds
white Gaussian noise. All runs of an experiment advance in lock-step as one
``(runs, n)`` batch, and every algorithm sees the same data.

Random streams are keyed on ``(seed, run_index)`` so any single run can be
regenerated on its own with :func:`generate_run`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from ._arith import Arith, OpCount, Tally
from .algorithms import get_algorithm, check_config
from .baselines import L0NlmsConfig, PnlmsConfig
from .core import FilterConfig, check_initialization

SYSTEMS = {
    "system1": (0.02, 0, 0, 0, 0, 0.6, 0, 0, 0.25, 0, 0, 0, 0),
    "system2": (0, 0, 0, 0, 0.3, 0.6, -0.5, 0.7, 0, 0, 0, 0, 0),
    "system3": (0, 0, 0, 0, 0.3, 0.5, 0.7, 0.5, 0.3, 0, 0, 0, 0),
}

DEFAULT_NOISE_VARIANCE = 0.01
DEFAULT_EPSILON = 1e-4
DEFAULT_DELTA = 1e-12
DEFAULT_INITIAL_WEIGHT = 0.1


@dataclass(frozen=True, eq=False)
class SparseSystem:
    """Impulse response of the unknown system."""

    coefficients: np.ndarray
    name: str = "custom"

    def __post_init__(self):
        c = np.array(self.coefficients, dtype=np.float64)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coefficients must be a non-empty 1-D vector")
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)

    @classmethod
    def preset(cls, name: str) -> "SparseSystem":
        key = name.lower().replace(" ", "").replace("_", "")
        if key not in SYSTEMS:
            raise KeyError(f"unknown system {name!r}; known: {', '.join(SYSTEMS)}")
        return cls(SYSTEMS[key], key)

    @property
    def order(self) -> int:
        return self.coefficients.size - 1

    @property
    def support(self) -> int:
        return int(np.count_nonzero(self.coefficients))


@dataclass(frozen=True, kw_only=True, eq=False)
class ExperimentConfig:
    system: SparseSystem
    algorithms: dict  # name -> algorithm config
    runs: int = 500
    iterations: int = 2000
    noise_variance: float = DEFAULT_NOISE_VARIANCE
    initial_weight: float = DEFAULT_INITIAL_WEIGHT
    steady_state_fraction: float = 0.2
    seed: int = 0

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if not self.noise_variance >= 0:
            raise ValueError("noise_variance must be >= 0")
        if not 0 < self.steady_state_fraction <= 1:
            raise ValueError("steady_state_fraction must lie in (0, 1]")
        if not self.algorithms:
            raise ValueError("at least one algorithm is required")
        for name, cfg in self.algorithms.items():
            algo = get_algorithm(name)
            check_config(algo, cfg)
            if cfg.order != self.system.order:
                raise ValueError(
                    f"dimension mismatch: {name} has order {cfg.order}, system has order {self.system.order}"
                )
            if algo.discards:
                check_initialization(np.full(self.system.order + 1, self.initial_weight), cfg.epsilon)
        object.__setattr__(self, "seed", int(self.seed))

    @property
    def steady_state_start(self) -> int:
        return self.iterations - _window(self.steady_state_fraction, self.iterations)

    def with_(self, **changes) -> "ExperimentConfig":
        return replace(self, **changes)


def _window(fraction: float, length: int) -> int:
    """Trailing-window width; never empty."""
    return min(length, max(1, round(fraction * length)))


def default_algorithms(order: int = 12, noise_variance: float = DEFAULT_NOISE_VARIANCE) -> dict:
    """Default algorithm configs for the preset experiments."""
    gamma_bar = math.sqrt(5 * noise_variance)
    lcsm = FilterConfig(order=order, gamma_bar=gamma_bar, epsilon=DEFAULT_EPSILON, delta=DEFAULT_DELTA)
    return {
        "sm-pnlms": PnlmsConfig(order=order, gamma_bar=gamma_bar, delta=DEFAULT_DELTA),
        "sm-l0-nlms": L0NlmsConfig(order=order, gamma_bar=gamma_bar, delta=DEFAULT_DELTA, alpha=0.005, beta=5.0),
        "lcsm-nlms2": lcsm,
    }


def preset_experiment(system: str, **overrides) -> ExperimentConfig:
    """Preset experiment for one of the three test systems."""
    sysm = SparseSystem.preset(system)
    noise = overrides.pop("noise_variance", DEFAULT_NOISE_VARIANCE)
    algos = overrides.pop("algorithms", None) or default_algorithms(sysm.order, noise)
    return ExperimentConfig(system=sysm, algorithms=algos, noise_variance=noise, **overrides)


# ---------------------------------------------------------------------------
# data


def _run_rng(seed: int, run_index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed & 0xFFFFFFFFFFFFFFFF, run_index]))


def _draw(cfg: ExperimentConfig, run_index: int):
    rng = _run_rng(cfg.seed, run_index)
    u = rng.standard_normal(cfg.iterations)
    noise = math.sqrt(cfg.noise_variance) * rng.standard_normal(cfg.iterations)
    return u, noise


def delay_line(u: np.ndarray, taps: int) -> np.ndarray:
    """Regressors ``x(k) = [u(k), u(k-1), ..., u(k-taps+1)]`` with zero pre-history.

    ``u`` may carry leading batch axes; the result has shape ``u.shape + (taps,)``
    and is a read-only view.
    """
    pad = [(0, 0)] * (u.ndim - 1) + [(taps - 1, 0)]
    padded = np.pad(u, pad)
    return sliding_window_view(padded, taps, axis=-1)[..., ::-1]


def generate_run(cfg: ExperimentConfig, run_index: int):
    """Regressors ``(iterations, n)`` and desired signal ``(iterations,)`` for one run."""
    u, noise = _draw(cfg, run_index)
    X = delay_line(u, cfg.system.order + 1)
    d = X @ cfg.system.coefficients + noise
    return X, d


def _generate_batch(cfg: ExperimentConfig):
    u = np.empty((cfg.runs, cfg.iterations))
    noise = np.empty((cfg.runs, cfg.iterations))
    for r in range(cfg.runs):
        u[r], noise[r] = _draw(cfg, r)
    X = delay_line(u, cfg.system.order + 1)
    d = np.einsum("rkn,n->rk", X, cfg.system.coefficients) + noise
    return X, d


# ---------------------------------------------------------------------------
# ensemble


@dataclass(frozen=True, eq=False)
class EnsembleResult:
    """Ensemble statistics of one algorithm in one experiment.

    ``active_trace[r, k]`` is the number of taps at or above the discard
    threshold entering iteration ``k`` of run ``r`` (all taps for the
    non-discarding recursions). ``steady_state_active[r, m]`` counts fired
    updates of run ``r`` in the steady-state window that had ``m`` active
    taps. ``run_steady_mse[r]`` is the mean squared error of run ``r`` over
    the same window.
    """

    algorithm: str
    mse_curve: np.ndarray
    update_rate: float
    fired_per_run: np.ndarray
    steady_state_active: np.ndarray
    active_trace: np.ndarray
    ops: OpCount
    final_weights: np.ndarray
    steady_state_start: int
    run_steady_mse: np.ndarray

    @property
    def iterations(self) -> int:
        return self.mse_curve.shape[0]

    @property
    def mse_db(self) -> np.ndarray:
        return mse_to_db(self.mse_curve)

    def active_histogram(self) -> np.ndarray:
        return self.steady_state_active.sum(axis=0)

    def active_mode(self) -> int | None:
        """Most frequent active count among steady-state fired updates (ties: smallest)."""
        hist = self.active_histogram()
        return int(np.argmax(hist)) if hist.sum() else None

    def mean_active(self) -> float:
        hist = self.active_histogram()
        total = hist.sum()
        return float(hist @ np.arange(hist.size) / total) if total else float("nan")


def mse_to_db(mse):
    with np.errstate(divide="ignore"):
        return 10.0 * np.log10(mse)


def run_algorithm(cfg: ExperimentConfig, name: str, data=None) -> EnsembleResult:
    algo = get_algorithm(name)
    acfg = cfg.algorithms[name]
    X, d = data if data is not None else _generate_batch(cfg)
    runs, K, n = X.shape
    W = np.full((runs, n), cfg.initial_weight)
    tally = Tally()
    ar = Arith(tally)
    sq_err = np.empty((runs, K))
    fired_all = np.empty((runs, K), dtype=bool)
    active = np.empty((runs, K), dtype=np.int16)
    for k in range(K):
        step = algo.step(W, np.ascontiguousarray(X[:, k, :]), d[:, k], acfg, ar)
        sq_err[:, k] = step.error * step.error
        fired_all[:, k] = step.fired
        active[:, k] = step.active
        W = step.weights
    start = cfg.steady_state_start
    hist = np.zeros((runs, n + 1), dtype=np.int64)
    tail_fired = fired_all[:, start:]
    tail_active = active[:, start:]
    for r in range(runs):
        hist[r] = np.bincount(tail_active[r][tail_fired[r]], minlength=n + 1)
    fired_per_run = fired_all.sum(axis=1)
    return EnsembleResult(
        algorithm=algo.name,
        # fixed reduction order over runs
        mse_curve=sq_err.mean(axis=0),
        update_rate=float(fired_per_run.sum() / (runs * K)),
        fired_per_run=fired_per_run,
        steady_state_active=hist,
        active_trace=active,
        ops=tally.freeze(),
        final_weights=W,
        steady_state_start=start,
        run_steady_mse=sq_err[:, start:].mean(axis=1),
    )


def run_experiment(cfg: ExperimentConfig) -> dict[str, EnsembleResult]:
    """Run every configured algorithm on shared data; results keyed by algorithm name."""
    data = _generate_batch(cfg)
    return {name: run_algorithm(cfg, name, data) for name in cfg.algorithms}


def steady_state_mse(result: EnsembleResult, window_fraction: float = 0.2) -> float:
    """Mean of the MSE curve over its trailing ``window_fraction``."""
    if not 0 < window_fraction <= 1:
        raise ValueError("window_fraction must lie in (0, 1]")
    K = result.mse_curve.shape[0]
    if K == 0:
        raise ValueError("empty MSE curve")
    width = _window(window_fraction, K)
    return float(result.mse_curve[K - width:].mean())
