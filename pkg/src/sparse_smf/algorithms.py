"""Name-based registry of the update recursions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from . import baselines, core


@dataclass(frozen=True)
class Algorithm:
    name: str
    label: str
    step: Callable
    config_type: type
    discards: bool = False  # needs |w_i(0)| > epsilon


ALGORITHMS: dict[str, Algorithm] = {
    a.name: a
    for a in (
        Algorithm("sm-nlms", "SM-NLMS", core.sm_nlms_step, core.FilterConfig),
        Algorithm("lcsm-nlms1", "LCSM-NLMS1", core.lcsm_nlms1_step, core.FilterConfig, True),
        Algorithm("lcsm-nlms2", "LCSM-NLMS2", core.lcsm_nlms2_step, core.FilterConfig, True),
        Algorithm("sm-pnlms", "SM-PNLMS", baselines.sm_pnlms_step, baselines.PnlmsConfig),
        Algorithm("sm-l0-nlms", "SM-l0-NLMS", baselines.sm_l0_nlms_step, baselines.L0NlmsConfig),
    )
}


def get_algorithm(name: str) -> Algorithm:
    try:
        return ALGORITHMS[name.lower()]
    except KeyError:
        raise KeyError(f"unknown algorithm {name!r}; known: {', '.join(ALGORITHMS)}") from None


def check_config(algo: Algorithm, cfg) -> None:
    if not isinstance(cfg, algo.config_type):
        raise TypeError(f"{algo.name} expects {algo.config_type.__name__}, got {type(cfg).__name__}")


def update(name: str, state: core.FilterState, sample: core.Sample, cfg, ar=None):
    """Run one iteration of the named recursion; ``(next_state, outcome)``."""
    algo = get_algorithm(name)
    check_config(algo, cfg)
    if algo.discards and state.iteration == 0:
        core.check_initialization(state.weights, cfg.epsilon)
    if ar is None:
        return core.run_single(algo.step, state, sample, cfg)
    return core.run_single(algo.step, state, sample, cfg, ar)
