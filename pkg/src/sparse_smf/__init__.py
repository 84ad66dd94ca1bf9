"""Sparsity-aware set-membership NLMS filters and experiment harness."""

__version__ = "0.1.0"

from ._arith import OpCount
from .algorithms import ALGORITHMS, get_algorithm, update
from .baselines import L0NlmsConfig, PnlmsConfig, sm_l0_nlms_update, sm_pnlms_update
from .complexity import counted_update, predicted_count
from .core import (
    DiscardMask,
    FilterConfig,
    FilterState,
    Sample,
    UpdateOutcome,
    a_priori_error,
    discard,
    discard_mask,
    discard_vector,
    initial_state,
    lcsm_nlms1_update,
    lcsm_nlms2_update,
    sm_nlms_update,
    step_size,
)
from .sim import (
    EnsembleResult,
    ExperimentConfig,
    SparseSystem,
    generate_run,
    preset_experiment,
    run_experiment,
    steady_state_mse,
)
