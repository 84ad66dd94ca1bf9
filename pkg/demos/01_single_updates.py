"""Step through the three recursions on a two-tap filter.

The second tap sits below the discard threshold. SM-NLMS moves both taps,
LCSM-NLMS1 freezes the small one, LCSM-NLMS2 zeroes it.

    python demos/01_single_updates.py
"""
import numpy as np

from sparse_smf import (
    FilterConfig,
    FilterState,
    Sample,
    discard_mask,
    lcsm_nlms1_update,
    lcsm_nlms2_update,
    sm_nlms_update,
)

cfg = FilterConfig(order=1, epsilon=0.01, gamma_bar=0.2236, delta=1e-12)
state = FilterState([0.2, 0.001], iteration=5)
sample = Sample([1.0, 1.0], desired=1.0)

print("mask:", discard_mask(state.weights, cfg.epsilon).mask)
for update in (sm_nlms_update, lcsm_nlms1_update, lcsm_nlms2_update):
    new, out = update(state, sample, cfg)
    print(f"{update.__name__:18s} w={np.round(new.weights, 6)} e={out.error:.4f} "
          f"mu={out.mu:.4f} posterior={out.posterior_error:.4f} active={out.active_count}")

# inside the error bound nothing happens
new, out = lcsm_nlms2_update(state, Sample([1.0, 1.0], 0.3), cfg)
print("within bound:", out.updated, new.weights)
