"""How update rate and active-set size of LCSM-NLMS2 depend on run length.

The overall update rate is dominated by the convergence transient on short
runs and approaches the steady-state firing probability on long ones.
Near-zero taps leave the active set one by one as they happen to land
inside the dead zone, so the active count keeps shrinking long after the
error has converged.
"""
from sparse_smf.sim import preset_experiment, run_algorithm

for system in ("system1", "system2", "system3"):
    base = preset_experiment(system)
    algos = {"lcsm-nlms2": base.algorithms["lcsm-nlms2"]}
    for K in (500, 2000, 5000, 20000):
        cfg = preset_experiment(system, runs=50, iterations=K, algorithms=algos)
        r = run_algorithm(cfg, "lcsm-nlms2")
        print(f"{system} K={K:6d} update rate {100 * r.update_rate:5.2f}%  "
              f"active taps: mode {r.active_mode()}, mean {r.mean_active():.2f} (true support {cfg.system.support})")
