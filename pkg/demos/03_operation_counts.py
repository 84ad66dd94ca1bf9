"""Closed-form versus measured arithmetic, per update and over a whole run."""
from sparse_smf.cli import probe_count
from sparse_smf.complexity import predicted_count
from sparse_smf.sim import preset_experiment, run_experiment

print("worst case, one fired update (add/sub, mul, div)")
for N in (0, 12, 64):
    for name in ("lcsm-nlms1", "sm-pnlms", "sm-l0-nlms"):
        print(f"  N={N:2d} {name:11s} closed form {predicted_count(name, N).as_tuple()} "
              f"measured {probe_count(name, N).as_tuple()}")

cfg = preset_experiment("system1", runs=50)
print("\nwhole experiment, system1, 50 runs x 2000 iterations")
for name, r in run_experiment(cfg).items():
    per_iter = [v / (cfg.runs * cfg.iterations) for v in r.ops.as_tuple()]
    print(f"  {name:12s} per iteration: add/sub {per_iter[0]:6.2f} mul {per_iter[1]:6.2f} div {per_iter[2]:.3f}")
