"""Identify the three sparse test systems and plot the learning curves.

Uses fewer runs than the full preset so it finishes in a few seconds; pass
``--runs 500`` for the full ensemble. Plots need matplotlib.

    python demos/02_system_identification.py --runs 100 --plot curves.png
"""
import argparse

from sparse_smf.sim import mse_to_db, preset_experiment, run_experiment, steady_state_mse

parser = argparse.ArgumentParser()
parser.add_argument("--runs", type=int, default=100)
parser.add_argument("--iterations", type=int, default=2000)
parser.add_argument("--seed", type=int, default=0)
parser.add_argument("--plot", help="write a figure to this path")
args = parser.parse_args()

results = {}
for system in ("system1", "system2", "system3"):
    cfg = preset_experiment(system, runs=args.runs, iterations=args.iterations, seed=args.seed)
    results[system] = run_experiment(cfg)
    print(system)
    for name, r in results[system].items():
        print(f"  {name:12s} update rate {100 * r.update_rate:5.2f}%  "
              f"steady MSE {float(mse_to_db(steady_state_mse(r))):6.2f} dB  "
              f"active taps at steady-state updates {r.mean_active():5.2f}")

if args.plot:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(1, 3, figsize=(14, 4), sharey=True)
    for ax, (system, res) in zip(axes, results.items()):
        for name, r in res.items():
            ax.plot(r.mse_db, label=name, lw=0.8)
        ax.set_title(system)
        ax.set_xlabel("iteration")
    axes[0].set_ylabel("MSE (dB)")
    axes[0].legend()
    fig.tight_layout()
    fig.savefig(args.plot, dpi=120)
    print("wrote", args.plot)
