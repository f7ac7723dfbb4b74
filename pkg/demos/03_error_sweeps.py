"""Error sweeps through the sweep engine, written as CSV.

The shipped recipes in ``recipes/`` regenerate the full curves and contours;
this script runs a coarse version in-process. If matplotlib happens to be
installed it also saves a PNG, otherwise it stops at the CSV files.
"""
# %%
import sys
from pathlib import Path

from compositems.scan import Axis, SequenceSpec, SweepSpec, run_sweep, write_csv

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_output")
out.mkdir(exist_ok=True)

sequences = {
    "standard": SequenceSpec("single", "const"),
    "B2 sin32": SequenceSpec("B2", "sin32"),
    "two-tone": SequenceSpec("single", "twotone"),
}

# %%
curves = {}
for channel, span in (("timing", 0.1), ("detuning_static", 0.1), ("coupling", 0.2)):
    for label, seq in sequences.items():
        spec = SweepSpec(Axis(channel, -span, span, 11), sequence=seq, threads=2)
        result = run_sweep(spec)
        write_csv(result, out / f"{channel}_{label.replace(' ', '_')}.csv")
        curves[channel, label] = ([r[0] for r in result.rows], result.infidelities)
        print(f"{channel:16s} {label:9s} worst infidelity {max(result.infidelities):.2e}")

# %% [markdown]
# A 2D grid: drift rate against coupling error.

# %%
grid = run_sweep(SweepSpec(Axis("drift_rate", -0.004, 0.004, 5), Axis("coupling", -0.1, 0.1, 5),
                           sequence=sequences["B2 sin32"], threads=2))
write_csv(grid, out / "drift_coupling.csv")
print(grid.infidelities)

# %%
try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print(f"CSV files in {out}/ (matplotlib not available for the figure)")
else:
    fig, axes = plt.subplots(1, 3, figsize=(12, 3.5))
    for ax, channel in zip(axes, ("timing", "detuning_static", "coupling")):
        for label in sequences:
            x, y = curves[channel, label]
            ax.semilogy(x, y, label=label)
        ax.set_xlabel(channel)
    axes[0].set_ylabel("gate infidelity")
    axes[0].legend()
    fig.tight_layout()
    fig.savefig(out / "error_curves.png", dpi=120)
    print(f"figure and CSV files in {out}/")
