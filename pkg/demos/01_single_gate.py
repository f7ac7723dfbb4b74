"""A single Mølmer–Sørensen pulse, analytic and simulated.

Run with ``python demos/01_single_gate.py``. Prints numbers only.
"""
# %% [markdown]
# The constant-coupling gate closes its phase-space loop after one detuning
# period. With eps = 4|g| the enclosed area gives the pi/4 rotation that maps
# |00> onto (|00> + i|11>)/sqrt(2).

# %%
import math

import numpy as np

from compositems import (
    HilbertConfig,
    basis_state,
    bell_target,
    build_single,
    calibrate_amplitude,
    constant_relations,
    evolve_sequence,
    state_infidelity,
)
from compositems.analytic import trajectory

eps, tau = constant_relations(0.25)
print(f"|g| = 0.25  ->  eps = {eps:g}, gate time = {tau:.6f} (2pi = {2 * math.pi:.6f})")

# %% [markdown]
# Calibration: the rotation grows as |g|^2, so one quadrature at unit
# amplitude fixes the coupling of every envelope.

# %%
for shape, (e, window) in {"const": (1, 2 * math.pi), "sin14": (1, 4 * math.pi),
                           "sincos": (3, 2 * math.pi), "sin32": (1, 2 * math.pi)}.items():
    g = calibrate_amplitude(shape, e, (0, window), math.pi / 4)
    print(f"{shape:7s} eps={e}  window=[0, {window / math.pi:g} pi]  |g0| = {g:.5f}")

# %% [markdown]
# The displacement alpha(t) traces a closed loop. Sampling it shows the
# maximum excursion, which sets how many Fock levels the simulation needs.

# %%
gate = build_single(math.pi / 4, "sin32")
loop = trajectory(gate.segments[0], 201)
print(f"sin32 loop: max |alpha| = {np.max(np.abs(loop.alphas)):.4f}, end point |alpha| = {abs(loop.alphas[-1]):.1e}")

# %% [markdown]
# Finally, integrate the Schrödinger equation from |00>|0_m>.

# %%
cfg = HilbertConfig(14)
for shape in ("const", "sin32", "twotone"):
    seq = build_single(math.pi / 4, shape)
    psi = evolve_sequence(basis_state("00", 0, cfg), seq, cfg=cfg)
    print(f"{shape:8s} Bell-state infidelity {state_infidelity(bell_target(cfg), psi).infidelity:.2e}")
