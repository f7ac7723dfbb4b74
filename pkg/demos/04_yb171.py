"""The sin(3t/2)^2 B2 sequence on a 171Yb+ pair, including the a.c. Stark shift.

Physical numbers enter only here; everything is converted to units in which
the 500 us sequence spans [0, 2pi] and the detuning is 1.
"""
# %%
import math

import numpy as np

from compositems import ErrorModel, HilbertConfig, basis_state, bell_target, state_infidelity, yb171_preset
from compositems.dynamics import evolve_sequence, population_history
from compositems.presets import preset_sequence, to_natural_units

p = yb171_preset()
nat = to_natural_units(p)
print(f"couplings g/2pi [kHz]: {[round(g / 2e3 / math.pi, 3) for g in p.couplings]}")
print(f"natural units: eps = {nat.eps:.12g}, g = {[round(g, 4) for g in nat.couplings]}")
print(f"Stark limits [Hz]: {p.stark_limits_hz}")

# %% [markdown]
# Populations of |00> and |11> during the sequence (motion traced out).

# %%
seq = preset_sequence(p)
cfg = HilbertConfig(35)
stark = ErrorModel(stark_fraction=0.006)
times, pops = population_history(basis_state("00", 0, cfg), seq, stark, cfg=cfg, samples_per_segment=6)
for t, row in zip(times[::3], pops[::3]):
    print(f"t = {t * nat.time_unit * 1e6:6.1f} us   P00 = {row[0]:.4f}   P11 = {row[3]:.4f}")

# %% [markdown]
# Static detuning scan with the Stark shift switched on.

# %%
for d in np.linspace(-0.008, 0.008, 5):
    psi = evolve_sequence(basis_state("00", 0, cfg), seq, stark.with_(detuning_static=d), cfg=cfg)
    inf = state_infidelity(bell_target(cfg), psi).infidelity
    print(f"delta1 = {d:+.3f} ({d * p.detuning / 2 / math.pi:+6.1f} Hz)   infidelity {inf:.2e}")
