"""Composite amplitude-modulated Mølmer–Sørensen gates: analytics, dynamics and error sweeps."""
from .analytic import (
    AlphaTheta,
    alpha_multitone,
    alpha_numeric,
    calibrate_amplitude,
    closed_form_alpha_theta,
    closure_phase,
    constant_relations,
    displacement_matrix,
    ms_propagator,
    theta_numeric,
)
from .composite import (
    GateSequence,
    broadband_residual,
    build_B1,
    build_B2,
    build_sequence,
    build_single,
    composite_phi,
    manifest,
    rotational_propagator,
    target_gate,
)
from .dynamics import (
    ErrorModel,
    IntegratorSettings,
    build_hamiltonian,
    evolve_segment,
    evolve_sequence,
    propagator_numeric,
)
from .hilbert import HilbertConfig, basis_state, embed, ladder_ops, matrix_exp, sigma_phase
from .metrics import FidelityReport, bell_target, gate_fidelity, state_infidelity
from .modulation import Constant, MultiTone, PulseSegment, SineCosine, eval_envelope, preset, two_tone_amplitudes
from .presets import to_natural_units, yb171_preset
from .scan import Axis, SequenceSpec, SweepSpec, run_sweep, write_csv

__version__ = "0.1.0"
