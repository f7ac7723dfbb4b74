"""Composite MS sequences built from amplitude-modulated pulse pairs.

Every logical rotation ``(theta)_phi = exp(i theta sigma_x sigma(phi))`` is made
of two physical pulses rotating by ``theta/2`` each; the second pulse gets a
``zeta-`` jump that cancels the first pulse's displacement. Both pulses carry
``zeta_2+ = phi``. The envelope window is split into six equal sub-intervals,
one per physical pulse.

    B1(theta) = F(-2 phi) (pi/2)_{3 phi} (pi/2)_{phi} (theta)_0
    B2(theta) = (theta)_0 (pi/2)_{phi} (pi/2)_{3 phi} F(2 phi)

(operators act right to left) with ``phi = arccos(-theta / pi)`` and
``F(x) = exp(-i x sigma_z)`` on qubit 2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .analytic import (
    _modulation,
    calibrate_amplitude,
    closure_phase,
    rotation_matrix,
    theta_numeric,
)
from .hilbert import IDENTITY2
from .modulation import MultiTone, PulseSegment

# (eps, window end) of a single gate reaching pi/4 on the first closed loop
SINGLE_DEFAULTS = {
    "const": (1.0, 2 * math.pi),
    "sin14": (1.0, 4 * math.pi),
    "sin32": (1.0, 2 * math.pi),
    "sincos": (3.0, 2 * math.pi),
    "twotone": (1.0, 2 * math.pi),
}
# (eps, window end) of the six-pulse B1/B2 sequences
SEQUENCE_DEFAULTS = {
    "const": (1.0, 2 * math.pi),
    "sin14": (1.0, 12 * math.pi),
    "sin32": (1.0, 2 * math.pi),
    "sincos": (3.0, 6 * math.pi),
}


@dataclass(frozen=True)
class LogicalGate:
    theta: float
    phi: float

    def __post_init__(self):
        if not self.theta > 0:
            raise ValueError(f"logical rotation must be positive, got {self.theta}")


@dataclass(frozen=True)
class PhaseGate:
    """Instantaneous ``exp(-i phi_F sigma_z)`` on ``target_qubit``."""

    position: str
    target_qubit: int
    phi_F: float

    def __post_init__(self):
        if self.position not in ("first", "last"):
            raise ValueError(f"phase gate position must be 'first' or 'last', got {self.position!r}")
        if self.target_qubit not in (1, 2):
            raise ValueError(f"target qubit must be 1 or 2, got {self.target_qubit}")


@dataclass(frozen=True)
class GateSequence:
    segments: tuple
    theta_total: float
    label: str
    phase_gate: PhaseGate | None = None
    logical: tuple = ()
    shape: str = ""
    window: tuple = ()
    segment_thetas: tuple = field(default=(), repr=False)

    @property
    def t_start(self) -> float:
        return self.segments[0].t_start

    @property
    def t_end(self) -> float:
        return self.segments[-1].t_end


def composite_phi(theta: float) -> float:
    """Phase ``arccos(-theta/pi)`` of the two pi/2 correction gates."""
    if abs(theta / math.pi) > 1:
        raise ValueError(f"need |theta| <= pi, got {theta}")
    return math.acos(-theta / math.pi)


def phase_gate_matrix(phi: float, qubit: int = 2) -> np.ndarray:
    """Two-qubit ``exp(-i phi sigma_z)`` acting on one qubit."""
    f = np.diag([np.exp(-1j * phi), np.exp(1j * phi)])
    return np.kron(f, IDENTITY2) if qubit == 1 else np.kron(IDENTITY2, f)


def target_gate(theta: float) -> np.ndarray:
    """``exp(i theta sigma_x sigma_x)``."""
    return rotation_matrix(theta, (0.0, 0.0))


def _resolve(shape, eps, window, defaults):
    name = shape if isinstance(shape, str) else ""
    if eps is None or window is None:
        if name not in defaults:
            raise ValueError(f"no default (eps, window) for shape {shape!r}; pass them explicitly")
        d_eps, d_end = defaults[name]
        eps = d_eps if eps is None else eps
        window = (0.0, d_end) if window is None else window
    return name, _modulation(shape), float(eps), (float(window[0]), float(window[1]))


def build_single(theta: float = math.pi / 4, shape="const", eps: float | None = None,
                 window=None) -> GateSequence:
    """One MS pulse calibrated to ``theta`` over ``window``.

    The two-tone coupling is not calibrated: its amplitudes are fixed by the detuning.
    """
    name, mod, eps, window = _resolve(shape, eps, window, SINGLE_DEFAULTS)
    if isinstance(mod, MultiTone):
        seg = PulseSegment(mod, 1.0, eps, *window)
        return GateSequence((seg,), theta, "single", None, (LogicalGate(theta, 0.0),), name, window)
    g = calibrate_amplitude(mod, eps, window, theta)
    seg = PulseSegment(mod, 1j * g, eps, *window)
    return GateSequence((seg,), theta, "single", None, (LogicalGate(theta, 0.0),), name, window,
                        (theta,))


def _pairs_from_logical(logical, mod, eps, window, stark_coef):
    edges = np.linspace(window[0], window[1], 2 * len(logical) + 1)
    segments, thetas = [], []
    for k, gate in enumerate(logical):
        i1, i2 = (edges[2 * k], edges[2 * k + 1]), (edges[2 * k + 1], edges[2 * k + 2])
        g1 = 1j * calibrate_amplitude(mod, eps, i1, gate.theta / 2)
        g2 = 1j * calibrate_amplitude(mod, eps, i2, gate.theta / 2)
        zm = closure_phase(mod, g1, eps, i1, i2, g0_second=g2)
        segments.append(PulseSegment(mod, g1, eps, *i1, (0.0, gate.phi), 0.0, stark_coef))
        segments.append(PulseSegment(mod, g2, eps, *i2, (0.0, gate.phi), zm, stark_coef))
        thetas += [gate.theta / 2, gate.theta / 2]
    return tuple(segments), tuple(thetas)


def build_B1(theta: float = math.pi / 4, shape="sin32", eps: float | None = None, window=None,
             stark_coef: float = 0.0) -> GateSequence:
    """``F(-2 phi) (pi/2)_{3 phi} (pi/2)_{phi} (theta)_0``; the phase gate comes last."""
    name, mod, eps, window = _resolve(shape, eps, window, SEQUENCE_DEFAULTS)
    phi = composite_phi(theta)
    logical = (LogicalGate(theta, 0.0), LogicalGate(math.pi / 2, phi), LogicalGate(math.pi / 2, 3 * phi))
    segments, thetas = _pairs_from_logical(logical, mod, eps, window, stark_coef)
    return GateSequence(segments, theta, "B1", PhaseGate("last", 2, -2 * phi), logical, name,
                        window, thetas)


def build_B2(theta: float = math.pi / 4, shape="sin32", eps: float | None = None, window=None,
             stark_coef: float = 0.0) -> GateSequence:
    """``(theta)_0 (pi/2)_{phi} (pi/2)_{3 phi} F(2 phi)``; the rotating gate comes last."""
    name, mod, eps, window = _resolve(shape, eps, window, SEQUENCE_DEFAULTS)
    phi = composite_phi(theta)
    logical = (LogicalGate(math.pi / 2, 3 * phi), LogicalGate(math.pi / 2, phi), LogicalGate(theta, 0.0))
    segments, thetas = _pairs_from_logical(logical, mod, eps, window, stark_coef)
    return GateSequence(segments, theta, "B2", PhaseGate("first", 2, 2 * phi), logical, name,
                        window, thetas)


def build_sequence(kind: str, theta: float = math.pi / 4, shape="sin32", eps=None, window=None,
                   stark_coef: float = 0.0) -> GateSequence:
    if kind == "single":
        seq = build_single(theta, shape, eps, window)
        if stark_coef:
            seq = _with_stark(seq, stark_coef)
        return seq
    if kind == "B1":
        return build_B1(theta, shape, eps, window, stark_coef)
    if kind == "B2":
        return build_B2(theta, shape, eps, window, stark_coef)
    raise ValueError(f"unknown sequence kind {kind!r}; expected single, B1 or B2")


def _with_stark(seq: GateSequence, stark_coef: float) -> GateSequence:
    return replace(seq, segments=tuple(s.with_(stark_coef=stark_coef) for s in seq.segments))


def segment_rotation(seg: PulseSegment) -> float:
    return theta_numeric(seg, seg.t_start, seg.t_end)


def rotational_propagator(seq: GateSequence, coupling_error: float = 0.0) -> np.ndarray:
    """Two-qubit part of the sequence with displacements taken as closed.

    A coupling error ``g -> g (1 + delta)`` scales every pulse's rotation by
    ``(1 + delta)^2``.
    """
    if any(isinstance(s.modulation, MultiTone) for s in seq.segments):
        raise ValueError("rotational model needs scalar envelopes")
    thetas = seq.segment_thetas or tuple(segment_rotation(s) for s in seq.segments)
    scale = (1 + coupling_error) ** 2
    U = np.eye(4, dtype=complex)
    pg = seq.phase_gate
    if pg is not None and pg.position == "first":
        U = phase_gate_matrix(pg.phi_F, pg.target_qubit) @ U
    for seg, th in zip(seq.segments, thetas):
        U = rotation_matrix(th * scale, seg.zeta_plus) @ U
    if pg is not None and pg.position == "last":
        U = phase_gate_matrix(pg.phi_F, pg.target_qubit) @ U
    return U


_STENCILS = {
    1: (np.array([1, -8, 0, 8, -1]) / 12.0, 1),
    2: (np.array([-1, 16, -30, 16, -1]) / 12.0, 2),
}


def broadband_residual(seq: GateSequence, channel: str = "coupling", order: int = 1,
                       step: float = 1e-3) -> float:
    """Max-element norm of the ``order``-th derivative of ``U_seq(delta) - U(theta)`` at zero error.

    ``order=0`` returns the distance itself after aligning the global phase.
    Derivatives use a 5-point central stencil.
    """
    if channel != "coupling":
        raise ValueError(f"only the coupling channel is supported, got {channel!r}")
    target = target_gate(seq.theta_total)
    U0 = rotational_propagator(seq)
    overlap = np.trace(target.conj().T @ U0)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    if order == 0:
        return float(np.max(np.abs(U0 - phase * target)))
    if order not in _STENCILS:
        raise ValueError(f"order must be 0, 1 or 2, got {order}")
    weights, power = _STENCILS[order]
    deriv = sum(w * rotational_propagator(seq, d)
                for w, d in zip(weights, step * np.arange(-2, 3)))
    return float(np.max(np.abs(deriv))) / step**power


def manifest(seq: GateSequence) -> str:
    """Human-readable listing, one line per physical pulse."""
    lines = [f"# label={seq.label}", f"# shape={seq.shape}", f"# theta_total={seq.theta_total:.12g}"]
    pg = seq.phase_gate
    if pg is not None:
        lines.append(f"# phase_gate position={pg.position} qubit={pg.target_qubit} phi_F={pg.phi_F:.12g}")
    lines.append("index,t_start,t_end,abs_g0,eps,zeta1_plus,zeta2_plus,zeta_minus,stark_coef")
    for i, s in enumerate(seq.segments, start=1):
        lines.append(",".join([str(i)] + [f"{v:.12g}" for v in (
            s.t_start, s.t_end, abs(s.g0), s.eps, s.zeta_plus[0], s.zeta_plus[1],
            s.zeta_minus, s.stark_coef)]))
    return "\n".join(lines) + "\n"
