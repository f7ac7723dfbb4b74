"""Schrödinger integration of modulated MS pulses with injected control errors.

The Hamiltonian is integrated as written, in the interaction frame:

    H(t) = lambda(t) S_z + sum_k sigma(zeta_k+) [c(t) a^dag + c(t)^* a]
    c(t) = g(t) (1 + gamma) exp(i eps (1 + delta1 + delta2 t) t - i zeta-)

with ``lambda(t) = s |g(t)|^2 / |g_i|`` (peak value ``s |g_i|``). Multi-tone
couplings replace ``c(t)`` by the tone sum. Segments are chained on one global
clock, the output state of each pulse seeding the next.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.integrate import solve_ivp

from .composite import GateSequence, phase_gate_matrix
from .hilbert import SIGMA_Z, HilbertConfig, embed, ladder_ops, sigma_phase, spin_operator
from .modulation import MultiTone, PulseSegment, envelope_shape, tone_amplitudes


class IntegrationError(RuntimeError):
    """The adaptive stepper gave up before reaching the end of a pulse."""

    def __init__(self, message, t_reached):
        super().__init__(message)
        self.t_reached = t_reached


@dataclass(frozen=True)
class ErrorModel:
    """Control errors, all fractional.

    ``timing`` stretches the last physical pulse, ``detuning_static`` and
    ``drift_rate`` give ``eps -> eps (1 + delta1 + delta2 t)`` on the global
    clock, ``coupling`` gives ``g -> g (1 + gamma)`` on every pulse and
    ``stark_fraction`` sets the peak Stark shift to ``s |g_i|``.
    """

    timing: float = 0.0
    detuning_static: float = 0.0
    drift_rate: float = 0.0
    coupling: float = 0.0
    stark_fraction: float = 0.0

    CHANNELS = ("timing", "detuning_static", "drift_rate", "coupling", "stark_fraction")

    def with_(self, **changes) -> "ErrorModel":
        return replace(self, **changes)


@dataclass(frozen=True)
class IntegratorSettings:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: float = math.inf
    guard_band: int = 2

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol"):
            v = getattr(self, name)
            if not 1e-14 <= v <= 1e-6:
                raise ValueError(f"{name}={v} outside [1e-14, 1e-6]")
        if self.guard_band < 2:
            raise ValueError("guard_band must be >= 2")
        if not self.max_step > 0:
            raise ValueError("max_step must be positive")


class _SegmentOperators:
    """Time-independent pieces of one pulse's Hamiltonian."""

    def __init__(self, seg: PulseSegment, err: ErrorModel, cfg: HilbertConfig):
        a, ad = ladder_ops(cfg)
        Ad = embed(ad, "motion", cfg)
        spin = embed(sigma_phase(seg.zeta_plus[0]), "qubit1", cfg) + \
            embed(sigma_phase(seg.zeta_plus[1]), "qubit2", cfg)
        self.raise_op = spin @ Ad
        self.lower_op = self.raise_op.conj().T.copy()
        self.sz_diag = np.real(np.diag(embed(SIGMA_Z, "qubit1", cfg) + embed(SIGMA_Z, "qubit2", cfg)))
        self.seg, self.err = seg, err
        self.stark = (seg.stark_coef + err.stark_fraction)
        self.peak = seg.peak_coupling()
        gain = 1.0 + err.coupling
        if isinstance(seg.modulation, MultiTone):
            self.tones = [(j, gj) for j, gj in tone_amplitudes(seg.modulation, seg.g0, seg.eps)]
            self.gained = [(j, gj * gain) for j, gj in self.tones]
            self.h = None
        else:
            self.tones = None
            self.h = envelope_shape(seg.modulation)
            self.g_gain = seg.g0 * gain

    def coefficients(self, t: float) -> tuple[complex, float]:
        """``(c(t), lambda(t))``."""
        seg, err = self.seg, self.err
        phase_rate = seg.eps * (1.0 + err.detuning_static + err.drift_rate * t)
        if self.h is not None:
            ht = self.h(t)
            phase = phase_rate * t - seg.zeta_minus
            c = self.g_gain * ht * complex(math.cos(phase), math.sin(phase))
            g_abs = abs(seg.g0 * ht)
        else:
            c = sum(gj * np.exp(1j * (j * phase_rate * t - seg.zeta_minus)) for j, gj in self.gained)
            g_abs = abs(sum(gj * np.exp(1j * j * seg.eps * t) for j, gj in self.tones))
        lam = self.stark * g_abs**2 / self.peak if (self.stark and self.peak) else 0.0
        return complex(c), lam

    def matrix(self, t: float) -> np.ndarray:
        c, lam = self.coefficients(t)
        return lam * np.diag(self.sz_diag).astype(complex) + c * self.raise_op + np.conj(c) * self.lower_op

    def rhs(self, t, y, ncols):
        c, lam = self.coefficients(t)
        psi = y.reshape(-1, ncols) if ncols > 1 else y
        out = c * (self.raise_op @ psi) + np.conj(c) * (self.lower_op @ psi)
        if lam:
            out += lam * (self.sz_diag[:, None] * psi if ncols > 1 else self.sz_diag * psi)
        return (-1j * out).reshape(-1)


def build_hamiltonian(seg: PulseSegment, err: ErrorModel, t: float, cfg: HilbertConfig) -> np.ndarray:
    """Dense Hamiltonian of ``seg`` at global time ``t``."""
    return _SegmentOperators(seg, err, cfg).matrix(t)


def _evolve(psi, seg, err, settings, cfg, t_end, t_eval=None):
    ops = _SegmentOperators(seg, err, cfg)
    psi = np.asarray(psi, dtype=complex)
    ncols = psi.shape[1] if psi.ndim == 2 else 1
    if seg.g0 == 0 and not ops.stark:
        return psi.copy(), None
    sol = solve_ivp(ops.rhs, (seg.t_start, t_end), psi.reshape(-1), method="DOP853",
                    rtol=settings.rel_tol, atol=settings.abs_tol, max_step=settings.max_step,
                    args=(ncols,), t_eval=t_eval)
    if sol.status != 0:
        t_reached = float(sol.t[-1]) if len(sol.t) else seg.t_start
        raise IntegrationError(f"integration failed at t={t_reached:.6g}: {sol.message}", t_reached)
    final = sol.y[:, -1].reshape(psi.shape)
    return final, sol


def evolve_segment(psi, seg: PulseSegment, err: ErrorModel = ErrorModel(),
                   settings: IntegratorSettings = IntegratorSettings(), cfg: HilbertConfig = HilbertConfig(),
                   stretch: bool = False) -> np.ndarray:
    """Evolve ``psi`` (vector, or matrix of column states) across one pulse.

    With ``stretch`` the pulse duration is scaled by ``1 + err.timing``; the
    envelope keeps running on the global clock, so the pulse is cut short or
    prolonged.
    """
    t_end = seg.t_start + seg.duration * (1.0 + err.timing) if stretch else seg.t_end
    final, _ = _evolve(psi, seg, err, settings, cfg, t_end)
    return final


def _phase_gate_full(seq: GateSequence, err: ErrorModel, cfg: HilbertConfig) -> np.ndarray:
    pg = seq.phase_gate
    angle = pg.phi_F * (1.0 + err.timing) if pg.position == "last" else pg.phi_F
    return spin_operator(phase_gate_matrix(angle, pg.target_qubit), cfg)


def evolve_sequence(psi, seq: GateSequence, err: ErrorModel = ErrorModel(),
                    settings: IntegratorSettings = IntegratorSettings(),
                    cfg: HilbertConfig = HilbertConfig()) -> np.ndarray:
    """Feed-forward evolution through every pulse and the phase gate.

    The timing error stretches the last pulse; if the phase gate comes last
    its angle is scaled by the same factor.
    """
    psi = np.asarray(psi, dtype=complex)
    pg = seq.phase_gate
    if pg is not None and pg.position == "first":
        psi = _phase_gate_full(seq, err, cfg) @ psi
    last = len(seq.segments) - 1
    for i, seg in enumerate(seq.segments):
        psi = evolve_segment(psi, seg, err, settings, cfg, stretch=(i == last and err.timing != 0))
    if pg is not None and pg.position == "last":
        psi = _phase_gate_full(seq, err, cfg) @ psi
    return psi


def population_history(psi, seq: GateSequence, err: ErrorModel = ErrorModel(),
                       settings: IntegratorSettings = IntegratorSettings(),
                       cfg: HilbertConfig = HilbertConfig(), samples_per_segment: int = 25):
    """Times and spin populations ``|00>, |01>, |10>, |11>`` (motion traced out) along the sequence."""
    psi = np.asarray(psi, dtype=complex)
    pg = seq.phase_gate
    if pg is not None and pg.position == "first":
        psi = _phase_gate_full(seq, err, cfg) @ psi
    times, states = [seq.t_start], [psi]
    last = len(seq.segments) - 1
    for i, seg in enumerate(seq.segments):
        stretch = i == last and err.timing != 0
        t_end = seg.t_start + seg.duration * (1.0 + err.timing) if stretch else seg.t_end
        grid = np.linspace(seg.t_start, t_end, samples_per_segment + 1)
        final, sol = _evolve(psi, seg, err, settings, cfg, t_end, t_eval=grid)
        if sol is None:
            times += list(grid[1:])
            states += [psi] * samples_per_segment
        else:
            times += list(sol.t[1:])
            states += [sol.y[:, k] for k in range(1, sol.y.shape[1])]
        psi = final
    if pg is not None and pg.position == "last":
        states[-1] = _phase_gate_full(seq, err, cfg) @ states[-1]
    probs = np.abs(np.array(states)) ** 2
    pops = probs.reshape(len(states), 4, cfg.n_fock).sum(axis=2)
    return np.array(times), pops


def vacuum_columns(cfg: HilbertConfig) -> np.ndarray:
    """Column indices of ``|spins> ⊗ |0_m>`` for spins 00, 01, 10, 11."""
    return np.arange(4) * cfg.n_fock


def propagator_numeric(seq: GateSequence, err: ErrorModel = ErrorModel(),
                       settings: IntegratorSettings = IntegratorSettings(),
                       cfg: HilbertConfig = HilbertConfig(), columns=None) -> np.ndarray:
    """Propagator built by evolving basis states column by column.

    ``columns`` restricts the evolution to selected basis states (e.g.
    :func:`vacuum_columns`), returning a ``total_dim x len(columns)`` block.
    """
    dim = cfg.total_dim
    cols = np.arange(dim) if columns is None else np.asarray(columns)
    start = np.eye(dim, dtype=complex)[:, cols]
    return evolve_sequence(start, seq, err, settings, cfg)


def single_segment_sequence(seg: PulseSegment, theta: float = 0.0) -> GateSequence:
    """Wrap one pulse so it can go through the sequence-level entry points."""
    return GateSequence((seg,), theta, "single")


def guard_banded_indices(cfg: HilbertConfig, guard_band: int) -> np.ndarray:
    """Basis indices whose Fock number lies below ``n_fock - guard_band``."""
    n = np.tile(np.arange(cfg.n_fock), 4)
    return np.nonzero(n < cfg.n_fock - guard_band)[0]
