"""Physical-unit presets.

Natural units put the whole sequence on ``[0, 2pi]`` with ``eps = 1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .composite import build_sequence


@dataclass(frozen=True)
class PhysicalPreset:
    """Rates in rad/s, durations in s; ``stark_limits_hz`` as quoted (Hz)."""

    label: str
    eta: float
    rabi_per_gate: tuple
    segment_duration: float
    detuning: float
    stark_limits_hz: tuple = ()
    shape: str = "sin32"
    sequence: str = "B2"
    metadata: dict = field(default_factory=dict, compare=False)

    @property
    def couplings(self) -> tuple:
        """``|g_i| = Omega_i eta / 2``; the complex coupling is ``i`` times this."""
        return tuple(om * self.eta / 2 for om in self.rabi_per_gate)

    @property
    def total_duration(self) -> float:
        return self.segment_duration * len(self.rabi_per_gate)


def yb171_preset() -> PhysicalPreset:
    khz = 2 * math.pi * 1e3
    return PhysicalPreset(
        label="yb171",
        eta=0.065,
        rabi_per_gate=tuple(x * khz for x in (214.528,) * 4 + (151.694,) * 2),
        segment_duration=500e-6 / 6,
        detuning=2.0 * khz,
        stark_limits_hz=(262.84,) * 4 + (185.85,) * 2,
        metadata={
            "species": "171Yb+",
            "qubit_states": "|F=0,m_F=0>, |F=0,m_F=1>",
            "hyperfine_splitting_hz": 12.642812e9,
        },
    )


@dataclass(frozen=True)
class NaturalConfig:
    """Dimensionless configuration: window ``[0, 2pi]``, ``eps = 1``."""

    eps: float
    window: tuple
    couplings: tuple
    time_unit: float  # seconds per natural time unit

    def to_si(self) -> dict:
        return {
            "detuning": self.eps / self.time_unit,
            "couplings": tuple(g / self.time_unit for g in self.couplings),
            "total_duration": (self.window[1] - self.window[0]) * self.time_unit,
        }


def to_natural_units(p: PhysicalPreset) -> NaturalConfig:
    time_unit = p.total_duration / (2 * math.pi)
    return NaturalConfig(
        eps=p.detuning * time_unit,
        window=(0.0, 2 * math.pi),
        couplings=tuple(g * time_unit for g in p.couplings),
        time_unit=time_unit,
    )


def preset_sequence(p: PhysicalPreset, stark_fraction: float = 0.0):
    """Six-pulse sequence in natural units with the preset's amplitudes.

    Closure phases and axes come from the standard builder; each pulse's
    amplitude is replaced by the preset value.
    """
    nat = to_natural_units(p)
    seq = build_sequence(p.sequence, math.pi / 4, p.shape, nat.eps, nat.window, stark_fraction)
    if len(seq.segments) != len(nat.couplings):
        raise ValueError("preset gate count does not match the sequence")
    segments = tuple(s.with_(g0=1j * g) for s, g in zip(seq.segments, nat.couplings))
    return replace(seq, segments=segments, segment_thetas=())
