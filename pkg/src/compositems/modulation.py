"""Coupling envelopes and the physical pulse segment.

The envelope clock is the global sequence time, so segments cut out of one
continuous envelope share its shape (e.g. the three bells of ``sin(3t/2)^2``
over ``[0, 2pi]``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Union

import numpy as np


class UnsupportedModulationError(TypeError):
    """A multi-tone coupling was used where a scalar envelope is required."""


@dataclass(frozen=True)
class Constant:
    kind = "const"


@dataclass(frozen=True)
class SineCosine:
    """``sin(m t)^l cos(n t)^p``."""

    m: Fraction = Fraction(1)
    l: int = 0
    n: Fraction = Fraction(1)
    p: int = 0
    kind = "sinecosine"

    def __post_init__(self):
        if self.l < 0 or self.p < 0:
            raise ValueError("powers l and p must be non-negative")
        object.__setattr__(self, "m", Fraction(self.m))
        object.__setattr__(self, "n", Fraction(self.n))


@dataclass(frozen=True)
class MultiTone:
    """Tones ``(j, c_j)``; tone ``j`` has amplitude ``c_j * eps`` at detuning ``j * eps``."""

    tones: tuple = ()
    kind = "multitone"

    def __post_init__(self):
        tones = tuple((int(j), float(c)) for j, c in self.tones)
        if not tones:
            raise ValueError("MultiTone needs at least one tone")
        if any(j < 1 for j, _ in tones):
            raise ValueError("tone indices must be positive integers")
        object.__setattr__(self, "tones", tones)


Modulation = Union[Constant, SineCosine, MultiTone]

TWO_TONE_COEFFS = ((1, -0.1444), (2, 0.2888))

PRESETS: dict[str, Modulation] = {
    "const": Constant(),
    "sin14": SineCosine(m=Fraction(1, 4), l=2),
    "sin32": SineCosine(m=Fraction(3, 2), l=2),
    "sincos": SineCosine(m=Fraction(1, 2), l=2, n=Fraction(1), p=1),
    "twotone": MultiTone(TWO_TONE_COEFFS),
}


def preset(name: str) -> Modulation:
    try:
        return PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown modulation preset {name!r}; choose from {sorted(PRESETS)}") from None


def envelope_shape(mod: Modulation):
    """Real scalar shape function ``h(t)`` with ``g(t) = g0 * h(t)``.

    Returns a plain-float callable (fast inside scalar quadrature); it also
    accepts numpy arrays.
    """
    if isinstance(mod, MultiTone):
        raise UnsupportedModulationError(
            "multi-tone couplings carry per-tone phases exp(i j eps t); "
            "there is no single scalar envelope"
        )
    if isinstance(mod, Constant) or (mod.l == 0 and mod.p == 0):
        return lambda t: np.ones_like(t, dtype=float) if np.ndim(t) else 1.0
    m, n, l, p = float(mod.m), float(mod.n), mod.l, mod.p

    def h(t):
        if np.ndim(t):
            return np.sin(m * t) ** l * np.cos(n * t) ** p
        return math.sin(m * t) ** l * math.cos(n * t) ** p

    return h


def eval_envelope(mod: Modulation, g0: complex, eps: float, t: float) -> complex:
    """Coupling value ``g(t)`` for a scalar envelope.

    ``eps`` is accepted for signature symmetry with multi-tone couplings and
    does not enter scalar envelopes.
    """
    if not np.all(np.isfinite(t)):
        raise ValueError(f"time must be finite, got {t!r}")
    return complex(g0) * envelope_shape(mod)(t)


def two_tone_amplitudes(eps: float) -> list[tuple[int, float]]:
    """Detuning-optimised two-tone amplitudes ``[(1, -0.1444 eps), (2, 0.2888 eps)]``."""
    if not eps > 0:
        raise ValueError(f"detuning must be positive, got {eps!r}")
    return [(j, c * eps) for j, c in TWO_TONE_COEFFS]


def tone_amplitudes(mod: MultiTone, g0: complex, eps: float) -> list[tuple[int, complex]]:
    """Absolute tone amplitudes ``g0 * c_j * eps``."""
    return [(j, complex(g0) * c * eps) for j, c in mod.tones]


@dataclass(frozen=True)
class PulseSegment:
    """One physical MS pulse on the global clock.

    ``g0`` is complex and follows ``g = i Omega eta / 2``; a purely imaginary
    ``g0`` with positive imaginary part gives a positive rotation angle.
    ``zeta_plus`` is ``(zeta_1+, zeta_2+)`` with ``zeta_1+ = 0`` by convention,
    ``zeta_minus`` is common to both ions. ``stark_coef`` is a Stark fraction
    added to the error model's (peak Stark shift = fraction * |g0|).
    """

    modulation: Modulation
    g0: complex
    eps: float
    t_start: float
    t_end: float
    zeta_plus: tuple[float, float] = (0.0, 0.0)
    zeta_minus: float = 0.0
    stark_coef: float = 0.0

    def __post_init__(self):
        if not self.t_end > self.t_start:
            raise ValueError(f"segment needs t_end > t_start, got [{self.t_start}, {self.t_end}]")
        if self.zeta_plus[0] != 0.0:
            raise ValueError("zeta_1+ is fixed to 0; steer the rotation axis with zeta_2+")
        object.__setattr__(self, "g0", complex(self.g0))
        object.__setattr__(self, "zeta_plus", (0.0, float(self.zeta_plus[1])))

    @property
    def duration(self) -> float:
        return self.t_end - self.t_start

    def with_(self, **changes) -> "PulseSegment":
        return replace(self, **changes)

    def coupling(self, t: float) -> complex:
        """Scalar coupling ``g(t)``; multi-tone returns the tone sum ``sum_j g_j exp(i j eps t)``."""
        if isinstance(self.modulation, MultiTone):
            return sum(gj * np.exp(1j * j * self.eps * t)
                       for j, gj in tone_amplitudes(self.modulation, self.g0, self.eps))
        return eval_envelope(self.modulation, self.g0, self.eps, t)

    def peak_coupling(self) -> float:
        """``|g_i|``: amplitude scale used to normalise the Stark shift."""
        if isinstance(self.modulation, MultiTone):
            return sum(abs(gj) for _, gj in tone_amplitudes(self.modulation, self.g0, self.eps))
        return abs(self.g0)
