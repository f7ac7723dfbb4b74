"""Magnus-expansion analytics for amplitude-modulated MS pulses.

With the Hamiltonian ``H = sum_k sigma(zeta_k+) [g(t) a^dag e^{i eps t - i zeta-} + h.c.]``
the Magnus series stops after two terms and the propagator over ``[T1, T2]`` is
``D(alpha) exp(i theta sigma(zeta_1+) sigma(zeta_2+))`` (up to a global phase) with

    alpha = -i int g(tau) exp(i eps tau - i zeta-) dtau
    theta = 2 int_{T1}^{T2} int_{T1}^{tau2} g(tau1) g(tau2) sin(eps (tau1 - tau2)) dtau1 dtau2

``theta`` uses the literal product ``g g`` (no conjugate), so it equals the
physical rotation angle when ``g0`` is purely imaginary, as it is for
``g = i Omega eta / 2``.
"""
from __future__ import annotations

import functools
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize

from .hilbert import HilbertConfig, embed, ladder_ops, matrix_exp, sigma_phase
from .modulation import (
    Modulation,
    MultiTone,
    PulseSegment,
    UnsupportedModulationError,
    envelope_shape,
    preset,
    tone_amplitudes,
)

logger = logging.getLogger(__name__)

ALPHA_TOL = 1e-12
THETA_TOL = 1e-10
CLOSED_FORM_SHAPES = ("sin14", "sincos", "sin32")
_VALIDITY = {"sin14": 4 * math.pi, "sincos": 2 * math.pi, "sin32": 2 * math.pi}
_SINGULAR = {"sin14": (0.0, 0.5, -0.5), "sincos": (0.0, 1.0, -1.0, 2.0, -2.0), "sin32": (0.0, 3.0, -3.0)}


class SingularParameterError(ValueError):
    """Detuning sits on a pole of a closed-form expression."""


class ConsistencyError(RuntimeError):
    """A quantity that must be real came out with a sizeable imaginary part."""


class ClosureError(RuntimeError):
    """No zeta- phase closes the phase-space loop of a pulse pair."""

    def __init__(self, message, residual):
        super().__init__(message)
        self.residual = residual


class CalibrationError(ValueError):
    """Rotation over the window has the wrong sign (or vanishes)."""


@dataclass(frozen=True)
class AlphaTheta:
    alpha: complex
    theta: float


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    alphas: np.ndarray
    accumulated_beta: complex


def _modulation(shape) -> Modulation:
    return preset(shape) if isinstance(shape, str) else shape


def _cquad(f, a, b, tol):
    val, _ = integrate.quad(f, a, b, epsabs=tol, epsrel=tol, limit=500, complex_func=True)
    return complex(val)


def alpha_numeric(seg: PulseSegment, T1: float, T2: float) -> complex:
    """Displacement accumulated over ``[T1, T2]`` by a scalar-envelope segment."""
    if isinstance(seg.modulation, MultiTone):
        raise UnsupportedModulationError("use alpha_multitone for multi-tone couplings")
    if T2 < T1:
        raise ValueError(f"need T1 <= T2, got {T1}, {T2}")
    if T1 == T2:
        return 0j
    h = envelope_shape(seg.modulation)
    eps, zm = seg.eps, seg.zeta_minus
    integral = _cquad(lambda t: h(t) * complex(math.cos(eps * t - zm), math.sin(eps * t - zm)),
                      T1, T2, ALPHA_TOL / 10)
    return -1j * seg.g0 * integral


def alpha_multitone(tones, eps: float, zeta_minus: float, T1: float, T2: float) -> complex:
    """Tone sum of single-tone displacements; ``tones`` holds absolute ``(j, g_j)``."""
    tones = list(tones)
    if not tones:
        raise ValueError("tone list is empty")
    if T2 < T1:
        raise ValueError(f"need T1 <= T2, got {T1}, {T2}")
    total = 0j
    for j, gj in tones:
        w = j * eps
        integral = _cquad(lambda t: complex(math.cos(w * t - zeta_minus), math.sin(w * t - zeta_minus)),
                          T1, T2, ALPHA_TOL / 10)
        total += -1j * complex(gj) * integral
    return total


def segment_alpha(seg: PulseSegment, T1: float | None = None, T2: float | None = None) -> complex:
    """Displacement of ``seg`` over ``[T1, T2]`` (default: its own window), any modulation."""
    T1 = seg.t_start if T1 is None else T1
    T2 = seg.t_end if T2 is None else T2
    if isinstance(seg.modulation, MultiTone):
        return alpha_multitone(tone_amplitudes(seg.modulation, seg.g0, seg.eps),
                               seg.eps, seg.zeta_minus, T1, T2)
    return alpha_numeric(seg, T1, T2)


@functools.lru_cache(maxsize=4096)
def _theta_unit(mod: Modulation, eps: float, T1: float, T2: float) -> float:
    """Double integral of ``h(t1) h(t2) sin(eps (t1 - t2))`` over ``T1 <= t1 <= t2 <= T2``."""
    h = envelope_shape(mod)

    def inner(t2):
        val, _ = integrate.quad(lambda t1: h(t1) * math.sin(eps * (t1 - t2)), T1, t2,
                                epsabs=THETA_TOL / 100, epsrel=1e-13, limit=500)
        return h(t2) * val

    val, _ = integrate.quad(inner, T1, T2, epsabs=THETA_TOL / 10, epsrel=1e-13, limit=500)
    return val


def theta_numeric(seg: PulseSegment, T1: float, T2: float) -> float:
    """Rotation angle over ``[T1, T2]`` by nested adaptive quadrature."""
    if isinstance(seg.modulation, MultiTone):
        raise UnsupportedModulationError("theta_numeric needs a scalar envelope")
    if T2 < T1:
        raise ValueError(f"need T1 <= T2, got {T1}, {T2}")
    if T1 == T2:
        return 0.0
    value = 2 * seg.g0 ** 2 * _theta_unit(seg.modulation, float(seg.eps), float(T1), float(T2))
    if abs(value.imag) > THETA_TOL:
        raise ConsistencyError(
            f"theta has imaginary residue {value.imag:.3e}; g0={seg.g0} is not of fixed "
            "real or imaginary phase"
        )
    return float(value.real)


def _check_closed_form(shape: str, eps: float, t: float):
    if shape not in CLOSED_FORM_SHAPES:
        raise ValueError(f"closed forms exist only for {CLOSED_FORM_SHAPES}, got {shape!r}")
    if not 0 <= t <= _VALIDITY[shape] + 1e-12:
        raise ValueError(f"t={t} outside the validity window [0, {_VALIDITY[shape]:.6g}] of {shape}")
    for s in _SINGULAR[shape]:
        if abs(eps - s) < 1e-9:
            raise SingularParameterError(f"eps={eps} is singular for the {shape} closed form")


def closed_form_alpha_theta(shape: str, g0: complex, eps: float, t: float) -> AlphaTheta:
    """Closed-form ``alpha(t)`` and ``theta(t)`` from ``0`` to ``t`` (all phases zero).

    Valid on ``[0, 4pi]`` for ``sin14`` and ``[0, 2pi]`` for ``sincos``/``sin32``.
    Poles of the expressions are refused rather than limit-evaluated.
    """
    _check_closed_form(shape, eps, t)
    g, e = complex(g0), float(eps)
    E = lambda x: complex(math.cos(x), math.sin(x))  # noqa: E731
    sin, cos = math.sin, math.cos
    if shape == "sin14":
        alpha = g / (2 * e * (4 * e**2 - 1)) * (
            E(t * e) * (4 * e**2 * cos(t / 2) - 2j * e * sin(t / 2) - 4 * e**2 + 1) - 1)
        bracket = (24 * t * e**5 - 10 * t * e**3 + 2 * (4 * e**2 - 1) * e**3 * sin(t)
                   + 4 * e**2 * sin(t * e) - 4 * e**2 * cos(t / 2) * sin(t * e)
                   - 2 * e * sin(t / 2) * (1 - cos(t * e) + 32 * e**4 - 12 * e**2)
                   + t * e - sin(t * e))
        theta = -g**2 / (2 * (e - 4 * e**3) ** 2) * bracket
    elif shape == "sincos":
        # Printed form is written for coupling i*g; with g = i Omega eta / 2 the
        # prefactors become g/8 and -g^2/(...).
        alpha = g / 8 * ((E(t * (e - 2)) - 1) / (e - 2) - 2 * (E(t * (e - 1)) - 1) / (e - 1)
                         + 2 * (E(t * e) - 1) / e - 2 * (E(t * (e + 1)) - 1) / (e + 1)
                         + (E(t * (e + 2)) - 1) / (e + 2))
        P = e**4 - 5 * e**2 + 4
        braces = (e * P * (12 * t * (7 * e**4 - 27 * e**2 + 8)
                           + e**2 * (8 * (5 - 2 * e**2) * sin(3 * t) + 3 * (e**2 - 1) * sin(4 * t))
                           - 24 * (6 * e**4 - 23 * e**2 + 8) * sin(t)
                           + 24 * (2 * e**4 - 7 * e**2 + 2) * sin(2 * t))
                  + 96 * e * (e**2 + 2) * sin(t) * (2 * (e**2 - 1) * cos(t) - e**2 + 4) * cos(t * e)
                  - 48 * (e**2 + 2) * sin(t * e) * ((e**2 - 1) * (e**2 * cos(2 * t) + e**2 - 4)
                                                    - 2 * e**2 * (e**2 - 4) * cos(t)))
        theta = -g**2 / (192 * e**2 * P**2) * braces
    else:
        alpha = g * (-2 * (e**2 - 9) * E(t * e) + (e - 3) * e * E(t * (e + 3))
                     + (e + 3) * e * E(t * (e - 3)) - 18) / (4 * e * (e**2 - 9))
        braces = ((9 - e**2) * (e**3 * sin(6 * t) + 4 * (9 - 2 * e**2) * e * sin(3 * t)
                                + 18 * (t * e * (e**2 - 6) + 6 * sin(t * e)))
                  + 54 * (e - 3) * e * sin(t * (e + 3)) - 54 * e * (e + 3) * sin(t * (3 - e)))
        theta = g**2 / (24 * e**2 * (e**2 - 9) ** 2) * braces
    if abs(theta.imag) > 1e-12 * max(1.0, abs(theta)):
        raise ConsistencyError(f"closed-form theta has imaginary residue {theta.imag:.3e}")
    return AlphaTheta(alpha=complex(alpha), theta=float(theta.real))


def constant_relations(g_mag: float) -> tuple[float, float]:
    """Detuning and gate time of a standard constant-coupling gate: ``eps = 4|g|``, ``eps tau = 2pi``."""
    if not g_mag > 0:
        raise ValueError(f"coupling magnitude must be positive, got {g_mag!r}")
    eps = 4.0 * g_mag
    return eps, 2 * math.pi / eps


def _displacement_generator(alphas, zeta_plus, cfg: HilbertConfig) -> np.ndarray:
    a, ad = ladder_ops(cfg)
    A, Ad = embed(a, "motion", cfg), embed(ad, "motion", cfg)
    gen = np.zeros((cfg.total_dim, cfg.total_dim), dtype=complex)
    for slot, al, zp in zip(("qubit1", "qubit2"), alphas, zeta_plus):
        gen += embed(sigma_phase(zp), slot, cfg) @ (complex(al) * Ad - np.conj(al) * A)
    return gen


def displacement_matrix(alpha_per_ion, zeta_plus, cfg: HilbertConfig) -> np.ndarray:
    """Spin-dependent displacement ``exp(sum_k sigma(zeta_k+) [alpha_k a^dag - alpha_k^* a])``."""
    return matrix_exp(_displacement_generator(alpha_per_ion, zeta_plus, cfg))


def rotation_matrix(theta: float, zeta_plus) -> np.ndarray:
    """Two-qubit ``exp(i theta sigma(zeta_1+) sigma(zeta_2+))``, computed in closed form."""
    ss = np.kron(sigma_phase(zeta_plus[0]), sigma_phase(zeta_plus[1]))
    return math.cos(theta) * np.eye(4) + 1j * math.sin(theta) * ss


def ms_propagator(alpha_per_ion, theta: float, zeta_plus, cfg: HilbertConfig,
                  global_phase: bool = False) -> np.ndarray:
    """Magnus propagator ``D(alpha) exp(i theta sigma sigma)`` on the full space.

    The second Magnus term is ``i theta (sigma_1 + sigma_2)^2 / 2``, which also
    contributes a scalar ``exp(i theta)``; ``global_phase=True`` includes it so
    the result matches time-ordered integration element by element.
    """
    rot = np.kron(rotation_matrix(theta, zeta_plus), np.eye(cfg.n_fock))
    U = displacement_matrix(alpha_per_ion, zeta_plus, cfg) @ rot
    return U * complex(math.cos(theta), math.sin(theta)) if global_phase else U


def segment_propagator(seg: PulseSegment, cfg: HilbertConfig, global_phase: bool = True) -> np.ndarray:
    """Magnus propagator of a scalar-envelope segment over its own window."""
    al = segment_alpha(seg)
    th = theta_numeric(seg, seg.t_start, seg.t_end)
    return ms_propagator((al, al), th, seg.zeta_plus, cfg, global_phase)


def trajectory(seg: PulseSegment, n_samples: int = 101, beta0: complex = 0j) -> Trajectory:
    """Phase-space path of ``seg`` sampled on its window, offset by a prior displacement ``beta0``."""
    if n_samples < 2:
        raise ValueError("need at least two samples")
    times = np.linspace(seg.t_start, seg.t_end, n_samples)
    steps = [segment_alpha(seg, t0, t1) for t0, t1 in zip(times[:-1], times[1:])]
    alphas = beta0 + np.concatenate([[0j], np.cumsum(steps)])
    return Trajectory(times=times, alphas=alphas, accumulated_beta=complex(alphas[-1]))


def closure_phase(shape, g0: complex, eps: float, first_half, second_half,
                  g0_second: complex | None = None) -> float:
    """Phase ``zeta-`` for the second pulse of a pair that cancels the first pulse's displacement.

    Minimises ``|beta + alpha_second(zeta-)|`` over ``(-pi, pi]`` with a 720-point
    scan refined by golden-section search. ``g0_second`` defaults to ``g0``.
    Raises :class:`ClosureError` when the best residual exceeds
    ``1e-6 * max(1, |beta|)``.
    """
    mod = _modulation(shape)
    g0_second = g0 if g0_second is None else g0_second
    beta = segment_alpha(PulseSegment(mod, g0, eps, first_half[0], first_half[1]))
    a2 = segment_alpha(PulseSegment(mod, g0_second, eps, second_half[0], second_half[1]))
    scale = max(1.0, abs(beta))
    if abs(beta) == 0 and abs(a2) == 0:
        return 0.0

    def residual(z):
        return abs(beta + a2 * complex(math.cos(z), -math.sin(z)))

    step = 2 * math.pi / 720
    grid = -math.pi + (np.arange(720) + 1) * step
    k = int(np.argmin([residual(z) for z in grid]))
    res = optimize.minimize_scalar(residual, bracket=(grid[k] - step, grid[k], grid[k] + step),
                                   method="golden", tol=1e-15)
    z = math.remainder(float(res.x), 2 * math.pi)
    if z == -math.pi:
        z = math.pi
    best = residual(z)
    # a closed loop has one minimiser per period; ties only arise on a flat
    # objective, where the smaller |zeta| wins
    if abs(residual(-z) - best) < 1e-15 * scale and abs(-z) < abs(z):
        z = -z
    if best > 1e-6 * scale:
        raise ClosureError(
            f"cannot close pulse pair: best residual {best:.3e} (|beta|={abs(beta):.6g}, "
            f"|alpha_2|={abs(a2):.6g})", best)
    if best > 1e-9 * scale:
        logger.warning("pulse pair closes only approximately (residual %.3e)", best)
    return z


def calibrate_amplitude(shape, eps: float, interval, theta_target: float) -> float:
    """Positive ``|g0|`` whose rotation over ``interval`` equals ``theta_target``.

    Rotation scales as ``|g0|^2``, so the amplitude follows from one unit-amplitude
    evaluation with ``g0 = i``.
    """
    if not theta_target > 0:
        raise ValueError(f"target rotation must be positive, got {theta_target!r}")
    mod = _modulation(shape)
    if isinstance(mod, MultiTone):
        raise UnsupportedModulationError("multi-tone amplitudes are fixed by the detuning")
    T1, T2 = interval
    unit = theta_numeric(PulseSegment(mod, 1j, eps, T1, T2), T1, T2)
    if not unit > 0:
        raise CalibrationError(
            f"rotation over [{T1}, {T2}] at eps={eps} is {unit:.3e} for unit coupling; "
            "cannot reach a positive target")
    return math.sqrt(theta_target / unit)
