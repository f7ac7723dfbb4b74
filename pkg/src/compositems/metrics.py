"""Gate and state fidelities.

Gate fidelity compares the motional-vacuum block ``<0_m| U |0_m>`` with a
two-qubit target, ``F = |Tr(U_t^dag B)| / 4``. Taking the magnitude makes it
blind to global phase.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hilbert import HilbertConfig


@dataclass(frozen=True)
class FidelityReport:
    fidelity: float
    kind: str
    K: int = 4

    @property
    def infidelity(self) -> float:
        return 1.0 - self.fidelity


def vacuum_block(U, cfg: HilbertConfig) -> np.ndarray:
    """4x4 block ``<0_m| U |0_m>``.

    ``U`` is either the full propagator or the ``total_dim x 4`` block of
    vacuum columns from :func:`compositems.dynamics.propagator_numeric`.
    """
    U = np.asarray(U)
    rows = np.arange(4) * cfg.n_fock
    if U.shape == (cfg.total_dim, cfg.total_dim):
        return U[np.ix_(rows, rows)]
    if U.shape == (cfg.total_dim, 4):
        return U[rows, :]
    raise ValueError(f"propagator shape {U.shape} does not match n_fock={cfg.n_fock}")


def gate_fidelity(U_target_spin, U_full, cfg: HilbertConfig) -> FidelityReport:
    B = vacuum_block(U_full, cfg)
    F = abs(np.trace(np.asarray(U_target_spin).conj().T @ B)) / 4
    return FidelityReport(float(min(F, 1.0)), "gate", 4)


def state_infidelity(psi_target, psi) -> FidelityReport:
    """Report with ``infidelity = 1 - |<psi_t|psi>|^2``."""
    ov = abs(np.vdot(psi_target, psi)) ** 2
    return FidelityReport(float(min(ov, 1.0)), "state", 1)


def bell_target(cfg: HilbertConfig) -> np.ndarray:
    """``(|00> + i|11>)/sqrt(2) ⊗ |0_m>``."""
    psi = np.zeros(cfg.total_dim, dtype=complex)
    psi[0] = 1 / np.sqrt(2)
    psi[3 * cfg.n_fock] = 1j / np.sqrt(2)
    return psi
