"""Dense operators on the qubit ⊗ qubit ⊗ truncated-Fock space.

Slot order is fixed everywhere in the package: ``qubit1 ⊗ qubit2 ⊗ motion``.
Spin basis convention: index 0 is ``|0>`` (the ``+1`` eigenstate of sigma_z),
and ``sigma_plus = |0><1|`` raises ``|1>`` to ``|0>``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)
SIGMA_MINUS = SIGMA_PLUS.T.copy()
IDENTITY2 = np.eye(2, dtype=complex)

SLOTS = ("qubit1", "qubit2", "motion")


@dataclass(frozen=True)
class HilbertConfig:
    """Truncation of the shared motional mode.

    ``n_fock`` counts represented motional levels ``|0>..|n_fock-1>``.
    """

    n_fock: int = 14

    def __post_init__(self):
        if int(self.n_fock) != self.n_fock or self.n_fock < 2:
            raise ValueError(f"n_fock must be an integer >= 2, got {self.n_fock!r}")

    @property
    def total_dim(self) -> int:
        return 4 * self.n_fock


def sigma_phase(phi: float) -> np.ndarray:
    """Spin operator ``sigma+ exp(-i phi) + sigma- exp(+i phi)``.

    Identical to ``cos(phi) sigma_x + sin(phi) sigma_y``.
    """
    return SIGMA_PLUS * np.exp(-1j * phi) + SIGMA_MINUS * np.exp(1j * phi)


def ladder_ops(cfg: HilbertConfig) -> tuple[np.ndarray, np.ndarray]:
    """Annihilation and creation operators truncated to ``cfg.n_fock`` levels."""
    a = np.diag(np.sqrt(np.arange(1, cfg.n_fock)), k=1).astype(complex)
    return a, a.conj().T.copy()


def embed(op, slot: str, cfg: HilbertConfig) -> np.ndarray:
    """Place ``op`` in one tensor slot, identities elsewhere."""
    op = np.asarray(op, dtype=complex)
    dims = {"qubit1": 2, "qubit2": 2, "motion": cfg.n_fock}
    if slot not in dims:
        raise ValueError(f"unknown slot {slot!r}; expected one of {SLOTS}")
    if op.shape != (dims[slot], dims[slot]):
        raise ValueError(
            f"operator of shape {op.shape} does not fit slot {slot!r} "
            f"(dimension {dims[slot]})"
        )
    factors = [np.eye(dims[s], dtype=complex) for s in SLOTS]
    factors[SLOTS.index(slot)] = op
    out = factors[0]
    for f in factors[1:]:
        out = np.kron(out, f)
    return out


def spin_operator(op2: np.ndarray, cfg: HilbertConfig) -> np.ndarray:
    """Embed a 4x4 two-qubit operator, identity on motion."""
    op2 = np.asarray(op2, dtype=complex)
    if op2.shape != (4, 4):
        raise ValueError(f"expected a 4x4 two-qubit operator, got {op2.shape}")
    return np.kron(op2, np.eye(cfg.n_fock, dtype=complex))


def matrix_exp(op) -> np.ndarray:
    """Matrix exponential (Padé scaling-and-squaring)."""
    op = np.asarray(op, dtype=complex)
    if not np.all(np.isfinite(op)):
        raise ValueError("matrix_exp received non-finite entries")
    return scipy.linalg.expm(op)


def basis_state(spins: str, n: int, cfg: HilbertConfig) -> np.ndarray:
    """Product state ``|spins> ⊗ |n>``, e.g. ``basis_state("00", 0, cfg)``."""
    if len(spins) != 2 or set(spins) - {"0", "1"}:
        raise ValueError(f"spins must be a two-character 0/1 string, got {spins!r}")
    if not 0 <= n < cfg.n_fock:
        raise ValueError(f"Fock index {n} outside truncation {cfg.n_fock}")
    psi = np.zeros(cfg.total_dim, dtype=complex)
    psi[int(spins, 2) * cfg.n_fock + n] = 1.0
    return psi


def is_hermitian(op: np.ndarray, tol: float = 1e-12) -> bool:
    return float(np.max(np.abs(op - op.conj().T))) < tol


def unitarity_error(op: np.ndarray) -> float:
    """Max abs element of ``U^dagger U - 1``."""
    return float(np.max(np.abs(op.conj().T @ op - np.eye(op.shape[0]))))
