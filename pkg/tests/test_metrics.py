import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from compositems.analytic import ms_propagator
from compositems.composite import target_gate
from compositems.dynamics import ErrorModel, propagator_numeric, vacuum_columns
from compositems.hilbert import SIGMA_X, HilbertConfig, basis_state
from compositems.metrics import FidelityReport, bell_target, gate_fidelity, state_infidelity, vacuum_block

CFG = HilbertConfig(5)
TARGET = target_gate(math.pi / 4)


def test_report_infidelity():
    r = FidelityReport(0.75, "gate")
    assert r.infidelity == 0.25 and r.K == 4


def test_gate_fidelity_extremes():
    full = np.kron(TARGET, np.eye(CFG.n_fock))
    assert gate_fidelity(TARGET, full, CFG).fidelity == pytest.approx(1.0, abs=1e-14)
    flipped = np.kron(np.kron(SIGMA_X, np.eye(2)) @ TARGET, np.eye(CFG.n_fock))
    assert gate_fidelity(TARGET, flipped, CFG).fidelity == pytest.approx(0.0, abs=1e-14)


def test_vacuum_block_accepts_columns():
    full = np.kron(TARGET, np.eye(CFG.n_fock))
    np.testing.assert_allclose(vacuum_block(full[:, vacuum_columns(CFG)], CFG), TARGET)
    np.testing.assert_allclose(vacuum_block(full, CFG), TARGET)


@given(st.floats(-10, 10))
def test_global_phase_invariance(chi):
    U = ms_propagator((0.1j, 0.1j), 0.7, (0, 0.4), CFG)
    f0 = gate_fidelity(TARGET, U, CFG).fidelity
    assert abs(gate_fidelity(TARGET, np.exp(1j * chi) * U, CFG).fidelity - f0) < 1e-12


def test_state_infidelity():
    a, b = basis_state("00", 0, CFG), basis_state("11", 0, CFG)
    assert state_infidelity(a, a).infidelity == pytest.approx(0.0, abs=1e-15)
    assert state_infidelity(a, b).infidelity == 1.0


@given(st.lists(st.complex_numbers(max_magnitude=1, allow_nan=False, allow_infinity=False), min_size=8, max_size=8),
       st.lists(st.complex_numbers(max_magnitude=1, allow_nan=False, allow_infinity=False), min_size=8, max_size=8))
def test_state_infidelity_symmetric(x, y):
    x, y = np.array(x), np.array(y)
    if np.linalg.norm(x) < 1e-3 or np.linalg.norm(y) < 1e-3:
        return
    x, y = x / np.linalg.norm(x), y / np.linalg.norm(y)
    assert state_infidelity(x, y).infidelity == pytest.approx(state_infidelity(y, x).infidelity, abs=1e-14)


def test_bell_target():
    psi = bell_target(CFG)
    assert np.linalg.norm(psi) == pytest.approx(1.0)
    assert np.vdot(basis_state("00", 0, CFG), psi) == pytest.approx(1 / math.sqrt(2))
    U = ms_propagator((0, 0), math.pi / 4, (0, 0), CFG)
    np.testing.assert_allclose(U @ basis_state("00", 0, CFG), psi, atol=1e-12)


def test_standard_gate_outputs(standard, cfg14):
    U = propagator_numeric(standard, cfg=cfg14)
    assert gate_fidelity(TARGET, U, cfg14).infidelity < 1e-6
    psi = U @ basis_state("00", 0, cfg14)
    assert state_infidelity(bell_target(cfg14), psi).infidelity < 1e-6


def test_monotone_in_coupling_error(standard, cfg14):
    vals = [gate_fidelity(TARGET, propagator_numeric(standard, ErrorModel(coupling=g), cfg=cfg14,
                                                     columns=vacuum_columns(cfg14)), cfg14).infidelity
            for g in (0.0, 0.02, 0.05, 0.1)]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


@pytest.mark.slow
def test_ideal_b2_gate(b2, cfg40):
    U = propagator_numeric(b2, cfg=cfg40, columns=vacuum_columns(cfg40))
    assert gate_fidelity(TARGET, U, cfg40).infidelity < 1e-4
