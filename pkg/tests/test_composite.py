import math

import numpy as np
import pytest

from compositems.analytic import alpha_numeric, rotation_matrix, theta_numeric
from compositems.composite import (
    LogicalGate,
    PhaseGate,
    broadband_residual,
    build_sequence,
    build_single,
    composite_phi,
    manifest,
    phase_gate_matrix,
    rotational_propagator,
    target_gate,
)
from compositems.dynamics import ErrorModel, propagator_numeric, vacuum_columns
from compositems.metrics import gate_fidelity, vacuum_block

PHI = math.acos(-0.25)


def test_composite_phi():
    assert composite_phi(math.pi) == pytest.approx(math.pi)
    assert composite_phi(math.pi / 2) == pytest.approx(2 * math.pi / 3)
    assert composite_phi(math.pi / 4) == pytest.approx(1.82348, abs=1e-5)
    with pytest.raises(ValueError):
        composite_phi(1.1 * math.pi)


def test_b1_structure(b1):
    assert len(b1.segments) == 6 and b1.label == "B1"
    assert b1.phase_gate == PhaseGate("last", 2, -2 * PHI)
    assert [g.theta for g in b1.logical] == pytest.approx([math.pi / 4, math.pi / 2, math.pi / 2])
    assert b1.segment_thetas == pytest.approx([math.pi / 8] * 2 + [math.pi / 4] * 4)
    assert [s.zeta_plus[1] for s in b1.segments] == pytest.approx([0, 0, PHI, PHI, 3 * PHI, 3 * PHI])


def test_b2_structure(b2):
    assert b2.phase_gate == PhaseGate("first", 2, 2 * PHI)
    assert [s.zeta_plus[1] for s in b2.segments] == pytest.approx([3 * PHI] * 2 + [PHI] * 2 + [0, 0])
    for s in b2.segments:
        assert s.duration == pytest.approx(math.pi / 3, abs=1e-14)
    assert b2.segment_thetas[4:] == pytest.approx((math.pi / 8, math.pi / 8))
    g = [abs(s.g0) for s in b2.segments]
    for k in range(4):
        assert g[k] / g[4] == pytest.approx(math.sqrt(2), abs=1e-6)
    assert b2.segments[0].t_start == 0 and b2.segments[-1].t_end == pytest.approx(2 * math.pi)


@pytest.mark.parametrize("kind", ["B1", "B2"])
@pytest.mark.parametrize("shape", ["sin32", "sin14", "sincos", "const"])
def test_split_and_closure(kind, shape):
    seq = build_sequence(kind, math.pi / 4, shape)
    for k, gate in enumerate(seq.logical):
        first, second = seq.segments[2 * k], seq.segments[2 * k + 1]
        assert first.zeta_plus == second.zeta_plus
        assert first.zeta_minus == 0.0
        total = theta_numeric(first, first.t_start, first.t_end) + theta_numeric(second, second.t_start, second.t_end)
        assert total == pytest.approx(gate.theta, abs=1e-9)
        residual = alpha_numeric(first, first.t_start, first.t_end) + alpha_numeric(second, second.t_start, second.t_end)
        assert abs(residual) < 1e-8


def test_sequence_closure_phases():
    zm = [s.zeta_minus for s in build_sequence("B2", math.pi / 4, "sin32").segments]
    assert zm[0] == zm[2] == zm[4] == 0.0
    for z in zm[1::2]:
        assert z == pytest.approx(-math.pi + 0.6207, abs=1e-3)


@pytest.mark.parametrize("x", [0.0, 0.3, PHI, -2.0])
def test_phase_gate_equivalence(x):
    F = phase_gate_matrix(x)
    lhs = F.conj().T @ target_gate(0.7) @ F
    np.testing.assert_allclose(lhs, rotation_matrix(0.7, (0.0, -2 * x)), atol=1e-10)


def test_phase_gate_qubit_one():
    np.testing.assert_allclose(phase_gate_matrix(0.4, 1), np.kron(np.diag(np.exp([-0.4j, 0.4j])), np.eye(2)))


@pytest.mark.parametrize("kind", ["B1", "B2"])
def test_rotational_model_exact(kind, b1, b2):
    seq = b1 if kind == "B1" else b2
    assert broadband_residual(seq, order=0) < 1e-8


def test_broadband_orders(b2, standard):
    assert broadband_residual(b2, order=1) < 1e-4
    assert broadband_residual(standard, order=1) > 1e-2
    assert broadband_residual(b2, order=2) > broadband_residual(b2, order=1)
    with pytest.raises(ValueError):
        broadband_residual(b2, channel="timing")


@pytest.mark.slow
@pytest.mark.parametrize("kind", ["B1", "B2"])
def test_zero_error_propagator_matches_target(kind, b1, b2, cfg40):
    seq = b1 if kind == "B1" else b2
    U = propagator_numeric(seq, cfg=cfg40, columns=vacuum_columns(cfg40))
    block = vacuum_block(U, cfg40)
    target = target_gate(math.pi / 4)
    overlap = np.trace(target.conj().T @ block)
    assert np.max(np.abs(block - overlap / abs(overlap) * target)) < 1e-6


@pytest.mark.slow
def test_coupling_robustness_ordering(b2, standard, cfg40, cfg14):
    err = ErrorModel(coupling=0.05)
    target = target_gate(math.pi / 4)
    composite = gate_fidelity(target, propagator_numeric(b2, err, cfg=cfg40, columns=vacuum_columns(cfg40)), cfg40)
    single = gate_fidelity(target, propagator_numeric(standard, err, cfg=cfg14, columns=vacuum_columns(cfg14)), cfg14)
    assert composite.infidelity < single.infidelity


def test_manifest(b2):
    text = manifest(b2)
    assert text.endswith("\n")
    lines = text.splitlines()
    header = [l for l in lines if not l.startswith("#")]
    assert header[0] == "index,t_start,t_end,abs_g0,eps,zeta1_plus,zeta2_plus,zeta_minus,stark_coef"
    assert len(header) == 7
    fields = header[6].split(",")
    assert fields[0] == "6" and float(fields[3]) == pytest.approx(abs(b2.segments[5].g0))


def test_builders_validate():
    with pytest.raises(ValueError):
        build_sequence("B3")
    with pytest.raises(ValueError):
        LogicalGate(0.0, 0.0)
    with pytest.raises(ValueError):
        PhaseGate("middle", 2, 0.1)
    with pytest.raises(ValueError):
        build_sequence("B2", math.pi / 4, "twotone")
    two = build_single(math.pi / 4, "twotone")
    assert two.segments[0].g0 == 1.0
    with pytest.raises(ValueError):
        rotational_propagator(two)


def test_single_with_stark():
    seq = build_sequence("single", math.pi / 4, "const", stark_coef=0.01)
    assert seq.segments[0].stark_coef == 0.01
