import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from compositems.hilbert import (
    IDENTITY2,
    SIGMA_MINUS,
    SIGMA_PLUS,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    HilbertConfig,
    basis_state,
    embed,
    is_hermitian,
    ladder_ops,
    matrix_exp,
    sigma_phase,
    unitarity_error,
)

angles = st.floats(-20, 20, allow_nan=False)


def test_config_dimension():
    assert HilbertConfig(14).total_dim == 56
    with pytest.raises(ValueError):
        HilbertConfig(1)


def test_sigma_phase_special_angles():
    np.testing.assert_allclose(sigma_phase(0.0), SIGMA_X, atol=1e-15)
    np.testing.assert_allclose(sigma_phase(math.pi / 2), SIGMA_Y, atol=1e-15)


def test_sigma_phase_matches_ladder_form():
    phi = 0.7
    ladder_form = SIGMA_PLUS * np.exp(-1j * phi) + SIGMA_MINUS * np.exp(1j * phi)
    np.testing.assert_allclose(sigma_phase(phi), ladder_form, atol=1e-15, rtol=0)
    np.testing.assert_allclose(sigma_phase(phi), math.cos(phi) * SIGMA_X + math.sin(phi) * SIGMA_Y,
                               atol=1e-15, rtol=0)


@given(angles)
def test_sigma_phase_periodic(phi):
    np.testing.assert_allclose(sigma_phase(phi + 2 * math.pi), sigma_phase(phi), atol=1e-14, rtol=0)


def test_ladder_small_cases():
    a, ad = ladder_ops(HilbertConfig(2))
    np.testing.assert_array_equal(a, [[0, 1], [0, 0]])
    a3, _ = ladder_ops(HilbertConfig(3))
    assert a3[1, 2] == pytest.approx(math.sqrt(2))


@pytest.mark.parametrize("n", [2, 5, 14])
def test_ladder_commutator_truncated(n):
    a, ad = ladder_ops(HilbertConfig(n))
    expected = np.eye(n)
    expected[-1, -1] = 1 - n
    np.testing.assert_allclose(a @ ad - ad @ a, expected, atol=1e-13)
    np.testing.assert_array_equal(ad, a.conj().T)


def test_embed_layout():
    cfg = HilbertConfig(2)
    np.testing.assert_array_equal(embed(SIGMA_X, "qubit1", cfg), np.kron(np.kron(SIGMA_X, IDENTITY2), IDENTITY2))
    for slot, dim in (("qubit1", 2), ("qubit2", 2), ("motion", 2)):
        np.testing.assert_array_equal(embed(np.eye(dim), slot, cfg), np.eye(8))


def test_embed_number_trace():
    cfg = HilbertConfig(3)
    a, ad = ladder_ops(cfg)
    assert np.trace(embed(ad @ a, "motion", cfg)).real == pytest.approx(12.0)


def test_embed_rejects_bad_input():
    cfg = HilbertConfig(4)
    with pytest.raises(ValueError):
        embed(np.eye(3), "qubit1", cfg)
    with pytest.raises(ValueError):
        embed(np.eye(2), "motion", cfg)
    with pytest.raises(ValueError):
        embed(np.eye(2), "qubit3", cfg)


def test_distinct_slots_commute():
    cfg = HilbertConfig(6)
    a, ad = ladder_ops(cfg)
    ops = [embed(sigma_phase(0.3), "qubit1", cfg), embed(SIGMA_Z, "qubit2", cfg), embed(a + ad, "motion", cfg)]
    for i in range(3):
        for j in range(i + 1, 3):
            comm = ops[i] @ ops[j] - ops[j] @ ops[i]
            assert np.max(np.abs(comm)) < 1e-13


def test_matrix_exp_basics():
    np.testing.assert_allclose(matrix_exp(np.zeros((4, 4))), np.eye(4), atol=0)
    np.testing.assert_allclose(matrix_exp(1j * math.pi / 2 * SIGMA_X), 1j * SIGMA_X, atol=1e-12)
    with pytest.raises(ValueError):
        matrix_exp(np.array([[np.nan, 0], [0, 1]]))


def test_matrix_exp_coherent_state():
    cfg = HilbertConfig(30)
    a, ad = ladder_ops(cfg)
    alpha = 0.5
    vac = np.zeros(30)
    vac[0] = 1
    psi = matrix_exp(alpha * ad - alpha * a) @ vac
    assert np.vdot(psi, (ad @ a) @ psi).real == pytest.approx(0.25, abs=1e-8)


@settings(max_examples=30, deadline=None)
@given(st.complex_numbers(max_magnitude=1.5, allow_nan=False, allow_infinity=False), angles)
def test_matrix_exp_inverse(alpha, phi):
    cfg = HilbertConfig(8)
    a, ad = ladder_ops(cfg)
    gen = embed(sigma_phase(phi), "qubit1", cfg) @ embed(alpha * ad - np.conj(alpha) * a, "motion", cfg)
    prod = matrix_exp(gen) @ matrix_exp(-gen)
    assert np.max(np.abs(prod - np.eye(cfg.total_dim))) < 1e-10
    assert unitarity_error(matrix_exp(gen)) < 1e-10


def test_basis_state_and_helpers():
    cfg = HilbertConfig(3)
    psi = basis_state("11", 2, cfg)
    assert psi[3 * 3 + 2] == 1 and np.sum(np.abs(psi)) == 1
    assert is_hermitian(embed(SIGMA_Y, "qubit2", cfg))
    assert not is_hermitian(1j * embed(SIGMA_Y, "qubit2", cfg))
