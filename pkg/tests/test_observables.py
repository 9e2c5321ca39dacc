"""Occupations, edge-pair projection, concurrence, entanglement witness."""

import math

import numpy as np
import pytest

from latticeshuttle import (
    FockBasis,
    Spin,
    StateVector,
    assemble_witness,
    concurrence,
    localized_state,
    occupation_profile,
    project_two_sites,
    site_occupations,
    two_atom_product_state,
    witness_bounds,
    witness_expectation,
    witness_expectation_sampled,
    witness_matrix,
    witness_settings,
)
from latticeshuttle.observables import PAULI_I, PAULI_X, PAULI_Y, PAULI_Z

BELL = np.array([1.0, 1j, 1j, 1.0]) / 2.0


def random_qubit(rng):
    q = rng.normal(size=2) + 1j * rng.normal(size=2)
    return q / np.linalg.norm(q)


def haar_unitary(rng):
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def bell_outcome():
    basis = FockBasis(2, 2)
    state = two_atom_product_state(basis, 1, (1, 0), 2, (1, 0))
    amps = np.zeros(basis.dim, dtype=np.complex128)
    for k, (sa, sb) in enumerate([(0, 0), (0, 1), (1, 0), (1, 1)]):
        idx = basis.index_of_modes(
            [basis.mode_index(1, sa), basis.mode_index(2, sb)]
        )
        amps[idx] = BELL[k]
    return project_two_sites(StateVector(basis, amps), 1, 2)


def test_pauli_conventions():
    np.testing.assert_array_equal(PAULI_Y @ np.array([1.0, 0.0]), [0.0, 1j])
    np.testing.assert_array_equal(PAULI_Y @ np.array([0.0, 1.0]), [-1j, 0.0])
    np.testing.assert_array_equal(PAULI_Z @ np.array([1.0, 0.0]), [1.0, 0.0])


def test_occupation_profile_localized():
    basis = FockBasis(4, 1)
    state = localized_state(basis, 3, Spin.DOWN)
    profile = occupation_profile(state)
    assert profile.shape == (4, 2)
    assert profile[2, 1] == 1.0
    assert profile.sum() == pytest.approx(1.0, abs=1e-15)
    totals = site_occupations(state)
    np.testing.assert_allclose(totals, [0, 0, 1, 0], atol=1e-15)


def test_occupation_profile_two_atoms():
    basis = FockBasis(4, 2)
    state = two_atom_product_state(basis, 1, (1, 1), 4, (1, 0))
    profile = occupation_profile(state)
    assert profile[0].sum() == pytest.approx(1.0, abs=1e-12)
    assert profile[0, 0] == pytest.approx(0.5, abs=1e-12)
    assert profile[3, 0] == pytest.approx(1.0, abs=1e-12)
    assert profile.sum() == pytest.approx(2.0, abs=1e-12)


def test_projection_bookkeeping():
    basis = FockBasis(4, 2)
    qa, qb = (1.0, 1j), (2.0, -1.0)
    state = two_atom_product_state(basis, 1, qa, 4, qb)
    outcome = project_two_sites(state, 1, 4)
    assert outcome.normalized
    assert outcome.p_project == pytest.approx(1.0, abs=1e-12)
    ca = np.array(qa) / np.linalg.norm(qa)
    cb = np.array(qb) / np.linalg.norm(qb)
    np.testing.assert_allclose(
        outcome.amplitudes, np.kron(ca, cb), atol=1e-12
    )
    # Projecting onto sites the atoms do not occupy leaves nothing.
    missed = project_two_sites(state, 2, 3)
    assert missed.p_project == pytest.approx(0.0, abs=1e-15)
    assert not missed.normalized


def test_projection_partial_weight():
    # An equal split between two site pairs projects with probability 1/2.
    basis = FockBasis(4, 2)
    a = two_atom_product_state(basis, 1, (1, 0), 4, (1, 0))
    b = two_atom_product_state(basis, 2, (1, 0), 3, (1, 0))
    mixed = StateVector(
        basis, (a.amplitudes + b.amplitudes) / math.sqrt(2.0)
    )
    outcome = project_two_sites(mixed, 1, 4)
    assert outcome.p_project == pytest.approx(0.5, abs=1e-12)
    assert outcome.normalized
    assert np.linalg.norm(outcome.amplitudes) == pytest.approx(1.0, abs=1e-12)


def test_projection_validation():
    basis = FockBasis(4, 2)
    state = two_atom_product_state(basis, 1, (1, 0), 4, (1, 0))
    with pytest.raises(ValueError):
        project_two_sites(localized_state(FockBasis(4, 1), 1), 1, 4)
    with pytest.raises(ValueError):
        project_two_sites(state, 2, 2)
    with pytest.raises(ValueError):
        project_two_sites(StateVector(basis, state.amplitudes * 2.0), 1, 4)


def test_concurrence_values():
    basis = FockBasis(4, 2)
    product = project_two_sites(
        two_atom_product_state(basis, 1, (1, 1), 4, (1, -1j)), 1, 4
    )
    assert concurrence(product) == pytest.approx(0.0, abs=1e-12)
    assert concurrence(bell_outcome()) == pytest.approx(1.0, abs=1e-12)


def test_concurrence_local_unitary_invariance():
    rng = np.random.default_rng(17)
    outcome = bell_outcome()
    base = concurrence(outcome)
    for _ in range(25):
        ua = haar_unitary(rng)
        ub = haar_unitary(rng)
        rotated = np.kron(ua, ub) @ outcome.amplitudes
        out = type(outcome)(rotated, 1.0, True, 1, 2)
        assert concurrence(out) == pytest.approx(base, abs=1e-10)


def test_concurrence_requires_normalized_outcome():
    basis = FockBasis(4, 2)
    state = two_atom_product_state(basis, 1, (1, 0), 4, (1, 0))
    missed = project_two_sites(state, 2, 3)
    with pytest.raises(ValueError):
        concurrence(missed)
    with pytest.raises(ValueError):
        witness_expectation(missed)


def test_witness_matrix_is_hermitian_with_known_spectrum():
    w = witness_matrix()
    np.testing.assert_allclose(w, w.conj().T, atol=1e-15)
    eigs = np.linalg.eigvalsh(w)
    np.testing.assert_allclose(eigs, [-1.0, 1.0, 1.0, 1.0], atol=1e-12)
    assert witness_bounds() == pytest.approx((-1.0, 1.0), abs=1e-12)


def test_witness_settings_reassemble_exactly():
    gap = np.abs(assemble_witness(witness_settings()) - witness_matrix())
    assert float(gap.max()) <= 1e-15


def test_witness_rotations_map_z_to_their_pauli():
    by_label = {term.label: term for term in witness_settings()}
    ua, ub = by_label["XX"].pre_rotations
    np.testing.assert_allclose(ua @ PAULI_Z @ ua.conj().T, PAULI_X, atol=1e-15)
    np.testing.assert_allclose(ub @ PAULI_Z @ ub.conj().T, PAULI_X, atol=1e-15)
    _, ry = by_label["ZY"].pre_rotations
    np.testing.assert_allclose(ry @ PAULI_Z @ ry.conj().T, PAULI_Y, atol=1e-15)
    weights = {term.label: term.weight for term in witness_settings()}
    assert weights == {"I": 0.5, "ZY": -0.5, "YZ": -0.5, "XX": -0.5}


def test_witness_reaches_floor_on_target_state():
    assert witness_expectation(bell_outcome()) == pytest.approx(-1.0, abs=1e-12)


def test_witness_nonnegative_on_product_states():
    rng = np.random.default_rng(23)
    w = witness_matrix()
    for _ in range(2000):
        amps = np.kron(random_qubit(rng), random_qubit(rng))
        val = float(np.real(np.conj(amps) @ w @ amps))
        assert val >= -1e-12


def test_witness_sampling_is_seeded_and_consistent():
    outcome = bell_outcome()
    a = witness_expectation_sampled(outcome, 5000, rng=42)
    b = witness_expectation_sampled(outcome, 5000, rng=42)
    assert a == b
    c = witness_expectation_sampled(outcome, 200_000, rng=7)
    assert c == pytest.approx(-1.0, abs=0.02)
    with pytest.raises(ValueError):
        witness_expectation_sampled(outcome, 0)
