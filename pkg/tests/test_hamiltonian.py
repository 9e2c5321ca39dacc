"""Sparse Hamiltonian assembly: matrix elements, symmetry, interpolation."""

import math

import numpy as np
import pytest

from latticeshuttle import (
    CouplingProfile,
    FockBasis,
    Spin,
    build_hamiltonian,
    coordinate_dump,
    expectation,
    interpolate,
)
from latticeshuttle.hamiltonian import apply


def entry(h, bra_modes, ket_modes):
    basis = h.basis
    r = basis.index_of_modes(bra_modes)
    c = basis.index_of_modes(ket_modes)
    return complex(h.matrix[r, c])


def test_profile_validation():
    with pytest.raises(ValueError):
        CouplingProfile(j_odd=-1.0, j_even=0.0)
    with pytest.raises(ValueError):
        CouplingProfile(j_odd=0.0, j_even=-0.5)
    with pytest.raises(ValueError):
        CouplingProfile(j_odd=1.0, j_even=0.0, u=-2.0)


def test_single_atom_two_sites_dense():
    basis = FockBasis(2, 1)
    h = build_hamiltonian(basis, CouplingProfile(j_odd=0.7, j_even=0.0))
    expected = np.zeros((4, 4), dtype=complex)
    for spin in (0, 1):
        a = basis.index_of_modes([basis.mode_index(1, spin)])
        b = basis.index_of_modes([basis.mode_index(2, spin)])
        expected[a, b] = expected[b, a] = -0.7
    np.testing.assert_array_equal(h.matrix.toarray(), expected)


def test_link_parity_assignment():
    # Links 1..4 of a 5-site chain alternate odd, even, odd, even.
    basis = FockBasis(5, 1)
    h = build_hamiltonian(basis, CouplingProfile(j_odd=1.3, j_even=0.4))
    for link in range(1, 5):
        left = [basis.mode_index(link, Spin.UP)]
        right = [basis.mode_index(link + 1, Spin.UP)]
        want = -1.3 if link % 2 == 1 else -0.4
        assert entry(h, right, left) == want
        assert entry(h, left, right) == want


def test_no_spin_flip_hops():
    basis = FockBasis(3, 1)
    h = build_hamiltonian(basis, CouplingProfile(j_odd=1.0, j_even=1.0))
    up_on_1 = [basis.mode_index(1, Spin.UP)]
    down_on_2 = [basis.mode_index(2, Spin.DOWN)]
    assert entry(h, down_on_2, up_on_1) == 0.0


def test_hermitian_exactly():
    rng = np.random.default_rng(7)
    for n_sites, n_particles in [(4, 2), (5, 1), (3, 2)]:
        basis = FockBasis(n_sites, n_particles)
        profile = CouplingProfile(
            j_odd=float(rng.uniform(0, 2)),
            j_even=float(rng.uniform(0, 2)),
            u=float(rng.uniform(0, 30)),
            tilt_slope=float(rng.uniform(-1, 1)),
        )
        h = build_hamiltonian(basis, profile)
        gap = (h.matrix - h.matrix.conj().T).toarray()
        assert np.max(np.abs(gap)) == 0.0


def test_bosonic_sqrt2_enhancement():
    # Moving the second equal-spin atom onto an occupied site picks up the
    # bosonic sqrt(2) factor.
    basis = FockBasis(2, 2)
    h = build_hamiltonian(basis, CouplingProfile(j_odd=1.0, j_even=0.0, u=5.0))
    split = [basis.mode_index(1, Spin.UP), basis.mode_index(2, Spin.UP)]
    doublon = [basis.mode_index(2, Spin.UP), basis.mode_index(2, Spin.UP)]
    assert entry(h, doublon, split) == pytest.approx(-math.sqrt(2.0), abs=1e-15)
    # Opposite spins carry no enhancement.
    mixed_split = [basis.mode_index(1, Spin.UP), basis.mode_index(2, Spin.DOWN)]
    mixed_doublon = [basis.mode_index(2, Spin.UP), basis.mode_index(2, Spin.DOWN)]
    assert entry(h, mixed_doublon, mixed_split) == pytest.approx(-1.0, abs=1e-15)


def test_onsite_interaction_diagonal():
    # Same-spin pairs on one site cost U, opposite-spin pairs U/2, split
    # configurations nothing.
    u = 11.0
    basis = FockBasis(2, 2)
    h = build_hamiltonian(basis, CouplingProfile(j_odd=0.0, j_even=0.0, u=u))
    same = [basis.mode_index(1, Spin.UP)] * 2
    mixed = [basis.mode_index(1, Spin.UP), basis.mode_index(1, Spin.DOWN)]
    split = [basis.mode_index(1, Spin.UP), basis.mode_index(2, Spin.UP)]
    assert entry(h, same, same) == u
    assert entry(h, mixed, mixed) == u / 2
    assert entry(h, split, split) == 0.0


def test_tilt_slope_diagonal():
    basis = FockBasis(3, 1)
    h = build_hamiltonian(
        basis, CouplingProfile(j_odd=0.0, j_even=0.0, tilt_slope=0.3)
    )
    for site in range(1, 4):
        for spin in (0, 1):
            modes = [basis.mode_index(site, spin)]
            assert entry(h, modes, modes) == pytest.approx(0.3 * site, abs=1e-15)


def test_structural_pattern_is_profile_independent():
    basis = FockBasis(4, 2)
    h_odd = build_hamiltonian(basis, CouplingProfile(j_odd=1.0, j_even=0.0))
    h_even = build_hamiltonian(basis, CouplingProfile(j_odd=0.0, j_even=1.0))
    assert np.array_equal(h_odd.matrix.indptr, h_even.matrix.indptr)
    assert np.array_equal(h_odd.matrix.indices, h_even.matrix.indices)
    # The inactive family is stored as explicit zeros, not dropped.
    row = basis.index_of_modes(
        [basis.mode_index(2, Spin.UP), basis.mode_index(4, Spin.UP)]
    )
    col = basis.index_of_modes(
        [basis.mode_index(3, Spin.UP), basis.mode_index(4, Spin.UP)]
    )
    mat = h_odd.matrix
    stored_cols = mat.indices[mat.indptr[row] : mat.indptr[row + 1]]
    assert col in stored_cols
    assert mat[row, col] == 0.0


def test_interpolate_matches_rebuild():
    basis = FockBasis(3, 2)
    pa = CouplingProfile(j_odd=1.0, j_even=0.0, u=8.0, tilt_slope=0.1)
    pb = CouplingProfile(j_odd=0.0, j_even=1.5, u=8.0, tilt_slope=0.1)
    ha = build_hamiltonian(basis, pa)
    hb = build_hamiltonian(basis, pb)
    for f in (0.0, 0.25, 0.5, 0.8, 1.0):
        mixed = interpolate(ha, hb, f)
        rebuilt = build_hamiltonian(
            basis,
            CouplingProfile(
                j_odd=(1 - f) * pa.j_odd + f * pb.j_odd,
                j_even=(1 - f) * pa.j_even + f * pb.j_even,
                u=8.0,
                tilt_slope=0.1,
            ),
        )
        gap = (mixed.matrix - rebuilt.matrix).toarray()
        assert np.max(np.abs(gap)) < 1e-14
        assert mixed.profile.j_odd == pytest.approx((1 - f) * pa.j_odd + f * pb.j_odd)


def test_interpolate_validation():
    basis = FockBasis(3, 1)
    other = FockBasis(3, 1)
    pa = CouplingProfile(j_odd=1.0, j_even=0.0)
    pb = CouplingProfile(j_odd=0.0, j_even=1.0)
    ha = build_hamiltonian(basis, pa)
    hb = build_hamiltonian(basis, pb)
    with pytest.raises(ValueError):
        interpolate(ha, build_hamiltonian(other, pb), 0.5)
    with pytest.raises(ValueError):
        interpolate(ha, hb, 1.5)
    with pytest.raises(ValueError):
        interpolate(ha, hb, -0.1)
    hu = build_hamiltonian(basis, CouplingProfile(j_odd=0.0, j_even=1.0, u=1.0))
    with pytest.raises(ValueError):
        interpolate(ha, hu, 0.5)


def test_apply_and_expectation_match_dense():
    rng = np.random.default_rng(11)
    basis = FockBasis(4, 2)
    h = build_hamiltonian(
        basis, CouplingProfile(j_odd=0.9, j_even=0.3, u=12.0, tilt_slope=0.2)
    )
    v = rng.normal(size=basis.dim) + 1j * rng.normal(size=basis.dim)
    v /= np.linalg.norm(v)
    dense = h.matrix.toarray()
    np.testing.assert_allclose(apply(h, v), dense @ v, atol=1e-13)
    direct = float(np.real(np.conj(v) @ dense @ v))
    assert expectation(h, v) == pytest.approx(direct, abs=1e-13)
    with pytest.raises(ValueError):
        apply(h, np.zeros(3))


def test_norm_bound_dominates_spectrum():
    basis = FockBasis(4, 2)
    h = build_hamiltonian(
        basis, CouplingProfile(j_odd=1.0, j_even=0.7, u=25.0)
    )
    eigs = np.linalg.eigvalsh(h.matrix.toarray())
    assert h.norm_bound() >= np.max(np.abs(eigs)) - 1e-12


def test_coordinate_dump_roundtrip():
    basis = FockBasis(2, 2)
    h = build_hamiltonian(basis, CouplingProfile(j_odd=1.0, j_even=0.0, u=4.0))
    lines = coordinate_dump(h).splitlines()
    rebuilt = np.zeros((basis.dim, basis.dim), dtype=complex)
    seen = []
    for line in lines:
        r, c, re, im = line.split(", ")
        rebuilt[int(r), int(c)] += float(re) + 1j * float(im)
        seen.append((int(r), int(c)))
    np.testing.assert_array_equal(rebuilt, h.matrix.toarray())
    assert seen == sorted(seen)
