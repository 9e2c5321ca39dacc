"""Closed-form double-well amplitudes, protocol timing, unit conversion."""

import math

import numpy as np
import pytest

from latticeshuttle import (
    PhysicalUnits,
    double_occupancy,
    effective_gate_state,
    frequency_hz,
    j_exchange,
    max_double_occupancy,
    single_atom_amplitudes,
    t_hop,
    t_interact,
    to_physical_time,
    total_time,
    two_atom_coefficients,
)


def test_single_atom_unitarity():
    rng = np.random.default_rng(3)
    for _ in range(200):
        j = float(rng.uniform(0.1, 3.0))
        t = float(rng.uniform(0.0, 20.0))
        stay, hop = single_atom_amplitudes(j, t)
        assert abs(stay) ** 2 + abs(hop) ** 2 == pytest.approx(1.0, abs=1e-14)


def test_single_atom_complete_hop():
    stay, hop = single_atom_amplitudes(1.0, t_hop(1.0))
    assert abs(stay) < 1e-12
    assert hop == 1j


def test_two_atom_channel_norms():
    rng = np.random.default_rng(5)
    for _ in range(500):
        j = float(rng.uniform(0.1, 2.0))
        u = float(rng.uniform(0.5, 200.0))
        t = float(rng.uniform(0.0, 50.0))
        coeff = two_atom_coefficients(j, u, t)
        assert coeff.norm_same() == pytest.approx(1.0, abs=1e-12)
        assert coeff.norm_diff() == pytest.approx(1.0, abs=1e-12)


def test_two_atom_initial_conditions():
    coeff = two_atom_coefficients(1.0, 25.0, 0.0)
    assert coeff.a_same == pytest.approx(1.0, abs=1e-15)
    assert coeff.c_same == pytest.approx(0.0, abs=1e-15)
    assert coeff.a_diff == pytest.approx(1.0, abs=1e-15)
    assert coeff.b_diff == pytest.approx(0.0, abs=1e-15)
    assert coeff.c_diff == pytest.approx(0.0, abs=1e-15)


def test_two_atom_requires_positive_u():
    with pytest.raises(ValueError):
        two_atom_coefficients(1.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        two_atom_coefficients(1.0, -5.0, 1.0)


def test_timing_formulas():
    assert t_hop(1.0) == math.pi / 2
    assert t_hop(2.0) == math.pi / 4
    assert j_exchange(1.0, 25.0) == pytest.approx(4.0 / 25.0, abs=1e-15)
    assert t_interact(1.0, 25.0) == pytest.approx(25.0 * math.pi / 8.0, abs=1e-12)
    # The entangling hold is a quarter period of the exchange rotation.
    assert t_interact(1.0, 25.0) * j_exchange(1.0, 25.0) == pytest.approx(
        math.pi / 2, abs=1e-12
    )


def test_timing_validation():
    with pytest.raises(ValueError):
        t_hop(0.0)
    with pytest.raises(ValueError):
        t_interact(1.0, 0.0)
    with pytest.raises(ValueError):
        t_interact(0.0, 25.0)
    with pytest.raises(ValueError):
        j_exchange(1.0, -1.0)
    with pytest.raises(ValueError):
        total_time(1, 1.0, 25.0)


def test_total_time_composition():
    # (N - 2) complete hops plus the entangling hold.
    assert total_time(100, 1.0, 25.0) == pytest.approx(
        98 * t_hop(1.0) + t_interact(1.0, 25.0), abs=1e-12
    )
    assert total_time(2, 1.0, 25.0) == pytest.approx(
        t_interact(1.0, 25.0), abs=1e-15
    )


def test_effective_gate_full_exchange():
    j_ex = j_exchange(1.0, 25.0)
    plus_plus = np.array([1.0, 1.0, 1.0, 1.0]) / 2.0
    out = effective_gate_state(plus_plus, j_ex, math.pi / (2.0 * j_ex))
    bell = np.array([1.0, 1j, 1j, 1.0]) / 2.0
    np.testing.assert_allclose(out, bell, atol=1e-12)


def test_effective_gate_unitary():
    rng = np.random.default_rng(9)
    for _ in range(100):
        a = rng.normal(size=4) + 1j * rng.normal(size=4)
        a /= np.linalg.norm(a)
        out = effective_gate_state(a, 0.16, float(rng.uniform(0, 40)))
        assert np.linalg.norm(out) == pytest.approx(1.0, abs=1e-12)
        # Equal-spin components are untouched.
        assert out[0] == a[0]
        assert out[3] == a[3]


def test_effective_gate_shape_check():
    with pytest.raises(ValueError):
        effective_gate_state(np.zeros(3), 0.1, 1.0)


def test_double_occupancy_below_supremum():
    rng = np.random.default_rng(13)
    bound = max_double_occupancy(1.0, 25.0)
    for _ in range(300):
        t = float(rng.uniform(0.0, 100.0))
        assert double_occupancy(1.0, 25.0, t) <= bound + 1e-12


def test_double_occupancy_supremum_attained():
    # Both channels pass near their maxima within a few hundred hop times,
    # so a dense scan should approach the analytic supremum from below.
    ts = np.linspace(0.0, 400.0, 400001)
    scan = max(double_occupancy(1.0, 25.0, float(t)) for t in ts[::40])
    bound = max_double_occupancy(1.0, 25.0)
    assert scan <= bound + 1e-12
    assert scan >= 0.99 * bound


def test_max_double_occupancy_frozen_value():
    # (16 / 641 + 32 / 689) / 4 for J = 1, U = 25.
    assert max_double_occupancy(1.0, 25.0) == pytest.approx(
        0.017851280088939, abs=1e-12
    )
    assert 0.015 <= max_double_occupancy(1.0, 25.0) <= 0.020


def test_double_occupancy_depends_on_ratio():
    assert max_double_occupancy(2.0, 50.0) == pytest.approx(
        max_double_occupancy(1.0, 25.0), abs=1e-15
    )
    with pytest.raises(ValueError):
        max_double_occupancy(1.0, 0.0)


def test_physical_units():
    units = PhysicalUnits(1500.0)
    assert units.omega_j == pytest.approx(2 * math.pi * 1500.0, abs=1e-9)
    assert to_physical_time(units.omega_j, units) == pytest.approx(1.0, abs=1e-12)
    assert frequency_hz(25.0, units) == pytest.approx(37_500.0, abs=1e-9)
    with pytest.raises(ValueError):
        PhysicalUnits(0.0)


def test_protocol_duration_in_milliseconds():
    # 100 sites at U = 25 J with J/h = 1.5 kHz takes 17.375 ms.
    units = PhysicalUnits(1.5e3)
    ms = to_physical_time(total_time(100, 1.0, 25.0), units) * 1e3
    assert ms == pytest.approx(17.375, abs=1e-3)
