"""Closed-form double-well amplitudes, protocol timing, and unit conversion.

Everything here is analytic, independent of the sparse simulator, and serves
both as the fast path for protocol design and as the oracle layer the
propagator is tested against.

Conventions: hbar = 1, energies in units of a reference hopping J, times in
1/J.  An isolated double well with coupling J rotates a single atom as
(stay, hop) = (cos(J t), i sin(J t)), so a complete hop takes t = pi / (2 J).

For two atoms in one double well with on-site interaction U the surviving
amplitudes depend on the spin channel.  With

    s  = sqrt(1 + 16 J^2 / U^2),      s' = sqrt(1 + 64 J^2 / U^2),

equal spins evolve (up to a global phase exp(-i U t / 2)) as

    stay            a  = cos(s U t / 2) + (i / s) sin(s U t / 2)
    doubly occupied c  = i (2 sqrt(2) J / (s U)) sin(s U t / 2)

and opposite spins (up to a global phase exp(-i U t / 4)) as

    stay            a' = exp(i U t / 4) / 2
                         + (cos(s' U t / 4) + (i / s') sin(s' U t / 4)) / 2
    swapped         b' = -exp(i U t / 4) / 2
                         + (cos(s' U t / 4) + (i / s') sin(s' U t / 4)) / 2
    doubly occupied c' = i (4 J / (s' U)) sin(s' U t / 4).

In the strong-interaction limit the opposite-spin channel reduces to a
resonant exchange oscillation at rate J_ex = 4 J^2 / U while equal spins
stay frozen, which is the entangling gate used by the protocol.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "single_atom_amplitudes",
    "TwoAtomCoefficients",
    "two_atom_coefficients",
    "j_exchange",
    "t_hop",
    "t_interact",
    "total_time",
    "effective_gate_state",
    "double_occupancy",
    "max_double_occupancy",
    "PhysicalUnits",
    "to_physical_time",
    "frequency_hz",
]


def single_atom_amplitudes(j: float, t: float) -> tuple[complex, complex]:
    """(stay, hop) amplitudes for one atom in an isolated double well."""
    return (complex(math.cos(j * t)), 1j * math.sin(j * t))


@dataclass(frozen=True)
class TwoAtomCoefficients:
    """Double-well amplitudes for both spin channels at one time.

    ``a_same``/``c_same`` describe two equal-spin atoms (stay on opposite
    sites / pile onto one site), ``a_diff``/``b_diff``/``c_diff`` describe
    opposite spins (stay / swap / pile up).  Each channel is quoted up to
    its own global phase; moduli are directly comparable with simulation.
    """

    a_same: complex
    c_same: complex
    a_diff: complex
    b_diff: complex
    c_diff: complex
    s: float
    s_prime: float

    def norm_same(self) -> float:
        return abs(self.a_same) ** 2 + 2 * abs(self.c_same) ** 2

    def norm_diff(self) -> float:
        return (
            abs(self.a_diff) ** 2
            + abs(self.b_diff) ** 2
            + 2 * abs(self.c_diff) ** 2
        )


def two_atom_coefficients(j: float, u: float, t: float) -> TwoAtomCoefficients:
    """Evaluate the closed forms above at time ``t``.

    Raises
    ------
    ValueError
        If ``u <= 0``; the expressions are singular there and the caller
        should use the degenerate (free-atom) limit instead.
    """
    if u <= 0:
        raise ValueError(f"closed forms need u > 0, got u={u}")
    s = math.sqrt(1.0 + 16.0 * j * j / (u * u))
    sp = math.sqrt(1.0 + 64.0 * j * j / (u * u))
    half = s * u * t / 2.0
    quarter = sp * u * t / 4.0
    a_same = math.cos(half) + 1j * math.sin(half) / s
    c_same = 1j * (2.0 * math.sqrt(2.0) * j / (s * u)) * math.sin(half)
    zz = math.cos(quarter) + 1j * math.sin(quarter) / sp
    phase = cmath.exp(1j * u * t / 4.0)
    a_diff = 0.5 * phase + 0.5 * zz
    b_diff = -0.5 * phase + 0.5 * zz
    c_diff = 1j * (4.0 * j / (sp * u)) * math.sin(quarter)
    return TwoAtomCoefficients(a_same, c_same, a_diff, b_diff, c_diff, s, sp)


def j_exchange(j: float, u: float) -> float:
    """Superexchange rate 4 J^2 / U of the opposite-spin channel."""
    if u <= 0:
        raise ValueError(f"exchange rate needs u > 0, got u={u}")
    return 4.0 * j * j / u


def t_hop(j: float) -> float:
    """Duration of one complete inter-well hop, pi / (2 J)."""
    if j <= 0:
        raise ValueError(f"hop time needs j > 0, got j={j}")
    return math.pi / (2.0 * j)


def t_interact(j: float, u: float) -> float:
    """Entangling hold duration pi / (2 J_ex) = pi U / (8 J^2)."""
    if j <= 0:
        raise ValueError(f"interaction time needs j > 0, got j={j}")
    if u <= 0:
        raise ValueError(f"interaction time needs u > 0, got u={u}")
    return math.pi * u / (8.0 * j * j)


def total_time(n_sites: int, j: float, u: float) -> float:
    """Full protocol duration (N - 2) t_hop + t_interact for even N.

    This is the end-to-end time to walk two edge atoms together, run the
    entangling hold, and walk them back out.
    """
    if n_sites < 2:
        raise ValueError(f"need at least 2 sites, got {n_sites}")
    return (n_sites - 2) * t_hop(j) + t_interact(j, u)


def effective_gate_state(amplitudes, j_ex: float, t: float) -> np.ndarray:
    """Apply the ideal exchange gate to a two-qubit state.

    ``amplitudes`` is the 4-vector (uu, ud, du, dd).  Equal-spin components
    are unchanged; the opposite-spin pair rotates as
    ud -> cos(J_ex t) ud + i sin(J_ex t) du and symmetrically.  At
    t = pi / (2 J_ex) this is a perfect i-SWAP of ud and du, which turns a
    product of two transverse spins into a maximally entangled state.
    """
    a = np.asarray(amplitudes, dtype=np.complex128)
    if a.shape != (4,):
        raise ValueError(f"expected 4 amplitudes, got shape {a.shape}")
    c = math.cos(j_ex * t)
    s = 1j * math.sin(j_ex * t)
    out = a.copy()
    out[1] = c * a[1] + s * a[2]
    out[2] = c * a[2] + s * a[1]
    return out


def double_occupancy(j: float, u: float, t: float) -> float:
    """Channel-averaged double-occupancy weight (2|c|^2 + 2|c'|^2) / 4.

    This is the figure of merit quoted for the entangling hold: the four
    spin channels of a transverse-spin pair contribute their pile-up
    amplitudes c with equal weight 1/4.
    """
    coeff = two_atom_coefficients(j, u, t)
    return (
        2.0 * abs(coeff.c_same) ** 2 + 2.0 * abs(coeff.c_diff) ** 2
    ) / 4.0


def max_double_occupancy(j: float, u: float) -> float:
    """Supremum of :func:`double_occupancy` over time.

    The two channels oscillate at incommensurate rates, so each factor
    sin^2 independently approaches 1 and the supremum is the sum of the
    channel maxima |c|^2_max = 8 J^2 / (U^2 + 16 J^2) and
    |c'|^2_max = 16 J^2 / (U^2 + 64 J^2).
    """
    if u <= 0:
        raise ValueError(f"need u > 0, got u={u}")
    c_same_max = 8.0 * j * j / (u * u + 16.0 * j * j)
    c_diff_max = 16.0 * j * j / (u * u + 64.0 * j * j)
    return (2.0 * c_same_max + 2.0 * c_diff_max) / 4.0


@dataclass(frozen=True)
class PhysicalUnits:
    """Conversion anchor: the reference hopping expressed as J/h in Hz."""

    j_over_h_hz: float

    def __post_init__(self):
        if self.j_over_h_hz <= 0:
            raise ValueError(
                f"J/h must be positive, got {self.j_over_h_hz}"
            )

    @property
    def omega_j(self) -> float:
        """Angular frequency of the reference hopping, 2 pi J/h in rad/s."""
        return 2.0 * math.pi * self.j_over_h_hz


def to_physical_time(t: float, units: PhysicalUnits) -> float:
    """Convert a time in units of 1/J to seconds."""
    return t / units.omega_j


def frequency_hz(energy: float, units: PhysicalUnits) -> float:
    """Convert an energy in units of J to an ordinary frequency in Hz."""
    return energy * units.j_over_h_hz
