"""Measurements: site occupations, edge-pair projection, concurrence, and
the entanglement witness.

Spin-1/2 conventions used throughout, in the (up, down) ordering:

    Z |up> = +|up>      Y |up> = +i |down>      Y |down> = -i |up>

The witness is W = (1/2)(I - Z x Y - Y x Z - X x X), where the first factor
acts on the atom at the first projected site and the second on the other.
Separable two-qubit states satisfy <W> >= 0, and the state the protocol
ideally delivers, (|uu> + i|ud> + i|du> + |dd>) / 2, reaches the spectral
floor <W> = -1.  Each off-identity term is measured by rotating into the
Z x Z basis; the rotations are exposed so an experiment can replay them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .basis import FockBasis
from .propagator import StateVector

__all__ = [
    "PAULI_I",
    "PAULI_X",
    "PAULI_Y",
    "PAULI_Z",
    "occupation_profile",
    "site_occupations",
    "TwoQubitOutcome",
    "project_two_sites",
    "concurrence",
    "WitnessTerm",
    "witness_settings",
    "witness_matrix",
    "assemble_witness",
    "witness_bounds",
    "witness_expectation",
    "witness_expectation_sampled",
]

PAULI_I = np.eye(2, dtype=np.complex128)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)

# h Z h = X with h = (X + Z)/sqrt(2);  R Z R^dag = Y with R = exp(i pi/4 X)
_H_MIX = (PAULI_X + PAULI_Z) / math.sqrt(2.0)
_R_Y = (PAULI_I + 1j * PAULI_X) / math.sqrt(2.0)


def _require_normalized(norm: float, what: str) -> None:
    if abs(norm - 1.0) > 1e-6:
        raise ValueError(f"{what} must be normalized, got norm {norm}")


def occupation_profile(state: StateVector) -> np.ndarray:
    """Per-site, per-spin mean occupations, shape (n_sites, 2).

    Row ``s - 1`` holds (<n_{s,up}>, <n_{s,down}>).  The grand total equals
    the particle number, which is conserved structurally.
    """
    weights = np.abs(state.amplitudes) ** 2
    dens = weights @ state.basis.occupations.astype(np.float64)
    return dens.reshape(state.basis.n_sites, 2)


def site_occupations(state: StateVector) -> np.ndarray:
    """Per-site totals <n_s>, both spins summed."""
    return occupation_profile(state).sum(axis=1)


@dataclass
class TwoQubitOutcome:
    """Result of projecting onto one atom at each of two sites.

    ``amplitudes`` holds (uu, ud, du, dd) with the first spin at ``site_a``.
    When the projected weight ``p_project`` is above the floor the
    amplitudes are renormalized and ``normalized`` is True; otherwise they
    are left raw and the outcome is unusable for spin diagnostics.
    """

    amplitudes: np.ndarray
    p_project: float
    normalized: bool
    site_a: int
    site_b: int


def project_two_sites(
    state: StateVector, site_a: int, site_b: int, floor: float = 1e-12
) -> TwoQubitOutcome:
    """Project a two-atom state onto 'one atom at site_a, one at site_b'.

    Returns the four spin amplitudes of the projected pair together with
    the projection probability; the sum of the squared raw amplitudes is
    exactly that probability.
    """
    basis = state.basis
    if basis.n_particles != 2:
        raise ValueError("projection needs a two-particle state")
    if site_a == site_b:
        raise ValueError("projection sites must be distinct")
    _require_normalized(state.norm(), "projected state")
    amps = np.empty(4, dtype=np.complex128)
    k = 0
    for sa in (0, 1):
        for sb in (0, 1):
            idx = basis.index_of_modes(
                [basis.mode_index(site_a, sa), basis.mode_index(site_b, sb)]
            )
            amps[k] = state.amplitudes[idx]
            k += 1
    p = float(np.sum(np.abs(amps) ** 2))
    if p >= floor:
        return TwoQubitOutcome(amps / math.sqrt(p), p, True, site_a, site_b)
    return TwoQubitOutcome(amps, p, False, site_a, site_b)


def concurrence(outcome: TwoQubitOutcome) -> float:
    """Pure-state concurrence 2 |a_uu a_dd - a_ud a_du| of the projected pair."""
    if not outcome.normalized:
        raise ValueError(
            f"projection weight {outcome.p_project} below floor; "
            "no spin state to evaluate"
        )
    a = outcome.amplitudes
    return float(min(1.0, 2.0 * abs(a[0] * a[3] - a[1] * a[2])))


@dataclass
class WitnessTerm:
    """One measurable piece of the witness.

    ``label`` names the Pauli pair ('I', 'ZY', 'YZ' or 'XX', first factor on
    site_a), ``weight`` its coefficient in W, and ``pre_rotations`` the pair
    of local unitaries u with u Z u^dag equal to the intended Pauli; applying
    u^dag to the state maps the term onto a Z x Z measurement.
    """

    label: str
    weight: float
    pre_rotations: tuple[np.ndarray, np.ndarray]


def witness_settings() -> list[WitnessTerm]:
    """The four terms of W with explicit measurement rotations."""
    return [
        WitnessTerm("I", +0.5, (PAULI_I.copy(), PAULI_I.copy())),
        WitnessTerm("ZY", -0.5, (PAULI_I.copy(), _R_Y.copy())),
        WitnessTerm("YZ", -0.5, (_R_Y.copy(), PAULI_I.copy())),
        WitnessTerm("XX", -0.5, (_H_MIX.copy(), _H_MIX.copy())),
    ]


def assemble_witness(terms) -> np.ndarray:
    """Rebuild the 4x4 witness from measurement terms (consistency check)."""
    total = np.zeros((4, 4), dtype=np.complex128)
    for term in terms:
        base = PAULI_I if term.label == "I" else PAULI_Z
        ua, ub = term.pre_rotations
        pa = ua @ base @ ua.conj().T
        pb = ub @ base @ ub.conj().T
        total += term.weight * np.kron(pa, pb)
    return total


def witness_matrix() -> np.ndarray:
    """Direct 4x4 matrix of W in the (uu, ud, du, dd) basis."""
    return 0.5 * (
        np.kron(PAULI_I, PAULI_I)
        - np.kron(PAULI_Z, PAULI_Y)
        - np.kron(PAULI_Y, PAULI_Z)
        - np.kron(PAULI_X, PAULI_X)
    )


@lru_cache(maxsize=1)
def witness_bounds() -> tuple[float, float]:
    """Spectral range of W, computed once; every expectation lies inside."""
    eigs = np.linalg.eigvalsh(witness_matrix())
    return float(eigs[0]), float(eigs[-1])


def witness_expectation(outcome: TwoQubitOutcome) -> float:
    """Exact <W> on the projected pair."""
    if not outcome.normalized:
        raise ValueError(
            f"projection weight {outcome.p_project} below floor; "
            "no spin state to evaluate"
        )
    a = outcome.amplitudes
    return float(np.vdot(a, witness_matrix() @ a).real)


def witness_expectation_sampled(
    outcome: TwoQubitOutcome, shots: int, rng=None
) -> float:
    """<W> estimated from finite-shot Z x Z measurements per setting.

    Each non-identity term is sampled ``shots`` times after applying its
    pre-rotations' adjoints, mimicking the three measurement settings an
    experiment would run.  Deterministic for a fixed rng seed.
    """
    if not outcome.normalized:
        raise ValueError(
            f"projection weight {outcome.p_project} below floor; "
            "no spin state to evaluate"
        )
    if shots < 1:
        raise ValueError(f"shots must be positive, got {shots}")
    if rng is None or isinstance(rng, int):
        rng = np.random.default_rng(rng)
    zz_signs = np.array([1.0, -1.0, -1.0, 1.0])
    total = 0.0
    for term in witness_settings():
        if term.label == "I":
            total += term.weight
            continue
        ua, ub = term.pre_rotations
        rotated = np.kron(ua.conj().T, ub.conj().T) @ outcome.amplitudes
        probs = np.abs(rotated) ** 2
        probs = probs / probs.sum()
        counts = rng.multinomial(shots, probs)
        total += term.weight * float(counts @ zz_signs) / shots
    return total
