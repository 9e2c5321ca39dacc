"""Sparse Bose-Hubbard Hamiltonian on an open superlattice chain.

The Hamiltonian is

    H = - sum over links (i, i+1) and spins of J_link (a+_i a_{i+1} + h.c.)
        + (U/2) sum_{i, sigma} n_{i,sigma} (n_{i,sigma} - 1)
        + (U/2) sum_i n_{i,up} n_{i,down}
        + tilt_slope * sum_i i * n_i

with 1-based link index ``i`` joining sites ``i`` and ``i+1``.  Odd links
carry ``j_odd``, even links ``j_even``; swapping the two families is the
lattice phase shift that alternates which double wells are coupled.  Note
the opposite-spin interaction enters with the same U/2 prefactor as the
same-spin term.  Natural units: hbar = 1, energies in units of a reference
hopping J, times in 1/J.

Matrices are assembled structurally: every geometric link contributes an
entry even when its coupling is zero, and every diagonal element is stored
explicitly.  All profiles over the same basis therefore share one sparsity
pattern, which makes linear interpolation between two Hamiltonians a pure
data blend.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix, csr_matrix

from .basis import FockBasis

__all__ = [
    "CouplingProfile",
    "SparseHamiltonian",
    "build_hamiltonian",
    "interpolate",
    "apply",
    "expectation",
    "coordinate_dump",
]


@dataclass(frozen=True)
class CouplingProfile:
    """Instantaneous lattice parameters, all in units of the reference J."""

    j_odd: float
    j_even: float
    u: float = 0.0
    tilt_slope: float = 0.0

    def __post_init__(self):
        if self.j_odd < 0 or self.j_even < 0:
            raise ValueError(
                f"couplings must be non-negative, got "
                f"j_odd={self.j_odd}, j_even={self.j_even}"
            )
        if self.u < 0:
            raise ValueError(f"interaction must be non-negative, got u={self.u}")


@dataclass
class SparseHamiltonian:
    """CSR matrix over a :class:`FockBasis` together with its profile."""

    basis: FockBasis
    profile: CouplingProfile
    matrix: csr_matrix

    def matvec(self, v: np.ndarray) -> np.ndarray:
        return self.matrix.dot(v)

    def norm_bound(self) -> float:
        """Infinity-norm upper bound on the spectral radius."""
        return float(np.abs(self.matrix).sum(axis=1).max())


def _link_coupling(link: int, profile: CouplingProfile) -> float:
    return profile.j_odd if link % 2 == 1 else profile.j_even


def build_hamiltonian(
    basis: FockBasis, profile: CouplingProfile
) -> SparseHamiltonian:
    """Assemble H for the given profile.

    Deterministic assembly: configurations are visited in basis order and
    hops in a fixed site order, entries are accumulated in COO form and
    converted to canonical CSR (sorted column indices, duplicates summed).
    The result is exactly Hermitian because every hop and its reverse get
    the same bosonic amplitude sqrt(n) sqrt(m+1).
    """
    n = basis.n_sites
    dim = basis.dim
    occ = basis.occupations.astype(np.int64)

    rows: list[int] = []
    cols: list[int] = []
    vals: list[float] = []

    for c in range(dim):
        modes = basis.modes_of(c)
        if len(modes) == 2 and modes[0] == modes[1]:
            distinct = [(modes[0], 2)]
        else:
            distinct = [(m, 1) for m in modes]
        for m, n_m in distinct:
            site = m // 2 + 1
            spin = m % 2
            for other in (site - 1, site + 1):
                if not 1 <= other <= n:
                    continue
                link = min(site, other)
                j = _link_coupling(link, profile)
                m_new = 2 * (other - 1) + spin
                n_target = modes.count(m_new)
                amp = -j * math.sqrt(n_m * (n_target + 1))
                moved = list(modes)
                moved.remove(m)
                moved.append(m_new)
                r = basis.index_of_modes(moved)
                rows.append(r)
                cols.append(c)
                vals.append(amp)

    same = (occ * (occ - 1)).sum(axis=1)
    cross = (occ[:, 0::2] * occ[:, 1::2]).sum(axis=1)
    site_totals = occ[:, 0::2] + occ[:, 1::2]
    tilt = site_totals @ np.arange(1, n + 1)
    diag = 0.5 * profile.u * (same + cross) + profile.tilt_slope * tilt

    rows.extend(range(dim))
    cols.extend(range(dim))
    vals.extend(diag.tolist())

    mat = coo_matrix(
        (np.asarray(vals, dtype=np.complex128), (rows, cols)), shape=(dim, dim)
    ).tocsr()
    mat.sort_indices()
    return SparseHamiltonian(basis=basis, profile=profile, matrix=mat)


def interpolate(
    h_start: SparseHamiltonian, h_end: SparseHamiltonian, fraction: float
) -> SparseHamiltonian:
    """Entrywise (1 - f) * h_start + f * h_end.

    Equals ``build_hamiltonian`` of the linearly interpolated profile
    because H depends linearly on the couplings.  The two operands must
    share a basis and differ only in coupling values.
    """
    if h_start.basis is not h_end.basis:
        raise ValueError("interpolation endpoints must share one basis")
    if not 0.0 <= fraction <= 1.0:
        raise ValueError(f"fraction must lie in [0, 1], got {fraction}")
    pa, pb = h_start.profile, h_end.profile
    if pa.u != pb.u or pa.tilt_slope != pb.tilt_slope:
        raise ValueError("interpolation endpoints may differ only in couplings")
    f = float(fraction)
    profile = CouplingProfile(
        j_odd=(1 - f) * pa.j_odd + f * pb.j_odd,
        j_even=(1 - f) * pa.j_even + f * pb.j_even,
        u=pa.u,
        tilt_slope=pa.tilt_slope,
    )
    a, b = h_start.matrix, h_end.matrix
    if a.indptr.shape == b.indptr.shape and np.array_equal(
        a.indptr, b.indptr
    ) and np.array_equal(a.indices, b.indices):
        mat = csr_matrix(
            ((1 - f) * a.data + f * b.data, a.indices.copy(), a.indptr.copy()),
            shape=a.shape,
        )
    else:
        mat = ((1 - f) * a + f * b).tocsr()
        mat.sort_indices()
    return SparseHamiltonian(basis=h_start.basis, profile=profile, matrix=mat)


def apply(h: SparseHamiltonian, v: np.ndarray) -> np.ndarray:
    """Exact sparse mat-vec H v on an amplitude array in basis order."""
    v = np.asarray(v, dtype=np.complex128)
    if v.shape != (h.basis.dim,):
        raise ValueError(f"vector shape {v.shape} does not match dim {h.basis.dim}")
    return h.matrix.dot(v)


def expectation(h: SparseHamiltonian, v: np.ndarray) -> float:
    """Real part of <v|H|v> (H is Hermitian, so this is the full value)."""
    v = np.asarray(v, dtype=np.complex128)
    return float(np.vdot(v, h.matrix.dot(v)).real)


def coordinate_dump(h: SparseHamiltonian) -> str:
    """Text COO dump ``row, col, re, im``, one stored entry per line.

    Entries appear sorted by (row, col); structural zeros are included.
    Intended for debugging and golden-file comparisons.
    """
    mat = h.matrix.tocoo()
    order = np.lexsort((mat.col, mat.row))
    lines = []
    for k in order:
        val = mat.data[k]
        lines.append(
            f"{int(mat.row[k])}, {int(mat.col[k])}, "
            f"{float(val.real)!r}, {float(val.imag)!r}"
        )
    return "\n".join(lines)
