"""Occupation-number basis for one or two spinful bosons on an open chain.

Modes are (site, spin) pairs flattened site-major, spin-minor: the mode
index of site ``s`` (1-based, 1..N) with spin ``sigma`` is
``2*(s - 1) + sigma``.  Basis states are enumerated in ascending
lexicographic order of the flattened occupation tuple, so the ordering is
reproducible by sorting the tuples with no extra convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from itertools import combinations_with_replacement

import numpy as np

__all__ = ["Spin", "FockConfig", "FockBasis", "enumerate_basis"]


class Spin(IntEnum):
    UP = 0
    DOWN = 1


@dataclass(frozen=True)
class FockConfig:
    """A single occupation-number configuration.

    ``occupations[2*(site-1) + spin]`` is the boson count in that mode.
    """

    occupations: tuple[int, ...]
    n_sites: int

    def occupation(self, site: int, spin: Spin | int) -> int:
        if not 1 <= site <= self.n_sites:
            raise ValueError(f"site {site} outside 1..{self.n_sites}")
        return self.occupations[2 * (site - 1) + int(spin)]

    @property
    def n_particles(self) -> int:
        return sum(self.occupations)

    def site_totals(self) -> tuple[int, ...]:
        occ = self.occupations
        return tuple(occ[2 * i] + occ[2 * i + 1] for i in range(self.n_sites))


def _mode_multiset(occupations) -> tuple[int, ...]:
    """Occupied mode indices with multiplicity, ascending. Used as dict key."""
    modes = []
    for m, n in enumerate(occupations):
        modes.extend([m] * int(n))
    return tuple(modes)


class FockBasis:
    """Ordered basis of all ``n_particles``-boson configurations on ``n_sites``.

    Parameters
    ----------
    n_sites : int
        Chain length, at least 2.
    n_particles : int
        Total boson number, 1 or 2.

    Notes
    -----
    The dimension is ``2 N`` for one particle and ``N (2 N + 1)`` for two
    (the multiset coefficient over ``2 N`` modes).  Configurations are
    stored as rows of a ``(dim, 2 N)`` uint8 array in ascending
    lexicographic row order.
    """

    def __init__(self, n_sites: int, n_particles: int):
        if n_sites < 2:
            raise ValueError(f"need at least 2 sites, got {n_sites}")
        if n_particles not in (1, 2):
            raise ValueError(f"n_particles must be 1 or 2, got {n_particles}")
        self.n_sites = int(n_sites)
        self.n_particles = int(n_particles)
        n_modes = 2 * self.n_sites

        rows = np.zeros(
            (self._dimension(n_sites, n_particles), n_modes), dtype=np.uint8
        )
        multisets = list(combinations_with_replacement(range(n_modes), n_particles))
        for r, modes in enumerate(multisets):
            for m in modes:
                rows[r, m] += 1
        order = np.lexsort(rows.T[::-1])  # ascending lexicographic rows
        self.occupations = rows[order]
        self._multisets = [multisets[old] for old in order]
        self._index = {key: new for new, key in enumerate(self._multisets)}

    @staticmethod
    def _dimension(n_sites: int, n_particles: int) -> int:
        n_modes = 2 * n_sites
        if n_particles == 1:
            return n_modes
        return n_modes * (n_modes + 1) // 2

    @property
    def dim(self) -> int:
        return self.occupations.shape[0]

    def __len__(self) -> int:
        return self.dim

    def index_of(self, config: FockConfig) -> int:
        """Ordinal of ``config`` in the basis ordering.

        Raises
        ------
        KeyError
            If the configuration has the wrong particle number or site count.
        """
        if config.n_sites != self.n_sites:
            raise KeyError(
                f"config has {config.n_sites} sites, basis has {self.n_sites}"
            )
        key = _mode_multiset(config.occupations)
        if len(key) != self.n_particles:
            raise KeyError(
                f"config holds {len(key)} particles, basis holds {self.n_particles}"
            )
        return self._index[key]

    def index_of_modes(self, modes) -> int:
        """Ordinal of the configuration occupying the given mode multiset."""
        key = tuple(sorted(int(m) for m in modes))
        return self._index[key]

    def config_of(self, ordinal: int) -> FockConfig:
        row = self.occupations[ordinal]
        return FockConfig(tuple(int(x) for x in row), self.n_sites)

    def modes_of(self, ordinal: int) -> tuple[int, ...]:
        """Occupied mode indices of configuration ``ordinal``, with multiplicity."""
        return self._multisets[ordinal]

    def iter_configs(self):
        for i in range(self.dim):
            yield self.config_of(i)

    def mode_index(self, site: int, spin: Spin | int) -> int:
        if not 1 <= site <= self.n_sites:
            raise ValueError(f"site {site} outside 1..{self.n_sites}")
        s = int(spin)
        if s not in (0, 1):
            raise ValueError(f"spin must be 0 (up) or 1 (down), got {spin}")
        return 2 * (site - 1) + s

    def __repr__(self) -> str:
        return (
            f"FockBasis(n_sites={self.n_sites}, "
            f"n_particles={self.n_particles}, dim={self.dim})"
        )


def enumerate_basis(n_sites: int, n_particles: int) -> FockBasis:
    """Build the ordered occupation basis. See :class:`FockBasis`."""
    return FockBasis(n_sites, n_particles)
