"""Period vectors of finite windows, their lattice, and fundamental domains.

A vector ``v`` is a period of a window when ``w(u + v) == w(u)`` for every
``u`` with both cells inside the window.  Only one of ``v, -v`` is stored:
the one with ``i > 0``, or ``i == 0`` and ``j > 0``.  Periods found on a
finite window are evidence about the configuration it was sampled from,
never a certificate.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .core import Pattern, Window
from .errors import DomainError, SizeError
from .lattice import Lattice2D, hermite_basis, span_rank

DEFAULT_MIN_OVERLAP = 0.5


@dataclass(frozen=True)
class PeriodLattice:
    vectors: tuple
    basis: tuple
    rank: int
    overlaps: dict = field(default_factory=dict)
    max_shift: int = 0
    min_overlap: float = DEFAULT_MIN_OVERLAP

    @property
    def overlap_fraction(self) -> float | None:
        """Smallest overlap fraction among the detected vectors."""
        return min(self.overlaps.values()) if self.overlaps else None

    @property
    def doubly_periodic(self) -> bool:
        return self.rank == 2

    def lattice(self) -> Lattice2D:
        return Lattice2D(self.basis)

    def to_json(self) -> dict:
        return {
            "vectors": [list(v) for v in self.vectors],
            "basis": [list(v) for v in self.basis],
            "rank": self.rank,
            "overlap_fractions": {f"{i},{j}": f for (i, j), f in self.overlaps.items()},
            "min_overlap_fraction": self.overlap_fraction,
            "max_shift": self.max_shift,
            "min_overlap": self.min_overlap,
        }


def candidate_shifts(max_shift: int):
    """Canonical nonzero vectors with ``|i|, |j| <= max_shift``."""
    for i in range(0, max_shift + 1):
        for j in range(-max_shift, max_shift + 1):
            if i > 0 or j > 0:
                yield (i, j)


def period_vectors(u: Window, max_shift: int, min_overlap: float = DEFAULT_MIN_OVERLAP) -> PeriodLattice:
    """All canonical periods of ``u`` within ``max_shift`` whose overlap is large enough."""
    if max_shift < 1 or max_shift >= min(u.width, u.height):
        raise SizeError(
            f"max_shift must lie in [1, {min(u.width, u.height) - 1}] for a "
            f"{u.width}x{u.height} window, got {max_shift}"
        )
    if not 0 < min_overlap <= 1:
        raise DomainError(f"min_overlap must lie in (0, 1], got {min_overlap}")
    area = u.width * u.height
    found = []
    overlaps = {}
    for i, j in candidate_shifts(max_shift):
        frac = (u.width - abs(i)) * (u.height - abs(j)) / area
        if frac < min_overlap:
            continue
        if kernels.shift_agrees(u.cells, i, j):
            found.append((i, j))
            overlaps[(i, j)] = frac
    lat = hermite_basis(found)
    return PeriodLattice(tuple(found), lat.basis, span_rank(found), overlaps, max_shift, min_overlap)


def lattice_rank(vectors) -> tuple[int, bool]:
    """Rank of the span of a :class:`PeriodLattice` (or a plain vector list) and the doubly-periodic flag."""
    if isinstance(vectors, PeriodLattice):
        vectors = vectors.vectors
    r = span_rank(vectors)
    return r, r == 2


def _coset_ids(width, height, lat: Lattice2D):
    (a, b), (_, d) = lat.basis
    jj, ii = np.indices((height, width))
    t = ii // a
    ri = ii - t * a
    rj = (jj - t * b) % d
    return ri * d + rj


def fundamental_domain(u: Window, lat: PeriodLattice | Lattice2D) -> Pattern:
    """Pattern on the ``a x d`` rectangle of a Hermite basis ``(a, b), (0, d)``.

    The rectangle holds one cell of every coset of the lattice, placed at the
    window origin.  Raises :class:`DomainError` unless the window is constant
    on every coset it meets and meets every coset.
    """
    lattice = lat.lattice() if isinstance(lat, PeriodLattice) else lat
    if lattice.rank < 2:
        raise DomainError(f"a fundamental domain needs a rank-2 lattice, got rank {lattice.rank}")
    (a, _), (_, d) = lattice.basis
    ids = _coset_ids(u.width, u.height, lattice).ravel()
    vals = u.cells.ravel().astype(np.int64)
    lo = np.full(a * d, np.iinfo(np.int64).max)
    hi = np.full(a * d, -1)
    np.minimum.at(lo, ids, vals)
    np.maximum.at(hi, ids, vals)
    if (hi < 0).any():
        raise DomainError("the window does not meet every coset of the lattice")
    if (lo != hi).any():
        raise DomainError("the window is not periodic under the given lattice")
    # coset id ri * d + rj lives at domain cell (ri, rj)
    block = hi.reshape(a, d).T
    return Pattern.from_array(block.astype(np.uint8))


def reconstruct(domain: Pattern, lat: PeriodLattice | Lattice2D, width: int, height: int) -> np.ndarray:
    """Tile ``domain`` over a ``width x height`` grid; inverse of :func:`fundamental_domain`."""
    lattice = lat.lattice() if isinstance(lat, PeriodLattice) else lat
    (a, _), (_, d) = lattice.basis
    table = domain.array().T.ravel()
    return table[_coset_ids(width, height, lattice)].astype(np.uint8)
