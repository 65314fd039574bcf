"""Integer lattices in Z^2: Hermite normal form and coset reduction."""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd


def canonical(v):
    """Representative of ``{v, -v}`` with ``i > 0`` or ``i == 0, j > 0``."""
    i, j = v
    if i < 0 or (i == 0 and j < 0):
        return (-i, -j)
    return (i, j)


@dataclass(frozen=True)
class Lattice2D:
    """Lattice in Hermite normal form.

    Rank 2: basis ``(a, b), (0, d)`` with ``a, d > 0`` and ``0 <= b < d``.
    Rank 1: a single canonical vector. Rank 0: empty basis.
    """

    basis: tuple

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def index(self) -> int:
        """Number of cosets (rank 2 only)."""
        (a, _), (_, d) = self.basis
        return a * d

    def reduce(self, cell):
        """Coset representative of ``cell`` inside ``[0, a) x [0, d)`` (rank 2)."""
        (a, b), (_, d) = self.basis
        i, j = cell
        t = i // a
        return (i - t * a, (j - t * b) % d)

    def contains(self, v) -> bool:
        i, j = v
        if self.rank == 0:
            return i == 0 and j == 0
        if self.rank == 1:
            a, b = self.basis[0]
            if a == 0:
                return i == 0 and j % b == 0
            return i % a == 0 and (i // a) * b == j
        return self.reduce(v) == (0, 0)


def hermite_basis(vectors) -> Lattice2D:
    """Hermite normal form of the lattice spanned by integer ``vectors``."""
    rows = [[int(x), int(y)] for x, y in vectors if (x, y) != (0, 0)]
    pivot = None
    while True:
        live = [r for r in rows if r[0] != 0]
        if len(live) <= 1:
            break
        live.sort(key=lambda r: abs(r[0]))
        small = live[0]
        for r in live[1:]:
            f = r[0] // small[0]
            r[0] -= f * small[0]
            r[1] -= f * small[1]
    live = [r for r in rows if r[0] != 0]
    if live:
        pivot = live[0]
        if pivot[0] < 0:
            pivot = [-pivot[0], -pivot[1]]
    d = 0
    for r in rows:
        if r[0] == 0:
            d = gcd(d, r[1])
    if pivot is None:
        return Lattice2D(((0, d),) if d else ())
    if d == 0:
        return Lattice2D((tuple(pivot),))
    return Lattice2D(((pivot[0], pivot[1] % d), (0, d)))


def span_rank(vectors) -> int:
    """Dimension of the rational span of ``vectors``."""
    vs = [v for v in vectors if tuple(v) != (0, 0)]
    if not vs:
        return 0
    x0, y0 = vs[0]
    for x, y in vs[1:]:
        if x0 * y - y0 * x != 0:
            return 2
    return 1
