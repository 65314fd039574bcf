"""Rectangular complexity tables and the two periodicity criteria built on them.

Empirical counts use one anchor region for every ``(n, k)``: the anchors
whose ``n_max x k_max`` block fits in the window.  Each ``n x k`` block seen
there extends to an ``(n+1) x k`` and an ``n x (k+1)`` block at the same
anchor, so the table is monotone in both arguments by construction.
"""
from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .core import Window, rect_codes, strip_codes, combine_codes
from .errors import DomainError, SizeError
from .generators import (FullShift, Periodic, Sturmian, SturmianVertical,
                         periodic_window, _fundamental_table)


class UndersizedWindowWarning(UserWarning):
    """The anchor region is nonempty but smaller than the recommended size."""


@dataclass
class ComplexityTable:
    """``values[n - 1, k - 1] = P(n, k)``."""

    values: np.ndarray
    provenance: dict
    alphabet_size: int
    undersized: bool = False

    @property
    def n_max(self) -> int:
        return self.values.shape[0]

    @property
    def k_max(self) -> int:
        return self.values.shape[1]

    def __call__(self, n: int, k: int = 1) -> int:
        if not (1 <= n <= self.n_max and 1 <= k <= self.k_max):
            raise SizeError(f"P({n},{k}) is outside the table range {self.n_max}x{self.k_max}")
        return int(self.values[n - 1, k - 1])

    def diagonal(self) -> list[int]:
        m = min(self.n_max, self.k_max)
        return [int(self.values[t, t]) for t in range(m)]

    def is_monotone(self) -> bool:
        v = self.values
        return bool((np.diff(v, axis=0) >= 0).all() and (np.diff(v, axis=1) >= 0).all())

    def provenance_label(self) -> str:
        return self.provenance.get("kind", "empirical")

    def csv_rows(self):
        label = self.provenance_label()
        for n in range(1, self.n_max + 1):
            for k in range(1, self.k_max + 1):
                yield (n, k, self(n, k), label)

    def to_json(self) -> dict:
        return {
            "n_max": self.n_max,
            "k_max": self.k_max,
            "values": self.values.tolist(),
            "provenance": self.provenance,
            "alphabet_size": self.alphabet_size,
            "undersized": self.undersized,
            "lower_bound": self.provenance_label() == "empirical",
        }


def _check_dims(width, height, n_max, k_max):
    if n_max < 1 or k_max < 1:
        raise SizeError(f"n_max and k_max must be positive, got {n_max}, {k_max}")
    if width < n_max or height < k_max:
        raise SizeError(
            f"window {width}x{height} cannot hold a {n_max}x{k_max} block; "
            f"need at least {2 * n_max}x{2 * k_max}"
        )
    short_x = n_max > 1 and width < 2 * n_max
    short_y = k_max > 1 and height < 2 * k_max
    if short_x or short_y:
        warnings.warn(
            f"window {width}x{height} is below the recommended {2 * n_max}x{2 * k_max} "
            f"for n_max={n_max}, k_max={k_max}",
            UndersizedWindowWarning,
            stacklevel=3,
        )
        return True
    return False


def _census_column(grid, card, n, k_max, rows, cols):
    """Distinct ``n x k`` blocks over the region for ``k = 1..k_max``."""
    strips, c_strip = strip_codes(grid, card, n, axis=1)
    out = []
    codes, c = strips, c_strip
    for k in range(1, k_max + 1):
        if k > 1:
            codes, c = combine_codes(codes[:-1, :], c, strips[k - 1:, :], c_strip)
        out.append(kernels.count_distinct(codes[:rows, :cols]))
    return out


def complexity_table(u: Window, n_max: int, k_max: int, threads: int = 1) -> ComplexityTable:
    """Empirical ``P(n, k)`` for ``1 <= n <= n_max``, ``1 <= k <= k_max``.

    Counts distinct blocks whose lower-left corner lies in
    ``[x0, x0 + width - n_max] x [y0, y0 + height - k_max]``.  The result is a
    lower bound on the complexity of any subshift containing the sample.
    """
    undersized = _check_dims(u.width, u.height, n_max, k_max)
    rows, cols = u.height - k_max + 1, u.width - n_max + 1
    grid = u.cells
    card = u.alphabet.size
    work = lambda n: _census_column(grid, card, n, k_max, rows, cols)  # noqa: E731
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            columns = list(pool.map(work, range(1, n_max + 1)))
    else:
        columns = [work(n) for n in range(1, n_max + 1)]
    ox, oy = u.origin
    provenance = {
        "kind": "empirical",
        "window": [u.width, u.height],
        "anchor_region": [[ox, ox + cols - 1], [oy, oy + rows - 1]],
    }
    return ComplexityTable(np.array(columns, dtype=np.int64), provenance, card, undersized)


def complexity_1d(seq, n_max: int) -> list[int]:
    """``P(1..n_max)`` of a one-dimensional sample under the common-anchor rule."""
    if isinstance(seq, Window):
        if seq.height != 1:
            raise DomainError("complexity_1d needs a window of height 1")
        grid = seq.cells
        card = seq.alphabet.size
    else:
        arr = np.asarray(seq)
        if arr.ndim != 1:
            raise DomainError("complexity_1d needs a one-dimensional sequence")
        _, inv = np.unique(arr, return_inverse=True)
        grid = inv.astype(np.uint8)[None, :]
        card = max(1, int(grid.max()) + 1)
    length = grid.shape[1]
    _check_dims(length, 1, n_max, 1)
    cols = length - n_max + 1
    out = []
    codes, c = grid.astype(np.int64), card
    base = grid.astype(np.int64)
    for n in range(1, n_max + 1):
        if n > 1:
            codes, c = combine_codes(codes[:, :-1], c, base[:, n - 1:], card)
        out.append(kernels.count_distinct(codes[:, :cols]))
    return out


# -- exact tables -----------------------------------------------------------

def exact_complexity_table(spec, n_max: int, k_max: int) -> ComplexityTable:
    """Exact ``P(n, k)`` for sources whose language is known in closed form.

    Full shift: ``|A|**(n k)``.  Periodic: census over one fundamental domain
    of anchors, which sees every block of the configuration.  Sturmian with
    rational slope ``a/b``: ``min(n + 1, b)``, copied along ``k`` for the
    vertical extension.
    """
    if n_max < 1 or k_max < 1:
        raise SizeError(f"n_max and k_max must be positive, got {n_max}, {k_max}")
    n = np.arange(1, n_max + 1)[:, None]
    k = np.arange(1, k_max + 1)[None, :]
    if isinstance(spec, FullShift):
        a = spec.alphabet.size
        values = np.array([[a ** (x * y) for y in range(1, k_max + 1)] for x in range(1, n_max + 1)], dtype=object)
        kind, size = "full_shift", a
    elif isinstance(spec, Periodic):
        lat, _ = _fundamental_table(spec.fundamental, spec.basis)
        (a, _), (_, d) = lat.basis
        w = periodic_window(spec, a + n_max - 1, d + k_max - 1)
        values = np.empty((n_max, k_max), dtype=np.int64)
        for x in range(1, n_max + 1):
            for y in range(1, k_max + 1):
                codes, _ = rect_codes(w.cells, w.alphabet.size, x, y)
                values[x - 1, y - 1] = kernels.count_distinct(codes[:d, :a])
        kind, size = "periodic", spec.alphabet.size
    elif isinstance(spec, Sturmian):
        if not isinstance(spec, SturmianVertical) and k_max != 1:
            raise DomainError("a one-dimensional Sturmian source has only k = 1")
        period = spec.alpha.denominator
        values = np.minimum(n + 1, period) + 0 * k
        kind, size = "sturmian_vertical" if isinstance(spec, SturmianVertical) else "sturmian", 2
    else:
        raise DomainError(f"no exact complexity formula for {type(spec).__name__} sources")
    try:
        values = np.asarray(values, dtype=np.int64)
    except OverflowError:
        values = np.asarray(values, dtype=object)
    return ComplexityTable(values, {"kind": "exact", "source": kind}, size)


# -- classification ---------------------------------------------------------

@dataclass(frozen=True)
class MorseHedlundResult:
    kind: str  # "periodic_forced" | "no_conclusion"
    witness: int | None = None

    def to_json(self):
        return {"kind": self.kind, "witness": self.witness}


def morse_hedlund_classify(P) -> MorseHedlundResult:
    """Least ``n`` with ``P(n) <= n``, if any."""
    for n, value in enumerate(P, start=1):
        if value <= n:
            return MorseHedlundResult("periodic_forced", n)
    return MorseHedlundResult("no_conclusion")


@dataclass(frozen=True)
class GapResult:
    kind: str  # "bounded" | "below_gap" | "above_gap"
    witness: tuple | None
    plateau_value: int | None
    min_ratio: float
    min_ratio_at: int
    notes: tuple = field(default_factory=tuple)

    def to_json(self):
        return {
            "kind": self.kind,
            "witness": list(self.witness) if self.witness else None,
            "plateau_value": self.plateau_value,
            "min_diag_ratio": self.min_ratio,
            "min_diag_ratio_at": self.min_ratio_at,
            "notes": list(self.notes),
        }


def gap_order(n_max: int, k_max: int):
    """Witness search order: the squares ``(n, n)`` first, then by ``n + k`` and ``n``."""
    m = min(n_max, k_max)
    square = [(t, t) for t in range(1, m + 1)]
    rest = sorted(
        ((x, y) for x in range(1, n_max + 1) for y in range(1, k_max + 1) if x != y),
        key=lambda c: (c[0] + c[1], c[0]),
    )
    return square + rest


def _anchor_count(t: ComplexityTable) -> float:
    region = t.provenance.get("anchor_region")
    if t.provenance_label() != "empirical" or not region:
        return math.inf
    (x0, x1), (y0, y1) = region
    return (x1 - x0 + 1) * (y1 - y0 + 1)


def gap_classify(t: ComplexityTable, plateau_steps: int | None = None) -> GapResult:
    """Classify a table as bounded, below the ``nk/2`` threshold, or above it.

    ``plateau_steps`` defaults to ``ceil(m / 4)`` with ``m = min(n_max, k_max)``.
    """
    m = min(t.n_max, t.k_max)
    if m < 3:
        raise SizeError(f"gap classification needs a square range of at least 3, got {m}")
    diag = t.diagonal()
    ratios = [diag[x - 1] / x ** 2 for x in range(1, m + 1)]
    at = int(np.argmin(ratios)) + 1
    steps = math.ceil(m / 4) if plateau_steps is None else plateau_steps
    if steps < 1:
        raise DomainError("plateau_steps must be at least 1")
    notes = []
    if t.provenance_label() == "empirical":
        notes.append("empirical counts are lower bounds; conclusions concern the sample only")
    tail = diag[max(0, m - 1 - steps):]
    if diag[m - 1] == diag[m - 2] and len(set(tail)) == 1:
        if diag[m - 1] < _anchor_count(t):
            return GapResult("bounded", None, diag[m - 1], ratios[at - 1], at, tuple(notes))
        # every anchor carries a distinct block: the window is exhausted, not the language
        notes.append("diagonal plateau equals the anchor count (saturated sample); not treated as bounded")
    for n, k in gap_order(t.n_max, t.k_max):
        if 2 * t(n, k) <= n * k:
            notes.append("periodicity expected under transitivity")
            return GapResult("below_gap", (n, k), None, ratios[at - 1], at, tuple(notes))
    return GapResult("above_gap", None, None, ratios[at - 1], at, tuple(notes))
