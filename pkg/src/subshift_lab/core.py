"""Alphabets, shapes, patterns, windows and exact occurrence counting.

Coordinates are ``(i, j)`` with ``i`` growing to the right and ``j`` growing
upwards.  A :class:`Window` stores its symbols densely as a ``uint8`` array
indexed ``cells[j - origin_y, i - origin_x]``, so row 0 of the array is the
bottom row of the window.
"""
from __future__ import annotations

import io
import os
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import CellRangeError, DomainError, GridFormatError

_INT_LIMIT = 1 << 62


@dataclass(frozen=True)
class Alphabet:
    symbols: tuple[str, ...]

    def __post_init__(self):
        symbols = tuple(self.symbols)
        object.__setattr__(self, "symbols", symbols)
        if not symbols:
            raise DomainError("alphabet must contain at least one glyph")
        if any(len(s) != 1 for s in symbols):
            raise DomainError("alphabet glyphs must be single characters")
        if len(set(symbols)) != len(symbols):
            raise DomainError("alphabet glyphs must be distinct")
        if len(symbols) > 256:
            raise DomainError("alphabets are limited to 256 glyphs")

    @classmethod
    def from_string(cls, glyphs: str) -> "Alphabet":
        return cls(tuple(glyphs))

    @classmethod
    def digits(cls, size: int) -> "Alphabet":
        """The alphabet ``0, 1, ..., size-1`` (letters continue past 9)."""
        pool = "0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
        if not 1 <= size <= len(pool):
            raise DomainError(f"digit alphabet size must be in [1, {len(pool)}], got {size}")
        return cls(tuple(pool[:size]))

    @property
    def size(self) -> int:
        return len(self.symbols)

    def index(self, glyph: str) -> int:
        try:
            return self.symbols.index(glyph)
        except ValueError:
            raise DomainError(f"glyph {glyph!r} is not in the alphabet {''.join(self.symbols)!r}") from None

    def __str__(self):
        return "".join(self.symbols)


@dataclass(frozen=True)
class Shape:
    """A finite nonempty set of cells, translated so its minimum corner is (0, 0)."""

    cells: frozenset

    def __post_init__(self):
        cells = frozenset((int(i), int(j)) for i, j in self.cells)
        if not cells:
            raise DomainError("a shape must contain at least one cell")
        mi = min(i for i, _ in cells)
        mj = min(j for _, j in cells)
        if mi or mj:
            cells = frozenset((i - mi, j - mj) for i, j in cells)
        object.__setattr__(self, "cells", cells)

    @classmethod
    def rect(cls, n: int, k: int) -> "Shape":
        if n < 1 or k < 1:
            raise DomainError(f"rectangle dimensions must be positive, got {n}x{k}")
        return cls(frozenset((i, j) for j in range(k) for i in range(n)))

    @property
    def width(self) -> int:
        return 1 + max(i for i, _ in self.cells)

    @property
    def height(self) -> int:
        return 1 + max(j for _, j in self.cells)

    @property
    def is_rect(self) -> bool:
        return len(self.cells) == self.width * self.height

    def ordered(self) -> list[tuple[int, int]]:
        """Cells sorted row by row from the bottom, left to right."""
        return sorted(self.cells, key=lambda c: (c[1], c[0]))

    def __len__(self):
        return len(self.cells)


@dataclass(frozen=True)
class Pattern:
    """A symbol assignment on a shape.

    ``symbols`` lists alphabet indices in :meth:`Shape.ordered` order.
    """

    shape: Shape
    symbols: tuple[int, ...]

    def __post_init__(self):
        symbols = tuple(int(s) for s in self.symbols)
        if len(symbols) != len(self.shape):
            raise DomainError(
                f"pattern needs {len(self.shape)} symbols for its shape, got {len(symbols)}"
            )
        object.__setattr__(self, "symbols", symbols)

    @classmethod
    def from_array(cls, arr) -> "Pattern":
        """Rectangular pattern from a ``(height, width)`` array, row 0 at the bottom."""
        arr = np.asarray(arr, dtype=np.uint8)
        if arr.ndim == 1:
            arr = arr[None, :]
        k, n = arr.shape
        return cls(Shape.rect(n, k), tuple(arr.ravel().tolist()))

    @classmethod
    def from_rows(cls, rows: Sequence[str], alphabet: Alphabet) -> "Pattern":
        """Rectangular pattern from text rows listed top first."""
        return cls.from_array(_rows_to_array(list(rows), alphabet))

    def __getitem__(self, cell):
        i, j = cell
        try:
            return self.symbols[self._index()[(i, j)]]
        except KeyError:
            raise CellRangeError(f"cell {cell} is not in the pattern's shape") from None

    def _index(self):
        cache = self.__dict__.get("_idx")
        if cache is None:
            cache = {c: t for t, c in enumerate(self.shape.ordered())}
            object.__setattr__(self, "_idx", cache)
        return cache

    def array(self) -> np.ndarray:
        if not self.shape.is_rect:
            raise DomainError("only rectangular patterns convert to arrays")
        return np.array(self.symbols, dtype=np.uint8).reshape(self.shape.height, self.shape.width)

    def rows(self, alphabet: Alphabet) -> list[str]:
        """Text rows, top first (rectangular patterns only)."""
        return _array_to_rows(self.array(), alphabet)

    def key(self):
        return pattern_key(self)


@dataclass(frozen=True, eq=False)
class Window:
    """A finite rectangular sample of a configuration."""

    cells: np.ndarray
    alphabet: Alphabet
    origin: tuple[int, int] = (0, 0)

    def __post_init__(self):
        arr = self.cells
        if not (isinstance(arr, np.ndarray) and arr.dtype == np.uint8 and not arr.flags.writeable):
            arr = np.array(arr, dtype=np.uint8, copy=True)
        if arr.ndim == 1:
            arr = arr[None, :]
        if arr.ndim != 2 or arr.size == 0:
            raise DomainError("a window needs a nonempty 2D cell grid")
        if arr.max() >= self.alphabet.size:
            raise DomainError("window contains symbol indices outside the alphabet")
        arr.setflags(write=False)
        object.__setattr__(self, "cells", arr)
        object.__setattr__(self, "origin", (int(self.origin[0]), int(self.origin[1])))

    @property
    def width(self) -> int:
        return self.cells.shape[1]

    @property
    def height(self) -> int:
        return self.cells.shape[0]

    def contains(self, cell) -> bool:
        i, j = cell
        ox, oy = self.origin
        return ox <= i < ox + self.width and oy <= j < oy + self.height

    def __getitem__(self, cell) -> int:
        if not self.contains(cell):
            raise CellRangeError(f"cell {tuple(cell)} lies outside window {self._extent()}")
        i, j = cell
        return int(self.cells[j - self.origin[1], i - self.origin[0]])

    def _extent(self) -> str:
        ox, oy = self.origin
        return f"[{ox}, {ox + self.width}) x [{oy}, {oy + self.height})"

    def translate(self, di: int, dj: int) -> "Window":
        """The window ``w'(i, j) = w(i + di, j + dj)``."""
        return Window(self.cells, self.alphabet, (self.origin[0] - di, self.origin[1] - dj))

    def sigma(self) -> "Window":
        """Left shift: ``(sigma w)(i, j) = w(i + 1, j)``."""
        return self.translate(1, 0)

    def tau(self) -> "Window":
        """Down shift: ``(tau w)(i, j) = w(i, j + 1)``."""
        return self.translate(0, 1)

    def row(self, j: int) -> np.ndarray:
        return self.cells[j - self.origin[1]]

    def __eq__(self, other):
        if not isinstance(other, Window):
            return NotImplemented
        return (
            self.origin == other.origin
            and self.alphabet == other.alphabet
            and np.array_equal(self.cells, other.cells)
        )

    __hash__ = None

    @classmethod
    def from_sequence(cls, seq: Iterable[int], alphabet: Alphabet, origin=(0, 0)) -> "Window":
        return cls(np.asarray(list(seq), dtype=np.uint8)[None, :], alphabet, origin)


def extract_pattern(w: Window, anchor, shape: Shape) -> Pattern:
    """Read ``w`` on ``anchor + shape``."""
    ax, ay = anchor
    if shape.is_rect:
        i0, j0 = ax - w.origin[0], ay - w.origin[1]
        if i0 >= 0 and j0 >= 0 and i0 + shape.width <= w.width and j0 + shape.height <= w.height:
            block = w.cells[j0:j0 + shape.height, i0:i0 + shape.width]
            return Pattern(shape, tuple(block.ravel().tolist()))
    symbols = []
    for i, j in shape.ordered():
        cell = (ax + i, ay + j)
        if not w.contains(cell):
            raise CellRangeError(
                f"anchor {tuple(anchor)} places shape cell {cell} outside window {w._extent()}"
            )
        symbols.append(w[cell])
    return Pattern(shape, tuple(symbols))


def occurrences(w: Pattern, u: Window) -> int:
    """Number of anchors where the rectangular pattern ``w`` appears in ``u``.

    A pattern larger than the window occurs 0 times.
    """
    if not w.shape.is_rect:
        raise DomainError("occurrence counting is defined for rectangular patterns only")
    return int(kernels.occurrences(u.cells, w.array()))


def pattern_key(p: Pattern):
    """Collision-free canonical key: extents, cell layout (non-rectangles) and symbols."""
    layout = None if p.shape.is_rect else tuple(p.shape.ordered())
    return (p.shape.width, p.shape.height, layout, bytes(p.symbols) if max(p.symbols) < 256 else p.symbols)


# -- exact labelling of rectangular blocks ---------------------------------

def combine_codes(a: np.ndarray, card_a: int, b: np.ndarray, card_b: int):
    """Injectively encode the pairs ``(a, b)``.

    Codes in ``a`` lie in ``[0, card_a)`` and in ``b`` in ``[0, card_b)``.  Returns
    ``(codes, card)``; radix encoding is used while it fits in 62 bits, dense
    relabelling beyond.
    """
    if card_a * card_b < _INT_LIMIT:
        return a * card_b + b, card_a * card_b
    return kernels.dense_labels(a, b)


def strip_codes(grid: np.ndarray, card: int, n: int, axis: int = 1):
    """Codes of all length-``n`` strips along ``axis`` (1 = horizontal, 0 = vertical)."""
    base = np.asarray(grid, dtype=np.int64)
    codes, c = base, card
    for t in range(1, n):
        if axis == 1:
            codes, c = combine_codes(codes[:, :-1], c, base[:, t:], card)
        else:
            codes, c = combine_codes(codes[:-1, :], c, base[t:, :], card)
    return codes, c


def rect_codes(grid: np.ndarray, card: int, n: int, k: int):
    """Codes of every ``n x k`` block, shape ``(H - k + 1, W - n + 1)``.

    Two anchors receive equal codes iff their blocks are equal.
    """
    rows, c_row = strip_codes(grid, card, n, axis=1)
    codes, c = rows, c_row
    for t in range(1, k):
        codes, c = combine_codes(codes[:-1, :], c, rows[t:, :], c_row)
    return codes, c


# -- grid text format -------------------------------------------------------

def _rows_to_array(rows: list[str], alphabet: Alphabet) -> np.ndarray:
    if not rows:
        raise GridFormatError("grid has no data rows")
    width = len(rows[0])
    lookup = {g: t for t, g in enumerate(alphabet.symbols)}
    arr = np.empty((len(rows), width), dtype=np.uint8)
    for r, line in enumerate(rows):
        if len(line) != width:
            raise GridFormatError(f"ragged grid: row {r + 1} has {len(line)} glyphs, expected {width}")
        try:
            arr[len(rows) - 1 - r] = [lookup[g] for g in line]
        except KeyError as exc:
            raise GridFormatError(f"unknown glyph {exc.args[0]!r} in row {r + 1}") from None
    return arr


def _array_to_rows(arr: np.ndarray, alphabet: Alphabet) -> list[str]:
    table = np.array([ord(g) for g in alphabet.symbols], dtype=np.uint32)
    out = []
    for r in range(arr.shape[0] - 1, -1, -1):
        out.append(table[arr[r]].astype("<u4").tobytes().decode("utf-32-le"))
    return out


def format_grid(w: Window) -> str:
    head = [
        f"#alphabet: {w.alphabet}",
        f"#origin: {w.origin[0]} {w.origin[1]}",
        f"#size: {w.width} {w.height}",
    ]
    return "\n".join(head + _array_to_rows(w.cells, w.alphabet)) + "\n"


def parse_grid(text: str) -> Window:
    header = {}
    rows = []
    for lineno, raw in enumerate(io.StringIO(text), 1):
        line = raw.rstrip("\r\n")
        if line.startswith("#") and not rows:
            name, sep, value = line[1:].partition(":")
            if not sep:
                raise GridFormatError(f"line {lineno}: malformed header {line!r}")
            header[name.strip()] = value.strip()
        elif line.strip() == "":
            continue
        else:
            rows.append(line)
    for name in ("alphabet", "origin", "size"):
        if name not in header:
            raise GridFormatError(f"grid header is missing #{name}")
    alphabet = Alphabet.from_string(header["alphabet"])
    try:
        ox, oy = (int(v) for v in header["origin"].split())
        width, height = (int(v) for v in header["size"].split())
    except ValueError:
        raise GridFormatError("#origin and #size need two integers each") from None
    if len(rows) != height:
        raise GridFormatError(f"#size declares {height} rows but {len(rows)} were found")
    arr = _rows_to_array(rows, alphabet)
    if arr.shape[1] != width:
        raise GridFormatError(f"#size declares width {width} but rows have {arr.shape[1]} glyphs")
    return Window(arr, alphabet, (ox, oy))


def read_grid(path: str | os.PathLike) -> Window:
    with open(path, encoding="utf-8") as fh:
        return parse_grid(fh.read())


def write_grid(w: Window, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_grid(w))
