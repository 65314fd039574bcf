"""Window generators: full shift, periodic, Sturmian and exact x p, x q codings.

All orbit arithmetic is exact.  A point of [0, 1) is held as an integer
numerator over an integer denominator, and ``p**i * q**j * x mod 1`` is
evaluated with Python integers.  Random "Lebesgue" points are dyadic
rationals with an explicit bit budget.
"""
from __future__ import annotations

import json
import random
from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Union

import numpy as np

from .core import Alphabet, Pattern, Window, read_grid
from .errors import DomainError, PrecisionError
from .lattice import hermite_basis

HALF_INTERVAL = "half_interval"
BASE_P_DIGIT = "base_p_digit"
BASE_Q_DIGIT = "base_q_digit"
PARTITIONS = (HALF_INTERVAL, BASE_P_DIGIT, BASE_Q_DIGIT)

GUARD_BITS = 64


# -- arithmetic helpers -----------------------------------------------------

def prime_signature(n: int) -> dict[int, int]:
    """Prime factorisation of ``n >= 2`` by trial division."""
    out = {}
    f = 2
    while f * f <= n:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_multiplicatively_independent(p: int, q: int) -> bool:
    """True iff no positive ``a, b`` satisfy ``p**a == q**b``.

    ``p`` and ``q`` are dependent exactly when their prime exponent vectors
    are parallel.
    """
    if p < 2 or q < 2:
        raise DomainError(f"p and q must be integers >= 2, got p={p}, q={q}")
    sp, sq = prime_signature(p), prime_signature(q)
    if sp.keys() != sq.keys():
        return True
    r = next(iter(sp))
    return any(sp[r] * sq[s] != sq[r] * sp[s] for s in sp)


def _require_independent(p, q):
    if not is_multiplicatively_independent(p, q):
        raise DomainError(f"p={p} and q={q} are multiplicatively dependent")


def required_bits(p: int, q: int, n: int, k: int) -> int:
    """Bit budget a dyadic point needs for an ``n x k`` orbit grid."""
    return n * (p - 1).bit_length() + k * (q - 1).bit_length() + GUARD_BITS


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise DomainError("floats are not accepted where exact rationals are required")
    return Fraction(value)


# -- source specifications -------------------------------------------------

@dataclass(frozen=True)
class RandomDyadic:
    seed: int
    bits: int

    def __post_init__(self):
        if self.bits < GUARD_BITS:
            raise DomainError(f"RandomDyadic needs bits >= {GUARD_BITS}, got {self.bits}")

    def numerator_denominator(self):
        return random.Random(self.seed).getrandbits(self.bits), 1 << self.bits


@dataclass(frozen=True)
class ExactRational:
    value: Fraction

    def __post_init__(self):
        v = as_fraction(self.value)
        if not 0 <= v < 1:
            raise DomainError(f"point must lie in [0, 1), got {v}")
        object.__setattr__(self, "value", v)

    def numerator_denominator(self):
        return self.value.numerator, self.value.denominator


PointSpec = Union[RandomDyadic, ExactRational]


@dataclass(frozen=True)
class NaturalExtension:
    """Negative-coordinate extent of a natural-extension grid and its preimage seed."""

    i_min: int
    j_min: int
    seed: int = 0

    def __post_init__(self):
        if self.i_min > 0 or self.j_min > 0:
            raise DomainError("natural extension offsets must be <= 0")


@dataclass(frozen=True)
class FullShift:
    alphabet: Alphabet
    seed: int = 0


@dataclass(frozen=True)
class Periodic:
    fundamental: Pattern
    basis: tuple
    alphabet: Alphabet

    def __post_init__(self):
        basis = tuple(tuple(int(c) for c in v) for v in self.basis)
        if len(basis) != 2:
            raise DomainError("a periodic source needs exactly two basis vectors")
        (a, b), (c, d) = basis
        if a * d - b * c == 0:
            raise DomainError(f"basis vectors {basis} are linearly dependent")
        object.__setattr__(self, "basis", basis)
        _fundamental_table(self.fundamental, basis)


@dataclass(frozen=True)
class Sturmian:
    alpha: Fraction
    rho: Fraction = Fraction(0)

    def __post_init__(self):
        alpha, rho = as_fraction(self.alpha), as_fraction(self.rho)
        _check_sturmian(alpha, rho)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "rho", rho)


@dataclass(frozen=True)
class SturmianVertical(Sturmian):
    pass


@dataclass(frozen=True)
class TimesPQ:
    p: int
    q: int
    point: PointSpec
    partition: str = HALF_INTERVAL
    extension: NaturalExtension | None = None

    def __post_init__(self):
        _require_independent(self.p, self.q)
        if self.partition not in PARTITIONS:
            raise DomainError(f"unknown partition {self.partition!r}; expected one of {PARTITIONS}")

    @property
    def alphabet(self) -> Alphabet:
        return partition_alphabet(self.partition, self.p, self.q)


@dataclass(frozen=True)
class FromFile:
    path: str


SourceSpec = Union[FullShift, Periodic, Sturmian, SturmianVertical, TimesPQ, FromFile]


# -- Sturmian words ---------------------------------------------------------

def _check_sturmian(alpha, rho):
    if not 0 < alpha < 1:
        raise DomainError(f"Sturmian slope must lie in (0, 1), got {alpha}")
    if not 0 <= rho < 1:
        raise DomainError(f"Sturmian intercept must lie in [0, 1), got {rho}")


def sturmian_word(alpha, rho, length: int) -> np.ndarray:
    """Mechanical word ``s(n) = floor((n+1) alpha + rho) - floor(n alpha + rho)``."""
    alpha, rho = as_fraction(alpha), as_fraction(rho)
    _check_sturmian(alpha, rho)
    if length < 1:
        raise DomainError(f"word length must be positive, got {length}")
    # common denominator keeps the floor in integer arithmetic
    den = alpha.denominator * rho.denominator // gcd(alpha.denominator, rho.denominator)
    a = alpha.numerator * (den // alpha.denominator)
    r = rho.numerator * (den // rho.denominator)
    floors = [(t * a + r) // den for t in range(length + 1)]
    return np.diff(np.array(floors, dtype=object)).astype(np.uint8)


def vertical_extension(seq, height: int, alphabet: Alphabet | None = None) -> Window:
    """Copy ``seq`` onto every row of a ``len(seq) x height`` window."""
    if height < 1:
        raise DomainError(f"height must be positive, got {height}")
    row = np.asarray(seq, dtype=np.uint8)
    if row.ndim != 1 or row.size == 0:
        raise DomainError("sequence must be a nonempty 1D array")
    if alphabet is None:
        alphabet = Alphabet.digits(max(2, int(row.max()) + 1))
    return Window(np.tile(row, (height, 1)), alphabet)


# -- orbit grids ------------------------------------------------------------

class OrbitGrid(Mapping):
    """Exact values ``y(i, j)`` on ``[i_min, i_min + width) x [j_min, j_min + height)``.

    The grid is stored through its corner value ``num / den`` at
    ``(i_min, j_min)``; every other value is ``p**di * q**dj * corner mod 1``
    evaluated on demand.
    """

    def __init__(self, p, q, num, den, i_min, j_min, width, height):
        self.p, self.q = p, q
        self.num, self.den = num % den, den
        self.i_min, self.j_min = i_min, j_min
        self.width, self.height = width, height

    def numerator(self, i, j) -> int:
        if not (self.i_min <= i < self.i_min + self.width and self.j_min <= j < self.j_min + self.height):
            raise KeyError((i, j))
        d = self.den
        return self.num * pow(self.p, i - self.i_min, d) * pow(self.q, j - self.j_min, d) % d

    def __getitem__(self, cell) -> Fraction:
        i, j = cell
        return Fraction(self.numerator(i, j), self.den)

    def __iter__(self):
        for j in range(self.j_min, self.j_min + self.height):
            for i in range(self.i_min, self.i_min + self.width):
                yield (i, j)

    def __len__(self):
        return self.width * self.height

    def recurrence_violations(self) -> list:
        """Cells where ``y(i+1, j) != p y(i, j)`` or ``y(i, j+1) != q y(i, j)`` (mod 1)."""
        bad = []
        d = self.den
        for (i, j) in self:
            v = self.numerator(i, j)
            if i + 1 < self.i_min + self.width and self.numerator(i + 1, j) != v * self.p % d:
                bad.append(((i, j), "horizontal"))
            if j + 1 < self.j_min + self.height and self.numerator(i, j + 1) != v * self.q % d:
                bad.append(((i, j), "vertical"))
        return bad


def _check_bits(spec: TimesPQ, n: int, k: int):
    if isinstance(spec.point, RandomDyadic):
        need = required_bits(spec.p, spec.q, n, k)
        if spec.point.bits < need:
            raise PrecisionError(
                f"a {n}x{k} grid for p={spec.p}, q={spec.q} needs at least {need} bits; "
                f"the point has {spec.point.bits}"
            )


def orbit_window(spec: TimesPQ, n: int, k: int):
    """Grid ``p**i q**j x mod 1`` for ``0 <= i < n, 0 <= j < k`` and its symbolic coding."""
    if n < 1 or k < 1:
        raise DomainError(f"grid dimensions must be positive, got {n}x{k}")
    _require_independent(spec.p, spec.q)
    _check_bits(spec, n, k)
    num, den = spec.point.numerator_denominator()
    grid = OrbitGrid(spec.p, spec.q, num, den, 0, 0, n, k)
    return grid, code_grid(grid, spec.partition)


def natural_extension_window(spec: TimesPQ, i_min: int, j_min: int, n: int, k: int, seed: int = 0) -> OrbitGrid:
    """Natural-extension grid on ``[i_min, i_min + n) x [j_min, j_min + k)``.

    One preimage of ``x`` under ``S**(-i_min) T**(-j_min)`` is drawn uniformly
    at the lower-left corner; the rest of the grid is its forward orbit, so
    both recurrences hold everywhere and ``y(0, 0) = x``.
    """
    if i_min > 0 or j_min > 0:
        raise DomainError("natural extension offsets must be <= 0")
    if n < 1 or k < 1:
        raise DomainError(f"grid dimensions must be positive, got {n}x{k}")
    _require_independent(spec.p, spec.q)
    _check_bits(spec, n, k)
    num, den = spec.point.numerator_denominator()
    branches = spec.p ** (-i_min) * spec.q ** (-j_min)
    m = random.Random(seed).randrange(branches)
    return OrbitGrid(spec.p, spec.q, num + m * den, den * branches, i_min, j_min, n, k)


def partition_alphabet(partition: str, p: int, q: int) -> Alphabet:
    if partition == BASE_P_DIGIT:
        return Alphabet.digits(p)
    if partition == BASE_Q_DIGIT:
        return Alphabet.digits(q)
    return Alphabet.digits(2)


def _symbol_of(r: int, d: int, p: int, q: int, partition: str) -> int:
    if partition == HALF_INTERVAL:
        return 1 if 2 * r >= d else 0
    if partition == BASE_P_DIGIT:
        return r * p // d
    return r * q // d


def _power_of_two_exponent(v: int) -> int:
    return v.bit_length() - 1 if v & (v - 1) == 0 else 0


def _msb_bits(r: int, nbits: int) -> np.ndarray:
    pad = (-nbits) % 8
    raw = (r << pad).to_bytes((nbits + pad) // 8, "big")
    return np.unpackbits(np.frombuffer(raw, dtype=np.uint8))[:nbits]


def base_digits(value: int, base: int, count: int) -> np.ndarray:
    """The ``count`` base-``base`` digits of ``0 <= value < base**count``, most significant first."""
    chunk = 1
    while base ** (chunk + 1) < (1 << 62):
        chunk += 1
    pieces = -(-count // chunk)
    powers = {}

    def split(v, n_pieces, out):
        if n_pieces == 1:
            out.append(v)
            return
        half = n_pieces // 2
        e = half * chunk
        if e not in powers:
            powers[e] = base ** e
        hi, lo = divmod(v, powers[e])
        split(hi, n_pieces - half, out)
        split(lo, half, out)

    vals = []
    split(value, pieces, vals)
    arr = np.array(vals, dtype=np.int64)
    digits = np.empty((pieces, chunk), dtype=np.uint8)
    for t in range(chunk - 1, -1, -1):
        digits[:, t] = arr % base
        arr //= base
    return digits.ravel()[pieces * chunk - count:]


def code_grid(grid: OrbitGrid, partition: str = HALF_INTERVAL) -> Window:
    """Symbolic coding of an orbit grid under ``partition``; origin at the grid corner.

    Dyadic grids are coded from digit expansions: along a row the cells are
    the successive base-``p`` digits of the row's first value, along a column
    the base-``q`` digits of the column's first value.
    """
    p, q, d = grid.p, grid.q, grid.den
    n, k = grid.width, grid.height
    alphabet = partition_alphabet(partition, p, q)
    out = np.empty((k, n), dtype=np.uint8)
    B = _power_of_two_exponent(d)
    s = _power_of_two_exponent(p)
    t = _power_of_two_exponent(q)
    if B and s and partition in (HALF_INTERVAL, BASE_P_DIGIT) and n * s <= B:
        r = grid.num
        weights = 1 << np.arange(s - 1, -1, -1)
        for j in range(k):
            bits = _msb_bits(r, B)[: n * s].reshape(n, s)
            out[j] = bits[:, 0] if partition == HALF_INTERVAL else bits @ weights
            r = r * q % d
    elif B and t and partition == HALF_INTERVAL and k * t <= B:
        r = grid.num
        for i in range(n):
            out[:, i] = _msb_bits(r, B)[: k * t : t]
            r = r * p % d
    elif B and partition == BASE_P_DIGIT:
        r, scale = grid.num, p ** n
        for j in range(k):
            out[j] = base_digits(r * scale >> B, p, n)
            r = r * q % d
    elif B and partition == BASE_Q_DIGIT:
        r, scale = grid.num, q ** k
        for i in range(n):
            out[:, i] = base_digits(r * scale >> B, q, k)
            r = r * p % d
    else:
        r_row = grid.num
        for j in range(k):
            r = r_row
            row = out[j]
            for i in range(n):
                row[i] = _symbol_of(r, d, p, q, partition)
                r = r * p % d
            r_row = r_row * q % d
    return Window(out, alphabet, (grid.i_min, grid.j_min))


def atomic_orbit(p: int, q: int, x) -> set:
    """Joint forward orbit ``{p**i q**j x mod 1}`` of a rational with denominator prime to ``pq``."""
    if p < 2 or q < 2:
        raise DomainError(f"p and q must be integers >= 2, got p={p}, q={q}")
    x = as_fraction(x)
    if not 0 <= x < 1:
        raise DomainError(f"point must lie in [0, 1), got {x}")
    if gcd(x.denominator, p * q) != 1:
        raise DomainError(f"denominator {x.denominator} shares a factor with p*q={p * q}")
    seen = {x}
    todo = [x]
    while todo:
        y = todo.pop()
        for z in (y * p % 1, y * q % 1):
            if z not in seen:
                seen.add(z)
                todo.append(z)
    return seen


def fixed_points(p: int, q: int, i: int, j: int) -> list:
    """All ``y`` in [0, 1) with ``S**i T**j y = y`` (same signs) or ``S**|i| y = T**j y`` (mixed).

    The solutions are the multiples of ``1/D`` with ``D = p**i q**j - 1`` or
    ``D = |p**|i| - q**|j||``.
    """
    if (i, j) == (0, 0):
        raise DomainError("(i, j) = (0, 0) fixes every point")
    _require_independent(p, q)
    if i * j >= 0:
        D = p ** abs(i) * q ** abs(j) - 1
    else:
        D = abs(p ** abs(i) - q ** abs(j))
    return [Fraction(m, D) for m in range(D)]


def fixed_point_modulus(p: int, q: int, i: int, j: int) -> int:
    """The integer ``K`` with ``K y = 0 (mod 1)`` the defining congruence."""
    if i * j >= 0:
        return p ** abs(i) * q ** abs(j) - 1
    return p ** abs(i) - q ** abs(j)


# -- periodic and full-shift sources ---------------------------------------

def _fundamental_table(fundamental: Pattern, basis):
    lat = hermite_basis(basis)
    if lat.rank != 2:
        raise DomainError(f"basis {basis} does not span a rank-2 lattice")
    table = {}
    for cell, sym in zip(fundamental.shape.ordered(), fundamental.symbols):
        rep = lat.reduce(cell)
        if rep in table:
            raise DomainError(f"fundamental pattern cells {cell} and another are congruent modulo the basis")
        table[rep] = sym
    if len(table) != lat.index:
        raise DomainError(
            f"fundamental pattern has {len(table)} cells but the lattice has {lat.index} cosets"
        )
    return lat, table


def periodic_window(spec: Periodic, n: int, k: int, origin=(0, 0)) -> Window:
    lat, table = _fundamental_table(spec.fundamental, spec.basis)
    ox, oy = origin
    out = np.empty((k, n), dtype=np.uint8)
    for j in range(k):
        for i in range(n):
            out[j, i] = table[lat.reduce((ox + i, oy + j))]
    return Window(out, spec.alphabet, origin)


def full_shift_window(spec: FullShift, n: int, k: int) -> Window:
    rng = np.random.default_rng(spec.seed)
    return Window(rng.integers(0, spec.alphabet.size, size=(k, n), dtype=np.uint8), spec.alphabet)


def generate(spec: SourceSpec, n: int, k: int = 1) -> Window:
    """Window of ``n`` columns and ``k`` rows drawn from ``spec``.

    ``FromFile`` sources return the stored window unchanged.
    """
    if isinstance(spec, FromFile):
        return read_grid(spec.path)
    if n < 1 or k < 1:
        raise DomainError(f"window dimensions must be positive, got {n}x{k}")
    if isinstance(spec, FullShift):
        return full_shift_window(spec, n, k)
    if isinstance(spec, Periodic):
        return periodic_window(spec, n, k)
    if isinstance(spec, SturmianVertical):
        return vertical_extension(sturmian_word(spec.alpha, spec.rho, n), k, Alphabet.from_string("01"))
    if isinstance(spec, Sturmian):
        if k != 1:
            raise DomainError("a Sturmian source is one-dimensional; use SturmianVertical for height > 1")
        return Window.from_sequence(sturmian_word(spec.alpha, spec.rho, n), Alphabet.from_string("01"))
    if isinstance(spec, TimesPQ):
        if spec.extension is None:
            return orbit_window(spec, n, k)[1]
        e = spec.extension
        grid = natural_extension_window(spec, e.i_min, e.j_min, n, k, e.seed)
        return code_grid(grid, spec.partition)
    raise DomainError(f"unsupported source {spec!r}")


# -- JSON -------------------------------------------------------------------

def _rat_to_json(v: Fraction):
    return {"num": str(v.numerator), "den": str(v.denominator)}


def _rat_from_json(obj) -> Fraction:
    try:
        return Fraction(int(obj["num"]), int(obj["den"]))
    except (KeyError, TypeError, ValueError, ZeroDivisionError):
        raise DomainError(f"malformed rational {obj!r}; expected {{'num': ..., 'den': ...}}") from None


def spec_to_json(spec: SourceSpec) -> dict:
    if isinstance(spec, FullShift):
        return {"variant": "full_shift", "alphabet": str(spec.alphabet), "seed": spec.seed}
    if isinstance(spec, Periodic):
        return {
            "variant": "periodic",
            "alphabet": str(spec.alphabet),
            "fundamental": spec.fundamental.rows(spec.alphabet),
            "basis": [list(v) for v in spec.basis],
        }
    if isinstance(spec, Sturmian):
        name = "sturmian_vertical" if isinstance(spec, SturmianVertical) else "sturmian"
        return {"variant": name, "alpha": _rat_to_json(spec.alpha), "rho": _rat_to_json(spec.rho)}
    if isinstance(spec, TimesPQ):
        if isinstance(spec.point, RandomDyadic):
            point = {"variant": "random_dyadic", "seed": spec.point.seed, "bits": spec.point.bits}
        else:
            point = {"variant": "exact_rational", "value": _rat_to_json(spec.point.value)}
        out = {"variant": "times_pq", "p": spec.p, "q": spec.q, "point": point, "partition": spec.partition}
        if spec.extension is not None:
            e = spec.extension
            out["natural_extension"] = {"i_min": e.i_min, "j_min": e.j_min, "seed": e.seed}
        return out
    if isinstance(spec, FromFile):
        return {"variant": "from_file", "path": str(spec.path)}
    raise DomainError(f"unsupported source {spec!r}")


def spec_from_json(obj: dict) -> SourceSpec:
    try:
        variant = obj["variant"]
        if variant == "full_shift":
            return FullShift(Alphabet.from_string(obj["alphabet"]), int(obj.get("seed", 0)))
        if variant == "periodic":
            alphabet = Alphabet.from_string(obj["alphabet"])
            return Periodic(Pattern.from_rows(obj["fundamental"], alphabet), tuple(map(tuple, obj["basis"])), alphabet)
        if variant in ("sturmian", "sturmian_vertical"):
            cls = SturmianVertical if variant == "sturmian_vertical" else Sturmian
            rho = _rat_from_json(obj["rho"]) if "rho" in obj else Fraction(0)
            return cls(_rat_from_json(obj["alpha"]), rho)
        if variant == "times_pq":
            pt = obj["point"]
            if pt["variant"] == "random_dyadic":
                point = RandomDyadic(int(pt["seed"]), int(pt["bits"]))
            elif pt["variant"] == "exact_rational":
                point = ExactRational(_rat_from_json(pt["value"]))
            else:
                raise DomainError(f"unknown point variant {pt['variant']!r}")
            ext = obj.get("natural_extension")
            extension = None if ext is None else NaturalExtension(int(ext["i_min"]), int(ext["j_min"]), int(ext.get("seed", 0)))
            return TimesPQ(int(obj["p"]), int(obj["q"]), point, obj.get("partition", HALF_INTERVAL), extension)
        if variant == "from_file":
            return FromFile(obj["path"])
    except KeyError as exc:
        raise DomainError(f"source spec is missing field {exc.args[0]!r}") from None
    raise DomainError(f"unknown source variant {obj.get('variant')!r}")


def load_spec(path) -> SourceSpec:
    with open(path, encoding="utf-8") as fh:
        return spec_from_json(json.load(fh))


def dump_spec(spec: SourceSpec) -> str:
    return json.dumps(spec_to_json(spec), indent=2, sort_keys=True)
