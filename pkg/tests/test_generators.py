import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from subshift_lab.core import Alphabet, Pattern
from subshift_lab.errors import DomainError, PrecisionError
from subshift_lab.generators import (BASE_P_DIGIT, BASE_Q_DIGIT, HALF_INTERVAL, PARTITIONS, ExactRational,
                                     FromFile, FullShift, NaturalExtension, OrbitGrid, Periodic, RandomDyadic,
                                     Sturmian, SturmianVertical, TimesPQ, _symbol_of, atomic_orbit, base_digits,
                                     code_grid, dump_spec, fixed_point_modulus, fixed_points, generate,
                                     is_multiplicatively_independent, natural_extension_window, orbit_window,
                                     required_bits, spec_from_json, spec_to_json, sturmian_word,
                                     vertical_extension)


def brute_dependent(p, q, bound=30):
    powers_p = {p ** a for a in range(1, bound + 1)}
    return any(q ** b in powers_p for b in range(1, bound + 1))


def test_multiplicative_independence_examples():
    assert is_multiplicatively_independent(2, 3)
    assert not is_multiplicatively_independent(4, 8)
    assert is_multiplicatively_independent(12, 18) == (not brute_dependent(12, 18))
    with pytest.raises(DomainError):
        is_multiplicatively_independent(1, 3)


def test_multiplicative_independence_brute_force():
    for p in range(2, 40):
        for q in range(2, 40):
            assert is_multiplicatively_independent(p, q) == (not brute_dependent(p, q)), (p, q)


def test_sturmian_examples():
    assert "".join(map(str, sturmian_word(Fraction(1, 2), 0, 6))) == "010101"
    with pytest.raises(DomainError):
        sturmian_word(Fraction(0), 0, 5)
    with pytest.raises(DomainError):
        sturmian_word(0.5, 0, 5)
    alpha = Fraction(377, 610)
    expected = [math.floor((t + 1) * alpha) - math.floor(t * alpha) for t in range(20)]
    assert sturmian_word(alpha, 0, 20).tolist() == expected


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 200), st.integers(2, 200), st.integers(0, 199), st.integers(1, 60))
def test_sturmian_matches_floor_formula(a, b, r, length):
    if a >= b or r >= b:
        return
    alpha, rho = Fraction(a, b), Fraction(r, b)
    expected = [math.floor((t + 1) * alpha + rho) - math.floor(t * alpha + rho) for t in range(length)]
    assert sturmian_word(alpha, rho, length).tolist() == expected


def test_vertical_extension():
    w = vertical_extension([0, 1, 0], 2)
    assert w.cells.tolist() == [[0, 1, 0], [0, 1, 0]]
    assert vertical_extension([1, 0, 1], 1).cells.tolist() == [[1, 0, 1]]
    seq = np.random.default_rng(0).integers(0, 2, 50)
    w = vertical_extension(seq, 7)
    assert all(len(set(w.cells[:, i].tolist())) == 1 for i in range(50))


def test_orbit_window_zero_and_atomic():
    grid, w = orbit_window(TimesPQ(2, 3, ExactRational(Fraction(0))), 6, 4)
    assert all(v == 0 for v in grid.values())
    assert len(set(w.cells.ravel().tolist())) == 1
    grid, _ = orbit_window(TimesPQ(2, 3, ExactRational(Fraction(1, 5))), 8, 8)
    assert set(grid.values()) <= {Fraction(m, 5) for m in range(5)}
    assert grid[(1, 1)] == grid[(0, 0)] == Fraction(1, 5)


def test_orbit_recurrences_random_dyadic():
    grid, _ = orbit_window(TimesPQ(2, 3, RandomDyadic(7, 4096)), 20, 20)
    assert grid.recurrence_violations() == []
    for (i, j), v in grid.items():
        if i + 1 < 20:
            assert grid[(i + 1, j)] == (2 * v) % 1
        if j + 1 < 20:
            assert grid[(i, j + 1)] == (3 * v) % 1


def test_precision_guard():
    spec = TimesPQ(2, 3, RandomDyadic(1, 64))
    with pytest.raises(PrecisionError):
        orbit_window(spec, 10, 10)
    need = required_bits(2, 3, 10, 10)
    orbit_window(TimesPQ(2, 3, RandomDyadic(1, need)), 10, 10)
    with pytest.raises(DomainError):
        RandomDyadic(1, 32)


def test_spec_validation():
    with pytest.raises(DomainError):
        TimesPQ(4, 8, ExactRational(Fraction(1, 3)))
    with pytest.raises(DomainError):
        ExactRational(Fraction(5, 4))
    with pytest.raises(DomainError):
        TimesPQ(2, 3, ExactRational(Fraction(1, 5)), partition="thirds")
    with pytest.raises(DomainError):
        Periodic(Pattern.from_rows(["01"], Alphabet.from_string("01")), ((1, 0), (2, 0)), Alphabet.from_string("01"))


def test_natural_extension_trivial_offset():
    spec = TimesPQ(2, 3, RandomDyadic(11, 512))
    g0, _ = orbit_window(spec, 12, 9)
    g1 = natural_extension_window(spec, 0, 0, 12, 9, seed=4)
    assert dict(g0) == dict(g1)


def test_natural_extension_recurrences_across_seeds():
    spec = TimesPQ(2, 3, RandomDyadic(3, 256))
    x = Fraction(*spec.point.numerator_denominator())
    for seed in range(100):
        g = natural_extension_window(spec, -2, -2, 8, 8, seed)
        assert g[(0, 0)] == x
        assert g.recurrence_violations() == []


def test_natural_extension_window_coding():
    spec = TimesPQ(2, 3, RandomDyadic(5, 512), BASE_P_DIGIT, NaturalExtension(-3, -2, 9))
    w = generate(spec, 10, 6)
    assert w.origin == (-3, -2)
    g = natural_extension_window(spec, -3, -2, 10, 6, 9)
    for (i, j), v in g.items():
        assert w[(i, j)] == math.floor(2 * v)


def test_atomic_orbit():
    assert atomic_orbit(2, 3, 0) == {Fraction(0)}
    assert atomic_orbit(2, 3, Fraction(1, 5)) == {Fraction(m, 5) for m in range(1, 5)}
    with pytest.raises(DomainError):
        atomic_orbit(2, 3, Fraction(1, 6))
    rng = np.random.default_rng(0)
    done = 0
    while done < 30:
        d = int(rng.integers(2, 10_001))
        if math.gcd(d, 6) != 1:
            continue
        x = Fraction(int(rng.integers(0, d)), d)
        orb = atomic_orbit(2, 3, x)
        assert all((2 * y) % 1 in orb and (3 * y) % 1 in orb for y in orb)
        done += 1


def test_fixed_points_examples():
    assert fixed_points(2, 3, 1, 1) == [Fraction(m, 5) for m in range(5)]
    assert fixed_points(2, 3, -1, 1) == [Fraction(0)]
    pts = fixed_points(2, 3, 2, 1)
    assert all((12 * y) % 1 == y for y in pts)
    brute = {Fraction(m, d) for d in range(1, 12) for m in range(d) if (12 * Fraction(m, d)) % 1 == Fraction(m, d)}
    assert brute == set(pts)
    with pytest.raises(DomainError):
        fixed_points(2, 3, 0, 0)


def test_fixed_points_mixed_signs_congruence():
    for i, j in [(-2, 1), (2, -1), (-1, 3), (3, -2)]:
        pts = fixed_points(2, 3, i, j)
        K = fixed_point_modulus(2, 3, i, j)
        assert len(pts) == abs(K)
        for y in pts:
            assert (2 ** abs(i) * y) % 1 == (3 ** abs(j) * y) % 1


@pytest.mark.parametrize("p,q", [(2, 3), (3, 2), (4, 3), (3, 5), (6, 10)])
def test_code_grid_fast_paths_match_generic(p, q):
    spec = TimesPQ(p, q, RandomDyadic(2, required_bits(p, q, 17, 9)))
    num, den = spec.point.numerator_denominator()
    grid = OrbitGrid(p, q, num, den, 0, 0, 17, 9)
    for part in PARTITIONS:
        w = code_grid(grid, part)
        for (i, j) in grid:
            assert w[(i, j)] == _symbol_of(grid.numerator(i, j), den, p, q, part), (part, i, j)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 40), st.integers(1, 60), st.data())
def test_base_digits(base, count, data):
    value = data.draw(st.integers(0, base ** count - 1))
    digits = base_digits(value, base, count).tolist()
    assert len(digits) == count
    assert sum(d * base ** (count - 1 - t) for t, d in enumerate(digits)) == value


def test_partition_symbols():
    spec = TimesPQ(2, 3, ExactRational(Fraction(1, 5)), HALF_INTERVAL)
    assert generate(spec, 4, 1).cells.tolist() == [[0, 0, 1, 1]]  # 1/5, 2/5, 4/5, 3/5
    spec = TimesPQ(2, 3, ExactRational(Fraction(1, 5)), BASE_Q_DIGIT)
    assert generate(spec, 1, 4).cells[:, 0].tolist() == [0, 1, 2, 1]  # 1/5, 3/5, 4/5, 2/5


def test_generate_periodic_and_full_shift():
    alpha = Alphabet.from_string("ab")
    fund = Pattern.from_rows(["ab", "ba", "aa"], alpha)
    spec = Periodic(fund, ((2, 0), (0, 3)), alpha)
    w = generate(spec, 8, 9)
    assert np.array_equal(w.cells[:3, :2], fund.array())
    assert np.array_equal(w.cells, np.tile(fund.array(), (3, 4)))
    fs = FullShift(Alphabet.from_string("012"), seed=3)
    assert generate(fs, 10, 10) == generate(fs, 10, 10)
    with pytest.raises(DomainError):
        generate(Sturmian(Fraction(1, 3)), 10, 2)


def test_spec_json_roundtrip(tmp_path):
    alpha = Alphabet.from_string("ab")
    specs = [
        FullShift(Alphabet.from_string("01"), 4),
        Periodic(Pattern.from_rows(["ab", "ba"], alpha), ((2, 0), (1, 2)), alpha),
        Sturmian(Fraction(377, 610), Fraction(1, 7)),
        SturmianVertical(Fraction(2, 5)),
        TimesPQ(2, 3, RandomDyadic(1, 300), BASE_P_DIGIT, NaturalExtension(-1, -2, 5)),
        TimesPQ(2, 3, ExactRational(Fraction(1, 5))),
        FromFile(str(tmp_path / "x.grid")),
    ]
    for spec in specs:
        obj = spec_to_json(spec)
        assert spec_from_json(obj) == spec
        assert isinstance(dump_spec(spec), str)
    assert spec_to_json(specs[2])["alpha"] == {"num": "377", "den": "610"}
    with pytest.raises(DomainError):
        spec_from_json({"variant": "nope"})
    with pytest.raises(DomainError):
        spec_from_json({"variant": "sturmian"})
