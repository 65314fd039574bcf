import warnings
from fractions import Fraction

import numpy as np
import pytest

from subshift_lab.complexity import (ComplexityTable, UndersizedWindowWarning, complexity_1d, complexity_table,
                                     exact_complexity_table, gap_classify, gap_order, morse_hedlund_classify)
from subshift_lab.core import Alphabet, Pattern, Window
from subshift_lab.errors import DomainError, SizeError
from subshift_lab.generators import (ExactRational, FullShift, Periodic, Sturmian, SturmianVertical, TimesPQ,
                                     generate, sturmian_word)
from subshift_lab.periodicity import period_vectors

BIN = Alphabet.from_string("01")


def brute_table(grid, n_max, k_max):
    H, W = grid.shape
    rows, cols = H - k_max + 1, W - n_max + 1
    out = np.zeros((n_max, k_max), dtype=np.int64)
    for n in range(1, n_max + 1):
        for k in range(1, k_max + 1):
            out[n - 1, k - 1] = len({grid[j:j + k, i:i + n].tobytes() for j in range(rows) for i in range(cols)})
    return out


def brute_1d(seq, n_max):
    cols = len(seq) - n_max + 1
    return [len({tuple(seq[i:i + n]) for i in range(cols)}) for n in range(1, n_max + 1)]


def test_constant_window():
    t = complexity_table(Window(np.zeros((10, 10)), BIN), 4, 4)
    assert (t.values == 1).all()


def test_period_two_word():
    w = Window.from_sequence([0, 1] * 10, BIN)
    assert complexity_table(w, 4, 1).values[:, 0].tolist() == [2, 2, 2, 2]


def test_random_window_matches_brute_force():
    grid = np.random.default_rng(0).integers(0, 2, (64, 64)).astype(np.uint8)
    t = complexity_table(Window(grid, BIN), 4, 4)
    assert np.array_equal(t.values, brute_table(grid, 4, 4))
    assert t.provenance["anchor_region"] == [[0, 60], [0, 60]]
    assert t.to_json()["lower_bound"] is True


def test_threads_give_identical_tables():
    grid = np.random.default_rng(1).integers(0, 3, (30, 30)).astype(np.uint8)
    w = Window(grid, Alphabet.from_string("012"))
    assert np.array_equal(complexity_table(w, 6, 6).values, complexity_table(w, 6, 6, threads=3).values)


def test_monotone_and_bounded():
    rng = np.random.default_rng(2)
    for _ in range(10):
        grid = rng.integers(0, 2, (20, 16)).astype(np.uint8)
        t = complexity_table(Window(grid, BIN), 5, 6)
        assert t.is_monotone()
        for n in range(1, 6):
            for k in range(1, 7):
                assert 1 <= t(n, k) <= 2 ** (n * k)


def test_size_checks():
    w = Window(np.zeros((5, 5)), BIN)
    with pytest.raises(SizeError):
        complexity_table(w, 6, 2)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        t = complexity_table(w, 4, 4)
    assert t.undersized
    assert any(issubclass(c.category, UndersizedWindowWarning) for c in caught)
    with pytest.raises(SizeError):
        t(5, 1)


def test_complexity_1d_examples():
    seq = sturmian_word(Fraction(377, 610), 0, 10_000)
    assert complexity_1d(seq, 50) == [n + 1 for n in range(1, 51)]
    assert complexity_1d([7] * 30, 5) == [1] * 5
    rng = np.random.default_rng(3)
    for _ in range(20):
        seq = rng.integers(0, 3, 20).tolist()
        assert complexity_1d(seq, 8) == brute_1d(seq, 8)


def test_sturmian_factor_bound():
    # at most L+1 factors of each length in any window
    rng = np.random.default_rng(4)
    for _ in range(10):
        b = int(rng.integers(50, 400))
        a = int(rng.integers(1, b))
        seq = sturmian_word(Fraction(a, b), 0, 300)
        assert all(P <= n + 1 for n, P in enumerate(complexity_1d(seq, 40), start=1))


def test_morse_hedlund():
    seq = list("abc" * 20)
    P = complexity_1d([ord(c) for c in seq], 6)
    assert morse_hedlund_classify(P).kind == "periodic_forced"
    assert morse_hedlund_classify(P).witness == 3
    stu = complexity_1d(sturmian_word(Fraction(377, 610), 0, 10_000), 50)
    assert morse_hedlund_classify(stu).kind == "no_conclusion"


def least_period(word):
    return next(t for t in range(1, len(word) + 1)
                if all(word[i] == word[i + t] for i in range(len(word) - t)))


def test_morse_hedlund_random_distinct_words():
    rng = np.random.default_rng(5)
    for _ in range(30):
        word = rng.choice(26, size=10, replace=False).tolist()
        assert least_period(word) == 10
        assert morse_hedlund_classify(complexity_1d(word, 5)).kind == "no_conclusion"
    for t in range(1, 5):
        block = rng.choice(26, size=t, replace=False).tolist()
        word = (block * 10)[:10]
        assert least_period(word) == t
        res = morse_hedlund_classify(complexity_1d(word, 5))
        assert res.kind == "periodic_forced" and res.witness <= t


def test_eventually_periodic_words_within_period_plus_preperiod():
    rng = np.random.default_rng(6)
    for period in range(1, 11):
        for pre in (0, 3, 7):
            block = rng.integers(0, 3, period).tolist()
            head = rng.integers(0, 3, pre).tolist()
            word = head + (block * (1000 // period + 1))[: 1000 - pre]
            res = morse_hedlund_classify(complexity_1d(word, 30))
            assert res.kind == "periodic_forced"
            assert res.witness <= period + pre


def test_gap_order():
    order = gap_order(4, 4)
    assert order[:4] == [(1, 1), (2, 2), (3, 3), (4, 4)]
    assert order[4:8] == [(1, 2), (2, 1), (1, 3), (3, 1)]


def test_gap_sturmian_vertical():
    w = generate(SturmianVertical(Fraction(377, 610)), 2000, 40)
    t = complexity_table(w, 12, 12)
    g = gap_classify(t)
    assert g.kind == "below_gap" and g.witness == (3, 3)
    assert "periodicity expected under transitivity" in g.notes


def test_gap_full_shift_above():
    w = generate(FullShift(BIN, seed=1), 200, 200)
    t = complexity_table(w, 4, 4)
    assert t(2, 2) == 16
    assert gap_classify(t).kind == "above_gap"


def test_gap_atomic_bounded():
    w = generate(TimesPQ(2, 3, ExactRational(Fraction(1, 5))), 40, 40)
    t = complexity_table(w, 12, 12)
    g = gap_classify(t)
    assert g.kind == "bounded" and g.plateau_value <= 4
    # the 5-point orbit has 4 nonzero points, so at most 4 distinct configurations
    assert max(t.diagonal()) <= 4


def test_gap_saturated_sample_is_not_bounded():
    w = generate(FullShift(BIN, seed=2), 40, 40)
    t = complexity_table(w, 12, 12)
    assert t(12, 12) == t(11, 11) == 29 * 29
    g = gap_classify(t)
    assert g.kind == "above_gap"
    assert any("saturated" in note for note in g.notes)


def test_gap_requires_square_range():
    t = ComplexityTable(np.ones((2, 2), dtype=np.int64), {"kind": "exact"}, 2)
    with pytest.raises(SizeError):
        gap_classify(t)


def test_gap_plateau_steps():
    vals = np.array([[1, 2, 3, 3], [2, 3, 4, 4], [3, 4, 4, 4], [3, 4, 4, 4]])
    t = ComplexityTable(vals, {"kind": "exact"}, 2)
    # diagonal 1, 3, 4, 4: plateau only for a single step
    assert t.diagonal() == [1, 3, 4, 4]
    assert gap_classify(t, plateau_steps=1).kind == "bounded"
    assert gap_classify(t, plateau_steps=2).kind != "bounded"
    with pytest.raises(DomainError):
        gap_classify(t, plateau_steps=0)


def test_exact_full_shift_and_submultiplicativity():
    t = exact_complexity_table(FullShift(BIN), 4, 3)
    assert t(3, 2) == 2 ** 6
    alpha = Alphabet.from_string("ab")
    per = Periodic(Pattern.from_rows(["aab", "bab"], alpha), ((3, 0), (1, 2)), alpha)
    p = exact_complexity_table(per, 6, 4)
    for tbl in (t, p):
        for k in range(1, tbl.k_max + 1):
            for n1 in range(1, tbl.n_max):
                for n2 in range(1, tbl.n_max - n1 + 1):
                    assert tbl(n1 + n2, k) <= tbl(n1, k) * tbl(n2, k)
    big = exact_complexity_table(FullShift(Alphabet.from_string("0123")), 8, 8)
    assert big(8, 8) == 4 ** 64


def test_exact_periodic_matches_large_window():
    alpha = Alphabet.from_string("ab")
    per = Periodic(Pattern.from_rows(["aab", "bab"], alpha), ((3, 0), (1, 2)), alpha)
    exact = exact_complexity_table(per, 5, 5)
    emp = complexity_table(generate(per, 60, 60), 5, 5)
    assert np.array_equal(exact.values, emp.values)


def test_exact_sturmian():
    t = exact_complexity_table(Sturmian(Fraction(2, 5)), 8, 1)
    assert t.values[:, 0].tolist() == [2, 3, 4, 5, 5, 5, 5, 5]
    with pytest.raises(DomainError):
        exact_complexity_table(Sturmian(Fraction(2, 5)), 4, 2)
    with pytest.raises(DomainError):
        exact_complexity_table(TimesPQ(2, 3, ExactRational(Fraction(1, 5))), 3, 3)


def test_bounded_iff_rank_two():
    cases = [
        generate(TimesPQ(2, 3, ExactRational(Fraction(1, 5))), 40, 40),
        generate(TimesPQ(2, 3, ExactRational(Fraction(3, 7))), 40, 40),
        generate(SturmianVertical(Fraction(377, 610)), 400, 40),
        generate(FullShift(BIN, 2), 40, 40),
    ]
    for w in cases:
        bounded = gap_classify(complexity_table(w, 12, 12)).kind == "bounded"
        assert bounded == (period_vectors(w, 10).rank == 2)
