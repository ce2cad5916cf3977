#!/usr/bin/env python3

import sys
import os
from fractions import Fraction
from unittest.mock import patch
sys.path.append(os.path.join(os.path.dirname(__file__), 'src'))

from utils import BudgetExceededError, UnsupportedOperationError, get_enumeration_stats, reset_enumeration_stats
from words import Alphabet, Word, all_words, parikh, parse_word, signature
from census import (
    binary_ll_slice,
    binary_sing_slice,
    cake_count,
    census_table,
    check_growth_bounds,
    class_census,
    coefficient_range,
    count_classes,
    f_parikh,
    f_parikh_sum,
    f_parikh_table,
    growth_bounds,
    growth_bounds_table,
    interpolation_check,
    ll_language,
    lx_class_count,
    lx_language,
    parikh_vectors,
    polynomial_bound,
    sing_language,
)

TERNARY_COUNTS = [1, 3, 9, 27, 78, 216, 568, 1410]
QUIET = {'KBINOM_PROGRESS': '0'}


def _scalar_count(m: int, n: int, k: int) -> int:
    return len({signature(letters, k, m) for letters in all_words(m, n)})


@patch.dict(os.environ, QUIET)
def test_ternary_counts():
    counts = [count_classes(3, n, 2) for n in range(8)]
    assert counts == TERNARY_COUNTS, f"Ternary counts {counts} differ from {TERNARY_COUNTS}"
    assert count_classes(2, 4, 2) == 15
    assert count_classes(4, 0, 3) == 1, "Only the empty word has length 0"
    print("✓ ternary census tests passed")


@patch.dict(os.environ, QUIET)
def test_counts_beyond_the_table():
    """n = 8 and 9 pinned, and reached through independent paths"""
    eight = count_classes(3, 8, 2)
    assert eight == 3309, f"Ternary census at n=8 is {eight}"
    assert eight == _scalar_count(3, 8, 2)
    assert eight == sum(f_parikh_table(3, 8).values())
    nine = count_classes(3, 9, 2)
    assert nine == 7307, f"Ternary census at n=9 is {nine}"
    assert nine == f_parikh_sum(3, 9)
    assert count_classes(2, 8, 3) == _scalar_count(2, 8, 3)
    print("✓ cross-checked census tests passed")


@patch.dict(os.environ, QUIET)
def test_binary_counts_follow_cake_numbers():
    for n in range(13):
        assert count_classes(2, n, 2) == cake_count(n), f"Binary census differs from the formula at n={n}"
    assert [row['count'] for row in census_table(2, 2, 5)] == [cake_count(n) for n in range(6)]
    print("✓ binary census tests passed")


@patch.dict(os.environ, QUIET)
def test_class_census_records():
    census = class_census(3, 6, 2)
    assert census.count == len(census.classes)
    assert sum(record.size for record in census.classes) == 3 ** 6

    # Representatives are class minima
    minima = {}
    for letters in all_words(3, 6):
        minima.setdefault(signature(letters, 2, 3), letters)
    assert {record.representative.letters for record in census.classes} == set(minima.values())
    for record in census.classes:
        assert signature(record.representative, 2) == record.signature

    print("✓ class_census record tests passed")


def test_sharded_merge_is_deterministic():
    with patch.dict(os.environ, {**QUIET, 'KBINOM_CHUNK_SIZE': '9', 'KBINOM_MAX_WORKERS': '3'}):
        sharded = class_census(3, 6, 2)
    with patch.dict(os.environ, QUIET):
        whole = class_census(3, 6, 2)
    assert sharded == whole, "Small shards must merge to the same census"
    print("✓ sharded merge tests passed")


@patch.dict(os.environ, QUIET)
def test_budget():
    try:
        count_classes(3, 10, 2, budget=1000)
        assert False, "3^10 words exceed a budget of 1000"
    except BudgetExceededError as e:
        assert e.required == 3 ** 10
        assert e.budget == 1000

    reset_enumeration_stats()
    count_classes(2, 5, 2)
    assert get_enumeration_stats()['words_enumerated'] == 32
    print("✓ budget tests passed")


@patch.dict(os.environ, QUIET)
def test_ll_and_sing_languages():
    ll = ll_language(2, 4, 2)
    assert parse_word('1221', 2) in ll and parse_word('2112', 2) not in ll
    assert ll_language(3, 1, 2) == {Word((a,), Alphabet(3)) for a in (1, 2, 3)}

    sing = sing_language(2, 4, 2)
    assert parse_word('1212', 2) in sing and parse_word('1221', 2) not in sing
    assert sing_language(3, 1, 3) == {Word((a,), Alphabet(3)) for a in (1, 2, 3)}

    for n in range(13):
        ll = ll_language(2, n, 2)
        sing = sing_language(2, n, 2)
        assert ll == binary_ll_slice(n), f"LL differs from the avoidance language at n={n}"
        assert sing == binary_sing_slice(n), f"Sing differs from the regular expression at n={n}"
        assert sing <= ll
        assert len(ll) == count_classes(2, n, 2)

    for n in range(6):
        assert sing_language(3, n, 2) <= ll_language(3, n, 2)

    print("✓ LL and Sing language tests passed")


@patch.dict(os.environ, QUIET)
def test_f_parikh():
    assert f_parikh((2, 2)) == 5
    assert f_parikh((4, 0, 0)) == 1
    assert f_parikh((0, 0, 0)) == 1
    assert parikh_vectors(2, 2) == [(0, 2), (1, 1), (2, 0)]
    for n in range(7):
        assert f_parikh_sum(3, n) == count_classes(3, n, 2)
        table = f_parikh_table(3, n)
        assert all(table[x] == f_parikh(x) for x in table)
    print("✓ f_parikh tests passed")


def test_coefficient_range():
    assert coefficient_range(1, 2, 2, 2) == {0, 1, 2, 3, 4}
    assert coefficient_range(1, 2, 0, 4) == {0}
    assert coefficient_range(1, 2, 3, 3) == set(range(10))
    for i in range(6):
        for j in range(6):
            assert coefficient_range(1, 2, i, j) == set(range(i * j + 1))
    assert coefficient_range(3, 1, 2, 1) == {0, 1, 2}

    for args in [(2, 2, 1, 1), (0, 2, 1, 1), (1, 2, -1, 3), (1, 2, 3, -1)]:
        try:
            coefficient_range(*args)
            assert False, f"coefficient_range{args} should be rejected"
        except ValueError:
            pass

    print("✓ coefficient_range tests passed")


@patch.dict(os.environ, QUIET)
def test_growth_bounds():
    report = check_growth_bounds((4, 4, 4))
    assert report.lower == 125 and report.lower_holds

    report = check_growth_bounds((2, 2))
    assert (report.f, report.lower, report.upper, report.uncorrected_upper) == (5, 5, 5, 4)
    assert report.passed and not report.uncorrected_upper_holds, "The uncorrected product misses one value"

    report = check_growth_bounds((0, 0, 0))
    assert (report.f, report.lower, report.upper) == (1, 1, 1)

    assert growth_bounds((3, 1)) == (4, 4, 3)

    for n in range(13):
        for report in growth_bounds_table(3, n):
            assert report.passed, f"Bounds fail at {report.parikh}"
    for n in range(15):
        for report in growth_bounds_table(2, n):
            assert report.passed, f"Bounds fail at {report.parikh}"

    print("✓ growth bound tests passed")


@patch.dict(os.environ, QUIET)
def test_lx_language():
    for x in [(4, 4, 4), (5, 3, 4), (2, 2), (3, 1, 2, 4)]:
        words = list(lx_language(x))
        assert all(parikh(w, len(x)).counts == x for w in words), f"L({x}) leaves the abelian class"
        lower, _, _ = growth_bounds(x)
        assert lx_class_count(x) == lower, f"L({x}) should realize the lower bound"
    assert next(lx_language((5, 3, 4)))[-2:] == (2, 1), "Padding lists leftover letters from m down to 1"

    try:
        lx_class_count((5,))
        assert False, "L(x) needs two letters"
    except UnsupportedOperationError:
        pass
    try:
        lx_class_count((2, -1))
        assert False, "Negative counts are rejected"
    except ValueError:
        pass

    print("✓ L(x) tests passed")


def test_cake_and_polynomial_bound():
    assert cake_count(0) == 1
    assert cake_count(4) == 15
    assert cake_count(7) == 64
    for n, count in enumerate(TERNARY_COUNTS):
        assert count <= polynomial_bound(3, n, 2)
    try:
        cake_count(-1)
        assert False, "Negative lengths are rejected"
    except ValueError:
        pass
    print("✓ cake and polynomial bound tests passed")


@patch.dict(os.environ, QUIET)
def test_ternary_counts_are_not_polynomial():
    values = TERNARY_COUNTS + [3309, 7307]
    assert [count_classes(3, n, 2) for n in (8, 9)] == values[8:]

    # Interpolants through n = 0..d, evaluated at n = 9
    predicted = {3: 835, 4: 2473, 5: 4993, 6: 6673, 7: 7249, 8: 7375}
    for degree, expected in predicted.items():
        report = interpolation_check(values[:degree + 1], 9, values[9])
        assert report.degree == degree
        assert report.predicted == Fraction(expected), f"Degree {degree} predicts {report.predicted}"
        assert not report.extends, f"The degree-{degree} interpolant must miss the n=9 count"

    cubic = interpolation_check([cake_count(n) for n in range(5)], 5, cake_count(5))
    assert cubic.extends and cubic.predicted == Fraction(cake_count(5))

    try:
        interpolation_check(values[:9], 8)
        assert False, "The evaluation point must lie beyond the data"
    except ValueError:
        pass

    print("✓ interpolation tests passed")


if __name__ == "__main__":
    test_ternary_counts()
    test_counts_beyond_the_table()
    test_binary_counts_follow_cake_numbers()
    test_class_census_records()
    test_sharded_merge_is_deterministic()
    test_budget()
    test_ll_and_sing_languages()
    test_f_parikh()
    test_coefficient_range()
    test_growth_bounds()
    test_lx_language()
    test_cake_and_polynomial_bound()
    test_ternary_counts_are_not_polynomial()
    print("All tests passed!")
