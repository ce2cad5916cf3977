#!/usr/bin/env python3

import sys
import os
from unittest.mock import patch
sys.path.append(os.path.join(os.path.dirname(__file__), 'src'))

from utils import BudgetExceededError, EmptyWordError, SequenceError, UnsupportedOperationError
from words import Alphabet, RleWord, Word, all_words, parse_word
from census import sing_language
from singletons import (
    GrowthSequence,
    apply_morphism_sigma,
    block_bound_check,
    check_prop54,
    is_singleton,
    letter_factorization,
    minimal_sequence,
    nb,
    tower_sequence,
    rho,
    sigma_suffix_check,
    validate_sequence,
)

QUIET = {'KBINOM_PROGRESS': '0'}


def test_growth_sequences():
    sequence = minimal_sequence(3)
    assert sequence.terms == (2, 50, 31752), f"Unexpected minimal terms {sequence}"
    assert validate_sequence(sequence).passed

    report = validate_sequence([2, 8])
    assert not report.passed
    failure = report.first_failure()
    assert failure.n == 2 and failure.d1 and not failure.d2, "8 = 2*2^2 but 8 <= (2 + 2)^2"

    report = validate_sequence([3])
    assert not report.checks[0].d1, "3 is not twice a square"

    large = tower_sequence(2)
    assert large[1] == 2 * 8 ** 8
    assert validate_sequence(large).passed
    assert validate_sequence(minimal_sequence(5)).passed

    try:
        GrowthSequence((2, 0))
        assert False, "Terms must be positive"
    except ValueError:
        pass

    try:
        sequence[4]
        assert False, "s_4 is beyond three terms"
    except SequenceError:
        pass

    assert sequence.partial_sum(2) == 52
    assert sequence.partial_sum(0) == 0
    print("✓ growth sequence tests passed")


def test_rho():
    sequence = minimal_sequence(3)
    word = rho(1, 3, sequence)
    assert word.runs == ((1, 1), (2, 50), (3, 2))
    assert rho(2, 2, sequence).runs == ((1, 2), (2, 2))
    assert rho(5, 4, sequence).runs == ((1, 5), (2, 31752), (3, 50), (1, 2))
    for n in range(2, 5):
        assert nb(rho(1, n, sequence)) == n, f"rho(1, {n}) should have {n} blocks"

    try:
        rho(1, 5, sequence)
        assert False, "rho(1, 5) needs four terms"
    except SequenceError:
        pass

    for p, n in [(0, 3), (1, 1)]:
        try:
            rho(p, n, sequence)
            assert False, f"rho({p}, {n}) should be rejected"
        except ValueError:
            pass

    print("✓ rho tests passed")


def test_letter_factorization():
    runs = letter_factorization(parse_word('112333122132', 3))
    assert tuple(exponent for _, exponent in runs.runs) == (2, 1, 3, 1, 2, 1, 1, 1)
    assert tuple(letter for letter, _ in runs.runs) == (1, 2, 3, 1, 2, 1, 3, 2)
    assert nb(parse_word('112333122132', 3)) == 8
    assert nb(parse_word('1', 3)) == 1

    try:
        nb(parse_word('', 3))
        assert False, "The empty word has no factorization"
    except EmptyWordError:
        pass

    print("✓ letter factorization tests passed")


@patch.dict(os.environ, QUIET)
def test_is_singleton():
    word = rho(1, 3, minimal_sequence(3))
    assert is_singleton(word, 2)
    assert is_singleton(word, 3)
    assert not is_singleton(parse_word('1223312', 3))
    assert is_singleton(parse_word('', 3))
    assert is_singleton(parse_word('1212', 2))
    assert not is_singleton(parse_word('1221', 2))

    for n in range(6):
        singletons = sing_language(3, n, 2)
        for letters in all_words(3, n):
            w = Word(letters, Alphabet(3))
            assert is_singleton(w) == (w in singletons), f"is_singleton({w}) disagrees with the census"

    try:
        is_singleton(parse_word('1231231231', 3), budget=10)
        assert False, "The abelian class has 4200 words"
    except BudgetExceededError:
        pass

    print("✓ is_singleton tests passed")


@patch.dict(os.environ, QUIET)
def test_prop54():
    sequence = minimal_sequence(3)
    report = check_prop54(rho(1, 3, sequence))
    assert report.competitors == 70277
    assert report.thresholds == (50, 100, 0)
    assert report.passed

    report = check_prop54(rho(2, 2, sequence))
    assert report.competitors == 5 and report.passed

    report = check_prop54(RleWord.from_runs([(2, 1), (1, 1)], 3))
    assert not report.passed
    assert report.counterexample == Word((1, 2), Alphabet(3))

    print("✓ dominance tests passed")


def test_sigma():
    assert apply_morphism_sigma(parse_word('123', 3)) == parse_word('312', 3)
    word = parse_word('1223312', 3)
    assert apply_morphism_sigma(apply_morphism_sigma(apply_morphism_sigma(word))) == word
    runs = RleWord.from_runs([(1, 4), (3, 2)], 3)
    assert apply_morphism_sigma(runs).runs == ((3, 4), (2, 2))

    try:
        apply_morphism_sigma(parse_word('14', 4))
        assert False, "sigma is ternary only"
    except UnsupportedOperationError:
        pass

    sequence = minimal_sequence(3)
    for p, n in [(1, 3), (7, 3), (1, 4), (3, 4)]:
        report = sigma_suffix_check(p, n, sequence)
        assert report.matches, f"sigma of the suffix of rho({p}, {n}) is not rho(r, {n - 1})"
    report = sigma_suffix_check(1, 3, sequence)
    assert report.offset == 1 + 50 - 5
    assert report.expected.runs == ((1, 5), (2, 2))

    try:
        sigma_suffix_check(1, 2, sequence)
        assert False, "The reduction needs n >= 3"
    except ValueError:
        pass

    print("✓ sigma tests passed")


def test_block_bound():
    report = block_bound_check([(1, 2), (3,)], [1, 2])
    assert (report.blocks, report.nb, report.applicable) == (2, 3, True)
    assert report.holds and report.bound == 4

    report = block_bound_check([(1, 2)], [3])
    assert not report.applicable and report.holds, "Repeated two-block factors fall outside the bound"

    report = block_bound_check([(1,), (2,), (1,)], [2, 0, 3])
    assert report.nb == 1

    try:
        block_bound_check([(1, 2, 3)], [1])
        assert False, "Factors have at most two blocks"
    except ValueError:
        pass

    print("✓ block bound tests passed")


def test_tower_words_stay_run_length():
    """Exponents far past 64 bits go through run arithmetic or are refused"""
    sequence = tower_sequence(2)
    word = rho(1, 3, sequence)
    assert word.length == 1 + 2 * 8 ** 64 + 2 * 8 ** 8
    assert nb(word) == 3

    report = sigma_suffix_check(1, 3, sequence)
    assert report.matches
    assert report.image.runs == ((1, 8 ** 32), (2, 2 * 8 ** 8))

    for check in (is_singleton, check_prop54):
        try:
            check(word)
            assert False, f"{check.__name__} cannot expand a word of {word.length} letters"
        except UnsupportedOperationError:
            pass

    print("✓ tower word tests passed")


if __name__ == "__main__":
    test_growth_sequences()
    test_rho()
    test_letter_factorization()
    test_is_singleton()
    test_prop54()
    test_sigma()
    test_block_bound()
    test_tower_words_stay_run_length()
    print("All tests passed!")
