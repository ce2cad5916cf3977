#!/usr/bin/env python3

import sys
import os
import random
from collections import defaultdict
sys.path.append(os.path.join(os.path.dirname(__file__), 'src'))

from utils import UnsupportedOperationError
from words import Alphabet, Word, all_words, parse_word, signature
from equivalence import equivalent, parikh_matrix, switch_class, switch_neighbors


def _w(text: str, m: int = 3) -> Word:
    return parse_word(text, m)


def test_equivalent():
    assert equivalent(_w('1223312'), _w('2311223'), 2)
    assert equivalent(_w('12321'), _w('21312'), 2)
    assert not equivalent(_w('12'), _w('21'), 2)
    assert not equivalent(_w('12'), _w('123'), 1), "Different lengths are never equivalent"
    assert equivalent(_w('12'), _w('21'), 1), "Order 1 is abelian equivalence"

    rng = random.Random(23)
    for _ in range(100):
        u = tuple(rng.randint(1, 3) for _ in range(rng.randint(0, 8)))
        for k in (1, 2, 3):
            assert equivalent(u, u, k)

    try:
        equivalent(_w('1'), _w('1'), 0)
        assert False, "Order 0 should be rejected"
    except ValueError:
        pass

    print("✓ equivalent tests passed")


def test_equivalent_refines_and_is_permutation_invariant():
    rng = random.Random(29)
    permutation = {1: 3, 2: 1, 3: 2}
    for _ in range(400):
        n = rng.randint(0, 7)
        u = tuple(rng.randint(1, 3) for _ in range(n))
        v = tuple(sorted(u)) if rng.random() < 0.3 else tuple(rng.sample(u, len(u)))
        u, v = Word(u, Alphabet(3)), Word(v, Alphabet(3))
        for k in (1, 2):
            if equivalent(u, v, k + 1):
                assert equivalent(u, v, k), f"Order {k + 1} must refine order {k}"
        pu = Word(tuple(permutation[a] for a in u.letters), Alphabet(3))
        pv = Word(tuple(permutation[a] for a in v.letters), Alphabet(3))
        assert equivalent(u, v, 2) == equivalent(pu, pv, 2)
    print("✓ refinement and permutation tests passed")


def test_parikh_matrix():
    assert parikh_matrix(_w('12', 2)) == parikh_matrix((1, 2))
    matrix = parikh_matrix(_w('12', 2))
    assert (matrix.n1, matrix.n2, matrix.c12) == (1, 1, 1)
    matrix = parikh_matrix(_w('21', 2))
    assert (matrix.n1, matrix.n2, matrix.c12) == (1, 1, 0)
    matrix = parikh_matrix(_w('2121', 2))
    assert (matrix.n1, matrix.n2, matrix.c12) == (2, 2, 1)
    assert matrix.as_array().tolist() == [[1, 2, 1], [0, 1, 2], [0, 0, 1]]

    try:
        parikh_matrix(_w('123', 3))
        assert False, "Ternary words have no Parikh matrix here"
    except UnsupportedOperationError:
        pass

    print("✓ parikh_matrix tests passed")


def test_switch_neighbors():
    assert _w('2112', 2) in switch_neighbors(_w('1221', 2))
    assert switch_neighbors(_w('11', 2)) == set()
    # Scan of every (i, j) with letters[i:i+2] = ab and letters[j:j+2] = ba, j >= i + 2
    assert switch_neighbors(_w('121212', 2)) == {_w('211122', 2), _w('112221', 2)}

    # One step is symmetric
    for letters in all_words(3, 6):
        w = Word(letters, Alphabet(3))
        for neighbor in switch_neighbors(w):
            assert w in switch_neighbors(neighbor), f"{w} -> {neighbor} has no way back"

    print("✓ switch_neighbors tests passed")


def test_switch_class():
    assert switch_class(_w('1', 1)) == {_w('1', 1)}
    assert _w('2311223') not in switch_class(_w('1223312')), "The switch closure is strictly finer than ~2"

    # The closure refines 2-binomial equivalence
    for n in range(7):
        for letters in all_words(3, n):
            w = Word(letters, Alphabet(3))
            for v in switch_class(w):
                assert equivalent(v, w, 2)

    print("✓ switch_class tests passed")


def test_binary_characterizations_agree():
    """Same Parikh matrix, 2-binomial equivalence and switch closure coincide on binary words"""
    for n in range(9):
        fibers = defaultdict(set)
        classes = defaultdict(set)
        for letters in all_words(2, n):
            w = Word(letters, Alphabet(2))
            fibers[parikh_matrix(w)].add(w)
            classes[signature(w, 2)].add(w)

        assert sorted(map(sorted, fibers.values())) == sorted(map(sorted, classes.values()))
        for fiber in fibers.values():
            w = min(fiber)
            assert switch_class(w) == fiber, f"Switch closure of {w} differs from its Parikh-matrix fiber"

    print("✓ binary characterization tests passed")


if __name__ == "__main__":
    test_equivalent()
    test_equivalent_refines_and_is_permutation_invariant()
    test_parikh_matrix()
    test_switch_neighbors()
    test_switch_class()
    test_binary_characterizations_agree()
    print("All tests passed!")
