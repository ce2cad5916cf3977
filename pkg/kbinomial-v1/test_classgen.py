#!/usr/bin/env python3

import sys
import os
from collections import defaultdict
sys.path.append(os.path.join(os.path.dirname(__file__), 'src'))

from words import Alphabet, Word, abelian_class, all_words, binom, parse_word, signature
from equivalence import equivalent
from classgen import class2, class2_tree, exchange_trace, pair_budgets, sorted_representative


def _w(text: str, m: int = 3) -> Word:
    return parse_word(text, m)


def test_sorted_representative():
    assert sorted_representative(_w('1223312')) == _w('1122233')
    assert sorted_representative(_w('')) == _w('')
    assert sorted_representative(_w('321')) == _w('123')
    print("✓ sorted_representative tests passed")


def test_exchange_trace_examples():
    trace = exchange_trace(_w('1122233'))
    assert trace.steps == (), "A sorted word needs no exchange"

    trace = exchange_trace(_w('1223312'))
    assert trace.totals == {(1, 2): 2, (1, 3): 2, (2, 3): 2}
    assert trace.replay() == _w('1223312')

    trace = exchange_trace(_w('21', 2))
    assert trace.steps == ((1, 1, 2),)
    assert trace.totals == {(1, 2): 1}

    print("✓ exchange_trace example tests passed")


def test_exchange_trace_exhaustive():
    """Replay reproduces the word and totals equal binom(w, ba)"""
    for n in range(9):
        for letters in all_words(3, n):
            w = Word(letters, Alphabet(3))
            trace = exchange_trace(w)
            assert trace.replay() == w, f"Replay of {w} failed"
            assert trace.totals == pair_budgets(w), f"Totals of {w} differ from binom(w, ba)"
            for _, a, b in trace.steps:
                assert a < b
    print("✓ exhaustive exchange_trace tests passed")


def test_sorted_word_maximizes_coefficients():
    pairs = [(a, b) for a in (1, 2, 3) for b in (a + 1, a + 2) if b <= 3]
    for counts in [(2, 2, 1), (1, 2, 2), (2, 1, 2), (3, 2, 1)]:
        top = tuple(binom(sorted_representative(next(abelian_class(counts))), pair) for pair in pairs)
        for letters in abelian_class(counts):
            values = tuple(binom(letters, pair) for pair in pairs)
            assert values <= top, f"{letters} beats the sorted word"
    print("✓ lexicographic maximality tests passed")


def test_class2_examples():
    assert class2(_w('1223312')) == {_w('1223312'), _w('2311223')}
    assert class2(_w('1111', 1)) == {_w('1111', 1)}
    assert class2(_w('1221', 2)) == {_w('1221', 2), _w('2112', 2)}
    assert class2(_w('')) == {_w('')}
    print("✓ class2 example tests passed")


def test_class2_matches_brute_force():
    """class2 equals the signature class inside the abelian class, ternary words up to length 8"""
    for n in range(9):
        classes = defaultdict(set)
        for letters in all_words(3, n):
            classes[signature(letters, 2, 3)].add(Word(letters, Alphabet(3)))
        for members in classes.values():
            w = min(members)
            assert class2(w) == members, f"class2({w}) disagrees with brute force"
    print("✓ class2 oracle tests passed")


def test_class2_tree():
    w = _w('1223312')
    edges = class2_tree(w)
    assert edges, "The search explores at least one exchange"
    assert edges[0].parent == sorted_representative(w)
    assert edges == class2_tree(w), "Edge order is deterministic"

    # Each exchange ab -> ba lowers binom(., ab) by one and leaves other pairs alone
    pairs = list(pair_budgets(w))
    for edge in edges:
        for a, b in pairs:
            delta = binom(edge.parent, (a, b)) - binom(edge.child, (a, b))
            assert delta == (1 if (a, b) == (edge.a, edge.b) else 0)

    children = {edge.child for edge in edges}
    assert class2(w) <= children
    assert edges[0].to_record() == {'parent': '1122233', 'child': str(edges[0].child),
                                    'a': edges[0].a, 'b': edges[0].b}
    print("✓ class2_tree tests passed")


def test_class2_members_are_equivalent():
    for text in ['12321', '3121323', '231312', '1213123']:
        w = _w(text)
        for v in class2(w):
            assert equivalent(v, w, 2)
    print("✓ class2 membership tests passed")


if __name__ == "__main__":
    test_sorted_representative()
    test_exchange_trace_examples()
    test_exchange_trace_exhaustive()
    test_sorted_word_maximizes_coefficients()
    test_class2_examples()
    test_class2_matches_brute_force()
    test_class2_tree()
    test_class2_members_are_equivalent()
    print("All tests passed!")
