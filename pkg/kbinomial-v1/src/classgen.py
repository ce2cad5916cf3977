"""
Generation of 2-binomial classes by adjacent exchanges

Every word is reached from its sorted abelian representative through
exchanges ab -> ba with a < b, and the number of exchanges of each type is
binom(w, ba). The class of w is the set of words reached with exactly those
per-pair counts.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Set, Tuple

from words import Word, WordLike, as_word, binom

logger = logging.getLogger(__name__)

Pair = Tuple[int, int]


@dataclass(frozen=True)
class ExchangeTrace:
    """Exchanges turning the sorted representative into a target word

    Each step (position, a, b) has a < b: the letters at 1-based positions
    position and position + 1 read ab before the step and ba after it.
    """
    target: Word
    steps: Tuple[Tuple[int, int, int], ...]
    totals: Dict[Pair, int] = field(hash=False)

    def replay(self) -> Word:
        letters = list(sorted_representative(self.target).letters)
        for position, a, b in self.steps:
            index = position - 1
            if (letters[index], letters[index + 1]) != (a, b):
                raise ValueError(f"Step {(position, a, b)} does not match {letters}")
            letters[index], letters[index + 1] = b, a
        return Word(tuple(letters), self.target.alphabet)


@dataclass(frozen=True)
class TreeEdge:
    parent: Word
    child: Word
    a: int
    b: int

    def to_record(self) -> Dict[str, object]:
        return {'parent': str(self.parent), 'child': str(self.child), 'a': self.a, 'b': self.b}


def sorted_representative(w: WordLike) -> Word:
    word = as_word(w)
    return Word(tuple(sorted(word.letters)), word.alphabet)


def pair_budgets(w: WordLike) -> Dict[Pair, int]:
    """binom(w, ba) for every pair a < b"""
    word = as_word(w)
    return {
        (a, b): binom(word, (b, a))
        for a in range(1, word.m + 1)
        for b in range(a + 1, word.m + 1)
    }


def exchange_trace(w: WordLike) -> ExchangeTrace:
    """Run the longest-common-prefix exchange algorithm from the sorted word to w"""
    word = as_word(w)
    target = word.letters
    current = sorted(target)
    steps: List[Tuple[int, int, int]] = []
    totals = {pair: 0 for pair in pair_budgets(word)}

    start = 0
    while tuple(current) != target:
        # Extend the common prefix
        while current[start] == target[start]:
            start += 1
        c, d = current[start], target[start]
        if c >= d:
            raise RuntimeError(f"Suffix {current[start:]} is not least in its abelian class")

        # Bubble the leftmost d of the suffix to the mismatch position
        j = current.index(d, start)
        for index in range(j - 1, start - 1, -1):
            a = current[index]
            steps.append((index + 1, a, d))
            totals[(a, d)] += 1
            current[index], current[index + 1] = d, a

    logger.debug(f"Exchange trace of {word}: {len(steps)} steps")
    return ExchangeTrace(word, tuple(steps), totals)


def _children(letters: Tuple[int, ...]) -> Iterator[Tuple[int, int, int, Tuple[int, ...]]]:
    """Exchanges ab -> ba with a < b, scanned left to right"""
    for index in range(len(letters) - 1):
        a, b = letters[index], letters[index + 1]
        if a < b:
            yield index, a, b, letters[:index] + (b, a) + letters[index + 2:]


def _search(word: Word, edges: List[TreeEdge] = None) -> Set[Tuple[int, ...]]:
    budgets = pair_budgets(word)
    depth = sum(budgets.values())
    pairs = list(budgets)
    position = {pair: i for i, pair in enumerate(pairs)}
    target = tuple(budgets[pair] for pair in pairs)

    root = sorted_representative(word).letters
    # Spend vectors depend only on the word, so one visit per word suffices
    level = {root: tuple(0 for _ in pairs)}
    for _ in range(depth):
        next_level: Dict[Tuple[int, ...], Tuple[int, ...]] = {}
        for letters, spent in level.items():
            for _, a, b, child in _children(letters):
                slot = position[(a, b)]
                if spent[slot] >= target[slot]:
                    continue
                if edges is not None:
                    edges.append(TreeEdge(Word(letters, word.alphabet), Word(child, word.alphabet), a, b))
                if child not in next_level:
                    child_spent = list(spent)
                    child_spent[slot] += 1
                    next_level[child] = tuple(child_spent)
        level = next_level

    return {letters for letters, spent in level.items() if spent == target}


def class2(w: WordLike) -> Set[Word]:
    """The full 2-binomial class of w"""
    word = as_word(w)
    found = _search(word)
    logger.debug(f"Class of {word} has {len(found)} words")
    return {Word(letters, word.alphabet) for letters in found}


def class2_tree(w: WordLike) -> List[TreeEdge]:
    """Edges explored by the budget-pruned search, in deterministic order"""
    word = as_word(w)
    edges: List[TreeEdge] = []
    _search(word, edges)
    return edges
