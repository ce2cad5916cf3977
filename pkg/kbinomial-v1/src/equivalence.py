"""
Equivalence predicates: k-binomial equivalence, binary Parikh matrices and
the 2-switch relation with its closure
"""

import logging
from collections import deque
from dataclasses import dataclass
from typing import Set

import numpy as np

from utils import UnsupportedOperationError
from words import Word, WordLike, as_word, binom, parikh, signature_index

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ParikhMatrix:
    """Upper unitriangular 3x3 matrix of a binary word"""
    n1: int
    n2: int
    c12: int

    def as_array(self) -> np.ndarray:
        return np.array([
            [1, self.n1, self.c12],
            [0, 1, self.n2],
            [0, 0, 1],
        ], dtype=object)


def equivalent(u: WordLike, v: WordLike, k: int) -> bool:
    """True iff u and v share every binom(., x) with |x| <= k"""
    if k < 1:
        raise ValueError(f"Equivalence order must be positive, got {k}")
    u, v = as_word(u), as_word(v)
    if len(u) != len(v):
        return False
    m = max(u.m, v.m)
    if parikh(u.letters, m) != parikh(v.letters, m):
        return False
    # Length-1 entries are the Parikh vector, already compared
    for x in signature_index(m, k)[m:]:
        if binom(u, x) != binom(v, x):
            return False
    return True


def parikh_matrix(w: WordLike) -> ParikhMatrix:
    word = as_word(w, 2)
    if word.m != 2:
        raise UnsupportedOperationError(
            f"Parikh matrices are defined here for binary words only, got alphabet size {word.m}"
        )
    vector = parikh(word)
    return ParikhMatrix(vector[1], vector[2], binom(word, (1, 2)))


def switch_neighbors(w: WordLike) -> Set[Word]:
    """All words obtained by one rewrite x.ab.y.ba.z -> x.ba.y.ab.z

    Pairs (a, b) range over both orders, so the relation is symmetric.
    """
    word = as_word(w)
    letters = word.letters
    n = len(letters)
    neighbors = set()
    for i in range(n - 1):
        a, b = letters[i], letters[i + 1]
        if a == b:
            continue
        for j in range(i + 2, n - 1):
            if letters[j] == b and letters[j + 1] == a:
                rewritten = (
                    letters[:i] + (b, a) + letters[i + 2:j] + (a, b) + letters[j + 2:]
                )
                neighbors.add(Word(rewritten, word.alphabet))
    return neighbors


def switch_class(w: WordLike) -> Set[Word]:
    """Closure of w under switch_neighbors, breadth first"""
    word = as_word(w)
    visited = {word}
    frontier = deque([word])
    while frontier:
        current = frontier.popleft()
        for neighbor in switch_neighbors(current):
            if neighbor not in visited:
                visited.add(neighbor)
                frontier.append(neighbor)
    logger.debug(f"Switch class of {word} has {len(visited)} words")
    return visited
