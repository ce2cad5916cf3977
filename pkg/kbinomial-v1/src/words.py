"""
Alphabets, words, Parikh vectors and subword binomial coefficients

Letters are the integers 1..m. Dense words count with checked 64-bit
arithmetic; run-length encoded words are exact at any size.
"""

import hashlib
import logging
from dataclasses import dataclass
from itertools import product
from math import comb, factorial
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
from sympy.utilities.iterables import multiset_permutations

from utils import (
    INT64_MAX,
    UnsupportedOperationError,
    WordParseError,
    check_int64,
    CoefficientOverflowError,
)

logger = logging.getLogger(__name__)

EMPTY_WORD_TEXT = 'ε'


@dataclass(frozen=True)
class Alphabet:
    """Ordered alphabet {1, ..., size}"""
    size: int

    def __post_init__(self):
        if self.size < 1:
            raise ValueError(f"Alphabet size must be at least 1, got {self.size}")

    @property
    def letters(self) -> range:
        return range(1, self.size + 1)

    def __contains__(self, letter: int) -> bool:
        return 1 <= letter <= self.size


def as_alphabet(alphabet: Union[Alphabet, int]) -> Alphabet:
    if isinstance(alphabet, Alphabet):
        return alphabet
    return Alphabet(int(alphabet))


@dataclass(frozen=True)
class Word:
    """Finite word over an Alphabet; ordered lexicographically"""
    letters: Tuple[int, ...]
    alphabet: Alphabet

    def __post_init__(self):
        for position, letter in enumerate(self.letters, start=1):
            if letter not in self.alphabet:
                raise ValueError(f"Letter {letter} at position {position} is outside 1..{self.alphabet.size}")

    @classmethod
    def of(cls, letters: Sequence[int], alphabet: Union[Alphabet, int]) -> 'Word':
        return cls(tuple(int(letter) for letter in letters), as_alphabet(alphabet))

    @property
    def m(self) -> int:
        return self.alphabet.size

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __getitem__(self, index):
        if isinstance(index, slice):
            return Word(self.letters[index], self.alphabet)
        return self.letters[index]

    def __add__(self, other: 'Word') -> 'Word':
        alphabet = self.alphabet if self.m >= other.m else other.alphabet
        return Word(self.letters + other.letters, alphabet)

    def __lt__(self, other: 'Word') -> bool:
        return self.letters < other.letters

    def __le__(self, other: 'Word') -> bool:
        return self.letters <= other.letters

    def __str__(self) -> str:
        return format_word(self.letters, self.m)


WordLike = Union[Word, Sequence[int]]


def letters_of(w: WordLike) -> Tuple[int, ...]:
    if isinstance(w, Word):
        return w.letters
    return tuple(w)


def as_word(w: WordLike, m: Optional[int] = None) -> Word:
    """Coerce a letter sequence to a Word, inferring the alphabet when m is not given"""
    if isinstance(w, Word):
        return w
    letters = tuple(w)
    if m is None:
        m = max(letters, default=1)
    return Word.of(letters, m)


def format_word(letters: Sequence[int], m: int) -> str:
    """Digits for m <= 9, comma-separated integers otherwise"""
    if m <= 9:
        return ''.join(str(letter) for letter in letters)
    return ','.join(str(letter) for letter in letters)


def parse_word(text: str, alphabet: Union[Alphabet, int]) -> Word:
    """Parse a digit string (m <= 9) or a comma-separated list (m > 9)"""
    alphabet = as_alphabet(alphabet)
    stripped = text.strip()
    if stripped in ('', EMPTY_WORD_TEXT):
        return Word((), alphabet)

    if alphabet.size <= 9:
        tokens = list(stripped)
    else:
        tokens = [token.strip() for token in stripped.split(',')]

    letters = []
    for position, token in enumerate(tokens, start=1):
        if not token.isdigit():
            raise WordParseError(text, position, f"{token!r} is not a letter")
        letter = int(token)
        if letter not in alphabet:
            raise WordParseError(text, position, f"letter {letter} is outside 1..{alphabet.size}")
        letters.append(letter)
    return Word(tuple(letters), alphabet)


@dataclass(frozen=True)
class ParikhVector:
    """Letter occurrence counts; counts[a-1] = |w|_a"""
    counts: Tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.counts)

    @property
    def total(self) -> int:
        return sum(self.counts)

    def __getitem__(self, letter: int) -> int:
        return self.counts[letter - 1]

    def __str__(self) -> str:
        return '(' + ','.join(str(count) for count in self.counts) + ')'


def parikh(w: WordLike, m: Optional[int] = None) -> ParikhVector:
    word = as_word(w, m)
    counts = [0] * word.m
    for letter in word.letters:
        counts[letter - 1] += 1
    return ParikhVector(tuple(counts))


def multinomial(counts: Sequence[int]) -> int:
    """Size of the abelian class with the given Parikh vector"""
    result = factorial(sum(counts))
    for count in counts:
        result //= factorial(count)
    return result


def binom(u: WordLike, v: WordLike) -> int:
    """Number of occurrences of v as a scattered subword of u

    Rolling-row form of the (|u|+1) x (|v|+1) prefix table. Every entry is
    checked against the signed 64-bit range.
    """
    u_letters = letters_of(u)
    v_letters = letters_of(v)
    t = len(v_letters)
    if t == 0:
        return 1
    counts = [1] + [0] * t
    for letter in u_letters:
        for j in range(t, 0, -1):
            if v_letters[j - 1] == letter:
                counts[j] += counts[j - 1]
                if counts[j] > INT64_MAX:
                    raise CoefficientOverflowError(
                        f"binom(u, v) with |u| = {len(u_letters)}, v = {list(v_letters)}"
                    )
    return counts[t]


def signature_index(m: int, k: int) -> List[Tuple[int, ...]]:
    """All words of length 1..k, length first then lexicographic"""
    return [x for length in range(1, k + 1) for x in product(range(1, m + 1), repeat=length)]


@dataclass(frozen=True)
class BinomialSignature:
    """All coefficients binom(w, x) for 1 <= |x| <= k in canonical order"""
    m: int
    k: int
    coefficients: Tuple[int, ...]

    def as_dict(self) -> Dict[str, int]:
        return {
            format_word(x, self.m): value
            for x, value in zip(signature_index(self.m, self.k), self.coefficients)
        }

    def digest(self) -> str:
        payload = ','.join(str(value) for value in self.coefficients)
        return hashlib.sha1(f"{self.m}:{self.k}:{payload}".encode()).hexdigest()[:16]


def signature(w: WordLike, k: int, m: Optional[int] = None) -> BinomialSignature:
    if k < 1:
        raise ValueError(f"Signature order must be positive, got {k}")
    word = as_word(w, m)
    values = tuple(binom(word, x) for x in signature_index(word.m, k))
    return BinomialSignature(word.m, k, values)


def check_dense_bound(length: int, k: int):
    """Raise before a batch computation whose coefficients could overflow"""
    worst = max((comb(length, t) for t in range(1, k + 1)), default=0)
    check_int64(worst, f"binom(|u|={length}, |v|<={k}) upper bound {worst}")


def coefficient_matrix(words: np.ndarray, patterns: Sequence[Sequence[int]]) -> np.ndarray:
    """Coefficients binom(row, x) for every row of a block of equal-length words

    Prefix-count arrays are shared between patterns with a common prefix:
    P_xa[:, p+1] = P_xa[:, p] + [row[p] == a] * P_x[:, p].
    """
    words = np.asarray(words)
    if words.ndim != 2:
        raise ValueError(f"Expected a 2-D block of words, got shape {words.shape}")
    rows, length = words.shape
    check_dense_bound(length, max((len(x) for x in patterns), default=0))

    masks = {}
    prefix_counts = {(): np.ones((rows, length + 1), dtype=np.int64)}

    def counts_for(x: Tuple[int, ...]) -> np.ndarray:
        if x not in prefix_counts:
            parent = counts_for(x[:-1])
            letter = x[-1]
            if letter not in masks:
                masks[letter] = (words == letter)
            step = np.where(masks[letter], parent[:, :-1], 0)
            result = np.zeros((rows, length + 1), dtype=np.int64)
            np.cumsum(step, axis=1, out=result[:, 1:])
            prefix_counts[x] = result
        return prefix_counts[x]

    out = np.empty((rows, len(patterns)), dtype=np.int64)
    for column, x in enumerate(patterns):
        out[:, column] = counts_for(tuple(x))[:, length]
    return out


def signature_matrix(words: np.ndarray, m: int, k: int) -> np.ndarray:
    """Row-wise signatures of a block of equal-length words, canonical column order"""
    return coefficient_matrix(words, signature_index(m, k))


def all_words(m: int, n: int) -> Iterator[Tuple[int, ...]]:
    """All words of length n in lexicographic order"""
    return product(range(1, m + 1), repeat=n)


@dataclass(frozen=True)
class RleWord:
    """Run-length encoded word with arbitrary-precision exponents

    Construct through from_runs to obtain the canonical form.
    """
    runs: Tuple[Tuple[int, int], ...]
    alphabet: Alphabet

    @classmethod
    def from_runs(cls, runs: Sequence[Tuple[int, int]], alphabet: Union[Alphabet, int]) -> 'RleWord':
        alphabet = as_alphabet(alphabet)
        merged: List[List[int]] = []
        for letter, exponent in runs:
            if letter not in alphabet:
                raise ValueError(f"Run letter {letter} is outside 1..{alphabet.size}")
            if exponent < 1:
                raise ValueError(f"Run exponent must be positive, got {exponent} for letter {letter}")
            if merged and merged[-1][0] == letter:
                merged[-1][1] += exponent
            else:
                merged.append([letter, exponent])
        return cls(tuple((letter, exponent) for letter, exponent in merged), alphabet)

    @property
    def m(self) -> int:
        return self.alphabet.size

    @property
    def length(self) -> int:
        return sum(exponent for _, exponent in self.runs)

    def parikh(self) -> ParikhVector:
        counts = [0] * self.m
        for letter, exponent in self.runs:
            counts[letter - 1] += exponent
        return ParikhVector(tuple(counts))

    def expand(self, limit: int = 10_000_000) -> Word:
        """Dense word; refuses expansions longer than limit letters"""
        if self.length > limit:
            raise UnsupportedOperationError(
                f"Dense expansion of a {self.length}-letter run-length word exceeds {limit} letters"
            )
        letters: List[int] = []
        for letter, exponent in self.runs:
            letters.extend([letter] * exponent)
        return Word(tuple(letters), self.alphabet)

    def suffix(self, offset: int) -> 'RleWord':
        """Drop the first offset letters"""
        if offset < 0 or offset > self.length:
            raise ValueError(f"Offset {offset} outside 0..{self.length}")
        remaining = []
        for letter, exponent in self.runs:
            if offset >= exponent:
                offset -= exponent
                continue
            remaining.append((letter, exponent - offset))
            offset = 0
        return RleWord.from_runs(remaining, self.alphabet)

    def __str__(self) -> str:
        if not self.runs:
            return EMPTY_WORD_TEXT
        return ' '.join(f"{letter}^{exponent}" for letter, exponent in self.runs)


def to_rle(w: WordLike, m: Optional[int] = None) -> RleWord:
    word = as_word(w, m)
    return RleWord.from_runs([(letter, 1) for letter in word.letters], word.alphabet)


def rle_binom(w: RleWord, v: WordLike) -> int:
    """Exact binom(w, v) for |v| <= 2, computed run by run"""
    pattern = letters_of(v)
    if len(pattern) > 2:
        raise UnsupportedOperationError(
            f"Run-length coefficients support |v| <= 2, got |v| = {len(pattern)}"
        )
    if not pattern:
        return 1

    seen = [0] * (max(w.m, max(pattern)) + 1)
    total = 0
    if len(pattern) == 1:
        return sum(exponent for letter, exponent in w.runs if letter == pattern[0])

    first, second = pattern
    for letter, exponent in w.runs:
        if letter == second:
            total += exponent * seen[first]
            if first == second:
                total += comb(exponent, 2)
        seen[letter] += exponent
    return total


def abelian_class(counts: Sequence[int]) -> Iterator[Tuple[int, ...]]:
    """All words with the given Parikh vector, in lexicographic order"""
    letters = [letter for letter, count in enumerate(counts, start=1) for _ in range(count)]
    for permutation in multiset_permutations(letters):
        yield tuple(permutation)
