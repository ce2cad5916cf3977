"""
Signed words over letters and their inverses, bracket coefficients, the
coordinate map phi into Z^(m^2) and commutator normal forms

phi(u) == phi(v) is necessary for two signed words to be equal in the free
nil-2 group; on plain words it is also sufficient and coincides with
2-binomial equivalence.
"""

import logging
import re
from dataclasses import dataclass
from itertools import product
from typing import Dict, List, Sequence, Tuple, Union

from utils import UnsupportedOperationError, WordParseError
from words import (
    Alphabet,
    ParikhVector,
    Word,
    WordLike,
    as_alphabet,
    as_word,
    binom,
    letters_of,
    parikh,
)

logger = logging.getLogger(__name__)

Token = Tuple[int, int]
_TOKEN_PATTERN = re.compile(r"^(\d+)(')?$")


@dataclass(frozen=True)
class SignedWord:
    """Sequence of (letter, sign) tokens, sign +1 for a letter and -1 for its inverse"""
    tokens: Tuple[Token, ...]
    alphabet: Alphabet

    def __post_init__(self):
        for position, (letter, sign) in enumerate(self.tokens, start=1):
            if letter not in self.alphabet or sign not in (1, -1):
                raise ValueError(f"Invalid token {(letter, sign)} at position {position}")

    @classmethod
    def from_word(cls, w: WordLike) -> 'SignedWord':
        word = as_word(w)
        return cls(tuple((letter, 1) for letter in word.letters), word.alphabet)

    @classmethod
    def letter(cls, letter: int, sign: int, alphabet: Union[Alphabet, int]) -> 'SignedWord':
        return cls(((letter, sign),), as_alphabet(alphabet))

    @property
    def m(self) -> int:
        return self.alphabet.size

    def __len__(self) -> int:
        return len(self.tokens)

    def __add__(self, other: 'SignedWord') -> 'SignedWord':
        alphabet = self.alphabet if self.m >= other.m else other.alphabet
        return SignedWord(self.tokens + other.tokens, alphabet)

    def inverse(self) -> 'SignedWord':
        return SignedWord(tuple((letter, -sign) for letter, sign in reversed(self.tokens)), self.alphabet)

    def __pow__(self, exponent: int) -> 'SignedWord':
        base = self if exponent >= 0 else self.inverse()
        return SignedWord(base.tokens * abs(exponent), self.alphabet)

    def __str__(self) -> str:
        return '.'.join(f"{letter}'" if sign < 0 else str(letter) for letter, sign in self.tokens)


def parse_signed(text: str, alphabet: Union[Alphabet, int]) -> SignedWord:
    """Parse dot-separated tokens; a trailing prime marks an inverse letter"""
    alphabet = as_alphabet(alphabet)
    stripped = text.strip()
    if stripped in ('', 'ε'):
        return SignedWord((), alphabet)

    tokens = []
    for position, token in enumerate(stripped.split('.'), start=1):
        match = _TOKEN_PATTERN.match(token.strip())
        if not match:
            raise WordParseError(text, position, f"malformed token {token!r}")
        letter = int(match.group(1))
        if letter not in alphabet:
            raise WordParseError(text, position, f"letter {letter} is outside 1..{alphabet.size}")
        tokens.append((letter, -1 if match.group(2) else 1))
    return SignedWord(tuple(tokens), alphabet)


def commutator(x: SignedWord, y: SignedWord) -> SignedWord:
    """[x, y] = x^-1 y^-1 x y"""
    return x.inverse() + y.inverse() + x + y


def _token_binom(tokens: Sequence[Token], pattern: Sequence[Token]) -> int:
    """Plain subword count over the doubled alphabet"""
    t = len(pattern)
    counts = [1] + [0] * t
    for token in tokens:
        for j in range(t, 0, -1):
            if pattern[j - 1] == token:
                counts[j] += counts[j - 1]
    return counts[t]


def bracket(u: Union[SignedWord, WordLike], v: WordLike) -> int:
    """Signed sum of binom(u, v_1^e_1 ... v_t^e_t) over all sign patterns, |v| <= 2"""
    if not isinstance(u, SignedWord):
        u = SignedWord.from_word(u)
    pattern = letters_of(v)
    if len(pattern) > 2:
        raise UnsupportedOperationError(f"Bracket coefficients support |v| <= 2, got |v| = {len(pattern)}")

    total = 0
    for signs in product((1, -1), repeat=len(pattern)):
        weight = 1
        for sign in signs:
            weight *= sign
        total += weight * _token_binom(u.tokens, tuple(zip(pattern, signs)))
    return total


def phi_index(m: int) -> List[Tuple[int, ...]]:
    """Single letters, then two-distinct-letter words in lexicographic order"""
    singles = [(a,) for a in range(1, m + 1)]
    pairs = [(a, b) for a in range(1, m + 1) for b in range(1, m + 1) if a != b]
    return singles + pairs


@dataclass(frozen=True)
class PhiVector:
    m: int
    values: Tuple[int, ...]

    @property
    def singles(self) -> Tuple[int, ...]:
        return self.values[:self.m]

    @property
    def pairs(self) -> Tuple[int, ...]:
        return self.values[self.m:]

    def __str__(self) -> str:
        return '(' + ','.join(str(value) for value in self.values) + ')'


def phi(w: Union[SignedWord, WordLike]) -> PhiVector:
    if not isinstance(w, SignedWord):
        w = SignedWord.from_word(w)
    return PhiVector(w.m, tuple(bracket(w, x) for x in phi_index(w.m)))


def phi_equal(u: Union[SignedWord, WordLike], v: Union[SignedWord, WordLike]) -> bool:
    """Necessary condition for equality in the free nil-2 group

    Sufficient only when both arguments are plain words.
    """
    return phi(u).values == phi(v).values


@dataclass(frozen=True)
class NilNormalForm:
    """Parikh vector plus the exponent of each commutator [b, a], a < b"""
    parikh: ParikhVector
    exponents: Tuple[Tuple[Tuple[int, int], int], ...]

    def as_dict(self) -> Dict[str, object]:
        return {
            'parikh': list(self.parikh.counts),
            'exponents': {f"[{b},{a}]": value for (b, a), value in self.exponents},
        }

    def to_signed_word(self) -> SignedWord:
        """Sorted word followed by the commutator powers"""
        alphabet = Alphabet(self.parikh.m)
        letters = tuple(letter for letter in alphabet.letters for _ in range(self.parikh[letter]))
        result = SignedWord.from_word(Word(letters, alphabet))
        for (b, a), exponent in self.exponents:
            bracket_ba = commutator(SignedWord.letter(b, 1, alphabet), SignedWord.letter(a, 1, alphabet))
            result = result + bracket_ba ** exponent
        return result

    def __str__(self) -> str:
        head = ' '.join(f"{letter}^{count}" for letter, count in enumerate(self.parikh.counts, start=1) if count)
        tail = ' '.join(f"[{b},{a}]^{value}" for (b, a), value in self.exponents if value)
        return ' '.join(part for part in (head, tail) if part) or 'ε'


def nil_normal_form(w: WordLike) -> NilNormalForm:
    word = as_word(w)
    exponents = tuple(
        ((b, a), binom(word, (b, a)))
        for a in range(1, word.m + 1)
        for b in range(a + 1, word.m + 1)
    )
    return NilNormalForm(parikh(word), exponents)
