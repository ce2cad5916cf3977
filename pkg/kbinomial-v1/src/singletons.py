"""
Singleton classes built from fast-growing sequences

Growth sequences, the run-length words rho(p, n, s) built from them, block
counts, and exhaustive singleton checks over abelian classes. All sequence
arithmetic is exact.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import isqrt
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from config import ToolkitConfig, resolve_budget
from utils import (
    EmptyWordError,
    SequenceError,
    UnsupportedOperationError,
    check_budget,
    chunked,
    progress,
    record_enumerated,
    scan_report,
)
from words import (
    Alphabet,
    RleWord,
    Word,
    WordLike,
    abelian_class,
    as_word,
    coefficient_matrix,
    multinomial,
    rle_binom,
    signature_matrix,
    to_rle,
)

logger = logging.getLogger(__name__)

SIGMA = {1: 3, 2: 1, 3: 2}
DOMINANCE_PATTERNS = ((1, 2), (2, 3), (3, 1))


@dataclass(frozen=True)
class GrowthSequence:
    """Positive integers s_1, ..., s_N, indexed from 1"""
    terms: Tuple[int, ...]

    def __post_init__(self):
        for index, term in enumerate(self.terms, start=1):
            if term < 1:
                raise ValueError(f"Sequence term s_{index} must be positive, got {term}")

    def __len__(self) -> int:
        return len(self.terms)

    def __getitem__(self, n: int) -> int:
        if not 1 <= n <= len(self.terms):
            raise SequenceError(f"Term s_{n} requested from a sequence of {len(self.terms)} terms")
        return self.terms[n - 1]

    def partial_sum(self, n: int) -> int:
        """s_1 + ... + s_n; zero for n <= 0"""
        return sum(self.terms[:max(n, 0)])

    def __str__(self) -> str:
        return '(' + ', '.join(str(term) for term in self.terms) + ')'


@dataclass(frozen=True)
class TermCheck:
    n: int
    term: int
    root: Optional[int]
    d1: bool
    d2: bool
    d3: bool

    @property
    def passed(self) -> bool:
        return self.d1 and self.d2 and self.d3

    def to_record(self) -> Dict[str, object]:
        return {'n': self.n, 'term': self.term, 'root': self.root, 'd1': self.d1, 'd2': self.d2, 'd3': self.d3}


@dataclass(frozen=True)
class SequenceReport:
    sequence: GrowthSequence
    checks: Tuple[TermCheck, ...]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def first_failure(self) -> Optional[TermCheck]:
        return next((check for check in self.checks if not check.passed), None)


@dataclass(frozen=True)
class Prop54Report:
    target: RleWord
    competitors: int
    thresholds: Tuple[int, int, int]
    counterexample: Optional[Word] = None

    @property
    def passed(self) -> bool:
        return self.counterexample is None


@dataclass(frozen=True)
class SigmaSuffixReport:
    p: int
    n: int
    offset: int
    image: RleWord
    expected: RleWord

    @property
    def matches(self) -> bool:
        return self.image == self.expected


@dataclass(frozen=True)
class BlockBoundReport:
    blocks: int
    nb: int
    applicable: bool

    @property
    def bound(self) -> int:
        return 2 * self.blocks

    @property
    def holds(self) -> bool:
        return not self.applicable or self.nb <= self.bound


def _half_root(term: int) -> Optional[int]:
    """sqrt(term / 2) when it is an integer"""
    if term % 2:
        return None
    half = term // 2
    root = isqrt(half)
    return root if root * root == half else None


def _check_term(sequence: GrowthSequence, n: int) -> TermCheck:
    term = sequence[n]
    root = _half_root(term)
    if root is None:
        return TermCheck(n, term, None, False, False, False)
    d2 = term > (root + sequence.partial_sum(n - 1)) ** 2
    d3 = root > sequence.partial_sum(n - 1) * sequence.partial_sum(n - 3)
    return TermCheck(n, term, root, True, d2, d3)


def validate_sequence(s: Union[GrowthSequence, Sequence[int]]) -> SequenceReport:
    sequence = s if isinstance(s, GrowthSequence) else GrowthSequence(tuple(s))
    checks = tuple(_check_term(sequence, n) for n in range(1, len(sequence) + 1))
    report = SequenceReport(sequence, checks)
    failure = report.first_failure()
    if failure is not None:
        logger.debug(f"Sequence {sequence} fails at n={failure.n}")
    return report


def minimal_sequence(N: int) -> GrowthSequence:
    """Least terms 2t^2 meeting the growth conditions, chosen greedily"""
    if N < 1:
        raise ValueError(f"Sequence length must be at least 1, got {N}")
    terms: List[int] = []
    for n in range(1, N + 1):
        previous = sum(terms)
        product_bound = previous * sum(terms[:max(n - 3, 0)])
        # 2t^2 > (t + S)^2 exactly when t > S(1 + sqrt 2)
        t = max(1, product_bound + 1, previous + isqrt(2 * previous * previous))
        while not (2 * t * t > (t + previous) ** 2 and t > product_bound):
            t += 1
        terms.append(2 * t * t)
    return GrowthSequence(tuple(terms))


def tower_sequence(N: int) -> GrowthSequence:
    """s_n = 2 * 8^(8^n) for n = 1..N"""
    if N < 1:
        raise ValueError(f"Sequence length must be at least 1, got {N}")
    return GrowthSequence(tuple(2 * 8 ** (8 ** n) for n in range(1, N + 1)))


def rho(p: int, n: int, s: Union[GrowthSequence, Sequence[int]]) -> RleWord:
    """1^p 2^s_{n-1} 3^s_{n-2} 1^s_{n-3} ... with letters cycling 1, 2, 3"""
    sequence = s if isinstance(s, GrowthSequence) else GrowthSequence(tuple(s))
    if p < 1:
        raise ValueError(f"p must be positive, got {p}")
    if n < 2:
        raise ValueError(f"n must be at least 2, got {n}")
    if len(sequence) < n - 1:
        raise SequenceError(f"rho(p, {n}) needs {n - 1} sequence terms, got {len(sequence)}")
    runs = [(1, p)] + [(j % 3 + 1, sequence[n - j]) for j in range(1, n)]
    return RleWord.from_runs(runs, Alphabet(3))


def letter_factorization(w: Union[RleWord, WordLike]) -> RleWord:
    """Maximal runs of w"""
    runs = w if isinstance(w, RleWord) else to_rle(w)
    if not runs.runs:
        raise EmptyWordError("Letter factorization is defined for non-empty words only")
    return runs


def nb(w: Union[RleWord, WordLike]) -> int:
    """Number of blocks of w"""
    return len(letter_factorization(w).runs)


def apply_morphism_sigma(w: Union[RleWord, WordLike]) -> Union[RleWord, Word]:
    """Letterwise 1 -> 3, 2 -> 1, 3 -> 2"""
    alphabet = Alphabet(3)
    if isinstance(w, RleWord):
        if w.m > 3:
            raise UnsupportedOperationError(f"sigma is defined on ternary words, got alphabet size {w.m}")
        return RleWord.from_runs([(SIGMA[letter], exponent) for letter, exponent in w.runs], alphabet)
    word = as_word(w)
    if word.m > 3:
        raise UnsupportedOperationError(f"sigma is defined on ternary words, got alphabet size {word.m}")
    return Word(tuple(SIGMA[letter] for letter in word.letters), alphabet)


def sigma_suffix_check(p: int, n: int, s: Union[GrowthSequence, Sequence[int]]) -> SigmaSuffixReport:
    """Compare sigma of a suffix of rho(p, n) with rho(sqrt(s_{n-1}/2), n-1)"""
    sequence = s if isinstance(s, GrowthSequence) else GrowthSequence(tuple(s))
    if n < 3:
        raise ValueError(f"The suffix reduction needs n >= 3, got {n}")
    word = rho(p, n, sequence)
    root = _half_root(sequence[n - 1])
    if root is None:
        raise SequenceError(f"s_{n - 1} = {sequence[n - 1]} is not twice a square")
    offset = p + sequence[n - 1] - root
    image = apply_morphism_sigma(word.suffix(offset))
    return SigmaSuffixReport(p, n, offset, image, rho(root, n - 1, sequence))


def block_bound_check(blocks: Sequence[WordLike], exponents: Sequence[int]) -> BlockBoundReport:
    """nb of z_1^e_1 ... z_q^e_q against 2q, for factors with at most two blocks"""
    if len(blocks) != len(exponents):
        raise ValueError(f"Got {len(blocks)} factors but {len(exponents)} exponents")
    words = [as_word(block) for block in blocks]
    letters: List[int] = []
    applicable = True
    for position, (word, exponent) in enumerate(zip(words, exponents), start=1):
        if exponent < 0:
            raise ValueError(f"Exponent {exponent} of factor {position} is negative")
        blocks_in_factor = nb(word)
        if blocks_in_factor > 2:
            raise ValueError(f"Factor {position} ({word}) has {blocks_in_factor} blocks, at most 2 allowed")
        if blocks_in_factor == 2 and exponent >= 2:
            applicable = False
        letters.extend(word.letters * exponent)
    count = nb(letters) if letters else 0
    return BlockBoundReport(len(words), count, applicable)


def _dense(w: Union[RleWord, WordLike]) -> Word:
    if isinstance(w, RleWord):
        return w.expand()
    return as_word(w)


def _scan_abelian_class(word: Word, what: str, budget: Optional[int],
                        block_hits: Callable[[np.ndarray], np.ndarray], stop_after: int) -> List[Tuple[int, ...]]:
    """Rows of the abelian class of word flagged by block_hits, in lexicographic order

    Batches of blocks run in a thread pool; scanning stops after the first
    batch that brings the number of hits to stop_after.
    """
    counts = [0] * word.m
    for letter in word.letters:
        counts[letter - 1] += 1
    size = multinomial(counts)
    check_budget(what, size, resolve_budget(budget))

    config = ToolkitConfig()
    hits: List[Tuple[int, ...]] = []

    def run_block(chunk: List[Tuple[int, ...]]) -> List[Tuple[int, ...]]:
        block = np.array(chunk, dtype=np.int16).reshape(len(chunk), len(word))
        record_enumerated(len(chunk))
        return [tuple(int(letter) for letter in row) for row in block[block_hits(block)]]

    blocks = chunked(abelian_class(counts), config.chunk_size)
    batches = chunked(blocks, config.max_workers)
    with scan_report(f"{what} ({size} words)"), \
            ThreadPoolExecutor(max_workers=config.max_workers, thread_name_prefix="abelian") as executor:
        for batch in progress(batches, config, desc=what):
            for found in executor.map(run_block, batch):
                hits.extend(found)
            if len(hits) >= stop_after:
                logger.debug(f"Early exit while scanning {what}")
                break

    return hits


def is_singleton(w: Union[RleWord, WordLike], k: int = 2, budget: Optional[int] = None) -> bool:
    """True iff no other word of the abelian class of w shares its k-signature"""
    word = _dense(w)
    if k < 1:
        raise ValueError(f"Equivalence order must be positive, got {k}")
    target = signature_matrix(np.array([word.letters], dtype=np.int16).reshape(1, len(word)), word.m, k)[0]

    def same_signature(block: np.ndarray) -> np.ndarray:
        return np.all(signature_matrix(block, word.m, k) == target, axis=1)

    # w itself is always one hit
    hits = _scan_abelian_class(word, f"abelian class of {word}", budget, same_signature, stop_after=2)
    return len(hits) == 1


def check_prop54(w: RleWord, budget: Optional[int] = None) -> Prop54Report:
    """Search the abelian class of w for u != w dominating all of binom(., 12), (., 23), (., 31)"""
    word = _dense(w)
    runs = w if isinstance(w, RleWord) else to_rle(word)
    if word.m > 3:
        raise UnsupportedOperationError(f"Dominance check is defined on ternary words, got alphabet size {word.m}")
    word = Word(word.letters, Alphabet(3))
    thresholds = tuple(rle_binom(runs, pattern) for pattern in DOMINANCE_PATTERNS)
    target = np.array(word.letters, dtype=np.int16)

    def dominates(block: np.ndarray) -> np.ndarray:
        coefficients = coefficient_matrix(block, DOMINANCE_PATTERNS)
        others = np.any(block != target, axis=1)
        return others & np.all(coefficients >= np.array(thresholds, dtype=np.int64), axis=1)

    counterexamples = _scan_abelian_class(word, f"competitors of {runs}", budget, dominates, stop_after=1)
    counts = runs.parikh().counts + (0,) * (3 - runs.m)
    competitors = multinomial(counts) - 1
    counterexample = Word(min(counterexamples), Alphabet(3)) if counterexamples else None
    if counterexample is not None:
        logger.warning(f"Dominating competitor {counterexample} found for {runs}")
    return Prop54Report(runs, competitors, thresholds, counterexample)
