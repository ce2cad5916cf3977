"""
Exhaustive enumeration of k-binomial classes

Words of length n are streamed in lexicographic order as numpy blocks, so
the first word seen with a given signature is its class's lexicographically
least element. Blocks are summarized in a thread pool and merged in block
order.
"""

import logging
import re
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import comb, prod
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple

import numpy as np
from sympy import Rational, interpolate, symbols

from config import ToolkitConfig, resolve_budget
from utils import (
    UnsupportedOperationError,
    check_budget,
    chunked,
    progress,
    record_enumerated,
    scan_report,
)
from words import (
    Alphabet,
    BinomialSignature,
    ParikhVector,
    Word,
    abelian_class,
    all_words,
    binom,
    coefficient_matrix,
    multinomial,
    signature_matrix,
)

logger = logging.getLogger(__name__)

SING_BINARY_PATTERN = re.compile(r"1*2*|2*1*|1*21*|2*12*|1*212*|2*121*")
LL_BINARY_FORBIDDEN = re.compile(r"21.*12")


@dataclass(frozen=True)
class ClassRecord:
    signature: BinomialSignature
    representative: Word
    size: int


@dataclass(frozen=True)
class ClassCensus:
    """Classes of Sigma^n under k-binomial equivalence"""
    m: int
    k: int
    n: int
    count: int
    classes: Optional[Tuple[ClassRecord, ...]] = None


@dataclass(frozen=True)
class GrowthBoundReport:
    parikh: Tuple[int, ...]
    f: int
    lower: int
    upper: int
    uncorrected_upper: int

    @property
    def lower_holds(self) -> bool:
        return self.lower <= self.f

    @property
    def upper_holds(self) -> bool:
        return self.f <= self.upper

    @property
    def uncorrected_upper_holds(self) -> bool:
        return self.f <= self.uncorrected_upper

    @property
    def passed(self) -> bool:
        return self.lower_holds and self.upper_holds

    def to_record(self) -> Dict[str, object]:
        return {
            'parikh': list(self.parikh),
            'f': self.f,
            'lower': self.lower,
            'upper': self.upper,
            'uncorrected_upper': self.uncorrected_upper,
            'lower_holds': self.lower_holds,
            'upper_holds': self.upper_holds,
            'uncorrected_upper_holds': self.uncorrected_upper_holds,
        }


@dataclass(frozen=True)
class InterpolationReport:
    degree: int
    at: int
    predicted: Fraction
    actual: Optional[int]

    @property
    def extends(self) -> bool:
        return self.actual is not None and self.predicted == self.actual


def _word_blocks(m: int, n: int, chunk_size: int) -> Iterator[np.ndarray]:
    """Sigma^n as lexicographically ordered blocks sharing a common prefix"""
    if n == 0:
        yield np.zeros((1, 0), dtype=np.int16)
        return
    suffix_length = 1
    while suffix_length < n and m ** (suffix_length + 1) <= chunk_size:
        suffix_length += 1
    suffix = np.array(list(all_words(m, suffix_length)), dtype=np.int16)
    for prefix in all_words(m, n - suffix_length):
        head = np.tile(np.array(prefix, dtype=np.int16), (len(suffix), 1))
        yield np.hstack([head, suffix])


def _summarize_block(block: np.ndarray, m: int, k: int) -> List[Tuple[bytes, Tuple[int, ...], int]]:
    signatures = signature_matrix(block, m, k)
    unique, first, counts = np.unique(signatures, axis=0, return_index=True, return_counts=True)
    record_enumerated(len(block))
    return [
        (row.tobytes(), tuple(int(letter) for letter in block[index]), int(count))
        for row, index, count in zip(unique, first, counts)
    ]


def _merge(classes: Dict[bytes, List], key: bytes, representative: Tuple[int, ...], size: int):
    """Keep the lexicographically smaller representative on conflict"""
    existing = classes.get(key)
    if existing is None:
        classes[key] = [representative, size]
    else:
        existing[0] = min(existing[0], representative)
        existing[1] += size


def _scan(m: int, n: int, k: int, budget: Optional[int]) -> Dict[bytes, List]:
    budget = resolve_budget(budget)
    total = m ** n
    check_budget(f"Sigma^{n} over {m} letters", total, budget)

    config = ToolkitConfig()
    blocks = _word_blocks(m, n, config.chunk_size)
    classes: Dict[bytes, List] = {}
    logger.info(f"Scanning {total} words (m={m}, n={n}, k={k})")

    with scan_report(f"Sigma^{n} over {m} letters"), \
            ThreadPoolExecutor(max_workers=config.max_workers) as executor:
        bar = progress(chunked(blocks, config.max_workers * 2), config, desc=f"n={n}")
        for batch in bar:
            for summary in executor.map(lambda block: _summarize_block(block, m, k), batch):
                for key, representative, size in summary:
                    _merge(classes, key, representative, size)

    logger.info(f"Found {len(classes)} classes among {total} words")
    return classes


def class_census(m: int, n: int, k: int, budget: Optional[int] = None,
                 with_classes: bool = True) -> ClassCensus:
    classes = _scan(m, n, k, budget)
    records = None
    if with_classes:
        records = tuple(sorted(
            (
                ClassRecord(
                    BinomialSignature(m, k, tuple(int(value) for value in np.frombuffer(key, dtype=np.int64))),
                    Word(representative, Alphabet(m)),
                    size,
                )
                for key, (representative, size) in classes.items()
            ),
            key=lambda record: record.representative.letters,
        ))
    return ClassCensus(m, k, n, len(classes), records)


def count_classes(m: int, n: int, k: int, budget: Optional[int] = None) -> int:
    return class_census(m, n, k, budget, with_classes=False).count


def census_table(m: int, k: int, n_max: int, budget: Optional[int] = None) -> List[Dict[str, int]]:
    return [
        {'m': m, 'k': k, 'n': n, 'count': count_classes(m, n, k, budget)}
        for n in range(n_max + 1)
    ]


def ll_language(m: int, n: int, k: int, budget: Optional[int] = None) -> Set[Word]:
    """Lexicographically least element of every class of Sigma^n"""
    census = class_census(m, n, k, budget)
    return {record.representative for record in census.classes}


def sing_language(m: int, n: int, k: int, budget: Optional[int] = None) -> Set[Word]:
    """Words of Sigma^n alone in their class"""
    census = class_census(m, n, k, budget)
    return {record.representative for record in census.classes if record.size == 1}


def binary_sing_slice(n: int) -> Set[Word]:
    return {
        Word(letters, Alphabet(2))
        for letters in all_words(2, n)
        if SING_BINARY_PATTERN.fullmatch(''.join(map(str, letters)))
    }


def binary_ll_slice(n: int) -> Set[Word]:
    """Binary words of length n avoiding a 21 followed later by a 12"""
    return {
        Word(letters, Alphabet(2))
        for letters in all_words(2, n)
        if not LL_BINARY_FORBIDDEN.search(''.join(map(str, letters)))
    }


def _counts(x) -> Tuple[int, ...]:
    if isinstance(x, ParikhVector):
        return x.counts
    counts = tuple(int(value) for value in x)
    if any(value < 0 for value in counts):
        raise ValueError(f"Parikh vector entries must be non-negative, got {counts}")
    return counts


def f_parikh(x, k: int = 2, budget: Optional[int] = None) -> int:
    """Number of k-binomial classes among words with Parikh vector x"""
    counts = _counts(x)
    m = len(counts)
    budget = resolve_budget(budget)
    check_budget(f"abelian class {counts}", multinomial(counts), budget)

    config = ToolkitConfig()
    seen = set()
    for chunk in chunked(abelian_class(counts), config.chunk_size):
        block = np.array(chunk, dtype=np.int16).reshape(len(chunk), sum(counts))
        record_enumerated(len(chunk))
        for row in np.unique(signature_matrix(block, m, k), axis=0):
            seen.add(row.tobytes())
    return len(seen)


def f_parikh_table(m: int, n: int, budget: Optional[int] = None) -> Dict[Tuple[int, ...], int]:
    """f(x) for every x with ||x||_1 = n, from a single census of Sigma^n"""
    census = class_census(m, n, 2, budget)
    table = Counter(record.signature.coefficients[:m] for record in census.classes)
    return {x: table.get(x, 0) for x in parikh_vectors(m, n)}


def f_parikh_sum(m: int, n: int, budget: Optional[int] = None) -> int:
    return sum(f_parikh(x, 2, budget) for x in parikh_vectors(m, n))


def parikh_vectors(m: int, n: int) -> List[Tuple[int, ...]]:
    """All x in N^m with ||x||_1 = n, lexicographic"""
    return [x for x in product(range(n + 1), repeat=m) if sum(x) == n]


def coefficient_range(a: int, b: int, i: int, j: int, budget: Optional[int] = None) -> Set[int]:
    """Values of binom(u, ab) over words with i copies of a and j copies of b"""
    if a == b:
        raise ValueError(f"Letters must differ, got a = b = {a}")
    if a < 1 or b < 1:
        raise ValueError(f"Letters are numbered from 1, got a = {a}, b = {b}")
    if i < 0 or j < 0:
        raise ValueError(f"Letter counts must be non-negative, got i = {i}, j = {j}")
    budget = resolve_budget(budget)
    check_budget(f"two-letter class ({i} x {a}, {j} x {b})", comb(i + j, i), budget)
    counts = [0] * max(a, b)
    counts[a - 1], counts[b - 1] = i, j
    return {binom(u, (a, b)) for u in abelian_class(counts)}


def growth_bounds(counts: Sequence[int]) -> Tuple[int, int, int]:
    """(lower, corrected upper, uncorrected upper) products over pairs a < b"""
    m = len(counts)
    pairs = [(a, b) for a in range(m) for b in range(a + 1, m)]
    lower = prod((counts[a] // (m - 1)) * (counts[b] // (m - 1)) + 1 for a, b in pairs)
    upper = prod(counts[a] * counts[b] + 1 for a, b in pairs)
    uncorrected_upper = prod(counts[a] * counts[b] for a, b in pairs)
    return lower, upper, uncorrected_upper


def check_growth_bounds(x, f: Optional[int] = None, budget: Optional[int] = None) -> GrowthBoundReport:
    counts = _counts(x)
    if f is None:
        f = f_parikh(counts, 2, budget)
    lower, upper, uncorrected_upper = growth_bounds(counts)
    report = GrowthBoundReport(counts, f, lower, upper, uncorrected_upper)
    if not report.uncorrected_upper_holds:
        logger.debug(f"Uncorrected upper bound fails at {counts}: f = {f} > {uncorrected_upper}")
    return report


def growth_bounds_table(m: int, n: int, budget: Optional[int] = None) -> List[GrowthBoundReport]:
    table = f_parikh_table(m, n, budget)
    return [check_growth_bounds(x, f) for x, f in table.items()]


def lx_language(x) -> Iterator[Tuple[int, ...]]:
    """Concatenations of two-letter blocks followed by the remainder padding

    For a < b the block has x_a // (m-1) copies of a and x_b // (m-1) copies
    of b; the padding is m^(x_m % (m-1)) ... 1^(x_1 % (m-1)).
    """
    counts = _counts(x)
    m = len(counts)
    if m < 2:
        raise UnsupportedOperationError("L(x) needs at least two letters")
    shares = [count // (m - 1) for count in counts]
    blocks = []
    for a in range(1, m + 1):
        for b in range(a + 1, m + 1):
            block_counts = [0] * m
            block_counts[a - 1], block_counts[b - 1] = shares[a - 1], shares[b - 1]
            blocks.append(list(abelian_class(block_counts)))
    padding = tuple(letter for letter in range(m, 0, -1) for _ in range(counts[letter - 1] % (m - 1)))
    for parts in product(*blocks):
        yield tuple(letter for part in parts for letter in part) + padding


def lx_class_count(x, budget: Optional[int] = None) -> int:
    counts = _counts(x)
    m = len(counts)
    if m < 2:
        raise UnsupportedOperationError(f"L(x) needs at least two letters, got x = {counts}")
    shares = [count // (m - 1) for count in counts]
    size = prod(comb(shares[a] + shares[b], shares[a]) for a in range(m) for b in range(a + 1, m))
    check_budget(f"L({counts})", size, resolve_budget(budget))
    patterns = [(a, b) for a in range(1, m + 1) for b in range(a + 1, m + 1)]
    seen = set()
    for chunk in chunked(lx_language(counts), ToolkitConfig().chunk_size):
        block = np.array(chunk, dtype=np.int16).reshape(len(chunk), sum(counts))
        seen.update(map(tuple, coefficient_matrix(block, patterns).tolist()))
    return len(seen)


def cake_count(n: int) -> int:
    if n < 0:
        raise ValueError(f"Length must be non-negative, got {n}")
    return (n ** 3 + 5 * n + 6) // 6


def polynomial_bound(m: int, n: int, k: int) -> int:
    """(n^k + 1)^(k m^k), an upper bound on the number of classes of Sigma^n"""
    return (n ** k + 1) ** (k * m ** k)


def interpolation_check(values: Sequence[int], at: int, actual: Optional[int] = None) -> InterpolationReport:
    """Evaluate at `at` the unique polynomial through (i, values[i]) with exact rationals"""
    if at < len(values):
        raise ValueError(f"Evaluation point {at} must lie beyond the {len(values)} interpolated values")
    variable = symbols('n')
    polynomial = interpolate(list(enumerate(values)), variable)
    predicted = Rational(polynomial.subs(variable, at))
    return InterpolationReport(len(values) - 1, at, Fraction(int(predicted.p), int(predicted.q)), actual)
