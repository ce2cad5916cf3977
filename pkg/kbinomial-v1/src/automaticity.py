"""
Truncated Nerode congruence over a finite slice of a language

Two words u, v of the classified domain are congruent when their left
quotients of the slice, truncated to a maximal length, coincide. The number
of classes is a lower approximation of the automaticity of the language.
"""

import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from census import ll_language, sing_language
from words import all_words

logger = logging.getLogger(__name__)

LANGUAGE_KINDS = ('LL', 'SING')

Letters = Tuple[int, ...]


@dataclass(frozen=True)
class LanguageSlice:
    """All words of a language of length at most cutoff"""
    kind: str
    m: int
    k: int
    cutoff: int
    members: FrozenSet[Letters]

    def __contains__(self, letters: Sequence[int]) -> bool:
        return tuple(letters) in self.members

    def __len__(self) -> int:
        return len(self.members)

    def count_by_length(self) -> Dict[int, int]:
        counts = {n: 0 for n in range(self.cutoff + 1)}
        for letters in self.members:
            counts[len(letters)] += 1
        return counts


@dataclass(frozen=True)
class Convention:
    """How a published index t maps to a classified domain and a truncation length

    The domain is built from words of length t - domain_shift: all shorter
    words too ('upto'), that length only ('exact'), or lengths 1.. ('nonempty').
    Quotients are truncated to length C - (t - truncation_shift). With
    isolate_empty, ε keeps the whole slice as its quotient and always counts
    as a class of its own; only nonempty words are grouped.
    """
    name: str
    domain: str
    domain_shift: int = 0
    truncation_shift: int = 0
    isolate_empty: bool = False

    def domain_lengths(self, t: int) -> range:
        top = t - self.domain_shift
        if self.domain == 'exact':
            lengths = range(top, top + 1)
        elif self.domain == 'nonempty':
            lengths = range(1, top + 1)
        else:
            lengths = range(0, top + 1)
        if self.isolate_empty:
            return range(max(lengths.start, 1), max(lengths.stop, 1))
        return lengths

    def truncation(self, cutoff: int, t: int) -> int:
        return cutoff - (t - self.truncation_shift)


CONVENTIONS = (
    Convention('empty-apart', 'upto', domain_shift=1, isolate_empty=True),
    Convention('upto', 'upto'),
    Convention('exact', 'exact'),
    Convention('nonempty', 'nonempty'),
    Convention('upto-from-zero', 'upto', domain_shift=1, truncation_shift=1),
    Convention('upto-from-zero-truncate-t', 'upto', domain_shift=1),
    Convention('exact-from-zero', 'exact', domain_shift=1, truncation_shift=1),
)
DEFAULT_CONVENTION = CONVENTIONS[0]


@dataclass(frozen=True)
class NerodeTable:
    convention: Convention
    ts: Tuple[int, ...]
    counts: Tuple[int, ...]
    published: Optional[Tuple[int, ...]] = None

    @property
    def matches_published(self) -> Optional[bool]:
        if self.published is None:
            return None
        return self.counts == self.published

    def to_records(self) -> List[Dict[str, object]]:
        return [{'t': t, 'count': count} for t, count in zip(self.ts, self.counts)]


def build_slice(kind: str, m: int, k: int, cutoff: int, budget: Optional[int] = None) -> LanguageSlice:
    """Materialize LL or SING restricted to lengths 0..cutoff"""
    kind = kind.upper()
    if kind not in LANGUAGE_KINDS:
        raise ValueError(f"Language kind must be one of {', '.join(LANGUAGE_KINDS)}, got {kind!r}")
    if cutoff < 0:
        raise ValueError(f"Cutoff must be non-negative, got {cutoff}")
    language = ll_language if kind == 'LL' else sing_language

    members: Set[Letters] = set()
    for n in range(cutoff + 1):
        members.update(word.letters for word in language(m, n, k, budget))
    logger.info(f"Built {kind} slice (m={m}, k={k}, C={cutoff}) with {len(members)} words")
    return LanguageSlice(kind, m, k, cutoff, frozenset(members))


def _domain(m: int, lengths: Iterable[int]) -> List[Letters]:
    return [letters for n in lengths for letters in all_words(m, n)]


def truncated_quotients(language: LanguageSlice, lengths: Iterable[int], limit: int) -> Dict[Letters, FrozenSet[Letters]]:
    """u^-1 (slice) restricted to words of length <= limit, for every u of the given lengths"""
    lengths = list(lengths)
    quotients: Dict[Letters, Set[Letters]] = {u: set() for u in _domain(language.m, lengths)}
    for word in language.members:
        for length in lengths:
            if length <= len(word) and len(word) - length <= limit:
                quotients[word[:length]].add(word[length:])
    return {u: frozenset(quotient) for u, quotient in quotients.items()}


def _canonical(quotient: FrozenSet[Letters]) -> Tuple[Letters, ...]:
    return tuple(sorted(quotient, key=lambda x: (len(x), x)))


def _check_index(language: LanguageSlice, t: int, convention: Convention) -> Tuple[range, int]:
    limit = convention.truncation(language.cutoff, t)
    lengths = convention.domain_lengths(t)
    if t < 0 or t > language.cutoff or limit < 0 or lengths.start < 0:
        raise ValueError(f"Index t={t} is outside 0..{language.cutoff} under convention {convention.name!r}")
    return lengths, limit


def approx_nerode_count(language: LanguageSlice, t: int, convention: Convention = DEFAULT_CONVENTION) -> int:
    """Number of classes of the truncated Nerode congruence at index t"""
    lengths, limit = _check_index(language, t, convention)
    extra = 1 if convention.isolate_empty else 0
    if lengths.stop <= lengths.start:
        return extra
    quotients = truncated_quotients(language, lengths, limit)
    classes = {_canonical(quotient) for quotient in quotients.values()}
    logger.debug(f"t={t} ({convention.name}): {len(quotients)} words in {len(classes) + extra} classes")
    return len(classes) + extra


def approx_nerode_count_pairwise(language: LanguageSlice, t: int, convention: Convention = DEFAULT_CONVENTION) -> int:
    """Same count by direct pairwise comparison of membership; quadratic, for small slices"""
    lengths, limit = _check_index(language, t, convention)
    suffixes = _domain(language.m, range(limit + 1))
    representatives: List[Letters] = []
    for u in _domain(language.m, lengths):
        if not any(
            all((u + x in language) == (v + x in language) for x in suffixes)
            for v in representatives
        ):
            representatives.append(u)
    return len(representatives) + (1 if convention.isolate_empty else 0)


def _reproduces(language: LanguageSlice, ts: Tuple[int, ...], published: Tuple[int, ...],
                convention: Convention) -> bool:
    for t, expected in zip(ts, published):
        try:
            count = approx_nerode_count(language, t, convention)
        except ValueError as e:
            logger.debug(f"Convention {convention.name} not applicable: {str(e)}")
            return False
        if count != expected:
            logger.debug(f"Convention {convention.name} gives {count} at t={t}, expected {expected}")
            return False
    return True


def approx_nerode_table(language: LanguageSlice, ts: Sequence[int],
                        published: Optional[Sequence[int]] = None,
                        conventions: Sequence[Convention] = CONVENTIONS) -> NerodeTable:
    """Counts for every t; with a published table, under the first convention reproducing it

    Falls back to the first convention, flagged as not matching, when none does.
    """
    ts = tuple(ts)
    published = tuple(published) if published is not None else None
    if published is not None and len(published) != len(ts):
        raise ValueError(f"Got {len(published)} published values for {len(ts)} indices")

    chosen = conventions[0]
    if published is not None:
        matching = next((c for c in conventions if _reproduces(language, ts, published, c)), None)
        if matching is None:
            logger.warning(f"No domain convention reproduces {list(published)}")
        else:
            logger.info(f"Convention {matching.name} reproduces {list(published)}")
            chosen = matching

    counts = tuple(approx_nerode_count(language, t, chosen) for t in ts)
    return NerodeTable(chosen, ts, counts, published)
