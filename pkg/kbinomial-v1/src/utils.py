"""
Utility functions for the k-binomial toolkit
"""

import logging
import sys
import threading
import time
from contextlib import contextmanager
from dataclasses import dataclass
from itertools import islice
from typing import Any, Dict, Iterable, Iterator, List, Optional

from tqdm import tqdm

from config import ToolkitConfig

logger = logging.getLogger(__name__)

INT64_MAX = 2 ** 63 - 1


class KBinomialError(Exception):
    """Base class for every domain error raised by the toolkit"""


class WordParseError(KBinomialError, ValueError):
    """Raised when a word or signed word cannot be parsed"""

    def __init__(self, text: str, position: int, reason: str):
        self.text = text
        self.position = position
        self.reason = reason
        super().__init__(f"Cannot parse {text!r} at position {position}: {reason}")


class BudgetExceededError(KBinomialError):
    """Raised when an enumeration would visit more words than allowed"""

    def __init__(self, what: str, required: int, budget: int):
        self.what = what
        self.required = required
        self.budget = budget
        super().__init__(
            f"Refusing to enumerate {what}: {required} words required, budget is {budget} "
            f"(raise it with --budget or KBINOM_BUDGET)"
        )


class UnsupportedOperationError(KBinomialError):
    """Raised for orders or alphabets outside what an operation handles"""


class CoefficientOverflowError(KBinomialError, OverflowError):
    """Raised when a dense-path coefficient leaves the signed 64-bit range"""

    def __init__(self, detail: str):
        super().__init__(
            f"{detail} exceeds the 64-bit range of the dense path; "
            f"use the run-length encoded path (rle_binom) for exact values"
        )


class EmptyWordError(KBinomialError, ValueError):
    """Raised when an operation defined on non-empty words receives the empty word"""


class SequenceError(KBinomialError):
    """Raised when a growth sequence has too few terms for a construction"""


class OutputSchemaError(KBinomialError):
    """Raised when a result object does not match schema/output.schema.json"""

    def __init__(self, command: str, errors: List[str]):
        self.command = command
        self.errors = errors
        super().__init__(f"Output of {command} violates the output schema: {'; '.join(errors)}")


def check_budget(what: str, required: int, budget: int):
    """Raise BudgetExceededError when required exceeds budget"""
    if required > budget:
        logger.warning(f"Budget exceeded for {what}: {required} > {budget}")
        raise BudgetExceededError(what, required, budget)


def check_int64(value: int, detail: str) -> int:
    """Return value unchanged, or raise if it does not fit a signed 64-bit integer"""
    if value > INT64_MAX:
        raise CoefficientOverflowError(detail)
    return value


# Enumeration statistics shared by the census and singleton scans
_stats_lock = threading.Lock()
_enumeration_stats = {'words_enumerated': 0}


def record_enumerated(count: int):
    """Thread-safe statistics update"""
    with _stats_lock:
        _enumeration_stats['words_enumerated'] += count


def reset_enumeration_stats():
    with _stats_lock:
        _enumeration_stats['words_enumerated'] = 0


def get_enumeration_stats() -> Dict[str, int]:
    with _stats_lock:
        return dict(_enumeration_stats)


def progress(iterable: Iterable, config: ToolkitConfig, total: Optional[int] = None, desc: str = '') -> Iterable:
    """Wrap an iterable in a tqdm bar on stderr when the config enables progress"""
    return tqdm(iterable, total=total, desc=desc, file=sys.stderr,
                disable=not config.progress, leave=False)


def chunked(iterable: Iterable[Any], chunk_size: int) -> Iterator[List[Any]]:
    """Split an iterable into lists of at most chunk_size items"""
    iterator = iter(iterable)
    while True:
        chunk = list(islice(iterator, chunk_size))
        if not chunk:
            return
        yield chunk


@dataclass
class ScanSummary:
    what: str
    words: int = 0
    seconds: float = 0.0

    @property
    def rate(self) -> float:
        return self.words / self.seconds if self.seconds > 0 else 0.0


@contextmanager
def scan_report(what: str) -> Iterator[ScanSummary]:
    """Count the words a scan enumerates and log them with the elapsed time"""
    summary = ScanSummary(what)
    before = get_enumeration_stats()['words_enumerated']
    started = time.perf_counter()
    try:
        yield summary
    finally:
        summary.seconds = time.perf_counter() - started
        summary.words = get_enumeration_stats()['words_enumerated'] - before
        logger.info(f"Scanned {what}: {summary.words} words in {summary.seconds:.2f}s "
                    f"({summary.rate:,.0f} words/s)")
