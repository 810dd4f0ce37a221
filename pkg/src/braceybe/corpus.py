"""The acceptance corpus: every valid configuration, up to a point budget,
over the census braces of order at most eight."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from .braces import Brace, enumerate_braces
from .config import DEFAULT_BOUNDS, Bounds
from .enumeration import iter_configs
from .solutions import SolutionConfig

CORPUS_MAX_ORDER = 8


@dataclass(frozen=True)
class CorpusEntry:
    order: int
    index: int
    config: SolutionConfig

    @property
    def tag(self) -> str:
        return f"brace {self.order}/{self.index} reps={self.config.reps} key={self.config.key()[1]}"


@lru_cache(maxsize=None)
def census(max_order: int = CORPUS_MAX_ORDER, bounds: Bounds = DEFAULT_BOUNDS) -> tuple[tuple[int, int, Brace], ...]:
    """``(order, index, brace)`` for every census brace, orders ``1..max_order``."""
    return tuple((n, b, B) for n in range(1, max_order + 1) for b, B in enumerate(enumerate_braces(n, bounds)))


def corpus(
    max_points: int, max_order: int = CORPUS_MAX_ORDER, bounds: Bounds = DEFAULT_BOUNDS
) -> Iterator[CorpusEntry]:
    for n, b, B in census(max_order, bounds):
        for cfg in iter_configs(B, max_points, False, bounds):
            yield CorpusEntry(n, b, cfg)
