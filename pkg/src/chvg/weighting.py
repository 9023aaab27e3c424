"""Occurrence positions, inter-occurrence gaps and per-position value series.

The main estimator is the coefficient of variation of a word's gap series,

    sigma = sqrt(<gap^2> - <gap>^2) / <gap>

with plain (population) means over the K - 1 gaps between consecutive
occurrences. Words that cluster in bursts get large values; words spread
uniformly through the text get values near zero.
"""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import IO, Iterator, Sequence

import numpy as np

from chvg.corpus import Document

SCHEMES = ("sigma", "frequency", "word_length")

# Value assigned to words with fewer than two occurrences (no gaps).
HAPAX_SIGMA = 0.0


@dataclass(frozen=True)
class OccurrenceIndex:
    """Positions of every word, grouped by word-id and strictly increasing."""

    positions: dict[int, np.ndarray]

    def __getitem__(self, word_id: int) -> np.ndarray:
        return self.positions[word_id]

    def __iter__(self) -> Iterator[int]:
        return iter(self.positions)

    def __len__(self) -> int:
        return len(self.positions)

    def count(self, word_id: int) -> int:
        return int(self.positions[word_id].size)


@dataclass(frozen=True)
class GapStats:
    word_id: int
    word: str
    count: int
    gaps: np.ndarray
    mean_gap: float
    mean_sq_gap: float
    sigma: float


@dataclass(frozen=True, eq=False)
class ValueSeries:
    values: np.ndarray
    scheme: str

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64).reshape(-1)
        if not np.all(np.isfinite(values)):
            raise ValueError("value series must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return int(self.values.size)


def occurrence_index(doc: Document) -> OccurrenceIndex:
    tokens = doc.tokens
    order = np.argsort(tokens, kind="stable")
    counts = np.bincount(tokens, minlength=doc.vocabulary_size)
    bounds = np.concatenate(([0], np.cumsum(counts)))
    positions = {}
    for word_id in range(doc.vocabulary_size):
        if counts[word_id]:
            pos = order[bounds[word_id]:bounds[word_id + 1]].astype(np.int64)
            pos.setflags(write=False)
            positions[word_id] = pos
    return OccurrenceIndex(positions)


def gap_series(positions: Sequence[int] | np.ndarray) -> np.ndarray:
    """Differences between consecutive occurrence positions.

    Gaps from the start of the text to the first occurrence, and from the last
    occurrence to the end, are not part of the series.
    """
    pos = np.asarray(positions, dtype=np.int64).reshape(-1)
    gaps = np.diff(pos)
    if np.any(gaps <= 0):
        raise ValueError("positions must be strictly increasing")
    return gaps


def _moments(gaps: np.ndarray) -> tuple[int, int, int]:
    values = gaps.tolist()
    return len(values), sum(values), sum(g * g for g in values)


def _sigma_from_moments(n: int, s1: int, s2: int) -> float:
    if n == 0:
        return HAPAX_SIGMA
    # n^2 * variance as an exact integer; reducing the fraction makes the
    # result bit-identical under any integer rescaling of positions.
    radicand = max(n * s2 - s1 * s1, 0)
    return math.sqrt(Fraction(radicand, s1 * s1))


def sigma(positions: Sequence[int] | np.ndarray) -> float:
    """Coefficient of variation of the gap series; 0 when there are no gaps."""
    return _sigma_from_moments(*_moments(gap_series(positions)))


def gap_stats(doc: Document, index: OccurrenceIndex | None = None) -> list[GapStats]:
    """Gap statistics for every word, ordered by word-id."""
    index = index or occurrence_index(doc)
    out = []
    for word_id in sorted(index):
        gaps = gap_series(index[word_id])
        n, s1, s2 = _moments(gaps)
        out.append(
            GapStats(
                word_id=word_id,
                word=doc.lexicon[word_id],
                count=n + 1,
                gaps=gaps,
                mean_gap=s1 / n if n else math.nan,
                mean_sq_gap=s2 / n if n else math.nan,
                sigma=_sigma_from_moments(n, s1, s2),
            )
        )
    return out


def word_sigmas(doc: Document) -> np.ndarray:
    """Sigma per word-id."""
    values = np.full(doc.vocabulary_size, HAPAX_SIGMA)
    for stats in gap_stats(doc):
        values[stats.word_id] = stats.sigma
    return values


def value_series(doc: Document, scheme: str = "sigma") -> ValueSeries:
    """Assign a height to every token position according to ``scheme``."""
    if scheme == "sigma":
        per_word = word_sigmas(doc)
    elif scheme == "frequency":
        per_word = np.bincount(doc.tokens, minlength=doc.vocabulary_size).astype(np.float64)
    elif scheme == "word_length":
        per_word = np.array([len(form) for form in doc.lexicon], dtype=np.float64)
    else:
        raise ValueError(f"unknown scheme {scheme!r}; valid schemes: {', '.join(SCHEMES)}")
    return ValueSeries(per_word[doc.tokens] if len(doc) else np.zeros(0), scheme)


def write_gap_stats_csv(stats: Sequence[GapStats], dest: str | os.PathLike | IO[str], header_lines: Sequence[str] = ()) -> None:
    """CSV with columns word, K, mean_gap, sigma. Undefined means are left empty."""
    if isinstance(dest, (str, os.PathLike)):
        with open(dest, "w", encoding="utf-8", newline="") as fh:
            write_gap_stats_csv(stats, fh, header_lines)
        return
    for line in header_lines:
        dest.write(f"# {line}\n")
    writer = csv.writer(dest, lineterminator="\n")
    writer.writerow(["word", "K", "mean_gap", "sigma"])
    for s in stats:
        writer.writerow([s.word, s.count, "" if math.isnan(s.mean_gap) else repr(s.mean_gap), repr(s.sigma)])
