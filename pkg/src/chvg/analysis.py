"""Degree distributions, power-law and Zipf diagnostics, keyword sets."""

from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass, field
from typing import IO, NamedTuple, Sequence

import numpy as np

from chvg.corpus import Document
from chvg.errors import GraphError, InsufficientPointsError
from chvg.graph import WEIGHT_KINDS, WordGraph

DISTRIBUTION_KINDS = ("degree", "strength")
MIN_FIT_POINTS = 5


@dataclass(frozen=True)
class DegreeDistribution:
    """Empirical distribution of a per-node measure.

    ``ccdf`` holds ``(k, 1 - F(k))`` for every observed value ``k`` in
    increasing order, with ``F(k)`` the fraction of nodes whose measure is at
    most ``k``. The last point is always 0.
    """

    histogram: dict[int, int]
    ccdf: list[tuple[int, float]]
    n_nodes: int
    weight_kind: str

    @classmethod
    def from_measures(cls, measures: Sequence[int] | np.ndarray, weight_kind: str = "degree") -> DegreeDistribution:
        values = np.asarray(measures, dtype=np.int64).reshape(-1)
        if values.size == 0:
            raise GraphError("cannot build a degree distribution of an empty graph")
        ks, counts = np.unique(values, return_counts=True)
        n = int(values.size)
        at_most = np.cumsum(counts)
        ccdf = [(int(k), (n - int(c)) / n) for k, c in zip(ks.tolist(), at_most.tolist())]
        histogram = dict(zip(ks.tolist(), counts.tolist()))
        return cls(histogram=histogram, ccdf=ccdf, n_nodes=n, weight_kind=weight_kind)

    def measures(self) -> np.ndarray:
        """Node measures reconstructed from the histogram, sorted."""
        ks = np.fromiter(self.histogram.keys(), dtype=np.int64, count=len(self.histogram))
        counts = np.fromiter(self.histogram.values(), dtype=np.int64, count=len(self.histogram))
        return np.sort(np.repeat(ks, counts))


def degree_distribution(g: WordGraph, weight_kind: str = "degree") -> DegreeDistribution:
    if weight_kind not in DISTRIBUTION_KINDS:
        raise ValueError(f"unknown weight kind {weight_kind!r}; expected one of {', '.join(DISTRIBUTION_KINDS)}")
    if g.n_nodes == 0:
        raise GraphError("cannot build a degree distribution of an empty graph")
    return DegreeDistribution.from_measures(g.measure(weight_kind), weight_kind)


@dataclass(frozen=True)
class PowerLawFit:
    exponent_ls: float
    exponent_mle: float
    k_min: int
    r_squared: float
    n_points: int
    n_tail: int
    weight_kind: str = "degree"

    def to_dict(self) -> dict:
        return {
            "weight_kind": self.weight_kind,
            "k_min": self.k_min,
            "exponent_ls": self.exponent_ls,
            "exponent_mle": self.exponent_mle,
            "r_squared": self.r_squared,
            "n_points": self.n_points,
            "n_tail": self.n_tail,
        }


def _least_squares(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    """Slope, intercept and R^2 of an ordinary least-squares line."""
    slope, intercept = np.polyfit(x, y, 1)
    residual = y - (slope * x + intercept)
    total = float(np.sum((y - y.mean()) ** 2))
    r_squared = 1.0 - float(np.sum(residual**2)) / total if total > 0 else 1.0
    return float(slope), float(intercept), min(max(r_squared, 0.0), 1.0)


def fit_power_law(dist: DegreeDistribution, k_min: int = 2) -> PowerLawFit:
    """Fit the CCDF tail on log-log axes and estimate the density exponent by MLE.

    ``exponent_ls`` is the least-squares slope of ``log(1 - F(k))`` against
    ``log k`` over ``k >= k_min`` (zero-CCDF points excluded), so it is
    negative for a decaying tail. ``exponent_mle`` is the continuous estimator
    ``1 + n / sum(ln(k_i / k_min))`` over the raw node measures ``>= k_min``.
    """
    if k_min < 1:
        raise ValueError(f"k_min must be >= 1, got {k_min}")
    points = [(k, c) for k, c in dist.ccdf if k >= k_min and c > 0]
    if len(points) < MIN_FIT_POINTS:
        raise InsufficientPointsError(
            f"insufficient points: {len(points)} distinct {dist.weight_kind} values >= {k_min} "
            f"with positive CCDF, need at least {MIN_FIT_POINTS}"
        )
    x = np.log([k for k, _ in points])
    y = np.log([c for _, c in points])
    slope, _, r_squared = _least_squares(x, y)

    tail = dist.measures()
    tail = tail[tail >= k_min]
    log_sum = float(np.sum(np.log(tail / k_min)))
    exponent_mle = 1.0 + tail.size / log_sum if log_sum > 0 else math.inf
    return PowerLawFit(
        exponent_ls=slope,
        exponent_mle=exponent_mle,
        k_min=k_min,
        r_squared=r_squared,
        n_points=len(points),
        n_tail=int(tail.size),
        weight_kind=dist.weight_kind,
    )


class RankFrequency(NamedTuple):
    rank: int
    word: str
    frequency: int


def zipf_rank_frequency(doc: Document) -> list[RankFrequency]:
    """Words by frequency descending, ties broken by form; ranks start at 1."""
    if len(doc) == 0:
        raise ValueError("cannot rank an empty document")
    counts = np.bincount(doc.tokens, minlength=doc.vocabulary_size).tolist()
    order = sorted((i for i in range(len(counts)) if counts[i]), key=lambda i: (-counts[i], doc.lexicon[i]))
    return [RankFrequency(r, doc.lexicon[i], counts[i]) for r, i in enumerate(order, start=1)]


def zipf_slope(table: Sequence[RankFrequency], first: int = 10, last: int = 1000) -> float:
    """Log-log least-squares slope of frequency against rank over ``first..last``."""
    rows = [row for row in table if first <= row.rank <= last]
    if len(rows) < 2:
        raise InsufficientPointsError(f"insufficient points: {len(rows)} ranks in {first}..{last}")
    x = np.log([row.rank for row in rows])
    y = np.log([row.frequency for row in rows])
    return _least_squares(x, y)[0]


class RankedWord(NamedTuple):
    word: str
    weight: int


def top_n(g: WordGraph, n: int, weight_kind: str) -> list[RankedWord]:
    """The ``n`` heaviest nodes, by weight descending then form ascending."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    weights = g.measure(weight_kind).tolist()
    lex = g.document.lexicon
    nodes = g.node_ids.tolist()
    ranked = sorted(zip(weights, nodes), key=lambda wn: (-wn[0], lex[wn[1]]))
    return [RankedWord(lex[i], int(w)) for w, i in ranked[:n]]


@dataclass(frozen=True)
class KeywordReport:
    """Top-n sets of the CHVG (``lambda_set``) and the adjacency network
    (``psi_set``), and the CHVG words missing from the latter (``omega``)."""

    n: int
    lambda_set: list[RankedWord]
    psi_set: list[RankedWord]
    omega: list[RankedWord]
    lambda_weight: str
    psi_weight: str
    source_name: str = ""
    tokenizer: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        def rows(entries):
            return [{"rank": r, "word": e.word, "weight": e.weight} for r, e in enumerate(entries, start=1)]

        return {
            "n": self.n,
            "source": self.source_name,
            "tokenizer": self.tokenizer,
            "weights": {"lambda": self.lambda_weight, "psi": self.psi_weight},
            "lambda": rows(self.lambda_set),
            "psi": rows(self.psi_set),
            "omega": [e.word for e in self.omega],
        }


def keyword_report(
    chvg: WordGraph,
    adjacency: WordGraph,
    n: int = 100,
    weights: tuple[str, str] = ("strength", "degree"),
) -> KeywordReport:
    """Rank both networks and keep the CHVG top-n words absent from the adjacency top-n."""
    if chvg.kind != "chvg" or adjacency.kind != "adjacency":
        raise GraphError(f"expected (chvg, adjacency) graphs, got ({chvg.kind}, {adjacency.kind})")
    if chvg.document is not adjacency.document and chvg.document.fingerprint != adjacency.document.fingerprint:
        raise GraphError("graphs were built from different documents")
    lambda_weight, psi_weight = weights
    for w in weights:
        if w not in WEIGHT_KINDS:
            raise ValueError(f"unknown weight kind {w!r}; expected one of {', '.join(WEIGHT_KINDS)}")
    lam = top_n(chvg, n, lambda_weight)
    psi = top_n(adjacency, n, psi_weight)
    psi_words = {e.word for e in psi}
    return KeywordReport(
        n=n,
        lambda_set=lam,
        psi_set=psi,
        omega=[e for e in lam if e.word not in psi_words],
        lambda_weight=lambda_weight,
        psi_weight=psi_weight,
        source_name=chvg.document.source_name,
        tokenizer=chvg.document.config.to_dict(),
    )


# --- serialization -------------------------------------------------------------

def _dest(dest: str | os.PathLike | IO[str]):
    if isinstance(dest, (str, os.PathLike)):
        return open(dest, "w", encoding="utf-8", newline="")
    return None


def write_report_json(report: KeywordReport, dest: str | os.PathLike | IO[str], meta: dict | None = None) -> None:
    fh = _dest(dest)
    if fh is not None:
        with fh:
            write_report_json(report, fh, meta)
        return
    payload = {"meta": meta or {}, "report": report.to_dict()}
    dest.write(json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False))
    dest.write("\n")


def write_report_csv(report: KeywordReport, dest: str | os.PathLike | IO[str], header_lines: Sequence[str] = ()) -> None:
    """One row per ranked entry of either set, with membership flags."""
    fh = _dest(dest)
    if fh is not None:
        with fh:
            write_report_csv(report, fh, header_lines)
        return
    for line in header_lines:
        dest.write(f"# {line}\n")
    lam = {e.word for e in report.lambda_set}
    psi = {e.word for e in report.psi_set}
    omega = {e.word for e in report.omega}
    writer = csv.writer(dest, lineterminator="\n")
    writer.writerow(["set", "rank", "word", "weight", "in_lambda", "in_psi", "in_omega"])
    for name, entries in (("lambda", report.lambda_set), ("psi", report.psi_set)):
        for rank, e in enumerate(entries, start=1):
            writer.writerow([name, rank, e.word, e.weight, int(e.word in lam), int(e.word in psi), int(e.word in omega)])


def write_ccdf_tsv(dist: DegreeDistribution, dest: str | os.PathLike | IO[str], header_lines: Sequence[str] = ()) -> None:
    """Two columns, ``k`` and ``1 - F(k)``, raw values for external log-log plotting."""
    fh = _dest(dest)
    if fh is not None:
        with fh:
            write_ccdf_tsv(dist, fh, header_lines)
        return
    for line in header_lines:
        dest.write(f"# {line}\n")
    dest.write("k\tccdf\n")
    dest.writelines(f"{k}\t{c!r}\n" for k, c in dist.ccdf)


def write_zipf_tsv(table: Sequence[RankFrequency], dest: str | os.PathLike | IO[str], header_lines: Sequence[str] = ()) -> None:
    fh = _dest(dest)
    if fh is not None:
        with fh:
            write_zipf_tsv(table, fh, header_lines)
        return
    for line in header_lines:
        dest.write(f"# {line}\n")
    dest.write("rank\tword\tfrequency\n")
    dest.writelines(f"{r.rank}\t{r.word}\t{r.frequency}\n" for r in table)
