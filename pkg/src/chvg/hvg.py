"""Horizontal visibility graphs over numeric series.

Positions ``i < j`` are linked when every value strictly between them is
strictly lower than both endpoints. Consecutive positions are always linked.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property
from typing import IO, Sequence

import numpy as np

from chvg.weighting import ValueSeries

NAIVE_CAP = 10_000


@dataclass(frozen=True, eq=False)
class OccurrenceGraph:
    """Undirected simple graph over positions ``0..n_nodes-1``.

    ``edges`` is an ``(E, 2)`` array with ``i < j`` in every row, sorted
    lexicographically.
    """

    n_nodes: int
    edges: np.ndarray

    def __post_init__(self) -> None:
        edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if edges.size:
            edges = np.sort(edges, axis=1)
            edges = edges[np.lexsort((edges[:, 1], edges[:, 0]))]
        edges.setflags(write=False)
        object.__setattr__(self, "edges", edges)

    @property
    def n_edges(self) -> int:
        return int(self.edges.shape[0])

    def edge_set(self) -> set[tuple[int, int]]:
        return set(map(tuple, self.edges.tolist()))

    def degrees(self) -> np.ndarray:
        return np.bincount(self.edges.ravel(), minlength=self.n_nodes)

    @cached_property
    def _csr(self) -> tuple[np.ndarray, np.ndarray]:
        both = np.concatenate((self.edges, self.edges[:, ::-1]))
        both = both[np.lexsort((both[:, 1], both[:, 0]))]
        indptr = np.concatenate(([0], np.cumsum(np.bincount(both[:, 0], minlength=self.n_nodes))))
        return indptr, both[:, 1]

    def neighbors(self, node: int) -> np.ndarray:
        indptr, targets = self._csr
        return targets[indptr[node]:indptr[node + 1]]


def _values(series: ValueSeries | Sequence[float] | np.ndarray) -> np.ndarray:
    if isinstance(series, ValueSeries):
        return series.values
    return ValueSeries(series, "raw").values


def build_hvg(series: ValueSeries | Sequence[float] | np.ndarray) -> OccurrenceGraph:
    """Horizontal visibility graph in O(N) using a monotone stack.

    The stack holds positions whose values are non-increasing from bottom to
    top; these are exactly the earlier positions still visible from the
    current one. Each position is pushed and popped at most once.
    """
    values = _values(series).tolist()
    left: list[int] = []
    right: list[int] = []
    stack: list[int] = []
    for j, v in enumerate(values):
        while stack and values[stack[-1]] < v:
            left.append(stack.pop())
            right.append(j)
        if stack:
            i = stack[-1]
            left.append(i)
            right.append(j)
            # An equal bar blocks everything behind it and is itself blocked by j.
            if values[i] == v:
                stack.pop()
        stack.append(j)
    return OccurrenceGraph(len(values), np.column_stack((left, right)) if left else np.zeros((0, 2)))


def naive_hvg(series: ValueSeries | Sequence[float] | np.ndarray, cap: int = NAIVE_CAP) -> OccurrenceGraph:
    """Reference O(N^2) construction that checks the visibility rule for every pair."""
    values = _values(series)
    n = values.size
    if n > cap:
        raise ValueError(f"series length {n} exceeds the naive oracle cap of {cap}")
    rows = []
    for i in range(n - 1):
        tail = values[i + 1:]
        # highest bar strictly between i and i + 1 + d, for d = 0..len(tail)-1
        between = np.concatenate(([-np.inf], np.maximum.accumulate(tail)[:-1]))
        visible = (between < values[i]) & (between < tail)
        for d in np.flatnonzero(visible).tolist():
            rows.append((i, i + 1 + d))
    return OccurrenceGraph(n, np.array(rows, dtype=np.int64).reshape(-1, 2))


def write_edge_list(graph: OccurrenceGraph, dest: str | os.PathLike | IO[str], header_lines: Sequence[str] = ()) -> None:
    """One ``i j`` pair per line, 0-indexed, ``i < j``, sorted."""
    if isinstance(dest, (str, os.PathLike)):
        with open(dest, "w", encoding="utf-8", newline="\n") as fh:
            write_edge_list(graph, fh, header_lines)
        return
    for line in header_lines:
        dest.write(f"# {line}\n")
    dest.writelines(f"{i} {j}\n" for i, j in graph.edges.tolist())


def iid_degree_probability(k: int) -> float:
    """Degree law of the HVG of an i.i.d. continuous series: (1/3)(2/3)^(k-2), k >= 2."""
    if k < 2:
        return 0.0
    return (1.0 / 3.0) * (2.0 / 3.0) ** (k - 2)


MIN_BASELINE_LENGTH = 10_000


def random_baseline(
    length: int = 100_000,
    seed: int = 0,
    max_k: int = 10,
    mean_tolerance: float = 0.05,
    pk_tolerance: float = 0.01,
) -> dict:
    """Build the HVG of a seeded uniform i.i.d. series and compare with the exact degree law.

    Series shorter than ``MIN_BASELINE_LENGTH`` are summarized but the
    tolerance checks are skipped.
    """
    rng = np.random.default_rng(seed)
    series = rng.uniform(size=length)
    degrees = build_hvg(series).degrees()
    mean_degree = float(degrees.mean()) if length else 0.0
    counts = np.bincount(degrees, minlength=max_k + 1) if length else np.zeros(max_k + 1, dtype=int)
    table = []
    for k in range(2, max_k + 1):
        empirical = float(counts[k] / length) if length else 0.0
        expected = iid_degree_probability(k)
        table.append({"k": k, "empirical": empirical, "expected": expected, "abs_error": abs(empirical - expected)})
    summary = {
        "length": length,
        "seed": seed,
        "mean_degree": mean_degree,
        "expected_mean_degree": 4.0,
        "degree_probabilities": table,
        "tolerances": {"mean_degree": mean_tolerance, "probability": pk_tolerance},
    }
    if length < MIN_BASELINE_LENGTH:
        summary["status"] = "too short"
        summary["checks"] = {"mean_degree": "skipped", "degree_probabilities": "skipped"}
    else:
        mean_ok = abs(mean_degree - 4.0) <= mean_tolerance
        pk_ok = all(row["abs_error"] <= pk_tolerance for row in table)
        summary["status"] = "pass" if mean_ok and pk_ok else "fail"
        summary["checks"] = {
            "mean_degree": "pass" if mean_ok else "fail",
            "degree_probabilities": "pass" if pk_ok else "fail",
        }
    return summary
