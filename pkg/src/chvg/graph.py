"""Word-level graphs obtained by merging all occurrence nodes of each word.

Two measures are kept per node. ``degree`` counts distinct neighbouring
words in the merged simple graph. ``strength`` is the sum of the
position-level degrees of the word's occurrences, counted before duplicate
edges and self-pairs are removed, so ``degree <= strength`` always holds.
"""

from __future__ import annotations

import os
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from typing import IO, Sequence

import numpy as np

from chvg.corpus import Document
from chvg.errors import GraphError
from chvg.hvg import OccurrenceGraph

KINDS = ("chvg", "adjacency")
WEIGHT_KINDS = ("degree", "strength", "frequency")


@dataclass(frozen=True, eq=False)
class WordGraph:
    """Compactified simple graph over the words of ``document``.

    Node ``i`` is word-id ``i`` of the document's lexicon; per-node arrays are
    indexed by word-id. ``edges`` holds word-id pairs ``(u, v)`` with ``u < v``.
    """

    kind: str
    document: Document
    edges: np.ndarray
    degree: np.ndarray
    strength: np.ndarray
    frequency: np.ndarray
    stage_one_edges: int

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise GraphError(f"unknown graph kind {self.kind!r}; expected one of {', '.join(KINDS)}")
        for name in ("edges", "degree", "strength", "frequency"):
            getattr(self, name).setflags(write=False)
        self._check()

    def _check(self) -> None:
        if self.edges.size and np.any(self.edges[:, 0] >= self.edges[:, 1]):
            raise GraphError("word graph edges must be ordered pairs of distinct words")
        present = self.frequency > 0
        if np.any(self.degree[~present]) or np.any(self.strength[~present]):
            raise GraphError("words absent from the document cannot carry edges")
        if np.any(self.degree > self.strength):
            bad = int(np.flatnonzero(self.degree > self.strength)[0])
            raise GraphError(f"degree exceeds strength for {self.document.lexicon[bad]!r}")
        if np.any(self.degree > max(self.n_nodes - 1, 0)):
            raise GraphError("degree exceeds the number of other nodes")

    @property
    def node_ids(self) -> np.ndarray:
        return np.flatnonzero(self.frequency > 0)

    @property
    def n_nodes(self) -> int:
        return int(np.count_nonzero(self.frequency))

    @property
    def n_edges(self) -> int:
        return int(self.edges.shape[0])

    def words(self) -> list[str]:
        return [self.document.lexicon[i] for i in self.node_ids.tolist()]

    def measure(self, weight_kind: str) -> np.ndarray:
        """Per-node measure for the nodes in ``node_ids`` order."""
        if weight_kind not in WEIGHT_KINDS:
            raise ValueError(f"unknown weight kind {weight_kind!r}; expected one of {', '.join(WEIGHT_KINDS)}")
        return getattr(self, weight_kind)[self.node_ids]

    def edge_words(self) -> list[tuple[str, str]]:
        lex = self.document.lexicon
        return [(lex[u], lex[v]) for u, v in self.edges.tolist()]


def _compactify(og: OccurrenceGraph, doc: Document, kind: str) -> WordGraph:
    tokens = doc.tokens
    if og.n_nodes != tokens.size:
        raise GraphError(f"occurrence graph has {og.n_nodes} nodes but the document has {tokens.size} tokens")
    vocab = doc.vocabulary_size
    strength = np.bincount(tokens, weights=og.degrees(), minlength=vocab).astype(np.int64)
    frequency = np.bincount(tokens, minlength=vocab).astype(np.int64)

    u = tokens[og.edges[:, 0]]
    v = tokens[og.edges[:, 1]]
    distinct = u != v
    lo = np.minimum(u, v)[distinct]
    hi = np.maximum(u, v)[distinct]
    codes = np.unique(lo * vocab + hi)
    edges = np.column_stack((codes // vocab, codes % vocab)) if codes.size else np.zeros((0, 2), dtype=np.int64)
    degree = np.bincount(edges.ravel(), minlength=vocab).astype(np.int64)
    return WordGraph(
        kind=kind,
        document=doc,
        edges=edges.astype(np.int64),
        degree=degree,
        strength=strength,
        frequency=frequency,
        stage_one_edges=og.n_edges,
    )


def compactify(og: OccurrenceGraph, doc: Document) -> WordGraph:
    """Merge the occurrence nodes of every word into one node (CHVG).

    Duplicate word pairs collapse to one edge and pairs of occurrences of the
    same word are dropped; both still count towards ``strength``.
    """
    return _compactify(og, doc, "chvg")


def adjacency_occurrence_graph(n: int) -> OccurrenceGraph:
    """Path graph linking each position to the next."""
    idx = np.arange(max(n - 1, 0), dtype=np.int64)
    return OccurrenceGraph(n, np.column_stack((idx, idx + 1)))


def simple_adjacency_network(doc: Document) -> WordGraph:
    """Baseline network: words adjacent in the text are linked, then compactified."""
    return _compactify(adjacency_occurrence_graph(len(doc)), doc, "adjacency")


def node_weight(g: WordGraph, w: int | str, kind: str) -> int:
    """Degree, strength or frequency of word ``w`` (word-id or normalized form)."""
    if kind not in WEIGHT_KINDS:
        raise ValueError(f"unknown weight kind {kind!r}; expected one of {', '.join(WEIGHT_KINDS)}")
    word_id = g.document.word_id(w) if isinstance(w, str) else int(w)
    if not 0 <= word_id < g.frequency.size or g.frequency[word_id] == 0:
        raise KeyError(f"word {w!r} is not a node of this graph")
    return int(getattr(g, kind)[word_id])


# --- exports -----------------------------------------------------------------

def _open(dest: str | os.PathLike | IO[str]):
    if isinstance(dest, (str, os.PathLike)):
        return open(dest, "w", encoding="utf-8", newline="\n")
    return None


def write_edge_list(g: WordGraph, dest: str | os.PathLike | IO[str], header_lines: Sequence[str] = ()) -> None:
    """Tab-separated word pairs, one edge per line, sorted by form."""
    fh = _open(dest)
    if fh is not None:
        with fh:
            write_edge_list(g, fh, header_lines)
        return
    for line in header_lines:
        dest.write(f"# {line}\n")
    pairs = sorted(tuple(sorted(p)) for p in g.edge_words())
    dest.writelines(f"{a}\t{b}\n" for a, b in pairs)


def _dot_id(form: str) -> str:
    return '"' + form.replace("\\", "\\\\").replace('"', '\\"') + '"'


def write_dot(g: WordGraph, dest: str | os.PathLike | IO[str], header_lines: Sequence[str] = ()) -> None:
    fh = _open(dest)
    if fh is not None:
        with fh:
            write_dot(g, fh, header_lines)
        return
    for line in header_lines:
        dest.write(f"// {line}\n")
    lex = g.document.lexicon
    dest.write(f"graph {g.kind} {{\n")
    for i in g.node_ids.tolist():
        dest.write(
            f"  {_dot_id(lex[i])} [degree={g.degree[i]}, strength={g.strength[i]}, frequency={g.frequency[i]}];\n"
        )
    for a, b in sorted(tuple(sorted(p)) for p in g.edge_words()):
        dest.write(f"  {_dot_id(a)} -- {_dot_id(b)};\n")
    dest.write("}\n")


_GRAPHML_NS = "http://graphml.graphdrawing.org/xmlns"


def write_graphml(g: WordGraph, dest: str | os.PathLike, header_lines: Sequence[str] = ()) -> None:
    """GraphML with a ``word`` label and integer degree/strength/frequency attributes."""
    root = ET.Element("graphml", xmlns=_GRAPHML_NS)
    for line in header_lines:
        root.append(ET.Comment(f" {line.replace('--', '- -')} "))
    keys = [("word", "string"), ("degree", "int"), ("strength", "int"), ("frequency", "int")]
    for name, typ in keys:
        ET.SubElement(root, "key", {"id": name, "for": "node", "attr.name": name, "attr.type": typ})
    ET.SubElement(root, "key", {"id": "kind", "for": "graph", "attr.name": "kind", "attr.type": "string"})
    graph = ET.SubElement(root, "graph", id=g.kind, edgedefault="undirected")
    ET.SubElement(graph, "data", key="kind").text = g.kind
    lex = g.document.lexicon
    for i in g.node_ids.tolist():
        node = ET.SubElement(graph, "node", id=f"n{i}")
        ET.SubElement(node, "data", key="word").text = lex[i]
        for name in ("degree", "strength", "frequency"):
            ET.SubElement(node, "data", key=name).text = str(int(getattr(g, name)[i]))
    for u, v in g.edges.tolist():
        ET.SubElement(graph, "edge", source=f"n{u}", target=f"n{v}")
    ET.indent(root)
    ET.ElementTree(root).write(dest, encoding="utf-8", xml_declaration=True)


def graph_summary(g: WordGraph) -> dict:
    return {
        "kind": g.kind,
        "nodes": g.n_nodes,
        "edges": g.n_edges,
        "stage_one_edges": g.stage_one_edges,
        "source": g.document.source_name,
    }
