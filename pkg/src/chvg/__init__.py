"""Word networks built from horizontal visibility graphs of text.

The pipeline turns a text into a per-position series of word weights, links
positions that can "see" each other horizontally, merges all occurrences of a
word into one node and compares the resulting network against a plain
adjacency network to pull out informational keywords.
"""

__version__ = "0.1.0"

from chvg.errors import ChvgError, CorpusError, GraphError, InsufficientPointsError
from chvg.corpus import Document, TokenizerConfig, load_corpus, tokenize
from chvg.weighting import (
    GapStats,
    OccurrenceIndex,
    ValueSeries,
    gap_series,
    gap_stats,
    occurrence_index,
    sigma,
    value_series,
)
from chvg.hvg import OccurrenceGraph, build_hvg, naive_hvg
from chvg.graph import WordGraph, compactify, node_weight, simple_adjacency_network
from chvg.analysis import (
    DegreeDistribution,
    KeywordReport,
    PowerLawFit,
    degree_distribution,
    fit_power_law,
    keyword_report,
    top_n,
    zipf_rank_frequency,
)

__all__ = [
    "ChvgError",
    "CorpusError",
    "DegreeDistribution",
    "Document",
    "GapStats",
    "GraphError",
    "InsufficientPointsError",
    "KeywordReport",
    "OccurrenceGraph",
    "OccurrenceIndex",
    "PowerLawFit",
    "TokenizerConfig",
    "ValueSeries",
    "WordGraph",
    "build_hvg",
    "compactify",
    "degree_distribution",
    "fit_power_law",
    "gap_series",
    "gap_stats",
    "keyword_report",
    "load_corpus",
    "naive_hvg",
    "node_weight",
    "occurrence_index",
    "sigma",
    "simple_adjacency_network",
    "tokenize",
    "top_n",
    "value_series",
    "zipf_rank_frequency",
]
