import io
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from chvg.weighting import (
    SCHEMES,
    gap_series,
    gap_stats,
    occurrence_index,
    sigma,
    value_series,
    write_gap_stats_csv,
)
from conftest import doc

increasing = st.lists(st.integers(0, 10_000), min_size=0, max_size=60, unique=True).map(sorted)


def test_occurrence_index_examples():
    idx = occurrence_index(doc("A B A"))
    assert {k: v.tolist() for k, v in idx.positions.items()} == {0: [0, 2], 1: [1]}
    assert len(occurrence_index(doc(""))) == 0
    four = occurrence_index(doc("A A A A"))
    assert four[0].tolist() == [0, 1, 2, 3]
    assert four.count(0) == 4


@given(st.lists(st.sampled_from("ABCDE"), max_size=50))
def test_occurrence_index_partitions_positions(words):
    d = doc(" ".join(words))
    idx = occurrence_index(d)
    assert sum(idx.count(w) for w in idx) == len(d)
    seen = sorted(p for w in idx for p in idx[w].tolist())
    assert seen == list(range(len(d)))
    for w in idx:
        assert np.all(np.diff(idx[w]) > 0)
        assert np.all(d.tokens[idx[w]] == w)


def test_gap_series_examples():
    assert gap_series([3, 4, 7]).tolist() == [1, 3]
    assert gap_series([5]).tolist() == []
    assert gap_series([0, 10, 20, 30]).tolist() == [10, 10, 10]


@pytest.mark.parametrize("bad", [[3, 3], [5, 4], [0, 2, 1]])
def test_gap_series_rejects_non_increasing(bad):
    with pytest.raises(ValueError):
        gap_series(bad)
    with pytest.raises(ValueError):
        sigma(bad)


def test_sigma_examples():
    # gaps [1, 3]: mean 2, mean square 5, sqrt(5 - 4) / 2
    assert sigma([3, 4, 7]) == 0.5
    assert sigma([0, 10, 20, 30]) == 0.0
    assert sigma([5]) == 0.0
    assert sigma([]) == 0.0
    assert sigma([2, 9]) == 0.0


@given(increasing)
def test_sigma_matches_numpy_population_cv(positions):
    gaps = np.diff(positions).astype(float)
    expected = float(np.std(gaps) / np.mean(gaps)) if gaps.size else 0.0
    assert sigma(positions) == pytest.approx(expected, rel=1e-12, abs=1e-12)
    assert sigma(positions) >= 0


@given(increasing, st.integers(1, 1000), st.integers(0, 10**6))
def test_sigma_scale_and_translation_invariant(positions, scale, offset):
    base = sigma(positions)
    assert sigma([scale * p for p in positions]) == base
    assert sigma([p + offset for p in positions]) == base


@given(st.integers(0, 1000), st.integers(1, 500), st.integers(1, 40))
def test_sigma_of_arithmetic_progression_is_zero(start, step, count):
    assert sigma([start + step * i for i in range(count)]) == 0.0


def test_gap_stats_fields():
    stats = {s.word: s for s in gap_stats(doc("X A A X A X X"))}
    a = stats["A"]
    assert a.count == 3
    assert a.gaps.tolist() == [1, 2]
    assert a.mean_gap == 1.5
    assert a.mean_sq_gap == 2.5
    assert a.sigma == pytest.approx(math.sqrt(2.5 - 2.25) / 1.5)
    x = stats["X"]
    assert x.gaps.tolist() == [3, 2, 1]


def test_gap_stats_hapax():
    (s,) = gap_stats(doc("A"))
    assert s.count == 1
    assert len(s.gaps) == 0
    assert math.isnan(s.mean_gap)
    assert s.sigma == 0.0


def test_value_series_examples():
    assert value_series(doc("A B A"), "sigma").values.tolist() == [0.0, 0.0, 0.0]
    assert value_series(doc("A B A"), "frequency").values.tolist() == [2.0, 1.0, 2.0]
    assert value_series(doc("AB C"), "word_length").values.tolist() == [2.0, 1.0]
    assert len(value_series(doc(""), "sigma")) == 0


def test_value_series_sigma_is_shared_per_word():
    d = doc("A B A C A A B C C C A")
    series = value_series(d, "sigma")
    assert len(series) == len(d)
    for n, w in enumerate(d.tokens.tolist()):
        positions = np.flatnonzero(d.tokens == w)
        assert series.values[n] == sigma(positions)


def test_value_series_unknown_scheme():
    with pytest.raises(ValueError) as info:
        value_series(doc("A"), "tfidf")
    for name in SCHEMES:
        assert name in str(info.value)


def test_gap_stats_csv():
    buf = io.StringIO()
    write_gap_stats_csv(gap_stats(doc("A B A A")), buf, header_lines=["meta"])
    lines = buf.getvalue().splitlines()
    assert lines[0] == "# meta"
    assert lines[1] == "word,K,mean_gap,sigma"
    assert lines[2] == "A,3,1.5,0.3333333333333333"
    assert lines[3] == "B,1,,0.0"
