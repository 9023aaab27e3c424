import json

import numpy as np
import pytest

from chvg.cli import EXIT_DATA, EXIT_OK, EXIT_USAGE, main


@pytest.fixture
def text_file(tmp_path):
    def make(content: str, name: str = "in.txt"):
        path = tmp_path / name
        path.write_text(content, encoding="utf-8")
        return path

    return make


def data_lines(path):
    return [line for line in path.read_text(encoding="utf-8").splitlines() if not line.startswith("#")]


def test_build_three_words(tmp_path, text_file):
    out = tmp_path / "out"
    assert main(["build", str(text_file("a b a")), "-o", str(out)]) == EXIT_OK
    # sigma is 0 everywhere, so both stage-one graphs are the path 0-1-2
    assert data_lines(out / "chvg.edges.tsv") == ["A\tB"]
    assert data_lines(out / "adjacency.edges.tsv") == ["A\tB"]
    assert data_lines(out / "gap_stats.csv") == ["word,K,mean_gap,sigma", "A,2,2.0,0.0", "B,1,,0.0"]


def test_build_all_formats(tmp_path, text_file):
    out = tmp_path / "out"
    src = text_file("x y x z y x")
    assert main(["build", str(src), "-o", str(out), "--formats", "edgelist,dot,graphml,hvg"]) == EXIT_OK
    for name in ("chvg.dot", "adjacency.dot", "chvg.graphml", "adjacency.graphml", "hvg.edges.txt"):
        assert (out / name).exists()
    hvg_edges = data_lines(out / "hvg.edges.txt")
    assert {"0 1", "1 2", "4 5"} <= set(hvg_edges)
    assert hvg_edges == sorted(hvg_edges, key=lambda e: tuple(map(int, e.split())))
    header = (out / "chvg.edges.tsv").read_text(encoding="utf-8").splitlines()[0]
    meta = json.loads(header[2:])
    assert meta["artifact"] == "chvg" and meta["version"]
    assert meta["config"]["tokenizer"]["case_fold"] is True
    assert meta["conventions"]["hapax_sigma"] == 0.0


def test_build_empty_file(tmp_path, text_file):
    out = tmp_path / "out"
    assert main(["build", str(text_file("")), "-o", str(out)]) == EXIT_OK
    assert data_lines(out / "chvg.edges.tsv") == []
    assert data_lines(out / "gap_stats.csv") == ["word,K,mean_gap,sigma"]


def test_build_missing_path(tmp_path, capsys):
    missing = tmp_path / "missing.txt"
    assert main(["build", str(missing), "-o", str(tmp_path / "out")]) == EXIT_DATA
    err = capsys.readouterr().err
    assert "load" in err and "missing.txt" in err


def test_build_undecodable(tmp_path, capsys):
    path = tmp_path / "latin1.txt"
    path.write_bytes(b"caf\xe9")
    assert main(["build", str(path), "-o", str(tmp_path / "out")]) == EXIT_DATA
    assert "byte offset 3" in capsys.readouterr().err


def test_analyze_outputs(tmp_path, text_file):
    out = tmp_path / "out"
    rng = np.random.default_rng(3)
    vocab = ["".join(rng.choice(list("abcdefgh"), size=5)) for _ in range(300)]
    ranks = np.minimum(rng.zipf(1.6, size=3000), len(vocab)) - 1
    src = text_file(" ".join(vocab[r] for r in ranks))
    code = main(["analyze", str(src), "-o", str(out), "--k-min", "1"])
    assert code == EXIT_OK
    summary = json.loads((out / "fit_summary.json").read_text(encoding="utf-8"))
    assert set(summary["power_law"]) == {"chvg_degree", "chvg_strength", "adjacency_degree"}
    for name in ("chvg_ccdf_degree.tsv", "chvg_ccdf_strength.tsv", "adjacency_ccdf_degree.tsv"):
        rows = [line.split("\t") for line in data_lines(out / name)[1:]]
        ys = [float(y) for _, y in rows]
        assert all(a >= b for a, b in zip(ys, ys[1:]))
    assert data_lines(out / "zipf.tsv")[0] == "rank\tword\tfrequency"


def test_analyze_one_word(tmp_path, text_file, capsys):
    assert main(["analyze", str(text_file("whale")), "-o", str(tmp_path / "out")]) == EXIT_DATA
    assert "analysis" in capsys.readouterr().err


def test_analyze_empty_graph(tmp_path, text_file, capsys):
    assert main(["analyze", str(text_file("")), "-o", str(tmp_path / "out")]) == EXIT_DATA
    assert "empty graph" in capsys.readouterr().err


def test_analyze_k_min_too_high(tmp_path, text_file, capsys):
    src = text_file("the whale and the sea and the ship and the whale")
    assert main(["analyze", str(src), "-o", str(tmp_path / "out"), "--k-min", "1000"]) == EXIT_DATA
    assert "insufficient points" in capsys.readouterr().err


def test_keywords_outputs(tmp_path, text_file):
    out = tmp_path / "out"
    src = text_file("the whale and the sea and the ship and the whale swam the sea")
    assert main(["keywords", str(src), "-o", str(out), "-n", "3"]) == EXIT_OK
    payload = json.loads((out / "keywords.json").read_text(encoding="utf-8"))
    assert payload["report"]["n"] == 3
    assert len(payload["report"]["lambda"]) == 3
    assert payload["meta"]["config"]["n"] == 3
    assert "seed" not in payload["meta"]["config"]
    assert (out / "keywords.csv").exists()


def test_keywords_n_zero(tmp_path, text_file, capsys):
    assert main(["keywords", str(text_file("a b")), "-o", str(tmp_path / "out"), "-n", "0"]) == EXIT_USAGE
    assert "n must be >= 1" in capsys.readouterr().err


def test_keywords_deterministic_across_seeds(tmp_path, text_file):
    src = str(text_file("the whale and the sea and the ship and the whale swam"))
    outputs = []
    for seed, name in ((1, "a"), (99, "b")):
        config = tmp_path / f"{name}.json"
        config.write_text(json.dumps({"seed": seed}), encoding="utf-8")
        out = tmp_path / name
        assert main(["keywords", src, "-o", str(out), "--config", str(config)]) == EXIT_OK
        outputs.append(((out / "keywords.json").read_bytes(), (out / "keywords.csv").read_bytes()))
    assert outputs[0] == outputs[1]


def test_random_baseline(tmp_path):
    out = tmp_path / "out"
    assert main(["random-baseline", "-o", str(out), "--length", "20000", "--seed", "4"]) == EXIT_OK
    first = (out / "random_baseline.json").read_bytes()
    payload = json.loads(first)
    assert payload["summary"]["status"] == "pass"
    assert payload["meta"]["config"] == {"seed": 4, "length": 20000}
    assert main(["random-baseline", "-o", str(out), "--length", "20000", "--seed", "4"]) == EXIT_OK
    assert (out / "random_baseline.json").read_bytes() == first


def test_random_baseline_too_short(tmp_path):
    out = tmp_path / "out"
    assert main(["random-baseline", "-o", str(out), "--length", "10"]) == EXIT_OK
    summary = json.loads((out / "random_baseline.json").read_text())["summary"]
    assert summary["status"] == "too short"


def test_config_file_and_flag_precedence(tmp_path, text_file):
    src = text_file("Don't don't")
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"case_fold": False, "keep_inner_apostrophe": False, "n": 2}), encoding="utf-8")
    out = tmp_path / "out"
    assert main(["keywords", str(src), "-o", str(out), "--config", str(config), "--inner-apostrophe"]) == EXIT_OK
    payload = json.loads((out / "keywords.json").read_text(encoding="utf-8"))
    assert payload["meta"]["config"]["tokenizer"]["case_fold"] is False
    assert payload["meta"]["config"]["tokenizer"]["keep_inner_apostrophe"] is True
    assert [r["word"] for r in payload["report"]["lambda"]] == ["Don't", "don't"]


def test_config_file_nested_tokenizer(tmp_path, text_file):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"tokenizer": {"min_token_length": 2}}), encoding="utf-8")
    out = tmp_path / "out"
    assert main(["keywords", str(text_file("a bb cc bb")), "-o", str(out), "--config", str(config)]) == EXIT_OK
    payload = json.loads((out / "keywords.json").read_text(encoding="utf-8"))
    assert {r["word"] for r in payload["report"]["lambda"]} == {"BB", "CC"}


@pytest.mark.parametrize(
    "argv",
    [
        ["keywords", "x.txt", "--config", "/nonexistent/run.json"],
        ["keywords", "x.txt", "--min-token-length", "0"],
        ["keywords", "x.txt", "--scheme", "tfidf"],
        ["build", "x.txt", "--formats", "png"],
        ["keywords"],
        ["frobnicate"],
        [],
    ],
)
def test_usage_errors(argv, capsys):
    assert main(argv) == EXIT_USAGE
    assert "usage error" in capsys.readouterr().err


def test_unknown_config_key(tmp_path):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"colour": "blue"}), encoding="utf-8")
    assert main(["keywords", "x.txt", "--config", str(config)]) == EXIT_USAGE


def test_output_dir_from_environment(tmp_path, text_file, monkeypatch):
    out = tmp_path / "envout"
    monkeypatch.setenv("CHVG_OUTPUT_DIR", str(out))
    assert main(["build", str(text_file("a b a"))]) == EXIT_OK
    assert (out / "chvg.edges.tsv").exists()


def test_batch_mode(tmp_path, text_file):
    a = text_file("a b a", "first.txt")
    b = text_file("c d c d", "second.txt")
    out = tmp_path / "out"
    assert main(["build", str(a), str(b), "-o", str(out), "--batch"]) == EXIT_OK
    assert data_lines(out / "first" / "chvg.edges.tsv") == ["A\tB"]
    assert data_lines(out / "second" / "chvg.edges.tsv") == ["C\tD"]


def test_concatenated_inputs(tmp_path, text_file):
    a = text_file("a b", "first.txt")
    b = text_file("c", "second.txt")
    out = tmp_path / "out"
    assert main(["build", str(a), str(b), "-o", str(out)]) == EXIT_OK
    assert data_lines(out / "adjacency.edges.tsv") == ["A\tB", "B\tC"]
