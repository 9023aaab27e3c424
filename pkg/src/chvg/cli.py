"""Command-line entry point.

    chvg build     corpus.txt -o out/
    chvg analyze   corpus.txt -o out/ --k-min 2
    chvg keywords  corpus.txt -o out/ -n 100
    chvg random-baseline --length 100000 --seed 7 -o out/

Exit codes: 0 success, 1 usage or configuration error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from contextlib import contextmanager
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterator, Sequence

from chvg import __version__
from chvg import analysis, graph, hvg, weighting
from chvg.corpus import Document, TokenizerConfig, load_corpus
from chvg.errors import ChvgError

log = logging.getLogger("chvg")

OUTPUT_DIR_ENV = "CHVG_OUTPUT_DIR"
DEFAULT_OUTPUT_DIR = "chvg-out"
EXPORT_FORMATS = ("edgelist", "dot", "graphml", "hvg")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

CONVENTIONS = {
    "hapax_sigma": weighting.HAPAX_SIGMA,
    "gap_moments": "population",
    "boundary_gaps": "excluded",
    "hvg_ties": "strict inequality: every bar strictly between must be lower than both ends",
    "compactify_self_pairs": "dropped from edges, counted in strength",
    "rank_ties": "weight descending, then normalized form ascending",
}


class UsageError(Exception):
    pass


class StageError(Exception):
    def __init__(self, stage: str, message: str) -> None:
        super().__init__(f"{stage}: {message}")
        self.stage = stage


@dataclass(frozen=True)
class RunConfig:
    inputs: tuple[str, ...] = ()
    tokenizer: TokenizerConfig = field(default_factory=TokenizerConfig)
    scheme: str = "sigma"
    chvg_weight: str = "strength"
    adjacency_weight: str = "degree"
    n: int = 100
    k_min: int = 2
    output_dir: str = DEFAULT_OUTPUT_DIR
    formats: tuple[str, ...] = ("edgelist",)
    seed: int = 0
    length: int = 100_000
    batch: bool = False

    def validate(self) -> None:
        if self.scheme not in weighting.SCHEMES:
            raise UsageError(f"unknown scheme {self.scheme!r}; valid schemes: {', '.join(weighting.SCHEMES)}")
        for w in (self.chvg_weight, self.adjacency_weight):
            if w not in graph.WEIGHT_KINDS:
                raise UsageError(f"unknown weight kind {w!r}; expected one of {', '.join(graph.WEIGHT_KINDS)}")
        if self.n < 1:
            raise UsageError(f"n must be >= 1, got {self.n}")
        if self.k_min < 1:
            raise UsageError(f"k_min must be >= 1, got {self.k_min}")
        if self.length < 0:
            raise UsageError(f"length must be >= 0, got {self.length}")
        unknown = set(self.formats) - set(EXPORT_FORMATS)
        if unknown:
            raise UsageError(f"unknown export formats: {', '.join(sorted(unknown))}")

    def echo(self, command: str) -> dict:
        """Config fields that determine the outputs of ``command``.

        The seed and series length only matter for the random baseline, so
        they are left out of the document pipelines' echo.
        """
        if command == "random-baseline":
            config = {"seed": self.seed, "length": self.length}
        else:
            config = {
                "inputs": list(self.inputs),
                "tokenizer": self.tokenizer.to_dict(),
                "scheme": self.scheme,
                "batch": self.batch,
            }
            if command == "build":
                config["formats"] = list(self.formats)
            if command == "analyze":
                config["k_min"] = self.k_min
            if command == "keywords":
                config.update(n=self.n, chvg_weight=self.chvg_weight, adjacency_weight=self.adjacency_weight)
        return {
            "artifact": "chvg",
            "version": __version__,
            "command": command,
            "config": config,
            "conventions": CONVENTIONS if command != "random-baseline" else {},
        }


def _header(meta: dict) -> list[str]:
    return [json.dumps(meta, sort_keys=True, ensure_ascii=False)]


@contextmanager
def stage(name: str) -> Iterator[None]:
    try:
        yield
    except (ChvgError, ValueError, KeyError, OSError) as exc:
        raise StageError(name, str(exc)) from exc


# --- pipeline ------------------------------------------------------------------

@dataclass
class Pipeline:
    doc: Document
    occurrence: hvg.OccurrenceGraph
    chvg: graph.WordGraph
    adjacency: graph.WordGraph


def run_pipeline(paths: Sequence[str], config: RunConfig) -> Pipeline:
    with stage("load"):
        doc = load_corpus(paths, config.tokenizer)
    log.info("loaded %s: %d tokens, %d distinct words", doc.source_name, len(doc), doc.vocabulary_size)
    with stage("weighting"):
        series = weighting.value_series(doc, config.scheme)
    with stage("hvg"):
        og = hvg.build_hvg(series)
    with stage("graph"):
        chvg = graph.compactify(og, doc)
        adjacency = graph.simple_adjacency_network(doc)
    log.info("chvg: %d nodes, %d edges; adjacency: %d edges", chvg.n_nodes, chvg.n_edges, adjacency.n_edges)
    return Pipeline(doc, og, chvg, adjacency)


def _document_jobs(config: RunConfig) -> list[tuple[list[str], Path]]:
    out = Path(config.output_dir)
    if not config.batch:
        return [(list(config.inputs), out)]
    return [([p], out / Path(p).stem) for p in config.inputs]


def cmd_build(config: RunConfig) -> None:
    for paths, out in _document_jobs(config):
        pipe = run_pipeline(paths, config)
        header = _header(config.echo("build"))
        with stage("export"):
            out.mkdir(parents=True, exist_ok=True)
            for g in (pipe.chvg, pipe.adjacency):
                if "edgelist" in config.formats:
                    graph.write_edge_list(g, out / f"{g.kind}.edges.tsv", header)
                if "dot" in config.formats:
                    graph.write_dot(g, out / f"{g.kind}.dot", header)
                if "graphml" in config.formats:
                    graph.write_graphml(g, out / f"{g.kind}.graphml", header)
            if "hvg" in config.formats:
                hvg.write_edge_list(pipe.occurrence, out / "hvg.edges.txt", header)
            weighting.write_gap_stats_csv(weighting.gap_stats(pipe.doc), out / "gap_stats.csv", header)
        print(f"{out}: {pipe.chvg.n_nodes} words, chvg {pipe.chvg.n_edges} edges, adjacency {pipe.adjacency.n_edges} edges")


def cmd_analyze(config: RunConfig) -> None:
    for paths, out in _document_jobs(config):
        pipe = run_pipeline(paths, config)
        meta = config.echo("analyze")
        header = _header(meta)
        targets = [(pipe.chvg, "degree"), (pipe.chvg, "strength"), (pipe.adjacency, "degree")]
        with stage("analysis"):
            dists = [(g, kind, analysis.degree_distribution(g, kind)) for g, kind in targets]
            fits = {f"{g.kind}_{kind}": analysis.fit_power_law(d, config.k_min).to_dict() for g, kind, d in dists}
            zipf = analysis.zipf_rank_frequency(pipe.doc)
            try:
                slope = analysis.zipf_slope(zipf)
            except ChvgError:
                slope = None
        with stage("export"):
            out.mkdir(parents=True, exist_ok=True)
            for g, kind, d in dists:
                analysis.write_ccdf_tsv(d, out / f"{g.kind}_ccdf_{kind}.tsv", header)
            analysis.write_zipf_tsv(zipf, out / "zipf.tsv", header)
            summary = {
                "meta": meta,
                "tokens": len(pipe.doc),
                "words": pipe.doc.vocabulary_size,
                "graphs": {g.kind: graph.graph_summary(g) for g in (pipe.chvg, pipe.adjacency)},
                "power_law": fits,
                "zipf_slope_ranks_10_1000": slope,
            }
            with open(out / "fit_summary.json", "w", encoding="utf-8") as fh:
                json.dump(summary, fh, indent=2, sort_keys=True, ensure_ascii=False)
                fh.write("\n")
        for name, fit in fits.items():
            print(f"{name}: slope {fit['exponent_ls']:.3f}, R^2 {fit['r_squared']:.3f}, mle {fit['exponent_mle']:.3f}")


def cmd_keywords(config: RunConfig) -> None:
    for paths, out in _document_jobs(config):
        pipe = run_pipeline(paths, config)
        meta = config.echo("keywords")
        with stage("analysis"):
            report = analysis.keyword_report(
                pipe.chvg, pipe.adjacency, config.n, (config.chvg_weight, config.adjacency_weight)
            )
        with stage("export"):
            out.mkdir(parents=True, exist_ok=True)
            analysis.write_report_json(report, out / "keywords.json", meta)
            analysis.write_report_csv(report, out / "keywords.csv", _header(meta))
        print(f"{out}: omega ({len(report.omega)} words): {' '.join(e.word for e in report.omega)}")


def cmd_random_baseline(config: RunConfig) -> None:
    summary = hvg.random_baseline(config.length, config.seed)
    out = Path(config.output_dir)
    with stage("export"):
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "random_baseline.json", "w", encoding="utf-8") as fh:
            json.dump({"meta": config.echo("random-baseline"), "summary": summary}, fh, indent=2, sort_keys=True)
            fh.write("\n")
    print(f"mean degree {summary['mean_degree']:.4f} (expected 4); status: {summary['status']}")


COMMANDS = {
    "build": cmd_build,
    "analyze": cmd_analyze,
    "keywords": cmd_keywords,
    "random-baseline": cmd_random_baseline,
}


# --- argument handling -------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:
        raise UsageError(message)


_TOKENIZER_FLAGS = {
    "case_fold": ("--case-fold", "--no-case-fold"),
    "keep_inner_apostrophe": ("--inner-apostrophe", "--no-inner-apostrophe"),
    "keep_inner_hyphen": ("--inner-hyphen", "--no-inner-hyphen"),
    "drop_numeric_tokens": ("--drop-numeric", "--keep-numeric"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="chvg", description="Visibility-graph word networks and keyword extraction.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = _Parser(add_help=False)
    common.add_argument("-o", "--output-dir", help=f"output directory (default: ${OUTPUT_DIR_ENV} or {DEFAULT_OUTPUT_DIR})")
    common.add_argument("--config", help="JSON file of option values; command-line flags take precedence")
    common.add_argument("-v", "--verbose", action="store_true")

    doc_opts = _Parser(add_help=False)
    doc_opts.add_argument("inputs", nargs="*", help="UTF-8 text files, concatenated in order")
    doc_opts.add_argument("--batch", action="store_true", default=None, help="process each input file separately")
    doc_opts.add_argument("--scheme", choices=weighting.SCHEMES)
    tok = doc_opts.add_argument_group("tokenizer")
    for name, (on, off) in _TOKENIZER_FLAGS.items():
        tok.add_argument(on, dest=name, action="store_true", default=None)
        tok.add_argument(off, dest=name, action="store_false", default=None)
    tok.add_argument("--min-token-length", type=int)

    p = sub.add_parser("build", parents=[common, doc_opts], help="export CHVG and adjacency graphs plus gap statistics")
    p.add_argument("--formats", help=f"comma-separated subset of {','.join(EXPORT_FORMATS)}")

    p = sub.add_parser("analyze", parents=[common, doc_opts], help="degree distributions, power-law fits, Zipf table")
    p.add_argument("--k-min", type=int)

    p = sub.add_parser("keywords", parents=[common, doc_opts], help="top-n sets and their difference")
    p.add_argument("-n", type=int)
    p.add_argument("--chvg-weight", choices=graph.WEIGHT_KINDS)
    p.add_argument("--adjacency-weight", choices=graph.WEIGHT_KINDS)

    p = sub.add_parser("random-baseline", parents=[common], help="check the HVG of an i.i.d. series against its exact degree law")
    p.add_argument("--length", type=int)
    p.add_argument("--seed", type=int)
    return parser


def _read_config_file(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError(f"config {path} must hold a JSON object")
    return data


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Merge defaults, the optional config file and command-line flags, in that order."""
    values = _read_config_file(args.config) if getattr(args, "config", None) else {}
    tok_fields = set(TokenizerConfig.__dataclass_fields__)
    run_fields = set(RunConfig.__dataclass_fields__) - {"tokenizer"}
    tok_values = dict(values.pop("tokenizer", {}))
    for key in list(values):
        if key in tok_fields:
            tok_values[key] = values.pop(key)
        elif key not in run_fields:
            raise UsageError(f"unknown config key {key!r}")

    for key in tok_fields:
        flag = getattr(args, key, None)
        if flag is not None:
            tok_values[key] = flag
    for key in run_fields:
        flag = getattr(args, key, None)
        if key == "inputs" and not flag:
            continue
        if flag is not None:
            values[key] = flag
    if isinstance(values.get("formats"), str):
        values["formats"] = [f for f in values["formats"].split(",") if f]
    if "output_dir" not in values:
        values["output_dir"] = os.environ.get(OUTPUT_DIR_ENV, DEFAULT_OUTPUT_DIR)

    try:
        tokenizer = TokenizerConfig.from_dict(tok_values)
        config = RunConfig(tokenizer=tokenizer, **values)
        config = replace(config, inputs=tuple(config.inputs), formats=tuple(config.formats))
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    try:
        config.validate()
    except TypeError as exc:
        raise UsageError(str(exc)) from exc
    if args.command != "random-baseline" and not config.inputs:
        raise UsageError("no input files given")
    return config


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        config = resolve_config(args)
    except UsageError as exc:
        print(f"chvg: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        COMMANDS[args.command](config)
    except StageError as exc:
        print(f"chvg: error in stage {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
