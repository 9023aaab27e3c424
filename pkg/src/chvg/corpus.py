"""Tokenization of raw text into position-indexed word-id sequences."""

from __future__ import annotations

import hashlib
import os
import unicodedata
from dataclasses import asdict, dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
import regex

from chvg.errors import CorpusError

# Typographic apostrophes are folded onto ASCII so "don’t" and "don't" share an identity.
_APOSTROPHES = str.maketrans({"’": "'", "ʼ": "'"})
_HYPHENS = "-‐"


@dataclass(frozen=True)
class TokenizerConfig:
    case_fold: bool = True
    keep_inner_apostrophe: bool = True
    keep_inner_hyphen: bool = False
    min_token_length: int = 1
    drop_numeric_tokens: bool = True

    def __post_init__(self) -> None:
        if isinstance(self.min_token_length, bool) or not isinstance(self.min_token_length, int):
            raise ValueError(f"min_token_length must be an integer, got {self.min_token_length!r}")
        if self.min_token_length < 1:
            raise ValueError(f"min_token_length must be >= 1, got {self.min_token_length}")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> TokenizerConfig:
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown tokenizer options: {', '.join(sorted(unknown))}")
        return cls(**data)

    @cached_property
    def pattern(self) -> regex.Pattern:
        """Compiled token pattern: a letter run optionally joined by inner marks."""
        core = r"[\p{L}\p{M}]" if self.drop_numeric_tokens else r"[\p{L}\p{M}\p{Nd}]"
        joiners = ""
        if self.keep_inner_apostrophe:
            joiners += "'"
        if self.keep_inner_hyphen:
            joiners += _HYPHENS
        if joiners:
            return regex.compile(rf"{core}+(?:[{regex.escape(joiners)}]{core}+)*")
        return regex.compile(rf"{core}+")


@dataclass(frozen=True, eq=False)
class Document:
    """A normalized token sequence.

    ``tokens[n]`` is the word-id at text position ``n`` and ``lexicon[i]`` is
    the normalized surface form of word-id ``i``. Word-ids are assigned in
    order of first occurrence.
    """

    tokens: np.ndarray
    lexicon: tuple[str, ...]
    source_name: str = ""
    config: TokenizerConfig = field(default_factory=TokenizerConfig)

    def __post_init__(self) -> None:
        tokens = np.asarray(self.tokens, dtype=np.int64).reshape(-1)
        tokens.setflags(write=False)
        object.__setattr__(self, "tokens", tokens)
        object.__setattr__(self, "lexicon", tuple(self.lexicon))
        if len(set(self.lexicon)) != len(self.lexicon):
            raise ValueError("lexicon forms must be unique")
        if tokens.size and (tokens.min() < 0 or tokens.max() >= len(self.lexicon)):
            raise ValueError("token ids must index into the lexicon")

    @classmethod
    def from_words(
        cls,
        words: Iterable[str],
        source_name: str = "",
        config: TokenizerConfig | None = None,
    ) -> Document:
        """Build a document from already-normalized words, interning in first-seen order."""
        ids: dict[str, int] = {}
        tokens = [ids.setdefault(w, len(ids)) for w in words]
        return cls(
            tokens=np.array(tokens, dtype=np.int64),
            lexicon=tuple(ids),
            source_name=source_name,
            config=config or TokenizerConfig(),
        )

    def __len__(self) -> int:
        return int(self.tokens.size)

    @property
    def vocabulary_size(self) -> int:
        return len(self.lexicon)

    @cached_property
    def word_ids(self) -> dict[str, int]:
        return {form: i for i, form in enumerate(self.lexicon)}

    def word_id(self, form: str) -> int:
        try:
            return self.word_ids[form]
        except KeyError:
            raise KeyError(f"word {form!r} does not occur in {self.source_name or 'document'}") from None

    def words(self) -> list[str]:
        """The token sequence as surface forms."""
        return [self.lexicon[i] for i in self.tokens.tolist()]

    @cached_property
    def fingerprint(self) -> str:
        """Content hash of tokens and lexicon; identifies the source of derived graphs."""
        h = hashlib.sha256()
        h.update(self.tokens.astype("<i8").tobytes())
        for form in self.lexicon:
            h.update(form.encode("utf-8"))
            h.update(b"\0")
        return h.hexdigest()


def _normalize(text: str, config: TokenizerConfig) -> list[str]:
    text = unicodedata.normalize("NFC", text).translate(_APOSTROPHES)
    forms = [m.group(0) for m in config.pattern.finditer(text)]
    if config.case_fold:
        forms = [f.upper() for f in forms]
    if config.min_token_length > 1:
        forms = [f for f in forms if len(f) >= config.min_token_length]
    return forms


def tokenize(text: str, config: TokenizerConfig | None = None, source_name: str = "") -> Document:
    """Split ``text`` into normalized word tokens.

    Tokens are maximal runs of Unicode letters (and decimal digits when
    ``drop_numeric_tokens`` is off), optionally joined by inner apostrophes or
    hyphens. Everything else separates tokens.
    """
    config = config or TokenizerConfig()
    return Document.from_words(_normalize(text, config), source_name=source_name, config=config)


def read_text(path: str | os.PathLike) -> str:
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise CorpusError(f"cannot read {os.fspath(path)}: {exc.strerror or exc}") from exc
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise CorpusError(
            f"{os.fspath(path)}: invalid UTF-8 at byte offset {exc.start}"
        ) from exc


def load_corpus(paths: Sequence[str | os.PathLike], config: TokenizerConfig | None = None) -> Document:
    """Read files in order, join them with a newline and tokenize the result."""
    texts = [read_text(p) for p in paths]
    name = "+".join(os.path.basename(os.fspath(p)) for p in paths)
    return tokenize("\n".join(texts), config, source_name=name)
