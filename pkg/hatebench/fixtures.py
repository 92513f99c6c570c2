"""Synthetic offline datasets for running the whole pipeline without downloads.

Three made-up languages (``xa``, ``xb``, ``xc``) each draw words from their
own disjoint vocabulary. A hateful post carries two keywords from its
language's hate list, a neutral post two from the neutral list; the rest is
filler and function words. Each language is stored in a different raw
format with a different labeling scheme so ingestion exercises every rule
kind, and part of ``xc`` only ships post ids resolved through a lookup file.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product
from typing import TYPE_CHECKING

import numpy as np
import pandas as pd

if TYPE_CHECKING:
    from pathlib import Path

TOY_LANGUAGES = ("xa", "xb", "xc")
TOY_FAMILY = ("toyfam", ("xa", "xb"))
_PREFIX = {"xa": "ka", "xb": "mo", "xc": "ti"}
_SYLLABLES = ("ra", "lo", "mi", "su", "te", "vo", "ne", "pa")
_HATE_FRACTION = 0.4
_CATEGORIES = ("hateful", "offensive")


@dataclass(frozen=True)
class ToyVocabulary:
    hate: tuple[str, ...]
    neutral: tuple[str, ...]
    filler: tuple[str, ...]
    function: tuple[str, ...]

    @property
    def content(self) -> tuple[str, ...]:
        return self.hate + self.neutral + self.filler


@dataclass(frozen=True)
class ToyWorkspace:
    root: Path
    config: Path
    vocabulary: Path
    scenarios: tuple[Path, ...]


def toy_vocabulary(language: str) -> ToyVocabulary:
    """Return the word lists of a toy language."""
    words = [_PREFIX[language] + a + b for a, b in product(_SYLLABLES, repeat=2)]
    return ToyVocabulary(
        hate=tuple(words[0:8]),
        neutral=tuple(words[8:16]),
        filler=tuple(words[16:40]),
        function=tuple(words[40:44]),
    )


def _post(vocab: ToyVocabulary, label: int, rng: np.random.Generator) -> str:
    keywords = vocab.hate if label else vocab.neutral
    words = [
        *rng.choice(keywords, size=2, replace=False),
        *rng.choice(vocab.filler, size=int(rng.integers(3, 7))),
        *rng.choice(vocab.function, size=int(rng.integers(1, 3))),
    ]
    order = rng.permutation(len(words))
    text = " ".join(str(words[i]) for i in order)
    return text[0].upper() + text[1:]


def toy_posts(language: str, n_records: int, seed: int) -> list[tuple[str, int]]:
    """Generate ``(text, label)`` pairs for *language*, hate fraction 0.4."""
    rng = np.random.default_rng([seed, TOY_LANGUAGES.index(language)])
    vocab = toy_vocabulary(language)
    n_hate = round(n_records * _HATE_FRACTION)
    labels = [1] * n_hate + [0] * (n_records - n_hate)
    labels = [labels[i] for i in rng.permutation(n_records)]
    return [(_post(vocab, label, rng), label) for label in labels]


def _write_xa(raw: Path, posts: list[tuple[str, int]]) -> None:
    rows = [{"text": text, "label": str(label)} for text, label in posts]
    # Rows marked as spam are rejected by the mapping rule.
    rows += [
        {"text": "Kalora kalomi", "label": "spam"},
        {"text": "Kasura", "label": "spam"},
    ]
    pd.DataFrame(rows).to_csv(raw / "xa.csv", index=False, lineterminator="\n")


def _write_xb(raw: Path, posts: list[tuple[str, int]]) -> None:
    rows = [
        {"text": text, "category": _CATEGORIES[i % 2] if label else "normal"}
        for i, (text, label) in enumerate(posts)
    ]
    pd.DataFrame(rows).to_csv(
        raw / "xb.tsv", sep="\t", index=False, lineterminator="\n"
    )


def _write_xc(raw: Path, posts: list[tuple[str, int]], n_by_id: int) -> None:
    direct, by_id = posts[:-n_by_id], posts[-n_by_id:]
    with (raw / "xc.jsonl").open("w", encoding="utf-8", newline="\n") as fh:
        for i, (text, label) in enumerate(direct):
            votes = ["hate" if label else "none"] * 3
            votes[i % 3] = ("none" if label else "hate") if i % 2 else votes[i % 3]
            row = {"text": text, "a1": votes[0], "a2": votes[1], "a3": votes[2]}
            fh.write(json.dumps(row) + "\n")

    ids = [f"9{100000 + i}" for i in range(n_by_id)]
    frame = pd.DataFrame(
        {"tweet_id": ids, "label": [str(label) for _, label in by_id]}
    )
    frame.to_csv(raw / "xc_ids.csv", index=False, lineterminator="\n")
    # Every fifth id is unavailable, as deleted posts are.
    lookup = {
        tid: text
        for i, (tid, (text, _)) in enumerate(zip(ids, by_id, strict=True))
        if i % 5
    }
    (raw / "lookup.json").write_text(
        json.dumps(lookup, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


_CONFIG = """\
seed = {seed}
test_ratio = 0.2
corpus_dir = "corpus"
runs_dir = "runs"
stopword_dir = "stopwords"
embedding_cache_dir = "cache"
languages = ["xa", "xb", "xc"]

[families]
{family} = {members}

[fetch]
fixture = "raw/lookup.json"
batch_size = 8
max_retries = 2

[[backends]]
backend_id = "toy-sentence"
kind = "sentence"
model_path = "mock"
dim = 64
pooling = "tokens"

[[backends]]
backend_id = "toy-token"
kind = "token"
model_path = "mock"
dim = 32
vocabulary = "vocab.txt"

[[sources]]
source_id = "toy-xa"
language = "xa"
path = "raw/xa.csv"

[sources.rule]
kind = "binary_passthrough"
columns = ["label"]
positive_values = ["1"]
negative_values = ["0"]
reject_values = ["spam"]

[[sources]]
source_id = "toy-xb"
language = "xb"
path = "raw/xb.tsv"

[sources.rule]
kind = "category_map"
columns = ["category"]
positive_values = ["hateful", "offensive"]
negative_values = ["normal"]

[[sources]]
source_id = "toy-xc"
language = "xc"
path = "raw/xc.jsonl"

[sources.rule]
kind = "annotator_vote"
columns = ["a1", "a2", "a3"]
positive_values = ["hate"]
negative_values = ["none"]
tie_policy = "to_zero"

[[sources]]
source_id = "toy-xc-ids"
language = "xc"
path = "raw/xc_ids.csv"
id_column = "tweet_id"
rule = {{ kind = "binary_passthrough", columns = ["label"] }}
"""

_SCENARIOS = {
    "monolingual.toml": (
        'kind = "monolingual"\nmodel = "linear_head"\nbackend = "toy-sentence"\n'
    ),
    "multilingual.toml": (
        'kind = "multilingual"\nmodel = "linear_head"\nbackend = "toy-sentence"\n'
    ),
    "family.toml": (
        f'kind = "language_family"\nfamily = "{TOY_FAMILY[0]}"\n'
        'model = "linear_head"\nbackend = "toy-sentence"\n'
    ),
    "cnn_gru.toml": (
        'kind = "monolingual"\nlanguages = ["xa"]\n'
        'model = "cnn_gru"\nbackend = "toy-token"\n\n'
        "[train]\nepochs = 2\nmax_sequence_length = 16\n"
    ),
}


def write_toy_workspace(
    root: Path, *, n_records: int = 100, seed: int = 7
) -> ToyWorkspace:
    """Write raw toy datasets, stopwords, a vocabulary and a config under *root*.

    Returns:
        Paths of the written config, vocabulary and scenario files.
    """
    raw = root / "raw"
    stopwords = root / "stopwords"
    scenarios = root / "scenarios"
    for directory in (raw, stopwords, scenarios):
        directory.mkdir(parents=True, exist_ok=True)

    n_by_id = 20
    _write_xa(raw, toy_posts("xa", n_records, seed))
    _write_xb(raw, toy_posts("xb", n_records, seed))
    _write_xc(raw, toy_posts("xc", n_records + n_by_id, seed), n_by_id)

    vocabulary: list[str] = []
    for language in TOY_LANGUAGES:
        vocab = toy_vocabulary(language)
        (stopwords / f"{language}.txt").write_text(
            "\n".join(vocab.function) + "\n", encoding="utf-8"
        )
        # The last filler word stays out of the vocabulary to exercise OOV rows.
        vocabulary.extend(vocab.content[:-1])
    vocab_path = root / "vocab.txt"
    vocab_path.write_text("\n".join(vocabulary) + "\n", encoding="utf-8")

    config = root / "hatebench.toml"
    family, members = TOY_FAMILY
    config_text = _CONFIG.format(
        seed=13, family=family, members=json.dumps(list(members))
    )
    config.write_text(config_text, encoding="utf-8")
    written = []
    for name, body in _SCENARIOS.items():
        path = scenarios / name
        path.write_text(body, encoding="utf-8")
        written.append(path)
    return ToyWorkspace(
        root=root, config=config, vocabulary=vocab_path, scenarios=tuple(written)
    )
