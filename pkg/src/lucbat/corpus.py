"""Corpus ingestion, quatrain splitting, score filtering, verse indexing.

Plain-text corpora: one file holds many poems separated by blank lines.
Splitting, shuffling and filtering are deterministic given a seed, so a
dataset build can be reproduced byte for byte.
"""

from __future__ import annotations

import os
import random
import unicodedata
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .rules import RuleTable
from .scoring import score_stanza, segment_stanza
from .syllable import LucBatError, normalize_verse

__all__ = [
    "Poem",
    "Corpus",
    "VerseIndex",
    "FilterStats",
    "InvalidEncoding",
    "ingest",
    "corpus_from_text",
    "write_corpus",
    "split_into_quatrains",
    "split_and_shuffle",
    "filter_by_score",
    "build_verse_index",
]


class InvalidEncoding(LucBatError):
    """File is not valid UTF-8."""


@dataclass(frozen=True)
class Poem:
    id: str
    text: str

    def lines(self) -> list[str]:
        return [line.strip() for line in self.text.splitlines() if line.strip()]


@dataclass(frozen=True)
class Corpus:
    poems: tuple[Poem, ...]
    provenance: tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.poems)

    def __iter__(self):
        return iter(self.poems)


def _split_blocks(text: str) -> list[str]:
    """Blank-line separated blocks, each with lines stripped and NFC-normalized."""
    blocks = []
    current: list[str] = []
    for raw_line in text.splitlines():
        line = unicodedata.normalize("NFC", raw_line.strip())
        if line:
            current.append(line)
        elif current:
            blocks.append("\n".join(current))
            current = []
    if current:
        blocks.append("\n".join(current))
    return blocks


def corpus_from_text(text: str, source: str = "<memory>") -> Corpus:
    """Build a corpus from blank-line-delimited text."""
    poems = tuple(
        Poem(id=f"{source}:{i}", text=block) for i, block in enumerate(_split_blocks(text))
    )
    return Corpus(poems=poems, provenance=(source,))


def _expand(paths: Iterable[str]) -> list[str]:
    """Directories expand to their *.txt files, sorted for determinism."""
    expanded = []
    for path in paths:
        path = str(path)
        if os.path.isdir(path):
            expanded.extend(
                sorted(
                    os.path.join(path, name)
                    for name in os.listdir(path)
                    if name.endswith(".txt")
                )
            )
        else:
            expanded.append(path)
    return expanded


def ingest(paths: Iterable[str]) -> Corpus:
    """Read UTF-8 poem files; ids are "<path>:<ordinal>".

    A directory stands for its ``*.txt`` files in sorted order.  The ordinal
    keeps counting if the same path is listed twice, so ids stay unique.
    I/O errors propagate as OSError; bad bytes raise
    :class:`InvalidEncoding`.
    """
    poems: list[Poem] = []
    provenance: list[str] = []
    next_ordinal: dict[str, int] = {}
    for path in _expand(paths):
        provenance.append(path)
        try:
            with open(path, encoding="utf-8") as handle:
                text = handle.read()
        except UnicodeDecodeError as exc:
            raise InvalidEncoding(f"{path}: {exc}") from exc
        start = next_ordinal.get(path, 0)
        blocks = _split_blocks(text)
        for offset, block in enumerate(blocks):
            poems.append(Poem(id=f"{path}:{start + offset}", text=block))
        next_ordinal[path] = start + len(blocks)
    return Corpus(poems=tuple(poems), provenance=tuple(provenance))


def write_corpus(corpus: Corpus, path: str) -> None:
    """Write poems back out in the blank-line format."""
    with open(path, "w", encoding="utf-8") as handle:
        for i, poem in enumerate(corpus.poems):
            if i:
                handle.write("\n")
            handle.write(poem.text)
            handle.write("\n")


def split_into_quatrains(corpus: Corpus) -> tuple[Corpus, list[tuple[str, str]]]:
    """Split every poem into consecutive quatrains, preserving order.

    Poems whose line count is not a multiple of 4 are excluded and returned
    as (id, reason) pairs.
    """
    quatrains: list[Poem] = []
    excluded: list[tuple[str, str]] = []
    for poem in corpus.poems:
        lines = poem.lines()
        if not lines or len(lines) % 4 != 0:
            excluded.append(
                (poem.id, f"{len(lines)} lines, not a multiple of 4")
            )
            continue
        for k in range(0, len(lines), 4):
            quatrains.append(
                Poem(id=f"{poem.id}/q{k // 4}", text="\n".join(lines[k : k + 4]))
            )
    return Corpus(poems=tuple(quatrains), provenance=corpus.provenance), excluded


def split_and_shuffle(
    corpus: Corpus, seed: int
) -> tuple[Corpus, list[tuple[str, str]]]:
    """Split poems into quatrains and shuffle them with a seeded generator.

    The same corpus and seed always produce the same output order; different
    seeds permute the same multiset of quatrains.
    """
    quatrains, excluded = split_into_quatrains(corpus)
    shuffled = list(quatrains.poems)
    random.Random(seed).shuffle(shuffled)
    return Corpus(poems=tuple(shuffled), provenance=corpus.provenance), excluded


@dataclass(frozen=True)
class FilterStats:
    kept_count: int
    dropped_count: int
    mean_score_kept: Optional[float]
    dropped: tuple[tuple[str, str], ...] = field(default=())  # (id, reason)


def filter_by_score(
    corpus: Corpus, table: RuleTable, min_score: float
) -> tuple[Corpus, FilterStats]:
    """Keep quatrains scoring at least ``min_score``.

    Quatrains that fail segmentation are dropped with the error message as
    the reason.
    """
    kept: list[Poem] = []
    scores: list[float] = []
    dropped: list[tuple[str, str]] = []
    for poem in corpus.poems:
        try:
            report = score_stanza(segment_stanza(poem.text), table)
        except LucBatError as exc:
            dropped.append((poem.id, str(exc)))
            continue
        if report.score >= min_score:
            kept.append(poem)
            scores.append(report.score)
        else:
            dropped.append((poem.id, f"score {report.score:.3f} < {min_score}"))
    mean_kept = sum(scores) / len(scores) if scores else None
    stats = FilterStats(
        kept_count=len(kept),
        dropped_count=len(dropped),
        mean_score_kept=mean_kept,
        dropped=tuple(dropped),
    )
    return Corpus(poems=tuple(kept), provenance=corpus.provenance), stats


class VerseIndex:
    """Set of normalized verses; membership is punctuation/case/form blind."""

    def __init__(self, verses: Iterable[str]):
        normalized = (normalize_verse(v) for v in verses)
        self._verses = frozenset(v for v in normalized if v)

    @property
    def size(self) -> int:
        return len(self._verses)

    def __len__(self) -> int:
        return len(self._verses)

    def __contains__(self, verse: str) -> bool:
        return normalize_verse(verse) in self._verses


def build_verse_index(corpus: Corpus) -> VerseIndex:
    """Index every line of every poem in the corpus."""
    return VerseIndex(line for poem in corpus.poems for line in poem.lines())
