"""The Luc Bat template: rhyme chains, tone positions, near-rhyme registry.

A stanza is n six-eight line pairs.  The form constrains it in two ways:

* Rhyme.  Word 6 of the first line rhymes with word 6 of the second line;
  word 8 of each eight-line anchors a chain picked up by word 6 of the next
  two lines.  Across a stanza that is 3n-1 rhyming positions.
* Tone.  Words 2/4/6 of a six-line must be level/oblique/level; words
  2/4/6/8 of an eight-line level/oblique/level/level.  7n positions total.

Rhyme compatibility is driven by a :class:`RuleTable`: two syllables rhyme
when their tone-stripped rimes are equal or share a near-rhyme group.  The
table is a partition, so compatibility is an equivalence relation and each
chain can be checked against its anchor alone.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from importlib import resources
from typing import Iterable, Optional

from .syllable import LucBatError, Syllable, ToneClass, is_valid_rime, _nfc

__all__ = [
    "LineKind",
    "Position",
    "RhymeChain",
    "RuleTable",
    "RuleTableError",
    "InvalidPairCount",
    "IndexOutOfRange",
    "build_rhyme_chains",
    "rhymes_with",
    "expected_tone",
    "load_rule_table",
    "parse_rule_table",
    "default_rule_table",
    "SIX_LINE_TONES",
    "EIGHT_LINE_TONES",
]

# (line_index, word_index), both 1-based.
Position = tuple[int, int]


class InvalidPairCount(LucBatError):
    """A stanza needs at least one six-eight pair."""


class IndexOutOfRange(LucBatError):
    """Word index outside the line."""


class RuleTableError(LucBatError):
    """Rule-table file violates the format or the partition invariant."""


class LineKind(enum.Enum):
    SIX = 6
    EIGHT = 8


# Tone templates; odd word positions are unconstrained.
SIX_LINE_TONES: dict[int, ToneClass] = {
    2: ToneClass.LEVEL,
    4: ToneClass.OBLIQUE,
    6: ToneClass.LEVEL,
}
EIGHT_LINE_TONES: dict[int, ToneClass] = {
    2: ToneClass.LEVEL,
    4: ToneClass.OBLIQUE,
    6: ToneClass.LEVEL,
    8: ToneClass.LEVEL,
}


@dataclass(frozen=True)
class RhymeChain:
    """Positions required to share a rhyme; the first one is the anchor."""

    positions: tuple[Position, ...]

    @property
    def anchor(self) -> Position:
        return self.positions[0]

    @property
    def members(self) -> tuple[Position, ...]:
        """Non-anchor positions, each compared against the anchor."""
        return self.positions[1:]

    def __len__(self) -> int:
        return len(self.positions)


def build_rhyme_chains(n_pairs: int) -> list[RhymeChain]:
    """Rhyme chains for a stanza of ``n_pairs`` six-eight pairs.

    Chain 0 ties word 6 of lines 1 and 2; each further chain ties word 8 of
    an eight-line to word 6 of the following two lines.  Position count over
    all chains is 3*n_pairs - 1; the last eight-line's word 8 is left free.
    """
    if not isinstance(n_pairs, int) or isinstance(n_pairs, bool) or n_pairs < 1:
        raise InvalidPairCount(f"need a positive number of pairs, got {n_pairs!r}")
    chains = [RhymeChain(((1, 6), (2, 6)))]
    for k in range(1, n_pairs):
        chains.append(RhymeChain(((2 * k, 8), (2 * k + 1, 6), (2 * k + 2, 6))))
    return chains


def expected_tone(line_kind: LineKind, word_index: int) -> Optional[ToneClass]:
    """Template tone class at a word position, or None when unconstrained."""
    limit = line_kind.value
    if not isinstance(word_index, int) or word_index < 1 or word_index > limit:
        raise IndexOutOfRange(
            f"word index {word_index!r} outside 1..{limit} for a {limit}-word line"
        )
    template = SIX_LINE_TONES if line_kind is LineKind.SIX else EIGHT_LINE_TONES
    return template.get(word_index)


class RuleTable:
    """Near-rhyme registry: a partition of rimes into interchangeable groups."""

    def __init__(self, groups: Iterable[Iterable[str]], version: str = "custom"):
        self.version = version
        listed = [list(group) for group in groups]
        self._group_of: dict[str, int] = {}
        for gi, group in enumerate(listed):
            if not group:
                raise RuleTableError("empty near-rhyme group")
            for rime in group:
                if not is_valid_rime(rime):
                    raise RuleTableError(f"invalid rime {rime!r}")
                if rime in self._group_of:
                    raise RuleTableError(f"rime {rime!r} listed twice")
                self._group_of[rime] = gi
        self.groups: tuple[frozenset[str], ...] = tuple(
            frozenset(group) for group in listed
        )

    def group_of(self, rime: str) -> Optional[int]:
        return self._group_of.get(rime)

    def compatible(self, rime_a: str, rime_b: str) -> bool:
        """Equal rimes always rhyme; otherwise both must share a group."""
        if rime_a == rime_b:
            return True
        ga = self._group_of.get(rime_a)
        return ga is not None and ga == self._group_of.get(rime_b)

    def __repr__(self) -> str:
        return f"RuleTable(version={self.version!r}, groups={len(self.groups)})"


def rhymes_with(a: Syllable, b: Syllable, table: RuleTable) -> bool:
    """Tone-blind rhyme test between two parsed syllables."""
    return table.compatible(a.rime, b.rime)


def parse_rule_table(text: str, version: str = "custom") -> RuleTable:
    """Parse rule-table text: one group per line, ``#`` comments.

    A ``# version:`` comment overrides the version label.
    """
    groups = []
    for raw_line in text.splitlines():
        line = raw_line.strip()
        if line.startswith("#"):
            body = line.lstrip("#").strip()
            if body.lower().startswith("version:"):
                version = body.split(":", 1)[1].strip()
            continue
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        rimes = [_nfc(tok.lower()) for tok in line.split()]
        groups.append(rimes)
    try:
        return RuleTable(groups, version=version)
    except RuleTableError as exc:
        raise RuleTableError(f"bad rule table: {exc}") from exc


def load_rule_table(path: str) -> RuleTable:
    """Load and validate a rule-table file (UTF-8)."""
    with open(path, encoding="utf-8") as handle:
        text = handle.read()
    return parse_rule_table(text, version=str(path))


_DEFAULT_TABLE: Optional[RuleTable] = None


def default_rule_table() -> RuleTable:
    """The table shipped with the package (see ``data/near_rhymes.txt``)."""
    global _DEFAULT_TABLE
    if _DEFAULT_TABLE is None:
        text = (
            resources.files("lucbat").joinpath("data/near_rhymes.txt").read_text("utf-8")
        )
        _DEFAULT_TABLE = parse_rule_table(text, version="builtin")
    return _DEFAULT_TABLE
