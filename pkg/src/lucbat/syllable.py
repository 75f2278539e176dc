"""Vietnamese syllable parsing: onset/rime segmentation and tone extraction.

A written Vietnamese syllable is onset + rime + tone mark.  The onset is an
optional initial consonant unit, the rime is the vowel nucleus plus coda, and
the tone is one of six values signalled by a combining diacritic (or its
absence, for ngang).  Tones split into two metrical classes:

    level (bằng):   ngang, huyền
    oblique (trắc): sắc, hỏi, ngã, nặng

Parsing works on the NFC-composed, lowercased form.  The tone mark is lifted
off during NFD decomposition, the remaining letters are segmented by
longest-match against the onset inventory, and the canonical spelling is
rebuilt by re-placing the tone mark on the main vowel of the rime.
"""

from __future__ import annotations

import enum
import unicodedata
from dataclasses import dataclass

__all__ = [
    "Tone",
    "ToneClass",
    "Syllable",
    "NotASyllable",
    "MultipleToneMarks",
    "parse_syllable",
    "normalize_verse",
    "is_valid_rime",
    "mark_rime",
    "replace_tone",
    "ONSETS",
    "VOWELS",
]


class LucBatError(Exception):
    """Base class for all errors raised by this package."""


class NotASyllable(LucBatError):
    """Token cannot be read as a Vietnamese syllable."""

    def __init__(self, token: str, reason: str):
        super().__init__(f"{token!r}: {reason}")
        self.token = token
        self.reason = reason


class MultipleToneMarks(LucBatError):
    """Token carries more than one tone diacritic."""

    def __init__(self, token: str):
        super().__init__(f"{token!r}: more than one tone mark")
        self.token = token


class Tone(enum.Enum):
    NGANG = "ngang"
    HUYEN = "huyen"
    SAC = "sac"
    HOI = "hoi"
    NGA = "nga"
    NANG = "nang"

    @property
    def tone_class(self) -> "ToneClass":
        if self in (Tone.NGANG, Tone.HUYEN):
            return ToneClass.LEVEL
        return ToneClass.OBLIQUE


class ToneClass(enum.Enum):
    LEVEL = "level"
    OBLIQUE = "oblique"


# Combining diacritics that carry tone.  Quality marks (circumflex U+0302,
# breve U+0306, horn U+031B) are part of the vowel letter and stay put.
_TONE_COMBINING = {
    "́": Tone.SAC,    # acute
    "̀": Tone.HUYEN,  # grave
    "̉": Tone.HOI,    # hook above
    "̃": Tone.NGA,    # tilde
    "̣": Tone.NANG,   # dot below
}
_COMBINING_FOR_TONE = {tone: mark for mark, tone in _TONE_COMBINING.items()}

VOWELS = frozenset("aăâeêioôơuưy")

# Vowels carrying a quality diacritic take the tone mark in preference to
# plain vowels ("trường", "tiếng", "thuở").
_MODIFIED_VOWELS = frozenset("ăâêôơư")

_CONSONANT_LETTERS = frozenset("bcdđghklmnpqrstvx")

# Orthographic onset inventory, longest-match.  "gi" and "qu" are atomic
# units; their i/u never belongs to the rime.
ONSETS = frozenset(
    [
        "b", "c", "ch", "d", "đ", "g", "gh", "gi", "h", "k", "kh", "l", "m",
        "n", "ng", "ngh", "nh", "p", "ph", "qu", "r", "s", "t", "th", "tr",
        "v", "x",
    ]
)

_CODAS = frozenset(["c", "ch", "m", "n", "ng", "nh", "p", "t"])

_PUNCTUATION = set(".,!?;:'\"…()-–")


@dataclass(frozen=True)
class Syllable:
    """A parsed syllable.

    ``normalized`` is the canonical spelling: NFC-composed, lowercased, with
    the tone mark on the main vowel of the rime.  ``rime`` is stored with the
    tone stripped; rhyme comparison and tone checking are independent.
    """

    raw: str
    normalized: str
    onset: str
    rime: str
    tone: Tone

    @property
    def tone_class(self) -> ToneClass:
        return self.tone.tone_class


def _nfc(text: str) -> str:
    return unicodedata.normalize("NFC", text)


def _nfd(text: str) -> str:
    return unicodedata.normalize("NFD", text)


def _extract_tone(token: str, text: str) -> tuple[str, Tone]:
    """Return (tone-stripped NFC text, tone).  ``token`` is for error messages."""
    marks = []
    kept = []
    for ch in _nfd(text):
        tone = _TONE_COMBINING.get(ch)
        if tone is not None:
            marks.append(tone)
        else:
            kept.append(ch)
    if len(marks) > 1:
        raise MultipleToneMarks(token)
    tone = marks[0] if marks else Tone.NGANG
    return _nfc("".join(kept)), tone


def _split_onset(base: str) -> tuple[str, str] | None:
    """Longest onset prefix that leaves a vowel-initial, non-empty rime.

    Backs off automatically: "gia" -> ("gi", "a") but "gi" -> ("g", "i"),
    since the two-letter match would leave an empty rime.
    """
    for length in (3, 2, 1):
        head, rest = base[:length], base[length:]
        if head in ONSETS and rest and rest[0] in VOWELS:
            return head, rest
    if base and base[0] in VOWELS:
        return "", base
    return None


def _split_rime(rime: str) -> tuple[str, str]:
    """Split a tone-stripped rime into (nucleus, coda)."""
    i = 0
    while i < len(rime) and rime[i] in VOWELS:
        i += 1
    return rime[:i], rime[i:]


def _tone_target_index(nucleus: str, has_coda: bool) -> int:
    """Index of the vowel that carries the tone mark (traditional placement).

    Priority: last quality-modified vowel; otherwise a lone vowel; otherwise
    the last nucleus vowel when a coda follows ("toàn"), else the penultimate
    one ("hòa", "của", "ngoài").
    """
    for i in range(len(nucleus) - 1, -1, -1):
        if nucleus[i] in _MODIFIED_VOWELS:
            return i
    if len(nucleus) == 1 or has_coda:
        return len(nucleus) - 1
    return len(nucleus) - 2


def mark_rime(rime: str, tone: Tone) -> str:
    """Re-apply a tone mark to a tone-stripped rime at the canonical position."""
    if tone is Tone.NGANG:
        return rime
    nucleus, coda = _split_rime(rime)
    idx = _tone_target_index(nucleus, bool(coda))
    mark = _COMBINING_FOR_TONE[tone]
    return _nfc(rime[: idx + 1] + mark + rime[idx + 1 :])


def parse_syllable(token: str) -> Syllable:
    """Parse one whitespace-free token into a :class:`Syllable`.

    Raises :class:`NotASyllable` for digits, missing vowels, letters outside
    the Vietnamese alphabet, or an impossible onset/coda; raises
    :class:`MultipleToneMarks` when two tone diacritics are present.
    """
    if not token or any(ch.isspace() for ch in token):
        raise NotASyllable(token, "empty or contains whitespace")
    lowered = _nfc(token.lower())
    base, tone = _extract_tone(token, lowered)
    if not base:
        raise NotASyllable(token, "no letters")
    for ch in base:
        if ch.isdigit():
            raise NotASyllable(token, "contains digits")
        if ch not in VOWELS and ch not in _CONSONANT_LETTERS:
            raise NotASyllable(token, f"non-Vietnamese character {ch!r}")
    if not any(ch in VOWELS for ch in base):
        raise NotASyllable(token, "no vowel nucleus")
    split = _split_onset(base)
    if split is None:
        raise NotASyllable(token, "no vowel nucleus after onset")
    onset, rime = split
    nucleus, coda = _split_rime(rime)
    if not nucleus:
        raise NotASyllable(token, "no vowel nucleus")
    if coda and coda not in _CODAS:
        raise NotASyllable(token, f"invalid coda {coda!r}")
    normalized = onset + mark_rime(rime, tone)
    return Syllable(raw=token, normalized=normalized, onset=onset, rime=rime, tone=tone)


def replace_tone(syllable: Syllable, tone: Tone) -> Syllable:
    """Same onset and rime, different tone.  Used to build synthetic test data."""
    return parse_syllable(syllable.onset + mark_rime(syllable.rime, tone))


def is_valid_rime(text: str) -> bool:
    """True if ``text`` is a well-formed tone-stripped rime (as in rule tables)."""
    try:
        base, tone = _extract_tone(text, _nfc(text.lower()))
    except MultipleToneMarks:
        return False
    if tone is not Tone.NGANG or not base or base != text:
        return False
    nucleus, coda = _split_rime(base)
    if not nucleus:
        return False
    return coda == "" or coda in _CODAS


def normalize_verse(line: str) -> str:
    """Canonical verse form: NFC, lowercased, punctuation dropped, spaces collapsed.

    Idempotent, and confluent over Unicode forms: composed and decomposed
    spellings of the same verse normalize identically.
    """
    text = _nfc(line.lower())
    text = "".join(" " if ch in _PUNCTUATION else ch for ch in text)
    return " ".join(text.split())
