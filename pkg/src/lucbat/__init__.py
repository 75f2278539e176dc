"""Luc Bat poetry toolkit.

Parsing and prosody of Vietnamese syllables, the six-eight rhyme/tone
template with a near-rhyme registry, stanza scoring and corpus filtering,
a verse-overlap creativity metric, and a gradient-checked semantic loss
head (self-attention + LSTM contextual vectors).
"""

__version__ = "0.1.0"

from .syllable import (
    LucBatError,
    MultipleToneMarks,
    NotASyllable,
    Syllable,
    Tone,
    ToneClass,
    normalize_verse,
    parse_syllable,
)
from .rules import (
    IndexOutOfRange,
    InvalidPairCount,
    LineKind,
    RhymeChain,
    RuleTable,
    RuleTableError,
    build_rhyme_chains,
    default_rule_table,
    expected_tone,
    load_rule_table,
    parse_rule_table,
    rhymes_with,
)
from .scoring import (
    EmptyInput,
    Histogram,
    OddLineCount,
    ScoreReport,
    Stanza,
    UnparseableToken,
    WrongSyllableCount,
    annotate_stanza,
    histogram,
    report_record,
    score_poem,
    score_stanza,
    segment_stanza,
    split_quatrains,
)
from .corpus import (
    Corpus,
    FilterStats,
    InvalidEncoding,
    Poem,
    VerseIndex,
    build_verse_index,
    corpus_from_text,
    filter_by_score,
    ingest,
    split_and_shuffle,
    split_into_quatrains,
    write_corpus,
)
from .creativity import (
    CreativityReport,
    EmptyGeneratedSet,
    EmptyPoem,
    PoemNovelty,
    creativity_score,
)
from .semloss import (
    AttentionParams,
    DegenerateSequence,
    GradientCheckReport,
    IdOutOfRange,
    LossBreakdown,
    LstmParams,
    MissingPair,
    ShapeMismatch,
    attention_weights,
    ce_loss,
    contextual_vector,
    custom_loss,
    gradient_check,
    lstm_forward,
    pack_parameters,
    random_instance,
    self_attention,
    unpack_parameters,
)

__all__ = [
    "__version__",
    # syllable
    "LucBatError", "MultipleToneMarks", "NotASyllable", "Syllable", "Tone",
    "ToneClass", "normalize_verse", "parse_syllable",
    # rules
    "IndexOutOfRange", "InvalidPairCount", "LineKind", "RhymeChain",
    "RuleTable", "RuleTableError", "build_rhyme_chains", "default_rule_table",
    "expected_tone", "load_rule_table", "parse_rule_table", "rhymes_with",
    # scoring
    "EmptyInput", "Histogram", "OddLineCount", "ScoreReport", "Stanza",
    "UnparseableToken", "WrongSyllableCount", "annotate_stanza", "histogram",
    "report_record", "score_poem", "score_stanza", "segment_stanza",
    "split_quatrains",
    # corpus
    "Corpus", "FilterStats", "InvalidEncoding", "Poem", "VerseIndex",
    "build_verse_index", "corpus_from_text", "filter_by_score", "ingest",
    "split_and_shuffle", "split_into_quatrains", "write_corpus",
    # creativity
    "CreativityReport", "EmptyGeneratedSet", "EmptyPoem", "PoemNovelty",
    "creativity_score",
    # semloss
    "AttentionParams", "DegenerateSequence", "GradientCheckReport",
    "IdOutOfRange", "LossBreakdown", "LstmParams", "MissingPair",
    "ShapeMismatch", "attention_weights", "ce_loss", "contextual_vector",
    "custom_loss", "gradient_check", "lstm_forward", "pack_parameters",
    "random_instance", "self_attention", "unpack_parameters",
]
