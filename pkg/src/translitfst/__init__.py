"""Many-to-one transliteration transducers built from pair language models."""

from .align import AlignedPair, AlignmentModel, PairSymbol, alignment_likelihood, em_train, viterbi_align
from .corpus import ScriptTag, balance_plan, detect_script, grapheme_inventory, normalize_corpus
from .lexicon import Lexicon, read_lexicon
from .lexprep import agreement_based, frequency_based
from .pairlm import NGramModel, score_sequence, to_fst, train_ngram
from .scoring import WerReport, edit_align, translit_optimized_wer, wer
from .translit import (
    Transliterator,
    TransliterationResult,
    UnionTransliterator,
    build_transliterator,
    build_union,
    reverse,
    transliterate,
)

__all__ = [
    "AlignedPair",
    "AlignmentModel",
    "PairSymbol",
    "alignment_likelihood",
    "em_train",
    "viterbi_align",
    "ScriptTag",
    "balance_plan",
    "detect_script",
    "grapheme_inventory",
    "normalize_corpus",
    "Lexicon",
    "read_lexicon",
    "agreement_based",
    "frequency_based",
    "NGramModel",
    "score_sequence",
    "to_fst",
    "train_ngram",
    "WerReport",
    "edit_align",
    "translit_optimized_wer",
    "wer",
    "Transliterator",
    "TransliterationResult",
    "UnionTransliterator",
    "build_transliterator",
    "build_union",
    "reverse",
    "transliterate",
]

__version__ = "0.1.0"
