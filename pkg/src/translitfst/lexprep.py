"""Agreement-based and frequency-based lexicon pre-processing.

Agreement-based (AB): romanizations attested in every lexicon form a common
set; any native word whose romanizations overlap that set keeps only the
overlap.  Words with no overlap are left alone.

Frequency-based (FB): per native word, keep the romanizations whose count is
at least the mean count of that word's romanizations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .lexicon import Lexicon


class PrepError(ValueError):
    pass


class MissingFrequencyError(PrepError):
    pass


@dataclass
class PrepStats:
    language: str
    words: int = 0
    words_modified: int = 0
    forms_before: int = 0
    forms_after: int = 0

    @property
    def forms_removed(self) -> int:
        return self.forms_before - self.forms_after

    def as_dict(self) -> dict:
        return {
            "language": self.language,
            "words": self.words,
            "words_modified": self.words_modified,
            "forms_before": self.forms_before,
            "forms_after": self.forms_after,
            "forms_removed": self.forms_removed,
        }


@dataclass
class PrepSummary:
    mode: str
    lexicons: list = field(default_factory=list)
    common_latin: int = None  # size of the AB common set, when AB ran

    def as_dict(self) -> dict:
        out = {"mode": self.mode, "lexicons": [s.as_dict() for s in self.lexicons]}
        if self.common_latin is not None:
            out["common_latin_size"] = self.common_latin
        return out


def _stats(before: Lexicon, after: Lexicon) -> PrepStats:
    st = PrepStats(before.language, words=len(before))
    for native, forms in before.entries.items():
        kept = after.entries[native]
        st.forms_before += len(forms)
        st.forms_after += len(kept)
        if len(kept) != len(forms):
            st.words_modified += 1
    return st


def common_latin(lexicons: Sequence[Lexicon]) -> set:
    common = None
    for lex in lexicons:
        forms = lex.romanizations()
        common = forms if common is None else common & forms
    return common or set()


def agreement_based(lexicons: Sequence[Lexicon], summary: PrepSummary = None) -> list[Lexicon]:
    if len(lexicons) < 2:
        raise PrepError("agreement-based pre-processing needs at least two lexicons")
    common = common_latin(lexicons)
    out = []
    for lex in lexicons:
        new = Lexicon(lex.language)
        for native, forms in lex.entries.items():
            agreed = {r: c for r, c in forms.items() if r in common}
            new.entries[native] = agreed if agreed else dict(forms)
        out.append(new)
    if summary is not None:
        summary.common_latin = len(common)
        summary.lexicons = [_stats(a, b) for a, b in zip(lexicons, out)]
    return out


def frequency_based(lexicon: Lexicon, summary: PrepSummary = None) -> Lexicon:
    new = Lexicon(lexicon.language)
    for native, forms in lexicon.entries.items():
        if any(c is None for c in forms.values()):
            raise MissingFrequencyError(f"{lexicon.language}: no frequency for a romanization of {native!r}")
        n = len(forms)
        total = sum(forms.values())
        # freq >= total / n, compared without division
        new.entries[native] = {r: c for r, c in forms.items() if c * n >= total}
    if summary is not None:
        summary.lexicons.append(_stats(lexicon, new))
    return new


def preprocess(lexicons: Sequence[Lexicon], mode: str) -> tuple[list[Lexicon], PrepSummary]:
    """Run ``ab``, ``fb`` or the experimental ``ab+fb`` (AB first, then FB)."""
    if mode not in ("ab", "fb", "ab+fb"):
        raise PrepError(f"unknown mode {mode!r}")
    summary = PrepSummary(mode)
    current = list(lexicons)
    if mode in ("ab", "ab+fb"):
        current = agreement_based(current, summary)
    if mode in ("fb", "ab+fb"):
        fb_summary = PrepSummary("fb")
        current = [frequency_based(lex, fb_summary) for lex in current]
        if mode == "fb":
            summary.lexicons = fb_summary.lexicons
        else:
            summary.lexicons = [_stats(a, b) for a, b in zip(lexicons, current)]
    return current, summary
