"""Script detection, corpus normalization to Latin, inventories and balance plans."""

from __future__ import annotations

import enum
import re
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping


class ScriptTag(str, enum.Enum):
    DEVANAGARI = "Devanagari"
    BENGALI = "Bengali"
    TAMIL = "Tamil"
    KANNADA = "Kannada"
    LATIN = "Latin"
    MIXED = "Mixed"
    OTHER = "Other"


NATIVE_BLOCKS = {
    ScriptTag.DEVANAGARI: (0x0900, 0x097F),
    ScriptTag.BENGALI: (0x0980, 0x09FF),
    ScriptTag.TAMIL: (0x0B80, 0x0BFF),
    ScriptTag.KANNADA: (0x0C80, 0x0CFF),
}
NATIVE_SCRIPTS = frozenset(NATIVE_BLOCKS)

_LATIN_RANGES = ((0x00C0, 0x024F), (0x1E00, 0x1EFF))
# word-internal punctuation that romanizations use
_TRANSPARENT_PUNCT = frozenset("'-’")

_WS = re.compile(r"(\s+)")


def block_of(ch: str):
    cp = ord(ch)
    for tag, (lo, hi) in NATIVE_BLOCKS.items():
        if lo <= cp <= hi:
            return tag
    return None


def in_native_block(ch: str) -> bool:
    return block_of(ch) is not None


def _is_latin_letter(ch: str) -> bool:
    if "a" <= ch <= "z" or "A" <= ch <= "Z":
        return True
    cp = ord(ch)
    return any(lo <= cp <= hi for lo, hi in _LATIN_RANGES) and unicodedata.category(ch).startswith("L")


def detect_script(token: str) -> ScriptTag:
    """Classify a token by the unicode blocks of its codepoints.

    Combining marks, digits and apostrophes/hyphens are ignored.  Any other
    codepoint outside the four native blocks and the Latin letters makes the
    token ``Other`` unless two or more known scripts are present (``Mixed``).
    """
    if not token:
        raise ValueError("empty token")
    scripts = set()
    foreign = False
    for ch in token:
        cat = unicodedata.category(ch)
        if cat.startswith("M") or cat == "Nd" or ch in _TRANSPARENT_PUNCT:
            continue
        tag = block_of(ch)
        if tag is not None:
            scripts.add(tag)
        elif _is_latin_letter(ch):
            scripts.add(ScriptTag.LATIN)
        else:
            foreign = True
    if len(scripts) >= 2:
        return ScriptTag.MIXED
    if len(scripts) == 1 and not foreign:
        return next(iter(scripts))
    return ScriptTag.OTHER


@dataclass
class NormalizationReport:
    lines: int = 0
    tokens: int = 0
    transliterated: int = 0
    passthrough: int = 0
    untransliterable: int = 0
    scripts: Counter = field(default_factory=Counter)
    untransliterable_tokens: Counter = field(default_factory=Counter)

    def as_dict(self, max_examples: int = 20) -> dict:
        return {
            "lines": self.lines,
            "tokens": self.tokens,
            "transliterated": self.transliterated,
            "passthrough": self.passthrough,
            "untransliterable": self.untransliterable,
            "scripts": {k.value: v for k, v in sorted(self.scripts.items(), key=lambda kv: kv[0].value)},
            "untransliterable_examples": dict(self.untransliterable_tokens.most_common(max_examples)),
        }


class CorpusNormalizer:
    """Rewrites native-script tokens to their 1-best Latin form, one line at a time.

    ``union`` is anything with a ``transliterate(word, k)`` method returning a
    result with ``best``, such as :class:`translitfst.translit.UnionTransliterator`.
    """

    def __init__(self, union, passthrough_latin: bool = True, report: NormalizationReport = None):
        self.union = union
        self.passthrough_latin = passthrough_latin
        self.report = report if report is not None else NormalizationReport()
        self._cache = {}

    def _token(self, tok: str) -> str:
        rep = self.report
        rep.tokens += 1
        tag = detect_script(tok)
        rep.scripts[tag] += 1
        if tag == ScriptTag.LATIN:
            rep.passthrough += 1
            return tok if self.passthrough_latin else tok.lower()
        if tag in NATIVE_SCRIPTS:
            best = self._cache.get(tok)
            if best is None and tok not in self._cache:
                best = self._cache[tok] = self.union.transliterate(tok, 1).best
            if best is not None:
                rep.transliterated += 1
                return best
        rep.untransliterable += 1
        rep.untransliterable_tokens[tok] += 1
        return tok

    def normalize_line(self, line: str) -> str:
        self.report.lines += 1
        parts = _WS.split(line)
        for i in range(0, len(parts), 2):
            if parts[i]:
                parts[i] = self._token(parts[i])
        return "".join(parts)


def normalize_corpus(
    lines: Iterable[str],
    union,
    passthrough_latin: bool = True,
    report: NormalizationReport = None,
) -> Iterator[str]:
    """Lazily normalize ``lines`` (without trailing newlines); counters go to ``report``."""
    norm = CorpusNormalizer(union, passthrough_latin, report)
    for line in lines:
        yield norm.normalize_line(line)


def grapheme_inventory(lines: Iterable[str]) -> Counter:
    inv = Counter()
    for line in lines:
        inv.update(ch for ch in line if not ch.isspace())
    return inv


@dataclass
class BalancePlan:
    cap: float
    target: float
    amounts: dict
    multipliers: dict
    resulting: dict

    @property
    def imbalance(self) -> float:
        return max(self.resulting.values()) / min(self.resulting.values())

    def as_dict(self) -> dict:
        return {
            "cap": self.cap,
            "target": self.target,
            "imbalance": self.imbalance,
            "languages": {
                lang: {
                    "amount": self.amounts[lang],
                    "multiplier": self.multipliers[lang],
                    "resulting": self.resulting[lang],
                }
                for lang in self.amounts
            },
        }


def balance_plan(amounts: Mapping[str, float], cap: float = 75.0) -> BalancePlan:
    """Copy multipliers that bring each language up to ``cap`` times the smallest amount.

    Languages already above that target keep multiplier 1.
    """
    if not amounts:
        raise ValueError("no amounts given")
    if not cap > 0:
        raise ValueError("cap must be positive")
    for lang, a in amounts.items():
        if not a > 0:
            raise ValueError(f"amount for {lang!r} must be positive, got {a!r}")
    target = cap * min(amounts.values())
    multipliers = {lang: max(1.0, target / a) for lang, a in amounts.items()}
    resulting = {lang: amounts[lang] * multipliers[lang] for lang in amounts}
    return BalancePlan(float(cap), target, dict(amounts), multipliers, resulting)
