"""Native-script lexicons and their TSV form.

A lexicon file holds one ``native<TAB>romanization[<TAB>count]`` record per
line.  Romanizations are lowercased on load and duplicates are merged by
summing their counts.  A missing count is kept as ``None``.
"""

from __future__ import annotations

import pathlib
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

Count = Union[int, Fraction, None]


class LexiconError(ValueError):
    pass


@dataclass
class Lexicon:
    language: str
    entries: dict = field(default_factory=dict)  # native -> {romanization: count}

    def add(self, native: str, romanization: str, count: Count = None) -> None:
        forms = self.entries.setdefault(native, {})
        if romanization in forms:
            old = forms[romanization]
            forms[romanization] = None if old is None or count is None else old + count
        else:
            forms[romanization] = count

    def __len__(self) -> int:
        return len(self.entries)

    def num_pairs(self) -> int:
        return sum(len(f) for f in self.entries.values())

    def romanizations(self) -> set:
        return {r for forms in self.entries.values() for r in forms}

    def training_entries(self) -> list:
        """(native, romanization, count) triples; a missing count counts once."""
        out = []
        for native, forms in self.entries.items():
            for rom, count in forms.items():
                out.append((native, rom, 1 if count is None else count))
        return out

    def copy(self) -> "Lexicon":
        return Lexicon(self.language, {n: dict(f) for n, f in self.entries.items()})

    def to_tsv(self) -> str:
        lines = []
        for native, forms in self.entries.items():
            for rom, count in forms.items():
                if count is None:
                    lines.append(f"{native}\t{rom}")
                else:
                    lines.append(f"{native}\t{rom}\t{_format_count(count)}")
        return "".join(line + "\n" for line in lines)

    def write(self, path) -> None:
        pathlib.Path(path).write_text(self.to_tsv(), encoding="utf-8", newline="\n")


def _format_count(c) -> str:
    if isinstance(c, Fraction):
        return str(c.numerator) if c.denominator == 1 else str(float(c))
    return str(c)


def _parse_count(text: str) -> Count:
    text = text.strip()
    try:
        return int(text)
    except ValueError:
        pass
    value = Fraction(text)  # raises ValueError on junk
    return value.numerator if value.denominator == 1 else value


def parse_lexicon(lines, language: str, source: str = "<lexicon>") -> Lexicon:
    lex = Lexicon(language)
    for lineno, raw in enumerate(lines, 1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) not in (2, 3):
            raise LexiconError(f"{source}:{lineno}: expected 2 or 3 tab-separated fields, got {len(fields)}")
        native, rom = fields[0].strip(), fields[1].strip().lower()
        if not native or not rom:
            raise LexiconError(f"{source}:{lineno}: empty word")
        if any(ch.isspace() for ch in native + rom):
            raise LexiconError(f"{source}:{lineno}: words may not contain whitespace")
        count: Optional[Count] = None
        if len(fields) == 3:
            try:
                count = _parse_count(fields[2])
            except (ValueError, ZeroDivisionError):
                raise LexiconError(f"{source}:{lineno}: bad count {fields[2]!r}") from None
            if count < 0:
                raise LexiconError(f"{source}:{lineno}: negative count")
        lex.add(native, rom, count)
    return lex


def read_lexicon(path, language: Optional[str] = None) -> Lexicon:
    path = pathlib.Path(path)
    with open(path, encoding="utf-8") as f:
        return parse_lexicon(f, language or path.stem, source=str(path))
