"""Pair-LM transliterators built from lexicons.

The forward machine maps native script to Latin; :func:`reverse` inverts it.
Several forward machines can be joined into one many-to-one machine with
:func:`build_union`, wrapped by :class:`UnionTransliterator` for decoding.
"""

from __future__ import annotations

import datetime
import logging
import pathlib
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import wfst
from .align import AlignmentModel, UnalignableError, em_train, viterbi_align
from .lexicon import Lexicon
from .pairlm import NGramModel, to_fst, train_ngram
from .wfst import Fst, SymbolTable, UnknownSymbolError

logger = logging.getLogger(__name__)

ALIGNMENT_FILE = "alignment.tsv"
LM_FILE = "lm.arpa"
FST_FILE = "translit.fst"
NATIVE_SYMS = "native.syms"
LATIN_SYMS = "latin.syms"
MANIFEST = "manifest.txt"
BUNDLE_FILES = (ALIGNMENT_FILE, LM_FILE, FST_FILE, NATIVE_SYMS, LATIN_SYMS, MANIFEST)


class TranslitError(ValueError):
    pass


class BundleError(TranslitError):
    pass


@dataclass
class TransliterationResult:
    candidates: list = field(default_factory=list)  # (string, cost), cheapest first
    unknown: tuple = ()  # codepoints missing from the input table

    @property
    def ok(self) -> bool:
        return bool(self.candidates)

    @property
    def best(self) -> Optional[str]:
        return self.candidates[0][0] if self.candidates else None

    def strings(self) -> list:
        return [s for s, _ in self.candidates]


@dataclass
class Transliterator:
    language: str
    align_model: AlignmentModel
    lm: NGramModel
    fwd_fst: Fst
    native_syms: SymbolTable
    latin_syms: SymbolTable
    reversed: bool = False
    params: dict = field(default_factory=dict)

    @property
    def input_syms(self) -> SymbolTable:
        return self.fwd_fst.isyms

    @property
    def output_syms(self) -> SymbolTable:
        return self.fwd_fst.osyms


def build_transliterator(
    lexicon: Lexicon,
    order: int = 6,
    em_iters: int = 10,
    em_tol: float = 1e-6,
) -> Transliterator:
    entries = lexicon.training_entries()
    if not entries:
        raise TranslitError(f"lexicon {lexicon.language!r} is empty")
    model = em_train(entries, max_iters=em_iters, tol=em_tol)
    aligned = []
    for native, rom, count in entries:
        try:
            aligned.append((viterbi_align(model, native, rom), count))
        except UnalignableError:
            logger.warning("%s: skipping unalignable pair %s / %s", lexicon.language, native, rom)
    if not aligned:
        raise UnalignableError(f"no entry of lexicon {lexicon.language!r} could be aligned")
    lm = train_ngram(aligned, order=order)
    native_syms = SymbolTable(sorted({c for native, _, _ in entries for c in native}))
    latin_syms = SymbolTable(sorted({c for _, rom, _ in entries for c in rom}))
    fst = to_fst(lm, native_syms, latin_syms)
    params = {"order": order, "em_iters": em_iters, "em_tol": em_tol}
    return Transliterator(lexicon.language, model, lm, fst, native_syms, latin_syms, params=params)


def _decode(fst: Fst, word: str, k: int) -> list:
    acceptor = wfst.linear_acceptor(list(word), fst.isyms)
    lattice = wfst.connect(wfst.compose(acceptor, fst))
    paths = wfst.shortest_paths(lattice, n=k, unique_outputs=True)
    return [(p.ostring, p.weight) for p in paths]


def transliterate(t: Transliterator, word: str, k: int = 1) -> TransliterationResult:
    """k-best distinct outputs for ``word``; raises on codepoints outside the input table."""
    if k < 1:
        raise ValueError("k must be positive")
    unknown = [c for c in dict.fromkeys(word) if c not in t.input_syms or c == wfst.EPSILON]
    if unknown:
        raise UnknownSymbolError(unknown)
    return TransliterationResult(_decode(t.fwd_fst, word, k))


def reverse(t: Transliterator) -> Transliterator:
    return Transliterator(
        t.language,
        t.align_model,
        t.lm,
        wfst.invert(t.fwd_fst),
        t.latin_syms,
        t.native_syms,
        reversed=not t.reversed,
        params=dict(t.params),
    )


def build_union(ts: Sequence[Transliterator]) -> Fst:
    """Many-to-one machine: a fresh start with epsilon arcs into each member."""
    if not ts:
        raise TranslitError("union needs at least one transliterator")
    isyms = wfst.merge_tables(t.input_syms for t in ts)
    osyms = wfst.merge_tables(t.output_syms for t in ts)
    return wfst.union([t.fwd_fst for t in ts], isyms, osyms)


class UnionTransliterator:
    """Decoding context around a union machine.

    Unlike :func:`transliterate`, a word with codepoints no member knows is
    reported as untransliterable instead of raising.
    """

    def __init__(self, ts: Sequence[Transliterator]):
        self.members = list(ts)
        self.fst = build_union(self.members)
        self.languages = [t.language for t in self.members]

    def transliterate(self, word: str, k: int = 1) -> TransliterationResult:
        if k < 1:
            raise ValueError("k must be positive")
        unknown = tuple(c for c in dict.fromkeys(word) if c not in self.fst.isyms or c == wfst.EPSILON)
        if unknown:
            return TransliterationResult([], unknown)
        return TransliterationResult(_decode(self.fst, word, k))


# bundles


def save_bundle(t: Transliterator, out_dir, timestamp: bool = True) -> list:
    """Write the six bundle files; returns their paths."""
    if t.reversed:
        raise BundleError("save the forward transliterator, not a reversed one")
    out = pathlib.Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    t.align_model.write(out / ALIGNMENT_FILE)
    t.lm.write_arpa(out / LM_FILE)
    t.fwd_fst.write_text(out / FST_FILE)
    t.native_syms.write(out / NATIVE_SYMS)
    t.latin_syms.write(out / LATIN_SYMS)
    manifest = {"language": t.language, "direction": "native-to-latin"}
    manifest.update({k: t.params[k] for k in sorted(t.params)})
    manifest["states"] = t.fwd_fst.num_states
    manifest["arcs"] = t.fwd_fst.num_arcs()
    if timestamp:
        manifest["created"] = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
    with open(out / MANIFEST, "w", encoding="utf-8", newline="\n") as f:
        for key, value in manifest.items():
            f.write(f"{key}={value}\n")
    return [out / name for name in BUNDLE_FILES]


def read_manifest(path) -> dict:
    out = {}
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise BundleError(f"{path}:{lineno}: expected key=value")
            out[key.strip()] = value.strip()
    return out


def load_bundle(bundle_dir) -> Transliterator:
    d = pathlib.Path(bundle_dir)
    missing = [name for name in BUNDLE_FILES if not (d / name).is_file()]
    if missing:
        raise BundleError(f"{d}: missing bundle file(s): {', '.join(missing)}")
    manifest = read_manifest(d / MANIFEST)
    native_syms = SymbolTable.read(d / NATIVE_SYMS)
    latin_syms = SymbolTable.read(d / LATIN_SYMS)
    fst = Fst.read_text(d / FST_FILE, native_syms, latin_syms)
    lm = NGramModel.read_arpa(d / LM_FILE)
    align_model = AlignmentModel.read(d / ALIGNMENT_FILE)
    params = {}
    for key, cast in (("order", int), ("em_iters", int), ("em_tol", float)):
        if key in manifest:
            params[key] = cast(manifest[key])
    return Transliterator(
        manifest.get("language", d.name), align_model, lm, fst, native_syms, latin_syms, params=params
    )
