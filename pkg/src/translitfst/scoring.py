"""Word error rate, plain and transliteration-optimized.

The transliteration-optimized variant expands every token into a candidate
set: its lowercased surface form plus, for native-script tokens, the k-best
Latin transliterations.  Two tokens match when their candidate sets overlap.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .corpus import NATIVE_SCRIPTS, detect_script


class ScoringError(ValueError):
    pass


@dataclass(frozen=True)
class WerReport:
    substitutions: int = 0
    insertions: int = 0
    deletions: int = 0
    ref_words: int = 0

    @property
    def errors(self) -> int:
        return self.substitutions + self.insertions + self.deletions

    @property
    def wer(self) -> float:
        if self.ref_words == 0:
            raise ScoringError("WER is undefined for an empty reference")
        return self.errors / self.ref_words

    def __add__(self, other: "WerReport") -> "WerReport":
        return WerReport(
            self.substitutions + other.substitutions,
            self.insertions + other.insertions,
            self.deletions + other.deletions,
            self.ref_words + other.ref_words,
        )

    def summary(self) -> str:
        return (
            f"WER={100 * self.wer:.2f} S={self.substitutions} I={self.insertions} "
            f"D={self.deletions} N={self.ref_words}"
        )

    def as_dict(self) -> dict:
        return {
            "wer": self.wer,
            "substitutions": self.substitutions,
            "insertions": self.insertions,
            "deletions": self.deletions,
            "ref_words": self.ref_words,
        }


# alignment ops: C correct, S substitution, D deletion, I insertion
def edit_align(
    ref: Sequence,
    hyp: Sequence,
    equal: Callable[[object, object], bool] = None,
) -> tuple[list, WerReport]:
    """Unit-cost Levenshtein alignment.

    Among minimal alignments the backtrace prefers the diagonal move, then
    deletion, then insertion.  Returns ``[(op, ref_tok, hyp_tok), ...]`` and
    the matching report.
    """
    if not ref:
        raise ScoringError("WER is undefined for an empty reference")
    eq = equal or (lambda a, b: a == b)
    m, n = len(ref), len(hyp)
    d = [[0] * (n + 1) for _ in range(m + 1)]
    for i in range(1, m + 1):
        d[i][0] = i
    for j in range(1, n + 1):
        d[0][j] = j
    same = [[False] * n for _ in range(m)]
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            match = eq(ref[i - 1], hyp[j - 1])
            same[i - 1][j - 1] = match
            d[i][j] = min(d[i - 1][j - 1] + (0 if match else 1), d[i - 1][j] + 1, d[i][j - 1] + 1)

    ops = []
    s = ins = dels = 0
    i, j = m, n
    while i or j:
        if i and j and d[i][j] == d[i - 1][j - 1] + (0 if same[i - 1][j - 1] else 1):
            if same[i - 1][j - 1]:
                ops.append(("C", ref[i - 1], hyp[j - 1]))
            else:
                ops.append(("S", ref[i - 1], hyp[j - 1]))
                s += 1
            i, j = i - 1, j - 1
        elif i and d[i][j] == d[i - 1][j] + 1:
            ops.append(("D", ref[i - 1], None))
            dels += 1
            i -= 1
        else:
            ops.append(("I", None, hyp[j - 1]))
            ins += 1
            j -= 1
    ops.reverse()
    report = WerReport(s, ins, dels, m)
    assert report.errors == d[m][n]
    return ops, report


def wer(ref: Sequence[str], hyp: Sequence[str]) -> WerReport:
    return edit_align(ref, hyp)[1]


class CandidateExpander:
    """Caches candidate sets for tokens against one union transliterator."""

    def __init__(self, union, k: int = 5):
        if k < 1:
            raise ValueError("k must be positive")
        self.union = union
        self.k = k
        self._cache = {}

    def __call__(self, token: str) -> frozenset:
        found = self._cache.get(token)
        if found is None:
            cands = {token.lower()}
            if detect_script(token) in NATIVE_SCRIPTS:
                cands.update(s.lower() for s in self.union.transliterate(token, self.k).strings())
            found = self._cache[token] = frozenset(cands)
        return found


def translit_optimized_wer(
    ref: Sequence[str],
    hyp: Sequence[str],
    union,
    k: int = 5,
    expander: CandidateExpander = None,
) -> WerReport:
    """WER where tokens match if their candidate sets intersect.

    Pass an ``expander`` to share its cache across utterances.
    """
    expand = expander or CandidateExpander(union, k)
    refs = [expand(t) for t in ref]
    hyps = [expand(t) for t in hyp]
    _, report = edit_align(refs, hyps, lambda a, b: not a.isdisjoint(b))
    return report


def split_utterance(line: str) -> tuple:
    """``uttid<TAB>text`` or bare text -> (uttid or None, tokens)."""
    line = line.rstrip("\r\n")
    if "\t" in line:
        uttid, text = line.split("\t", 1)
        return uttid, text.split()
    return None, line.split()


def score_corpus(ref_lines, hyp_lines, union=None, k: int = 5) -> tuple[WerReport, list]:
    """Score parallel utterance lines; totals are summed component counts."""
    ref_lines, hyp_lines = list(ref_lines), list(hyp_lines)
    if len(ref_lines) != len(hyp_lines):
        raise ScoringError(f"{len(ref_lines)} reference lines but {len(hyp_lines)} hypothesis lines")
    expander = CandidateExpander(union, k) if union is not None else None
    total = WerReport()
    per_utt = []
    for idx, (r, h) in enumerate(zip(ref_lines, hyp_lines), 1):
        rid, rtoks = split_utterance(r)
        hid, htoks = split_utterance(h)
        if rid is not None and hid is not None and rid != hid:
            raise ScoringError(f"line {idx}: utterance ids differ ({rid!r} vs {hid!r})")
        if not rtoks:
            raise ScoringError(f"line {idx}: empty reference")
        if expander is not None:
            rep = translit_optimized_wer(rtoks, htoks, union, k, expander)
        else:
            rep = wer(rtoks, htoks)
        total = total + rep
        per_utt.append({"id": rid or hid or str(idx), **rep.as_dict()})
    return total, per_utt
