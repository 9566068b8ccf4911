"""Witten-Bell backoff n-gram models over pair symbols.

Sequences are padded as ``<s> p1 ... pn </s>``.  The model is trained in its
interpolated form and stored in backoff form: every observed n-gram keeps its
interpolated probability and every observed context gets the backoff weight
``T(h) / (C(h) + T(h))``, which makes each conditional distribution sum to one
exactly (up to rounding).  Log probabilities are natural logs in memory and
base 10 in ARPA files.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Sequence

from .align import AlignedPair, PairSymbol
from .wfst import ONE, Fst, SymbolTable

BOS = "<s>"
EOS = "</s>"
NEG_INF = -math.inf
LN10 = math.log(10.0)


class NGramError(ValueError):
    pass


@dataclass
class NGramModel:
    order: int
    vocab: frozenset
    probs: dict  # context tuple -> {token: natural-log probability}
    backoffs: dict  # non-empty context tuple -> natural-log backoff weight

    def logprob(self, context: Sequence, token) -> float:
        """log P(token | context), backing off through shorter contexts."""
        if token not in self.vocab:
            return NEG_INF
        h = tuple(context)[max(0, len(context) - self.order + 1) :]
        acc = 0.0
        while True:
            explicit = self.probs.get(h)
            if explicit is not None:
                lp = explicit.get(token)
                if lp is not None:
                    return acc + lp
                acc += self.backoffs.get(h, 0.0)
            if not h:
                return NEG_INF
            h = h[1:]

    def contexts(self) -> list:
        return sorted(self.probs, key=lambda h: (len(h), [str(t) for t in h]))

    def state_context(self, history: Sequence) -> tuple:
        """Longest stored suffix of the last ``order - 1`` tokens of ``history``."""
        if self.order == 1:
            return ()
        h = tuple(history)[-(self.order - 1) :]
        while h not in self.probs:
            h = h[1:]
        return h

    # ARPA text format

    def write_arpa(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(self.to_arpa())

    def to_arpa(self) -> str:
        by_order = defaultdict(list)
        for h in self.contexts():
            for tok in sorted(self.probs[h], key=str):
                ngram = h + (tok,)
                by_order[len(ngram)].append((ngram, self.probs[h][tok]))
        by_order[1].append(((BOS,), None))
        by_order[1].sort(key=lambda e: [str(t) for t in e[0]])
        lines = ["", "\\data\\"]
        for n in sorted(by_order):
            lines.append(f"ngram {n}={len(by_order[n])}")
        for n in sorted(by_order):
            lines.append("")
            lines.append(f"\\{n}-grams:")
            for ngram, lp in by_order[n]:
                lp10 = -99.0 if lp is None else lp / LN10
                fields = [repr(lp10), " ".join(str(t) for t in ngram)]
                if ngram in self.backoffs:
                    fields.append(repr(self.backoffs[ngram] / LN10))
                lines.append("\t".join(fields))
        lines.append("")
        lines.append("\\end\\")
        return "\n".join(lines) + "\n"

    @classmethod
    def read_arpa(cls, path) -> "NGramModel":
        with open(path, encoding="utf-8") as f:
            return cls.from_arpa(f.read(), source=str(path))

    @classmethod
    def from_arpa(cls, text: str, source="<arpa>") -> "NGramModel":
        probs = defaultdict(dict)
        backoffs = {}
        order = 0
        section = None
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("ngram ") or line == "\\data\\":
                continue
            if line == "\\end\\":
                break
            if line.startswith("\\") and line.endswith("-grams:"):
                section = int(line[1:-7])
                order = max(order, section)
                continue
            if section is None:
                raise NGramError(f"{source}:{lineno}: entry outside an n-gram section")
            fields = raw.split("\t")
            try:
                lp = float(fields[0]) * LN10
                tokens = tuple(_parse_token(t) for t in fields[1].split(" "))
                bo = float(fields[2]) * LN10 if len(fields) > 2 else None
            except (IndexError, ValueError) as e:
                raise NGramError(f"{source}:{lineno}: {e}") from None
            if len(tokens) != section:
                raise NGramError(f"{source}:{lineno}: expected {section} tokens")
            if tokens != (BOS,):
                probs[tokens[:-1]][tokens[-1]] = lp
            if bo is not None:
                backoffs[tokens] = bo
        if not order:
            raise NGramError(f"{source}: no n-gram sections")
        vocab = frozenset(probs.get((), {}))
        return cls(order, vocab, dict(probs), backoffs)


def _parse_token(tok: str):
    if tok in (BOS, EOS):
        return tok
    return PairSymbol.parse(tok)


def _pairs_of(item) -> tuple:
    if isinstance(item, AlignedPair):
        return item.pairs
    return tuple(item)


def train_ngram(sequences: Iterable[tuple], order: int = 6) -> NGramModel:
    """Train from ``(aligned_pair_or_pair_sequence, count)`` items."""
    if order < 1:
        raise NGramError("order must be at least 1")
    counts = defaultdict(lambda: defaultdict(float))
    n_seq = 0
    for item, count in sequences:
        if count <= 0:
            raise NGramError("sequence counts must be positive")
        n_seq += 1
        tokens = (BOS,) + _pairs_of(item) + (EOS,)
        for k in range(1, len(tokens)):
            w = tokens[k]
            for m in range(0, min(order - 1, k) + 1):
                counts[tokens[k - m : k]][w] += count
    if not n_seq:
        raise NGramError("no training sequences")

    vocab = frozenset(counts[()])
    probs = {}
    backoffs = {}
    uniform = 1.0 / len(vocab)

    def interpolated(h, w):
        # probability under the already-finished lower-order contexts
        while h not in probs:
            h = h[1:]
        p = 1.0
        while True:
            lp = probs[h].get(w)
            if lp is not None:
                return p * math.exp(lp)
            p *= math.exp(backoffs[h])
            h = h[1:]

    for h in sorted(counts, key=len):
        followers = counts[h]
        total = sum(followers.values())
        types = len(followers)
        denom = total + types
        table = {}
        for w in sorted(followers, key=str):
            lower = uniform if not h else interpolated(h[1:], w)
            table[w] = math.log((followers[w] + types * lower) / denom)
        probs[h] = table
        if h:
            backoffs[h] = math.log(types / denom)
    return NGramModel(order, vocab, probs, backoffs)


def score_sequence(model: NGramModel, pairs: Sequence) -> float:
    """Joint log-probability of a pair sequence, end marker included."""
    tokens = (BOS,) + tuple(pairs) + (EOS,)
    total = 0.0
    for k in range(1, len(tokens)):
        lp = model.logprob(tokens[:k], tokens[k])
        if lp == NEG_INF:
            return NEG_INF
        total += lp
    return total


def context_mass(model: NGramModel, context: tuple) -> float:
    """Sum of P(w | context) over the vocabulary; 1 for a normalized model."""
    return math.fsum(math.exp(model.logprob(context, w)) for w in model.vocab)


def symbol_tables(model: NGramModel) -> tuple[SymbolTable, SymbolTable]:
    ins = sorted({t.input for t in model.vocab if isinstance(t, PairSymbol) and t.input})
    outs = sorted({t.output for t in model.vocab if isinstance(t, PairSymbol) and t.output})
    return SymbolTable(ins), SymbolTable(outs)


def to_fst(model: NGramModel, isyms: SymbolTable, osyms: SymbolTable) -> Fst:
    """Compile to a transducer with one state per stored context.

    Explicit n-grams become ``input:output`` arcs weighted ``-log P``, backoffs
    become epsilon arcs to the next shorter context, and ``</s>`` becomes the
    final weight of each state.
    """
    fst = Fst(isyms, osyms)
    contexts = model.contexts()
    state = {h: fst.add_state() for h in contexts}
    fst.set_start(state[model.state_context((BOS,))])
    for h in contexts:
        src = state[h]
        for tok, lp in sorted(model.probs[h].items(), key=lambda kv: str(kv[0])):
            if tok == EOS:
                continue
            il = isyms.find(tok.input) if tok.input else 0
            ol = osyms.find(tok.output) if tok.output else 0
            fst.add_arc(src, il, ol, -lp, state[model.state_context(h + (tok,))])
        if h:
            fst.add_arc(src, 0, 0, -model.backoffs[h], state[h[1:]])
        final = model.logprob(h, EOS)
        if final != NEG_INF:
            fst.set_final(src, -final)
    return fst


def explicit_path_weight(fst: Fst, model: NGramModel, pairs: Sequence) -> float:
    """Cost of following explicit n-gram arcs only; ``inf`` if one is missing."""
    isyms, osyms = fst.isyms, fst.osyms
    state = fst.start
    total = ONE
    for p in pairs:
        il = isyms.find(p.input) if p.input else 0
        ol = osyms.find(p.output) if p.output else 0
        for arc in fst.arcs(state):
            if arc.ilabel == il and arc.olabel == ol and (il or ol):
                total += arc.weight
                state = arc.nextstate
                break
        else:
            return math.inf
    return total + fst.final(state)
