"""EM training of a monotone codepoint-pair alignment model.

Each native/Latin word pair is aligned through an edit lattice with three
moves: match ``(c, d)``, deletion ``(c, "")`` and insertion ``("", d)``.  The
model is a single distribution over these pair symbols, and the probability
of an alignment is the product of its pair probabilities.  The empty string
stands for epsilon on either side.
"""

from __future__ import annotations

import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Iterable, NamedTuple, Optional, Sequence

logger = logging.getLogger(__name__)

EPS_TOKEN = "<eps>"
PROB_FLOOR = 1e-12
NEG_INF = -math.inf


class PairSymbol(NamedTuple):
    input: str
    output: str

    def __str__(self):
        return f"{self.input or EPS_TOKEN}:{self.output or EPS_TOKEN}"

    @classmethod
    def parse(cls, token: str) -> "PairSymbol":
        """Inverse of ``str()``; each side is one codepoint or ``<eps>``."""
        if token.startswith(EPS_TOKEN + ":"):
            left, right = "", token[len(EPS_TOKEN) + 1 :]
        elif len(token) >= 3 and token[1] == ":":
            left, right = token[0], token[2:]
        else:
            raise ValueError(f"malformed pair symbol {token!r}")
        if right == EPS_TOKEN:
            right = ""
        elif len(right) != 1:
            raise ValueError(f"malformed pair symbol {token!r}")
        if not left and not right:
            raise ValueError("pair symbol with two empty sides")
        return cls(left, right)


class AlignmentError(ValueError):
    pass


class UnalignableError(AlignmentError):
    """No monotone alignment of the pair has nonzero probability."""


@dataclass(frozen=True)
class AlignedPair:
    native_word: str
    latin_word: str
    pairs: tuple

    def __post_init__(self):
        if "".join(p.input for p in self.pairs) != self.native_word:
            raise AlignmentError("pairs do not spell the native word")
        if "".join(p.output for p in self.pairs) != self.latin_word:
            raise AlignmentError("pairs do not spell the latin word")


@dataclass
class AlignmentModel:
    probs: dict
    log_likelihoods: list = field(default_factory=list)

    def prob(self, pair) -> float:
        return self.probs.get(pair, 0.0)

    def logprob(self, pair) -> float:
        p = self.probs.get(pair, 0.0)
        return math.log(p) if p > 0 else NEG_INF

    def write(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            for pair in sorted(self.probs):
                f.write(f"{pair.input or EPS_TOKEN}\t{pair.output or EPS_TOKEN}\t{self.probs[pair]!r}\n")

    @classmethod
    def read(cls, path) -> "AlignmentModel":
        probs = {}
        with open(path, encoding="utf-8") as f:
            for lineno, line in enumerate(f, 1):
                line = line.rstrip("\n")
                if not line:
                    continue
                try:
                    left, right, p = line.split("\t")
                    p = float(p)
                except ValueError:
                    raise AlignmentError(f"{path}:{lineno}: malformed alignment line") from None
                left = "" if left == EPS_TOKEN else left
                right = "" if right == EPS_TOKEN else right
                probs[PairSymbol(left, right)] = p
        return cls(probs)


def _logaddexp(a: float, b: float) -> float:
    if a == NEG_INF:
        return b
    if b == NEG_INF:
        return a
    if a > b:
        return a + math.log1p(math.exp(b - a))
    return b + math.log1p(math.exp(a - b))


def lattice_pairs(x: str, y: str) -> set:
    """Every pair symbol that occurs somewhere in the edit lattice of (x, y)."""
    pairs = {PairSymbol(c, d) for c in x for d in y}
    pairs.update(PairSymbol(c, "") for c in x)
    pairs.update(PairSymbol("", d) for d in y)
    return pairs


def _forward(lp, x, y):
    m, n = len(x), len(y)
    alpha = [[NEG_INF] * (n + 1) for _ in range(m + 1)]
    alpha[0][0] = 0.0
    for i in range(m + 1):
        row = alpha[i]
        for j in range(n + 1):
            if i == 0 and j == 0:
                continue
            acc = NEG_INF
            if i and j:
                acc = _logaddexp(acc, alpha[i - 1][j - 1] + lp(PairSymbol(x[i - 1], y[j - 1])))
            if i:
                acc = _logaddexp(acc, alpha[i - 1][j] + lp(PairSymbol(x[i - 1], "")))
            if j:
                acc = _logaddexp(acc, row[j - 1] + lp(PairSymbol("", y[j - 1])))
            row[j] = acc
    return alpha


def _backward(lp, x, y):
    m, n = len(x), len(y)
    beta = [[NEG_INF] * (n + 1) for _ in range(m + 1)]
    beta[m][n] = 0.0
    for i in range(m, -1, -1):
        for j in range(n, -1, -1):
            if i == m and j == n:
                continue
            acc = NEG_INF
            if i < m and j < n:
                acc = _logaddexp(acc, beta[i + 1][j + 1] + lp(PairSymbol(x[i], y[j])))
            if i < m:
                acc = _logaddexp(acc, beta[i + 1][j] + lp(PairSymbol(x[i], "")))
            if j < n:
                acc = _logaddexp(acc, beta[i][j + 1] + lp(PairSymbol("", y[j])))
            beta[i][j] = acc
    return beta


def alignment_likelihood(model: AlignmentModel, native_word: str, latin_word: str) -> float:
    """Log of the summed probability of all monotone alignments."""
    x, y = native_word, latin_word
    return _forward(_cached_logprob(model), x, y)[len(x)][len(y)]


def _cached_logprob(model):
    cache = {}

    def lp(pair):
        v = cache.get(pair)
        if v is None:
            v = cache[pair] = model.logprob(pair)
        return v

    return lp


def expected_counts(model: AlignmentModel, native_word: str, latin_word: str):
    """E-step for one pair: (log-likelihood, {pair: posterior expected count})."""
    x, y = native_word, latin_word
    lp = _cached_logprob(model)
    alpha = _forward(lp, x, y)
    beta = _backward(lp, x, y)
    total = alpha[len(x)][len(y)]
    counts = defaultdict(float)
    if total == NEG_INF:
        return total, counts
    for i in range(len(x) + 1):
        for j in range(len(y) + 1):
            a = alpha[i][j]
            if a == NEG_INF:
                continue
            moves = []
            if i < len(x) and j < len(y):
                moves.append((PairSymbol(x[i], y[j]), beta[i + 1][j + 1]))
            if i < len(x):
                moves.append((PairSymbol(x[i], ""), beta[i + 1][j]))
            if j < len(y):
                moves.append((PairSymbol("", y[j]), beta[i][j + 1]))
            for pair, b in moves:
                w = lp(pair)
                if w == NEG_INF or b == NEG_INF:
                    continue
                counts[pair] += math.exp(a + w + b - total)
    return total, counts


def _check_entries(entries):
    if not entries:
        raise AlignmentError("no training entries")
    for native, latin, count in entries:
        if not native or not latin:
            raise AlignmentError(f"empty word in entry ({native!r}, {latin!r})")
        if count <= 0:
            raise AlignmentError(f"non-positive count for ({native!r}, {latin!r})")


def em_train(
    entries: Sequence[tuple],
    max_iters: int = 10,
    tol: float = 1e-6,
    callback: Optional[Callable[[int, AlignmentModel, float], None]] = None,
) -> AlignmentModel:
    """Train the pair distribution with EM over (native, latin, count) entries.

    Starts uniform over every pair symbol reachable in some entry's lattice.
    ``callback(iteration, model, loglik)`` sees each re-estimated model
    together with the log-likelihood of the model that produced its counts.
    Training stops after ``max_iters`` or once an iteration improves the
    total log-likelihood by less than ``tol``.  The returned model records
    those log-likelihoods in ``log_likelihoods``.
    """
    _check_entries(entries)
    if max_iters < 1:
        raise AlignmentError("max_iters must be positive")
    support = set()
    for native, latin, _ in entries:
        support |= lattice_pairs(native, latin)
    support = sorted(support)
    model = AlignmentModel({p: 1.0 / len(support) for p in support})

    history = []
    for it in range(1, max_iters + 1):
        totals = defaultdict(float)
        loglik = 0.0
        for native, latin, count in entries:
            ll, counts = expected_counts(model, native, latin)
            if ll == NEG_INF:
                logger.warning("skipping entry with no posterior mass: %s / %s", native, latin)
                continue
            loglik += count * ll
            for pair, c in counts.items():
                totals[pair] += count * c
        if not totals:
            raise UnalignableError("no entry has an alignment with nonzero probability")
        history.append(loglik)
        model = AlignmentModel(_normalize(totals, support), list(history))
        if callback is not None:
            callback(it, model, loglik)
        if len(history) > 1 and history[-1] - history[-2] < tol:
            break
    return model


def _normalize(totals, support) -> dict:
    z = sum(totals.values())
    probs = {p: max(totals.get(p, 0.0) / z, PROB_FLOOR) for p in support}
    z = sum(probs.values())
    return {p: v / z for p, v in probs.items()}


def viterbi_align(model: AlignmentModel, native_word: str, latin_word: str) -> AlignedPair:
    """Most probable monotone alignment; ties prefer match, then deletion, then insertion."""
    x, y = native_word, latin_word
    m, n = len(x), len(y)
    lp = _cached_logprob(model)
    score = [[NEG_INF] * (n + 1) for _ in range(m + 1)]
    back = [[None] * (n + 1) for _ in range(m + 1)]
    score[0][0] = 0.0
    for i in range(m + 1):
        for j in range(n + 1):
            if i == 0 and j == 0:
                continue
            best, move = NEG_INF, None
            if i and j:
                s = score[i - 1][j - 1] + lp(PairSymbol(x[i - 1], y[j - 1]))
                if s > best:
                    best, move = s, "M"
            if i:
                s = score[i - 1][j] + lp(PairSymbol(x[i - 1], ""))
                if s > best:
                    best, move = s, "D"
            if j:
                s = score[i][j - 1] + lp(PairSymbol("", y[j - 1]))
                if s > best:
                    best, move = s, "I"
            score[i][j] = best
            back[i][j] = move
    if score[m][n] == NEG_INF:
        raise UnalignableError(f"no alignment with nonzero probability for {x!r} / {y!r}")
    pairs = []
    i, j = m, n
    while i or j:
        move = back[i][j]
        if move == "M":
            pairs.append(PairSymbol(x[i - 1], y[j - 1]))
            i, j = i - 1, j - 1
        elif move == "D":
            pairs.append(PairSymbol(x[i - 1], ""))
            i -= 1
        else:
            pairs.append(PairSymbol("", y[j - 1]))
            j -= 1
    pairs.reverse()
    return AlignedPair(x, y, tuple(pairs))


def path_logprob(model: AlignmentModel, pairs: Iterable[PairSymbol]) -> float:
    return sum(model.logprob(p) for p in pairs)
