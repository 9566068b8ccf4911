"""Brute-force reference implementations used by the test-suite.

None of these share code with the package paths they check.
"""

import random
from functools import lru_cache

from translitfst.lexicon import Lexicon
from translitfst.wfst import Fst


def enumerate_paths(fst, max_len=64):
    """Every accepting path of an acyclic machine as (isyms, osyms, weight)."""
    out = []
    if fst.start < 0:
        return out

    def walk(state, ins, outs, w, depth):
        if depth > max_len:
            raise RuntimeError("machine looks cyclic")
        if fst.is_final(state):
            out.append((tuple(ins), tuple(outs), w + fst.final(state)))
        for arc in fst.arcs(state):
            ni = ins + [fst.isyms.symbol(arc.ilabel)] if arc.ilabel else ins
            no = outs + [fst.osyms.symbol(arc.olabel)] if arc.olabel else outs
            walk(arc.nextstate, ni, no, w + arc.weight, depth + 1)

    walk(fst.start, [], [], 0.0, 0)
    return out


def random_acyclic_fst(rng, isyms, osyms, max_states=8, eps_rate=0.25, arc_rate=0.45):
    """Arcs only go from lower to higher state ids, so the machine is acyclic.

    Weights are multiples of 0.25 so every path sum is exact in binary floating point.
    """
    n = rng.randint(1, max_states)
    fst = Fst(isyms, osyms)
    for _ in range(n):
        fst.add_state()
    fst.set_start(0)
    ilabels = list(range(1, len(isyms)))
    olabels = list(range(1, len(osyms)))
    for s in range(n):
        for d in range(s + 1, n):
            while rng.random() < arc_rate:
                il = 0 if rng.random() < eps_rate else rng.choice(ilabels)
                ol = 0 if rng.random() < eps_rate else rng.choice(olabels)
                fst.add_arc(s, il, ol, rng.randint(0, 12) * 0.25, d)
    for s in range(n):
        if rng.random() < 0.35 or s == n - 1:
            fst.set_final(s, rng.randint(0, 4) * 0.25)
    return fst


def join_paths(paths_a, paths_b):
    """Brute-force composition: pair every A path with every B path whose input matches A's output."""
    joined = []
    for ia, oa, wa in paths_a:
        for ib, ob, wb in paths_b:
            if oa == ib:
                joined.append((ia, ob, wa + wb))
    return joined


def min_by_strings(paths):
    best = {}
    for i, o, w in paths:
        key = (i, o)
        if key not in best or w < best[key]:
            best[key] = w
    return best


# --- alignment ---------------------------------------------------------------


def enumerate_alignments(x, y):
    """All monotone alignments of x and y using (c,d), (c,''), ('',d) moves."""
    if not x and not y:
        yield ()
        return
    if x and y:
        for rest in enumerate_alignments(x[1:], y[1:]):
            yield ((x[0], y[0]),) + rest
    if x:
        for rest in enumerate_alignments(x[1:], y):
            yield ((x[0], ""),) + rest
    if y:
        for rest in enumerate_alignments(x, y[1:]):
            yield (("", y[0]),) + rest


def alignment_prob(probs, alignment):
    p = 1.0
    for pair in alignment:
        p *= probs.get(pair, 0.0)
    return p


# --- edit distance -----------------------------------------------------------


def recursive_edit_distance(ref, hyp, equal=lambda a, b: a == b):
    """Plain recursion (memoized) over suffixes; no DP table."""
    ref = tuple(ref)
    hyp = tuple(hyp)

    @lru_cache(maxsize=None)
    def go(i, j):
        if i == len(ref):
            return len(hyp) - j
        if j == len(hyp):
            return len(ref) - i
        cost = 0 if equal(ref[i], hyp[j]) else 1
        return min(go(i + 1, j + 1) + cost, go(i + 1, j) + 1, go(i, j + 1) + 1)

    return go(0, 0)


# --- cipher lexicon ----------------------------------------------------------

DEVANAGARI_LETTERS = [chr(c) for c in range(0x0915, 0x0915 + 20)]
LATIN_LETTERS = list("abcdefghijklmnoprstu")
CIPHER = dict(zip(DEVANAGARI_LETTERS, LATIN_LETTERS))


def cipher_words(n=200, seed=7, letters=DEVANAGARI_LETTERS, min_len=3, max_len=7):
    rng = random.Random(seed)
    words = set()
    while len(words) < n:
        k = rng.randint(min_len, max_len)
        words.add("".join(rng.choice(letters) for _ in range(k)))
    return sorted(words)


def apply_cipher(word, table=CIPHER):
    return "".join(table[c] for c in word)


TAMIL_LETTERS = [chr(c) for c in (0x0B95, 0x0B99, 0x0B9A, 0x0B9E, 0x0B9F, 0x0BA3, 0x0BA4, 0x0BA8, 0x0BAA, 0x0BAE)]
TAMIL_CIPHER = dict(zip(TAMIL_LETTERS, "kgsjtnpmvy"))


def cipher_lexicon(language="hi", words=None, table=CIPHER):
    lex = Lexicon(language)
    for w in words if words is not None else cipher_words():
        lex.add(w, apply_cipher(w, table), 1)
    return lex
