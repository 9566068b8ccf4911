import itertools
import math
import random

import pytest

from translitfst.align import PairSymbol as P
from translitfst.pairlm import (
    BOS,
    EOS,
    NGramError,
    NGramModel,
    context_mass,
    explicit_path_weight,
    score_sequence,
    symbol_tables,
    to_fst,
    train_ngram,
)
from translitfst.wfst import compose, connect, invert, linear_acceptor, shortest_paths


def _random_corpus(rng, n=40, alphabet=(P("a", "x"), P("b", "y"), P("c", ""), P("", "z"), P("a", "w"))):
    corpus = []
    for _ in range(n):
        seq = tuple(rng.choice(alphabet) for _ in range(rng.randint(0, 7)))
        corpus.append((seq, rng.randint(1, 3)))
    return corpus


@pytest.mark.parametrize("order", [1, 2, 3, 6])
def test_every_context_normalized(order):
    model = train_ngram(_random_corpus(random.Random(order)), order=order)
    for h in model.probs:
        assert abs(context_mass(model, h) - 1.0) < 1e-9


def test_errors():
    with pytest.raises(NGramError):
        train_ngram([], order=3)
    with pytest.raises(NGramError):
        train_ngram([((P("a", "x"),), 1)], order=0)


def test_unigram_proportional_to_smoothed_counts():
    seq = (P("a", "x"), P("b", "y"), P("c", "z"))
    model = train_ngram([(seq, 1)], order=1)
    # every token seen once, T = |V| = 4: P(w) = (c + 1) / (N + |V|)
    for w in seq + (EOS,):
        assert math.exp(model.logprob((), w)) == pytest.approx(2 / 8, abs=1e-15)


def test_unigram_training_sequence_is_maximal():
    vocab = [P("a", "x"), P("b", "y"), P("c", "z")]
    for train in ([vocab[0]], vocab[:2], vocab):
        model = train_ngram([(tuple(train), 1)], order=1)
        mine = score_sequence(model, train)
        for other in itertools.product(vocab, repeat=len(train)):
            assert score_sequence(model, other) <= mine + 1e-12


def test_order_beyond_longest_ngram_changes_nothing():
    # longest padded sequence <s> p p p </s> holds 5 tokens, so orders >= 5 coincide
    rng = random.Random(5)
    alphabet = (P("a", "x"), P("b", "y"), P("c", ""))
    corpus = [(tuple(rng.choice(alphabet) for _ in range(rng.randint(1, 3))), 1) for _ in range(12)]
    m6 = train_ngram(corpus, order=6)
    m5 = train_ngram(corpus, order=5)
    m4 = train_ngram(corpus, order=4)
    differs = False
    for n in range(4):
        for seq in itertools.product(alphabet, repeat=n):
            s6, s5, s4 = score_sequence(m6, seq), score_sequence(m5, seq), score_sequence(m4, seq)
            assert s6 == pytest.approx(s5, abs=1e-12)
            differs |= abs(s6 - s4) > 1e-9
    assert differs


def test_empty_sequence_scores_end_given_begin():
    model = train_ngram(_random_corpus(random.Random(2)), order=3)
    assert score_sequence(model, ()) == model.logprob((BOS,), EOS)


def test_out_of_vocabulary_is_impossible():
    model = train_ngram([((P("a", "x"),), 1)], order=2)
    assert score_sequence(model, (P("q", "q"),)) == -math.inf


def test_training_sequence_beats_rare_symbols():
    common, rare = P("a", "x"), P("b", "y")
    corpus = [((common, common, common), 20), ((rare,), 1)]
    model = train_ngram(corpus, order=3)
    assert score_sequence(model, (common,) * 3) > score_sequence(model, (rare,) * 3)


def test_more_counts_never_lower_probability():
    rng = random.Random(9)
    base = _random_corpus(rng, n=20)
    seq = (P("a", "x"), P("b", "y"), P("c", ""))  # distinct symbols
    for extra in range(1, 4):
        before = train_ngram(base + [(seq, 1)], order=3)
        after = train_ngram(base + [(seq, 1 + extra)], order=3)
        tokens = (BOS,) + seq + (EOS,)
        for k in range(1, len(tokens)):
            assert after.logprob(tokens[:k], tokens[k]) >= before.logprob(tokens[:k], tokens[k]) - 1e-12


@pytest.mark.parametrize("order", [1, 2, 4, 6])
def test_fst_explicit_path_weight_equals_score(order):
    corpus = _random_corpus(random.Random(order + 10))
    model = train_ngram(corpus, order=order)
    isyms, osyms = symbol_tables(model)
    fst = to_fst(model, isyms, osyms)
    for seq, _ in corpus:
        assert explicit_path_weight(fst, model, seq) == pytest.approx(-score_sequence(model, seq), abs=1e-9)


def test_inverted_fst_keeps_joint_weights():
    corpus = _random_corpus(random.Random(21))
    model = train_ngram(corpus, order=3)
    isyms, osyms = symbol_tables(model)
    fst = to_fst(model, isyms, osyms)
    inv = invert(fst)
    for seq, _ in corpus:
        mirrored = tuple(P(p.output, p.input) for p in seq)
        assert explicit_path_weight(inv, model, mirrored) == explicit_path_weight(fst, model, seq)


def test_single_unigram_machine():
    model = train_ngram([((P("a", "x"),), 1)], order=1)
    isyms, osyms = symbol_tables(model)
    fst = to_fst(model, isyms, osyms)
    assert fst.num_states == 1
    step = -model.logprob((), P("a", "x"))
    end = -model.logprob((), EOS)
    assert step == pytest.approx(math.log(2)) and end == pytest.approx(math.log(2))
    got = shortest_paths(fst, n=4)
    assert [(p.istring, p.ostring) for p in got] == [("", ""), ("a", "x"), ("aa", "xx"), ("aaa", "xxx")]
    for k, p in enumerate(got):
        assert p.weight == pytest.approx(k * step + end, abs=1e-12)


def test_fst_paths_lower_bound_scores():
    # backoff arcs are plain epsilons: the best path never costs more than the exact score
    corpus = _random_corpus(random.Random(4), n=10)
    model = train_ngram(corpus, order=2)
    isyms, osyms = symbol_tables(model)
    fst = to_fst(model, isyms, osyms)
    for seq, _ in corpus:
        ins = [p.input for p in seq if p.input]
        acc = linear_acceptor(ins, isyms)
        outs = {}
        for path in shortest_paths(connect(compose(acc, fst)), n=50):
            outs.setdefault(path.osymbols, path.weight)
        key = tuple(p.output for p in seq if p.output)
        if key in outs:
            assert outs[key] <= -score_sequence(model, seq) + 1e-9


def test_arpa_roundtrip(tmp_path):
    model = train_ngram(_random_corpus(random.Random(7)), order=4)
    model.write_arpa(tmp_path / "lm.arpa")
    text = (tmp_path / "lm.arpa").read_text(encoding="utf-8")
    assert "\\4-grams:" in text and "<eps>" in text
    back = NGramModel.read_arpa(tmp_path / "lm.arpa")
    assert back.order == 4
    assert back.vocab == model.vocab
    assert set(back.probs) == set(model.probs)
    for h, table in model.probs.items():
        for w, lp in table.items():
            assert back.probs[h][w] == pytest.approx(lp, abs=1e-12)
    for h, b in model.backoffs.items():
        assert back.backoffs[h] == pytest.approx(b, abs=1e-12)


def test_arpa_order_one(tmp_path):
    model = train_ngram([((P("a", "x"),), 1)], order=1)
    back = NGramModel.from_arpa(model.to_arpa())
    assert back.order == 1
    assert score_sequence(back, (P("a", "x"),)) == pytest.approx(score_sequence(model, (P("a", "x"),)))
