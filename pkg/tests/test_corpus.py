import pytest
from hypothesis import given, strategies as st

from oracles import CIPHER, TAMIL_CIPHER, apply_cipher, cipher_words
from translitfst.corpus import (
    NormalizationReport,
    ScriptTag,
    balance_plan,
    detect_script,
    grapheme_inventory,
    in_native_block,
    normalize_corpus,
)


@pytest.mark.parametrize(
    "token, tag",
    [
        ("क", ScriptTag.DEVANAGARI),
        ("किताब", ScriptTag.DEVANAGARI),
        ("বাংলা", ScriptTag.BENGALI),
        ("தமிழ்", ScriptTag.TAMIL),
        ("ಕನ್ನಡ", ScriptTag.KANNADA),
        ("hello", ScriptTag.LATIN),
        ("café", ScriptTag.LATIN),
        ("rock'n-roll", ScriptTag.LATIN),
        ("hello2", ScriptTag.LATIN),
        ("கa", ScriptTag.MIXED),
        ("कক", ScriptTag.MIXED),
        ("123", ScriptTag.OTHER),
        ("ok!", ScriptTag.OTHER),
        ("日本", ScriptTag.OTHER),
    ],
)
def test_detect_script(token, tag):
    assert detect_script(token) == tag


def test_detect_script_empty():
    with pytest.raises(ValueError):
        detect_script("")


@given(st.text(min_size=1, max_size=8))
def test_detect_script_depends_on_codepoint_set(token):
    assert detect_script(token) == detect_script("".join(sorted(set(token))))


def test_latin_lines_unchanged(union_hi_ta):
    lines = ["hello world", "the  quick\tfox"]
    assert list(normalize_corpus(lines, union_hi_ta)) == lines


def test_latin_lowercased_without_passthrough(union_hi_ta):
    assert list(normalize_corpus(["Hello World"], union_hi_ta, passthrough_latin=False)) == ["hello world"]


def _cipher_corpus():
    hi = cipher_words()[:30]
    ta = cipher_words(n=20, seed=11, letters=list(TAMIL_CIPHER))
    lines, expected = [], []
    for i in range(15):
        toks = [hi[2 * i], "ok", ta[i], hi[2 * i + 1]]
        lines.append(" ".join(toks))
        expected.append(" ".join([apply_cipher(toks[0]), "ok", apply_cipher(toks[2], TAMIL_CIPHER), apply_cipher(toks[3])]))
    return lines, expected


def test_cipher_corpus_normalizes_exactly(union_hi_ta):
    lines, expected = _cipher_corpus()
    report = NormalizationReport()
    out = list(normalize_corpus(lines, union_hi_ta, report=report))
    assert out == expected
    assert report.lines == 15 and report.tokens == 60
    assert report.transliterated == 45 and report.passthrough == 15 and report.untransliterable == 0


def test_normalized_inventory_is_latin(union_hi_ta):
    lines, _ = _cipher_corpus()
    inv = grapheme_inventory(normalize_corpus(lines, union_hi_ta))
    allowed = set("abcdefghijklmnopqrstuvwxyz0123456789'-")
    assert set(inv) <= allowed
    assert len(inv) <= len(grapheme_inventory(lines))


def test_untransliterable_tokens_copied_and_counted(union_hi_ta):
    report = NormalizationReport()
    line = "ಕನ್ನಡ " + next(iter(CIPHER)) + "   x!y"
    (out,) = normalize_corpus([line], union_hi_ta, report=report)
    assert out.split(" ")[0] == "ಕನ್ನಡ"
    assert out.endswith("   x!y")
    assert report.untransliterable == 2
    assert report.scripts[ScriptTag.KANNADA] == 1


def test_token_and_line_counts_preserved(union_hi_ta):
    lines, _ = _cipher_corpus()
    lines = lines + ["", "  ", "ಕನ್ನಡ ok"]
    out = list(normalize_corpus(lines, union_hi_ta))
    assert len(out) == len(lines)
    assert [len(l.split()) for l in out] == [len(l.split()) for l in lines]


def test_inventory_examples():
    assert grapheme_inventory(["ab ab"]) == {"a": 2, "b": 2}
    assert grapheme_inventory([]) == {}


def test_balance_equal_amounts():
    plan = balance_plan({"hi": 4.0, "bn": 4.0, "ta": 4.0, "kn": 4.0})
    assert set(plan.multipliers.values()) == {75.0}
    assert set(plan.resulting.values()) == {300.0}
    assert plan.imbalance == 1.0


def test_balance_clamped():
    plan = balance_plan({"hi": 100, "bn": 10, "ta": 5, "kn": 1}, cap=75)
    assert plan.target == 75
    assert list(plan.multipliers.values()) == pytest.approx([1, 7.5, 15, 75], abs=1e-9)
    assert list(plan.resulting.values()) == pytest.approx([100, 75, 75, 75], abs=1e-9)
    assert plan.imbalance == pytest.approx(100 / 75, abs=1e-9)


def test_balance_two_languages():
    plan = balance_plan({"a": 2, "b": 1})
    assert list(plan.multipliers.values()) == [37.5, 75]
    assert list(plan.resulting.values()) == [75, 75]


@pytest.mark.parametrize("bad", [{"a": 0}, {"a": -1, "b": 2}, {}])
def test_balance_rejects(bad):
    with pytest.raises(ValueError):
        balance_plan(bad)


amounts_st = st.dictionaries(
    st.sampled_from(["hi", "bn", "ta", "kn"]), st.floats(min_value=0.01, max_value=1e4), min_size=1
)


@given(amounts_st, st.floats(min_value=0.01, max_value=100))
def test_balance_scale_invariant(amounts, c):
    a = balance_plan(amounts)
    b = balance_plan({k: v * c for k, v in amounts.items()})
    for lang in amounts:
        assert b.multipliers[lang] == pytest.approx(a.multipliers[lang], rel=1e-9)
        assert a.resulting[lang] == pytest.approx(amounts[lang] * a.multipliers[lang])
        assert a.multipliers[lang] >= 1


@given(amounts_st)
def test_balance_equalizes_without_clamp(amounts):
    plan = balance_plan(amounts, cap=75)
    if all(m > 1 for m in plan.multipliers.values()) or len(amounts) == 1:
        vals = list(plan.resulting.values())
        assert max(vals) / min(vals) == pytest.approx(1.0, abs=1e-9)


def test_native_block_helper():
    assert in_native_block("क") and in_native_block("க") and not in_native_block("a")
