import pytest

from oracles import TAMIL_CIPHER, TAMIL_LETTERS, cipher_lexicon, cipher_words
from translitfst.translit import UnionTransliterator, build_transliterator


@pytest.fixture(scope="session")
def hindi_cipher():
    return build_transliterator(cipher_lexicon("hi"))


@pytest.fixture(scope="session")
def tamil_cipher():
    words = cipher_words(n=80, seed=11, letters=TAMIL_LETTERS)
    return build_transliterator(cipher_lexicon("ta", words, TAMIL_CIPHER))


@pytest.fixture(scope="session")
def union_hi_ta(hindi_cipher, tamil_cipher):
    return UnionTransliterator([hindi_cipher, tamil_cipher])
