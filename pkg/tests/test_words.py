import pytest
from hypothesis import given
from hypothesis import strategies as st

from ncscatter import words
from ncscatter.words import concat, enumerate_words, reverse, splits, validate_word

word_st = st.lists(st.integers(1, 3), max_size=6).map(tuple)


def test_reverse_examples():
    assert reverse(()) == ()
    assert reverse((1, 2, 1)) == (1, 2, 1)
    assert reverse((1, 2, 2)) == (2, 2, 1)


def test_concat_examples():
    assert concat((1,), (2, 1)) == (1, 2, 1)
    assert concat((), (2,)) == (2,)
    assert concat((2,), ()) == (2,)


def test_splits_examples():
    assert splits(()) == [((), ())]
    assert splits((1, 2)) == [((), (1, 2)), ((1,), (2,)), ((1, 2), ())]


@given(word_st)
def test_splits_count_and_order(w):
    s = splits(w)
    assert len(s) == len(w) + 1
    assert [len(a) for a, _ in s] == list(range(len(w) + 1))
    assert all(concat(a, b) == w for a, b in s)


@given(word_st, word_st)
def test_reverse_antihomomorphism(a, b):
    assert reverse(concat(a, b)) == concat(reverse(b), reverse(a))


@given(word_st)
def test_reverse_involution(w):
    assert reverse(reverse(w)) == w


def test_enumerate_depth_zero():
    idx = enumerate_words(2, 0)
    assert idx.words == ((),)
    assert idx.size == 1


def test_enumerate_graded_lex():
    idx = enumerate_words(2, 2)
    assert idx.words == ((), (1,), (2,), (1, 1), (1, 2), (2, 1), (2, 2))


def test_enumerate_size():
    assert enumerate_words(3, 2).size == 1 + 3 + 9


def test_index_word_bijection():
    idx = enumerate_words(3, 3)
    for i, w in enumerate(idx.words):
        assert idx.index(w) == i
        assert idx.word(i) == w
    assert idx.index(()) == 0


def test_index_unknown_word():
    idx = enumerate_words(2, 1)
    with pytest.raises(KeyError):
        idx.index((1, 1))
    assert (1, 1) not in idx
    assert (2,) in idx


def test_validate_word():
    assert validate_word([1, 2], 2) == (1, 2)
    with pytest.raises(ValueError):
        validate_word([0], 2)
    with pytest.raises(ValueError):
        validate_word([3], 2)


def test_words_of_length():
    assert words.words_of_length(2, 0) == [()]
    assert words.words_of_length(2, 2) == [(1, 1), (1, 2), (2, 1), (2, 2)]
