from __future__ import annotations


import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wilfcollapse.perm import Permutation, contains
from wilfcollapse.words import (
    EMPTY,
    Alphabet,
    Letter,
    check_factorisation_identity,
    check_quotient_identity,
    count_disjoint_blocks,
    is_incompatible_factorisation,
    series_I,
    series_I_star,
    shuffle_orbit,
    split_at,
    validate_embedding_order,
)

from oracles import containment_series


def W(alphabet, text):
    return alphabet.parse_word(text)


def test_letter_and_alphabet_validation():
    with pytest.raises(ValueError):
        Letter("a", 0)
    with pytest.raises(ValueError):
        Alphabet.from_permutations(["12"])
    with pytest.raises(ValueError):
        Alphabet.from_permutations(["1", "1"])
    with pytest.raises(ValueError):
        Alphabet([Letter("a", 1)], mode="other")


def test_letters_sorted_by_weight_then_name(ab3):
    assert [str(a) for a in ab3] == ["1", "21", "231"]
    assert ab3.max_weight == 3
    assert len(ab3) == 3


def test_parse_and_word_of(ab2):
    w = W(ab2, "21.1.21")
    assert str(w) == "21.1.21"
    assert w.weight == 5
    assert w.perm() == Permutation.parse("21354")
    assert ab2.word_of("21354") == w
    assert W(ab2, "ε") == EMPTY and str(EMPTY) == "ε"
    with pytest.raises(ValueError):
        ab2.word_of("231")
    with pytest.raises(KeyError):
        W(ab2, "21.312")


def test_foreign_letters_rejected(ab2, ab3):
    with pytest.raises(ValueError):
        ab2.leq(W(ab3, "231"), W(ab2, "1"))


def test_greedy_embedding_examples(ab2, ab3):
    assert ab2.leq(W(ab2, "1.1"), W(ab2, "21.1"))
    assert not ab2.leq(W(ab2, "1.1"), W(ab2, "21"))
    assert ab2.leq(W(ab2, "21"), W(ab2, "1.21"))
    assert ab3.leq(W(ab3, "1.1"), W(ab3, "231"))
    assert not ab3.leq(W(ab3, "1.21"), W(ab3, "231"))
    assert ab2.leq(EMPTY, W(ab2, "1"))


def test_advance_and_retreat(ab3):
    t = W(ab3, "1.1.21")
    assert ab3.advance(t, 0, ab3.letter("231")) == 2
    assert ab3.advance(t, 2, ab3.letter("1")) == 2
    assert ab3.retreat(t, 0, ab3.letter("21")) == 1
    assert ab3.retreat(t, 1, ab3.letter("231")) == 3


def test_minimal_containers(ab2):
    w = W(ab2, "1")
    assert ab2.leq_star(w, W(ab2, "1"))
    assert not ab2.leq_star(w, W(ab2, "1.1"))
    assert ab2.leq_star(EMPTY, EMPTY)


def test_incompatibility(ab2, ab3):
    one, two = ab2.letter("1"), ab2.letter("21")
    assert all(ab2.incompatible(a, b) for a in (one, two) for b in (one, two))
    pairs = [(str(a), str(b)) for a in ab3 for b in ab3 if not ab3.incompatible(a, b)]
    assert pairs == [("1", "1")]


def test_greedy_matches_permutation_containment(ab3):
    words = list(ab3.words_up_to(6))
    for w in words:
        for v in words:
            assert ab3.leq(w, v) == contains(w.perm(), v.perm()), (w, v)


def test_series_dp_matches_enumeration_and_oracle(ab2, ab3):
    for alphabet in (ab2, ab3):
        for w in alphabet.words_up_to(4):
            i_dp = series_I(alphabet, w, 9)
            assert i_dp == series_I(alphabet, w, 9, method="enumerate")
            assert list(i_dp) == containment_series(alphabet, w, 9)
            star = series_I_star(alphabet, w, 9)
            assert star == series_I_star(alphabet, w, 9, method="enumerate")
            assert list(star) == containment_series(alphabet, w, 9, minimal=True)


def test_series_errors(ab2):
    with pytest.raises(ValueError):
        series_I(ab2, W(ab2, "21.21"), 3)
    with pytest.raises(ValueError):
        series_I(ab2, W(ab2, "1"), 3, method="magic")


def test_series_of_empty_word(ab2):
    assert list(series_I(ab2, EMPTY, 5)) == [1, 1, 2, 3, 5, 8]
    assert list(series_I_star(ab2, EMPTY, 5)) == [1, 0, 0, 0, 0, 0]


def test_quotient_identity_small(ab2, ab3):
    for alphabet in (ab2, ab3):
        for w in alphabet.words_up_to(4):
            assert check_quotient_identity(alphabet, w, 10)
            assert check_quotient_identity(alphabet, w, 10, method="dp")


def test_factorisation_identity(ab3):
    w = W(ab3, "21.1.231.1")
    assert is_incompatible_factorisation(ab3, w, [1, 2, 3])
    assert check_factorisation_identity(ab3, w, [1, 3], 11)
    assert not is_incompatible_factorisation(ab3, W(ab3, "1.1"), [1])
    with pytest.raises(ValueError):
        check_factorisation_identity(ab3, W(ab3, "1.1"), [1], 6)
    with pytest.raises(ValueError):
        split_at(w, [2, 2])


def test_shuffle_orbit(ab2, ab3):
    parts = split_at(W(ab2, "21.1.1"), [1, 2])
    assert {str(v) for v in shuffle_orbit(ab2, parts)} == {"21.1.1", "1.21.1", "1.1.21"}
    orbit = shuffle_orbit(ab3, [W(ab3, "1.1"), W(ab3, "21")])
    assert {str(v) for v in orbit} == {"1.1.21", "21.1.1"}
    with pytest.raises(ValueError):
        shuffle_orbit(ab3, [W(ab3, "1"), W(ab3, "1")])


def test_count_disjoint_blocks(ab2):
    assert count_disjoint_blocks(W(ab2, "1.1.1.1"), W(ab2, "1.1")) == 2
    assert count_disjoint_blocks(W(ab2, "1.21.1.21"), W(ab2, "21.1")) == 1
    assert count_disjoint_blocks(W(ab2, "1"), W(ab2, "1.1")) == 0
    with pytest.raises(ValueError):
        count_disjoint_blocks(W(ab2, "1"), EMPTY)


def test_embedding_order_axioms(ab2, ab3):
    assert validate_embedding_order(ab2, 6).ok
    assert validate_embedding_order(ab3, 5).ok
    abstract = Alphabet.abstract(["a", ("b", 2)])
    assert validate_embedding_order(abstract, 5).ok


def test_embedding_order_negative_control(ab2):
    """A letter oracle that lets everything embed violates strict weight decrease."""
    rep = validate_embedding_order(ab2, 3, letter_leq=lambda piece, b: True, check_transitivity=False)
    assert not rep.ok
    assert "fails" in str(rep)


def test_subword_mode():
    a = Alphabet.abstract(["a", "b", "c"])
    assert a.leq(W(a, "a.c"), W(a, "b.a.b.c"))
    assert not a.leq(W(a, "c.a"), W(a, "a.c"))
    assert a.incompatible(a.letter("a"), a.letter("a"))
    with pytest.raises(TypeError):
        a.word_of("1")


words2 = st.lists(st.sampled_from(["1", "21"]), max_size=6).map(lambda xs: ".".join(xs))


@given(words2, words2, words2)
@settings(max_examples=200, deadline=None)
def test_order_properties(x, y, z):
    ab = Alphabet.from_permutations(["1", "21"])
    u, v, w = W(ab, x), W(ab, y), W(ab, z)
    assert ab.leq(u, u + v) and ab.leq(v, u + v)
    if ab.leq(u, v) and ab.leq(v, w):
        assert ab.leq(u, w)
    if ab.leq(u, v) and ab.leq(v, u):
        assert u == v
    assert ab.leq(u, v) == contains(u.perm(), v.perm())
