import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tree_actions.errors import (
    PreconditionError,
    PresentationError,
    WordParseError
)
from tree_actions.free_group import (
    GroupPresentation,
    Letter,
    cyclic_length,
    cyclic_reduce,
    has_finite_order,
    in_elementary_closure,
    is_cyclically_reduced,
    parse_word,
    parse_words,
    random_word,
    reduce,
    root,
    words_up_to_length
)

F2 = GroupPresentation.free(2)
Z2Z3 = GroupPresentation.parse('Z2*Z3')

letters = st.lists(st.sampled_from(F2.alphabet()), max_size=12)


def test_parse_presentations():
    assert GroupPresentation.parse('F2') == GroupPresentation.free(2)
    assert GroupPresentation.parse('Z*Z') == GroupPresentation.free(2)
    assert Z2Z3.finite_orders == (2, 3)
    assert GroupPresentation.parse('F2*Z/3').free_rank == 2
    assert str(Z2Z3) == 'Z2*Z3'


def test_invalid_presentations():
    with pytest.raises(WordParseError):
        GroupPresentation.parse('Q8')
    with pytest.raises(PresentationError):
        GroupPresentation.parse('Z1')


def test_reduction(word):
    assert word('aA').is_identity
    assert str(word('abBA')) == '1'
    assert str(word('abAB')) == 'abAB'
    assert len(word('a^3B')) == 4


def test_finite_factor_letters_merge():
    w = parse_word('s2 s2', Z2Z3)
    assert str(w) == 's2^2'
    assert parse_word('s1 s1', Z2Z3).is_identity
    assert parse_word('s2^3', Z2Z3).is_identity


def test_parse_error_position(f2):
    with pytest.raises(WordParseError) as e:
        parse_word('ab?a', f2)
    assert e.value.column == 3
    assert e.value.line == 1

    with pytest.raises(WordParseError) as e:
        parse_words("ab\n# comment\nac\n", f2)
    assert e.value.line == 3
    assert e.value.column == 2


def test_unknown_finite_factor():
    with pytest.raises(WordParseError):
        parse_word('s3', Z2Z3)


def test_s_is_never_a_free_generator():
    f25 = GroupPresentation.free(25)
    assert str(parse_word('rtz', f25)) == 'rtz'
    assert parse_word('t', f25).letters == (Letter(18, 1),)
    with pytest.raises(WordParseError) as e:
        parse_word('aS', f25)
    assert e.value.column == 2


def test_cyclic_reduction(word):
    core, conjugator = cyclic_reduce(word('abaA'))
    assert str(core) == 'ab'
    core, conjugator = cyclic_reduce(word('aBbbA'))
    assert str(core) == 'b'
    assert str(conjugator) == 'a'
    assert cyclic_length(word('abAB')) == 4
    assert is_cyclically_reduced(word('abAB'))
    assert not is_cyclically_reduced(word('abA'))


def test_root(word):
    r, n = root(word('abab'))
    assert str(r) == 'ab'
    assert n == 2
    r, n = root(word('abAB'))
    assert n == 1
    with pytest.raises(PreconditionError):
        root(word('1'))


def test_root_of_conjugate(word):
    r, n = root(word('aababA'))
    assert n == 2
    assert r == word('aabA')


def test_finite_order():
    assert has_finite_order(parse_word('s1', Z2Z3))
    assert has_finite_order(parse_word('s2 s1 s2^2', Z2Z3))
    assert not has_finite_order(parse_word('s1 s2', Z2Z3))
    with pytest.raises(PreconditionError):
        root(parse_word('s1', Z2Z3))


def test_elementary_closure_free(word):
    g = word('abab')
    assert in_elementary_closure(word('ab'), g).member
    assert in_elementary_closure(word('BABA'), g).member
    assert in_elementary_closure(word('1'), g).member
    assert not in_elementary_closure(word('a'), g).member
    assert in_elementary_closure(word('a'), g).search_bound is None


def test_elementary_closure_torsion():
    g = parse_word('s1 s2', Z2Z3)
    membership = in_elementary_closure(parse_word('s1 s2 s1 s2', Z2Z3), g)
    assert membership.member
    assert membership.search_bound is not None
    assert not in_elementary_closure(parse_word('s2', Z2Z3), g).member


def test_words_up_to_length_counts(f2):
    # 1 + 4 + 12 + 36 reduced words of length at most 3 in F2
    assert sum(1 for _ in words_up_to_length(f2, 3)) == 53


def test_random_word_is_cyclically_reduced(f2):
    rng = random.Random(3)
    for length in range(1, 10):
        w = random_word(f2, length, rng, cyclically_reduced=True)
        assert len(w) == length
        assert is_cyclically_reduced(w)


@given(letters, letters)
def test_product_is_associative_with_inverse(first, second):
    u = reduce(first, F2)
    v = reduce(second, F2)
    assert (u * v) * v.inverse() == u
    assert (u * v).inverse() == v.inverse() * u.inverse()


@settings(max_examples=50)
@given(letters)
def test_cyclic_reduce_conjugates_back(raw):
    w = reduce(raw, F2)
    core, conjugator = cyclic_reduce(w)
    assert core.conjugate(conjugator) == w
    assert is_cyclically_reduced(core)


@settings(max_examples=50)
@given(letters)
def test_root_power_recovers_word(raw):
    w = reduce(raw, F2)
    if w.is_identity:
        return
    r, n = root(w)
    assert r ** n == w


def test_letters_validated(f2):
    with pytest.raises(PresentationError):
        reduce([Letter(2, 1)], f2)
    with pytest.raises(PresentationError):
        reduce([Letter(0, 2)], f2)
