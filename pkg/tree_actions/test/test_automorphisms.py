import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tree_actions.automorphisms import (
    Automorphism,
    deduplicate_pool,
    inner_pool,
    nielsen_pool,
    parse_automorphism
)
from tree_actions.errors import WordParseError
from tree_actions.free_group import GroupPresentation, reduce

F2 = GroupPresentation.free(2)
POOL = nielsen_pool(F2, 2)

words = st.lists(st.sampled_from(F2.alphabet()), max_size=10).map(
    lambda letters: reduce(letters, F2))
automorphisms = st.sampled_from(POOL)


def test_right_multiplication(word):
    phi = parse_automorphism('rmul a B', word('a').presentation)
    assert phi(word('a')) == word('aB')
    assert phi(word('b')) == word('b')
    assert phi(word('ab')) == word('a')


def test_moves_apply_first_to_last(f2, word):
    phi = parse_automorphism('swap a b\nrmul a b', f2)
    # swap first: a -> b -> b, b -> a -> ab
    assert phi(word('a')) == word('b')
    assert phi(word('b')) == word('ab')


def test_dehn_twist(f2, word):
    twist = Automorphism.dehn_twist(f2, 3)
    assert twist(word('a')) == word('a')
    assert twist(word('b')) == word('AAAb')
    assert twist(word('aaab')) == word('b')


def test_inner(word):
    ad = Automorphism.inner(word('ab'))
    assert ad(word('a')) == word('abaBA')
    assert not ad.is_identity()
    assert Automorphism.inner(word('1')).is_identity()


def test_text_round_trip(f2):
    phi = parse_automorphism('invert a\nrmul b a\ninner ab', f2)
    again = parse_automorphism(phi.to_text(), f2)
    assert again.generator_images() == phi.generator_images()
    assert str(Automorphism.identity(f2)) == 'id'
    assert parse_automorphism('id', f2).is_identity()


def test_parse_errors(f2):
    with pytest.raises(WordParseError):
        parse_automorphism('twist a', f2)
    with pytest.raises(WordParseError) as e:
        parse_automorphism('invert a\nrmul a', f2)
    assert e.value.line == 2
    with pytest.raises(WordParseError):
        parse_automorphism('rmul a a', f2)


def test_nielsen_pool_sizes(f2):
    assert len(nielsen_pool(f2, 0)) == 1
    # invert a, invert b, swap, and four right multiplications
    assert len(nielsen_pool(f2, 1)) == 8
    pool = nielsen_pool(f2, 2)
    assert pool[0].is_identity()
    assert len({phi.signature() for phi in pool}) == len(pool)


def test_inner_pool(f2):
    pool = inner_pool(f2, 1)
    assert len(pool) == 5
    assert pool[0].is_identity()


def test_deduplicate_pool(f2, word):
    pool = [Automorphism.identity(f2), Automorphism.inner(word('1')),
            Automorphism.inner(word('a'))]
    assert len(deduplicate_pool(pool)) == 2


@given(automorphisms, words)
def test_inverse_undoes(phi, w):
    assert phi.inverse()(phi(w)) == w
    assert phi(phi.inverse()(w)) == w


@settings(max_examples=50)
@given(automorphisms, automorphisms, words)
def test_compose_applies_other_first(phi, psi, w):
    assert phi.compose(psi)(w) == phi(psi(w))


@given(automorphisms, words, words)
def test_automorphisms_are_homomorphisms(phi, u, v):
    assert phi(u * v) == phi(u) * phi(v)
