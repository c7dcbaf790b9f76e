import pytest

from tree_actions.errors import (
    PreconditionError,
    UnsupportedPresentationError
)
from tree_actions.free_group import cyclic_length, is_cyclically_reduced, root
from tree_actions.whitehead import (
    is_primitive,
    sample_candidate_generic,
    uses_every_letter,
    whitehead_minimize
)


@pytest.mark.parametrize('text', ['a', 'B', 'ab', 'aab', 'abA', 'abaab'])
def test_primitive_words(word, text):
    assert is_primitive(word(text))


@pytest.mark.parametrize('text', ['abAB', 'aabb', 'abab', 'aa'])
def test_non_primitive_words(word, text):
    assert not is_primitive(word(text))


def test_minimization_moves_reach_minimal(word):
    w = word('abaab')
    result = whitehead_minimize(w)
    assert len(result.minimal) == 1
    assert cyclic_length(result.composed()(w)) == 1


def test_commutator_is_minimal(word):
    result = whitehead_minimize(word('abAB'))
    assert len(result.minimal) == 4
    assert result.moves == ()


def test_sample_candidate_generic(f2):
    w = sample_candidate_generic(f2, seed=0, length_budget=10)
    assert 8 <= len(w) <= 10
    assert is_cyclically_reduced(w)
    assert uses_every_letter(w)
    assert root(w)[1] == 1
    assert not is_primitive(w)
    assert sample_candidate_generic(f2, seed=0, length_budget=10) == w


def test_sample_candidate_rejects_small_budget(f2):
    with pytest.raises(PreconditionError):
        sample_candidate_generic(f2, seed=0, length_budget=7)


def test_whitehead_needs_free_group(z2z3):
    with pytest.raises(UnsupportedPresentationError):
        is_primitive(z2z3.word('s1 s2'))
