import pytest

from tree_actions.errors import PreconditionError, UnsupportedPresentationError
from tree_actions.free_group import GroupPresentation
from tree_actions.trees import BassSerreTree, CayleyTree, tree_for
from tree_actions.trees.base_tree import (
    EMPTY,
    Disjoint,
    FixedSetDescriptor,
    Line,
    Overlap,
    SameAxis,
    Segment,
    overlap_length
)


@pytest.mark.parametrize('text, length', [
    ('a', 1), ('abAB', 4), ('aBbbA', 1), ('abab', 4), ('baB', 1)])
def test_cayley_translation_length(cayley, word, text, length):
    assert cayley.translation_length(word(text)) == length


def test_cayley_distance_and_action(cayley, word):
    ab = cayley.vertex(word('ab'))
    assert cayley.distance(cayley.origin, ab) == 2
    assert cayley.act(word('a'), cayley.origin) == cayley.vertex(word('a'))
    assert cayley.geodesic(cayley.origin, ab) == [
        cayley.origin, cayley.vertex(word('a')), ab]


def test_cayley_axis(cayley, word):
    axis = cayley.axis(word('ab'))
    assert axis.vertex_at(0) == cayley.origin
    assert axis.vertex_at(2) == cayley.vertex(word('ab'))
    assert axis.vertex_at(-1) == cayley.vertex(word('B'))
    assert cayley.on_axis(cayley.vertex(word('a')), word('ab'))
    assert not cayley.on_axis(cayley.vertex(word('b')), word('ab'))
    assert cayley.distance_to_axis(cayley.vertex(word('b')), word('ab')) == 1


def test_axis_of_conjugate_passes_through_conjugator(cayley, word):
    axis = cayley.axis(word('baB'))
    assert axis.base_vertex == cayley.vertex(word('b'))
    assert axis.translation_length == 1


def test_overlap_classification(cayley, word):
    touching = cayley.axis_overlap(word('a'), word('b'))
    assert isinstance(touching, Overlap)
    assert touching.length == 0

    overlap = cayley.axis_overlap(word('a'), word('aab'))
    assert isinstance(overlap, Overlap)
    assert overlap.length == 2
    assert cayley.count_fundamental_domains(word('a'), word('aab')) == 2

    disjoint = cayley.axis_overlap(word('a'), word('baB'))
    assert isinstance(disjoint, Disjoint)
    assert disjoint.length == 1
    assert disjoint.start == cayley.origin
    assert disjoint.end == cayley.vertex(word('b'))
    assert overlap_length(disjoint) == 0

    same = cayley.axis_overlap(word('a'), word('aa'))
    assert isinstance(same, SameAxis)
    assert overlap_length(same) is None
    assert cayley.same_axis(word('ab'), word('BA'))


def test_overlap_of_identity_raises(cayley, word):
    with pytest.raises(PreconditionError):
        cayley.axis_overlap(word('a'), word('1'))


def test_median_and_subtrees(cayley, word):
    v = cayley.vertex
    assert cayley.median(cayley.origin, v(word('ab')), v(word('aB'))) == \
        v(word('a'))
    line = Line(cayley.axis(word('a')))
    assert cayley.intersect(line, Line(cayley.axis(word('baB')))) == EMPTY
    assert cayley.intersect(line, Segment(v(word('A')), v(word('ab')))) == \
        Segment(v(word('A')), v(word('a')))


def test_ball(cayley):
    assert len(cayley.ball(cayley.origin, 1)) == 5
    assert len(cayley.ball(cayley.origin, 2)) == 17
    dot = cayley.ball_to_dot(cayley.origin, 1)
    assert dot.startswith('graph ball {')
    assert dot.count(' -- ') == 4


def test_cayley_needs_free_group(z2z3):
    with pytest.raises(UnsupportedPresentationError):
        CayleyTree(z2z3)


def test_bass_serre_two_factors(bass_serre, z2z3):
    w = z2z3.word
    assert bass_serre.collapsed
    assert bass_serre.translation_length(w('s1')) == 0
    assert bass_serre.translation_length(w('s1s2')) == 2
    assert bass_serre.translation_length(w('s1s2s1s2^2')) == 4
    assert bass_serre.translation_length(w('s1s2s1')) == 0
    assert bass_serre.vertex_stabilizer_order(bass_serre.origin) == 2

    char = bass_serre.char_set(w('s1'))
    assert isinstance(char, FixedSetDescriptor)
    assert char.vertex == bass_serre.origin
    with pytest.raises(PreconditionError):
        bass_serre.axis(w('s1'))


def test_bass_serre_neighbours(bass_serre, z2z3):
    other = bass_serre.vertex(z2z3.identity(), 1)
    assert bass_serre.distance(bass_serre.origin, other) == 1
    assert other in bass_serre.neighbors(bass_serre.origin)
    # a vertex of G_1 = Z3 has three neighbours
    assert len(bass_serre.neighbors(other)) == 3


def test_bass_serre_axis_is_periodic(bass_serre, z2z3):
    g = z2z3.word('s1s2')
    axis = bass_serre.axis(g)
    for p in range(-3, 4):
        assert bass_serre.act(g, axis.vertex_at(p)) == \
            axis.vertex_at(p + axis.steps_per_period)
        assert bass_serre.on_axis(axis.vertex_at(p), g)


def test_star_model_doubles_lengths():
    presentation = GroupPresentation.parse('F2*Z/3')
    tree = tree_for(presentation)
    assert isinstance(tree, BassSerreTree)
    assert not tree.collapsed
    assert tree.translation_length(presentation.word('ab')) == 4
    assert tree.translation_length(presentation.word('a')) == 0


def test_tree_for_free_group(f2):
    assert isinstance(tree_for(f2), CayleyTree)


def test_project_to_axis(cayley, word):
    a = word('a')
    foot = cayley.project_to_axis(cayley.vertex(word('aab')), a)
    assert foot.foot == cayley.vertex(word('aa'))
    assert foot.distance == 1
    assert foot.position == 2
    assert cayley.distance_to_axis(cayley.vertex(word('aab')), a) == 1

    off = cayley.vertex(word('bb'))
    assert cayley.project_to_axis(off, a).foot == cayley.origin
    assert cayley.project_to_axis(off, a).distance == 2
    with pytest.raises(PreconditionError):
        cayley.position_on_axis(off, cayley.axis(a))
