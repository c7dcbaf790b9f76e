import pytest

from tree_actions.errors import PreconditionError
from tree_actions.lemmas import (
    axis_intersection_lemma_check,
    bridge_product_check,
    direction_lemma_check,
    far_projections_check,
    overlap_lemma_check,
    touching_axes,
    wpd_check
)
from tree_actions.models.base import Verdict
from tree_actions.trees.base_tree import Direction


def test_bridge_product(cayley, word):
    report = bridge_product_check(word('a'), word('baB'), cayley)
    assert report.verdict == Verdict.PASS
    assert report.quantities['bridge_length'] == 1
    assert report.quantities['translation_length_gh'] == 4


def test_bridge_product_needs_disjoint_sets(cayley, word):
    with pytest.raises(PreconditionError):
        bridge_product_check(word('a'), word('b'), cayley)


def test_bridge_product_with_torsion(bass_serre, z2z3):
    # fixed points 1.G_0 and s2.G_0 are two edges apart
    g, h = z2z3.word('s1'), z2z3.word('s2s1s2^2')
    report = bridge_product_check(g, h, bass_serre)
    assert report.verdict == Verdict.PASS
    assert report.quantities['bridge_length'] == 2


def test_far_projections(cayley, word):
    report = far_projections_check(word('a'), word('b'), word('aaabAAA'),
                                   cayley)
    assert report.verdict == Verdict.PASS
    assert report.quantities['projection_gap'] == 3


def test_far_projections_skips_close_projections(cayley, word):
    report = far_projections_check(word('a'), word('b'), word('abA'), cayley)
    assert report.verdict == Verdict.SKIPPED


def test_direction(cayley, word):
    a = cayley.vertex(word('a'))
    report = direction_lemma_check(cayley.origin,
                                   Direction(cayley.origin, a),
                                   word('a'), cayley)
    assert report.verdict == Verdict.PASS

    skipped = direction_lemma_check(cayley.origin,
                                    Direction(cayley.origin, a),
                                    word('b'), cayley)
    assert skipped.verdict == Verdict.SKIPPED


def test_direction_must_start_at_x(cayley, word):
    a = cayley.vertex(word('a'))
    with pytest.raises(PreconditionError):
        direction_lemma_check(a, Direction(cayley.origin, a), word('a'),
                              cayley)


@pytest.mark.parametrize('h, kind', [
    ('b', 'overlap'), ('aab', 'overlap'), ('baB', 'disjoint')])
def test_axis_intersection(cayley, word, h, kind):
    report = axis_intersection_lemma_check(word('a'), word(h), cayley)
    assert report.verdict == Verdict.PASS
    assert report.quantities['classification'] == kind


def test_axis_intersection_rejects_same_axis(cayley, word):
    with pytest.raises(PreconditionError):
        axis_intersection_lemma_check(word('a'), word('aa'), cayley)


def test_touching_axes(cayley, word):
    assert touching_axes(cayley, word('a'), word('b'))
    assert not touching_axes(cayley, word('a'), word('aab'))


def test_wpd(cayley, bass_serre, word, z2z3):
    report = wpd_check(word('ab'), cayley)
    assert report.verdict == Verdict.PASS
    assert report.quantities['max_segment_stabilizer'] == 1
    assert wpd_check(z2z3.word('s1s2'), bass_serre).verdict == Verdict.PASS


def test_overlap_lemma(cayley, word):
    below = overlap_lemma_check(word('a'), word('aab'), cayley)
    assert below.verdict == Verdict.SKIPPED
    assert below.quantities['threshold'] == 9

    same = overlap_lemma_check(word('ab'), word('abab'), cayley)
    assert same.verdict == Verdict.PASS
    assert same.quantities['overlap_length'] == 'unbounded'


def test_overlap_lemma_skips_elliptic(bass_serre, z2z3):
    report = overlap_lemma_check(z2z3.word('s1'), z2z3.word('s1s2'),
                                 bass_serre)
    assert report.verdict == Verdict.SKIPPED
