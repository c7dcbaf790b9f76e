import networkx as nx
import pytest

from tree_actions.automorphisms import Automorphism, inner_pool, nielsen_pool
from tree_actions.errors import PreconditionError
from tree_actions.free_group import GroupPresentation
from tree_actions.models.base import Verdict
from tree_actions.projection.family import (
    axis_key,
    build_family,
    projection,
    y_equality_check,
    y_equality_sweep
)
from tree_actions.projection.quasi_tree import (
    ARTIFACT_LIMIT,
    QuasiTreeGraph,
    build_complex,
    distance_sandwich_check,
    hyperbolicity_check,
    hyperbolicity_probe
)
from tree_actions.projection.table import (
    build_table,
    equivariance_check,
    p2_growth,
    stabilizer_intersection_probe,
    theta_formula,
    verify_axioms
)

F2 = GroupPresentation.free(2)
G = F2.word('aabb')


@pytest.fixture(scope='module')
def family():
    return build_family(G, nielsen_pool(F2, 2))


@pytest.fixture(scope='module')
def table(family):
    return build_table(family)


def test_axis_key(word):
    assert axis_key(word('abab')) == axis_key(word('BA'))
    assert axis_key(word('ab')) != axis_key(word('aB'))


def test_axis_key_in_free_products(z2z3, bass_serre):
    g = z2z3.word('s1 s2')
    shifted = z2z3.word('s2 s1')
    assert axis_key(g ** 3) == axis_key(g) == axis_key(g.inverse())
    assert axis_key(shifted) != axis_key(g)
    assert not bass_serre.same_axis(g, shifted)
    assert bass_serre.same_axis(g, g.inverse())
    with pytest.raises(PreconditionError):
        axis_key(z2z3.word('s2'))


def test_family_deduplicates(f2, word):
    g = word('aabb')
    identity = Automorphism.identity(f2)
    square = Automorphism.inner(g)
    family = build_family(g, [identity, square, Automorphism.inner(word('a'))])
    # ad_g fixes Axis(g)
    assert len(family) == 2
    assert family.dedup_classes == [[0, 1], [2]]
    assert family.class_of(1) == 0


def test_family_preconditions(f2, word):
    with pytest.raises(PreconditionError):
        build_family(word('1'), [Automorphism.identity(f2)])
    with pytest.raises(PreconditionError):
        build_family(word('ab'), [])


def test_projection_needs_distinct_classes(family):
    with pytest.raises(PreconditionError):
        projection(family, 0, 0)


def test_table(family, table):
    n = len(family)
    assert n >= 3
    frame = table.to_frame()
    assert len(frame.index) == n * (n - 1)
    assert table.p0_value() == frame.diameter.max()
    assert (frame.diameter >= 0).all()


def test_verify_axioms(family, table):
    report = verify_axioms(family, table=table)
    assert report.classes == len(family)
    assert report.theta_empirical == max(report.p0_value, report.p1_value)
    assert report.p0_holds and report.p1_holds
    assert report.to_check(family).verdict == Verdict.PASS


def test_verify_axioms_below_empirical_theta(family, table):
    report = verify_axioms(family, table=table)
    if report.theta_empirical == 0:
        pytest.skip('every projection is a point')
    lower = verify_axioms(family, theta=report.theta_empirical - 1,
                          table=table)
    assert not (lower.p0_holds and lower.p1_holds)


def test_verify_axioms_needs_three_classes(f2, word):
    family = build_family(word('aabb'), [Automorphism.identity(f2)])
    with pytest.raises(PreconditionError):
        verify_axioms(family)


def test_theta_formula():
    theta, D, estimated = theta_formula(4, 5)
    assert (theta, D) == (84, 5)
    assert not any(estimated.values())

    theta, D, estimated = theta_formula(4, 5, n_hat={12: 2})
    assert (theta, D) == (132, 8)
    assert estimated == {12: True, 17: False, 3: False}


def test_y_equality(f2, word):
    g = word('aabb')
    identity = Automorphism.identity(f2)
    assert y_equality_check(identity, Automorphism.inner(g), g).verdict == \
        Verdict.PASS
    reports = y_equality_sweep(g, nielsen_pool(f2, 1))
    assert len(reports) == 8 * 9 // 2
    assert all(r.verdict == Verdict.PASS for r in reports)


def test_equivariance(family, table):
    pool = nielsen_pool(F2, 1) + inner_pool(F2, 1)
    report = equivariance_check(family, table, pool, samples=5, pairs=4)
    assert report.verdict == Verdict.PASS
    assert report.quantities['checked'] == 20


def test_stabilizer_probe(family):
    report = stabilizer_intersection_probe(family, inner_pool(F2, 2))
    assert report.verdict == Verdict.PASS
    assert report.quantities['max_classes_stabilized'] <= 1


def test_p2_growth():
    report = p2_growth(G, [nielsen_pool(F2, 1), nielsen_pool(F2, 2)])
    if report.verdict == Verdict.SKIPPED:
        assert report.reason == "no family has 3 classes"
    else:
        classes = report.quantities['classes']
        assert classes == sorted(classes)


def test_hyperbolicity_of_trees_and_cycles():
    tree = nx.balanced_tree(2, 4)
    assert hyperbolicity_probe(tree, samples=200).delta == 0
    cycle = hyperbolicity_probe(nx.cycle_graph(8), samples=500)
    assert 0 < cycle.delta <= 2


def test_hyperbolicity_samples_the_whole_component():
    path = hyperbolicity_probe(nx.path_graph(300), samples=2000)
    assert path.delta == 0
    assert path.sampled_nodes > 64

    # An 8-cycle with legs of 100 vertices at 0, 2, 4 and 6; one point on
    # each leg has defect 2.
    legs = nx.cycle_graph(8)
    for root in (0, 2, 4, 6):
        leg = range(8 + 100 * root, 108 + 100 * root)
        nx.add_path(legs, [root, *leg])
    estimate = hyperbolicity_probe(legs, samples=2000, row_cache=16)
    assert estimate.delta == 2
    assert estimate.components == [(408, 2)]


def test_build_complex(family, table):
    theta = verify_axioms(family, table=table).theta_empirical
    K = 11 * theta + 1
    quasi_tree = build_complex(family, table, K, spaces=range(3))
    positions = len(quasi_tree.offsets)
    assert quasi_tree.graph.number_of_nodes() == 3 * positions
    assert quasi_tree.window_radius >= 8 * family.max_translation_length
    for s in range(3):
        axis_nodes = [(s, p) for p in quasi_tree.offsets]
        assert nx.is_connected(quasi_tree.graph.subgraph(axis_nodes))
    assert quasi_tree.to_dot().startswith('graph quasi_tree {')

    sandwich = distance_sandwich_check(quasi_tree, theta, samples=30)
    assert sandwich.verdict != Verdict.FAIL
    skipped = distance_sandwich_check(quasi_tree, K, samples=30)
    assert skipped.verdict == Verdict.SKIPPED
    assert hyperbolicity_check(quasi_tree, samples=200).verdict == \
        Verdict.PASS


def _path_complex(boundary, scale=1):
    '''
    One space on positions -2..2 joined by unit edges, with boundary flags
    on the given positions and axis offsets scale * position.
    '''
    graph = nx.path_graph([(0, p) for p in range(-2, 3)])
    nx.set_edge_attributes(graph, 1, 'weight')
    for node in graph:
        graph.nodes[node]['boundary'] = node[1] in boundary
    return QuasiTreeGraph(K=12, window_radius=2 * scale, graph=graph,
                          spaces=[0],
                          offsets={p: scale * p for p in range(-2, 3)})


def test_sandwich_skips_when_the_window_is_too_narrow():
    report = distance_sandwich_check(_path_complex({-1, 0, 1}), theta=1,
                                     samples=200)
    assert report.verdict == Verdict.SKIPPED
    assert report.quantities['artifact_fraction'] >= ARTIFACT_LIMIT
    assert 'window_radius' in report.reason

    clean = distance_sandwich_check(_path_complex(set()), theta=1,
                                    samples=200)
    assert clean.verdict == Verdict.PASS
    assert clean.quantities['artifact_fraction'] == 0


def test_sandwich_violation_outweighs_artifacts():
    report = distance_sandwich_check(
        _path_complex({-1, 0, 1}, scale=100), theta=1, samples=200)
    assert report.verdict == Verdict.FAIL
    assert report.witness['rho'] == 100


def test_build_complex_rejects_small_K(family, table):
    with pytest.raises(PreconditionError):
        build_complex(family, table, 0)
