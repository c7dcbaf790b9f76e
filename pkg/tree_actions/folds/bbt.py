'''
Bounded backtracking of graph morphisms and the collapse counting check.
'''
import random
from fractions import Fraction
from typing import NamedTuple, Optional

from tree_actions.errors import PreconditionError
from tree_actions.folds.fold_sequence import FoldDecomposer
from tree_actions.folds.graph_cover import GraphCover
from tree_actions.folds.marked_graph import tighten
from tree_actions.folds.morphism import GraphMorphism, lipschitz_constant
from tree_actions.free_group import random_word
from tree_actions.models.reports import CheckReport
from tree_actions.trees.base_tree import BASE, Vertex

COLLAPSE_COUNTING = 'collapse_counting'
BBT_BOUND = 'bbt_bound'
FOLD_WITNESS = 'fold_witness'


class BBTMeasurement(NamedTuple):
    '''
    Largest backtracking found, the (x, y, z) source cover paths attaining
    it and the number of (x, y) pairs measured.
    '''
    value: Fraction
    witness: Optional[tuple]
    pairs: int


def bbt_bound(f: GraphMorphism, stabilizer_bound=1) -> Fraction:
    '''
    2 K Lip(f) vol(S), K bounding edge stabilizers (1 for free actions).
    '''
    return 2 * stabilizer_bound * lipschitz_constant(f) * f.source.volume


def random_tight_path(graph, rng, max_length):
    '''
    A random non-backtracking path from base with at most max_length darts.
    '''
    path = []
    end = graph.base
    for _ in range(rng.randint(0, max_length)):
        options = [d for d in graph.darts_at(end)
                   if not path or d != -path[-1]]
        if not options:
            break
        dart = rng.choice(options)
        path.append(dart)
        end = graph.terminus(dart)
    return tuple(path)


def turn_witnesses(f: GraphMorphism):
    '''
    Pairs of paths from base ending with two darts at one vertex whose
    images start with the same target dart.
    '''
    paths = f.source.spanning_tree_paths()
    pairs = []
    for v in sorted(f.source.vertices):
        seen = {}
        for dart in f.source.darts_at(v):
            image = f.image_of_dart(dart)
            if not image:
                continue
            for other in seen.get(image[0], []):
                pairs.append((tighten(paths[v] + (other,)),
                              tighten(paths[v] + (dart,))))
            seen.setdefault(image[0], []).append(dart)
    return pairs


def measure_bbt(f: GraphMorphism, samples=1000, length_budget=6,
                seed=0) -> BBTMeasurement:
    '''
    Empirical bounded backtracking of f.

    The source is first subdivided so that every edge runs along a single
    target edge; d(f(z), [f(x), f(y)]) is then convex on each edge of
    [x, y] and its maximum over [x, y] is attained at a vertex. Every vertex
    z of [x, y] is measured exactly with the tree identity
    d(fz, [fx, fy]) = (d(fz, fx) + d(fz, fy) - d(fx, fy)) / 2.

    Raises
    ------
    PreconditionError
        If samples is not positive
    '''
    if samples < 1:
        raise PreconditionError("bbt_empirical needs at least one sample")

    fine = FoldDecomposer().subdivide(f)
    source = GraphCover(fine.source)
    target = GraphCover(fine.target)
    rng = random.Random(seed)

    def image(v):
        return Vertex(fine.image_path(v.rep), BASE)

    best, witness, pairs = Fraction(0), None, 0

    candidates = turn_witnesses(fine)
    candidates += [(random_tight_path(fine.source, rng, length_budget),
                    random_tight_path(fine.source, rng, length_budget))
                   for _ in range(samples)]

    for x_path, y_path in candidates:
        x, y = source.vertex(x_path), source.vertex(y_path)
        fx, fy = image(x), image(y)
        spread = target.distance(fx, fy)
        for z in source.geodesic(x, y):
            fz = image(z)
            value = (target.distance(fz, fx) + target.distance(fz, fy) -
                     spread) / 2
            if value > best:
                best, witness = value, (x.rep, y.rep, z.rep)
        pairs += 1

    return BBTMeasurement(Fraction(best), witness, pairs)


def bbt_empirical(f: GraphMorphism, samples=1000, length_budget=6,
                  seed=0) -> Fraction:
    return measure_bbt(f, samples, length_budget, seed).value


def _collapsed_edges(f):
    return [k for k, image in f.edge_map.items() if not image]


def collapse_counting_check(f: GraphMorphism, g, h) -> CheckReport:
    '''
    Fundamental domains of Axis(g) inside Axis(h) before (n_S) and after
    (n_T) a collapse satisfy n_S <= n_T <= n_S + 2.

    Raises
    ------
    PreconditionError
        If f does not contract exactly one edge
    '''
    if len(_collapsed_edges(f)) != 1:
        raise PreconditionError("f must contract exactly one edge")
    inputs = {'model': GraphCover.kind, 'g': g, 'h': h,
              'collapsed_edge': _collapsed_edges(f)[0]}
    source = GraphCover(f.source)
    target = GraphCover(f.target)

    if g.is_identity or h.is_identity:
        return CheckReport.skipped(COLLAPSE_COUNTING, inputs,
                                   "g and h must be nontrivial")
    if target.translation_length(g) == 0:
        return CheckReport.skipped(COLLAPSE_COUNTING, inputs,
                                   "g is elliptic after the collapse")

    n_source = source.count_fundamental_domains(g, h)
    n_target = target.count_fundamental_domains(g, h)
    quantities = {'n_source': n_source, 'n_target': n_target}
    if n_source is None or n_target is None:
        return CheckReport.skipped(COLLAPSE_COUNTING, inputs,
                                   "axes coincide, counts are unbounded",
                                   quantities)
    return CheckReport.decide(
        COLLAPSE_COUNTING, inputs,
        n_source <= n_target <= n_source + 2, quantities,
        reason="fundamental domain counts violate n_S <= n_T <= n_S + 2")


def collapse_counting_sweep(f: GraphMorphism, samples, seed,
                            length_budget=8) -> list:
    '''
    collapse_counting_check on random nontrivial pairs (g, h).
    '''
    rng = random.Random(seed)
    presentation = f.source.presentation
    reports = []
    for _ in range(samples):
        g = random_word(presentation, rng.randint(1, length_budget), rng)
        h = random_word(presentation, rng.randint(1, length_budget), rng)
        reports.append(collapse_counting_check(f, g, h))
    return reports


def bbt_bound_check(f: GraphMorphism, samples=1000, length_budget=6,
                    seed=0) -> CheckReport:
    '''
    The measured backtracking of f stays within 2 Lip(f) vol(S).
    '''
    measurement = measure_bbt(f, samples, length_budget, seed)
    bound = bbt_bound(f)
    inputs = {'source': f.source.to_text(), 'target': f.target.to_text(),
              'samples': samples, 'seed': seed}
    quantities = {'bbt_empirical': measurement.value, 'bbt_bound': bound,
                  'pairs': measurement.pairs}
    return CheckReport.decide(
        BBT_BOUND, inputs, measurement.value <= bound, quantities,
        witness={'paths': measurement.witness},
        reason="measured backtracking exceeds the bound")


def fold_witness_check(f: GraphMorphism, length, samples=100,
                       seed=0) -> CheckReport:
    '''
    A single fold of edges of the given length backtracks exactly length.
    '''
    measurement = measure_bbt(f, samples, seed=seed)
    inputs = {'source': f.source.to_text(), 'length': length}
    return CheckReport.decide(
        FOLD_WITNESS, inputs, measurement.value == length,
        {'bbt_empirical': measurement.value},
        witness={'paths': measurement.witness},
        reason="single fold backtracking differs from the folded length")
