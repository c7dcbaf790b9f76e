'''
Executable checks of the tree lemmas.

Every check recomputes the lemma's conclusion with the exact geometry of a
MetricTree and returns a CheckReport. Unmet hypotheses give a skipped report
unless they are caller errors, which raise PreconditionError.
'''
from tree_actions.errors import PreconditionError
from tree_actions.free_group import in_elementary_closure
from tree_actions.models.reports import CheckReport
from tree_actions.trees.base_tree import (
    EMPTY,
    Direction,
    Disjoint,
    EmptySubtree,
    Line,
    SameAxis,
    Segment,
    overlap_length
)

BRIDGE_PRODUCT = 'bridge_product'
FAR_PROJECTIONS = 'far_projections'
DIRECTION = 'direction'
AXIS_INTERSECTION = 'axis_intersection'
OVERLAP = 'overlap'
WPD = 'wpd'

DEFAULT_EXPONENT_BOUND = 4


def _inputs(tree, **words):
    inputs = {'model': tree.kind, 'presentation': tree.presentation}
    inputs.update(words)
    return inputs


def bridge_product_check(g, h, tree) -> CheckReport:
    '''
    gh is loxodromic and the bridge between Char(g) and Char(h) lies on
    Axis(gh), with |gh| = |g| + |h| + 2 * bridge length.

    Raises
    ------
    PreconditionError
        If the characteristic sets of g and h intersect
    '''
    inputs = _inputs(tree, g=g, h=h)
    bridge = tree.bridge_between(tree.char_set(g), tree.char_set(h))
    if bridge is None:
        raise PreconditionError(
            f"characteristic sets of '{g}' and '{h}' intersect")

    gh = g * h
    length = tree.translation_length(gh)
    expected = tree.translation_length(g) + tree.translation_length(h) + \
        2 * bridge.length
    quantities = {'translation_length_gh': length,
                  'translation_length_formula': expected,
                  'bridge_length': bridge.length}
    witness = {'bridge': [bridge.start, bridge.end]}

    if length == 0:
        return CheckReport.decide(BRIDGE_PRODUCT, inputs, False, quantities,
                                  witness, reason="gh is elliptic")

    outside = [v for v in tree.geodesic(bridge.start, bridge.end)
               if not tree.on_axis(v, gh)]
    if outside:
        witness['off_axis_vertex'] = outside[0]
        return CheckReport.decide(BRIDGE_PRODUCT, inputs, False, quantities,
                                  witness,
                                  reason="bridge leaves the axis of gh")
    return CheckReport.decide(BRIDGE_PRODUCT, inputs, length == expected,
                              quantities, witness,
                              reason="translation length of gh differs from "
                                     "|g| + |h| + 2d")


def far_projections_check(g, h, h_prime, tree) -> CheckReport:
    '''
    When the projections of Axis(h) and Axis(h') onto Axis(g) are more than
    |g| apart, Char(gh) and Axis(h') are disjoint.
    '''
    inputs = _inputs(tree, g=g, h=h, h_prime=h_prime)
    if not all(tree.is_loxodromic(x) for x in (g, h, h_prime)):
        return CheckReport.skipped(FAR_PROJECTIONS, inputs,
                                   "g, h and h' must all be loxodromic")

    axis = tree.axis(g)
    first = tree.project_set(axis, tree.char_set(h))
    second = tree.project_set(axis, tree.char_set(h_prime))
    if first is None or second is None:
        return CheckReport.skipped(FAR_PROJECTIONS, inputs,
                                   "an axis coincides with the axis of g")

    gap = tree.segment_gap(first, second)
    quantities = {'projection_gap': gap,
                  'translation_length_g': axis.translation_length}
    if gap <= axis.translation_length:
        return CheckReport.skipped(
            FAR_PROJECTIONS, inputs,
            f"projection gap {gap} does not exceed |g|", quantities)

    bridge = tree.bridge_between(tree.char_set(g * h), tree.axis(h_prime))
    witness = {}
    if bridge is not None:
        witness['bridge'] = [bridge.start, bridge.end]
        quantities['bridge_length'] = bridge.length
    return CheckReport.decide(FAR_PROJECTIONS, inputs, bridge is not None,
                              quantities, witness,
                              reason="Char(gh) meets Axis(h')")


def direction_lemma_check(x, direction: Direction, g, tree) -> CheckReport:
    '''
    If g maps the direction d at x strictly inside itself then g is
    loxodromic and [x, gx] lies on its axis.
    '''
    if direction.vertex != x:
        raise PreconditionError("direction is not based at x")
    inputs = _inputs(tree, g=g, x=x, toward=direction.toward)
    image = tree.translate_direction(g, direction)
    if not tree.strictly_contains(direction, image):
        return CheckReport.skipped(DIRECTION, inputs,
                                   "g.d is not strictly contained in d")

    length = tree.translation_length(g)
    if length == 0:
        return CheckReport.decide(DIRECTION, inputs, False,
                                  {'translation_length': 0},
                                  reason="g is elliptic")
    segment = tree.geodesic(x, tree.act(g, x))
    outside = [v for v in segment if not tree.on_axis(v, g)]
    return CheckReport.decide(
        DIRECTION, inputs, not outside,
        {'translation_length': length, 'segment_length': len(segment) - 1},
        {'off_axis_vertex': outside[0]} if outside else {},
        reason="[x, gx] leaves the axis of g")


def _same_subtree(first, second):
    if isinstance(first, Segment) and isinstance(second, Segment):
        return {first.start, first.end} == {second.start, second.end}
    if isinstance(first, Line) and isinstance(second, Line):
        return first.axis == second.axis
    return isinstance(first, EmptySubtree) and isinstance(second, EmptySubtree)


def _describe(tree, subtree):
    if isinstance(subtree, Segment):
        return [subtree.start, subtree.end]
    if isinstance(subtree, Line):
        return 'line'
    return 'empty'


def characteristic_intersection(g, h, tree, exponent_bound):
    '''
    Intersection of Char(g^n h^m) over 0 < |n|, |m| <= exponent_bound.
    '''
    exponents = [n for n in range(-exponent_bound, exponent_bound + 1)
                 if n != 0]
    intersection = None
    for n in exponents:
        for m in exponents:
            element = g ** n * h ** m
            if element.is_identity:
                continue
            subtree = tree.subtree(tree.char_set(element))
            intersection = subtree if intersection is None else \
                tree.intersect(intersection, subtree)
    return intersection


def disjoint_axes_witness(g, h, tree, exponent_bound):
    '''
    Smallest (n, m) with m = n or m = -n such that g^n h^m and g^-n h^-m
    have disjoint characteristic sets.
    '''
    for n in range(1, exponent_bound + 1):
        for m in (-n, n):
            first = tree.subtree(tree.char_set(g ** n * h ** m))
            second = tree.subtree(tree.char_set(g ** -n * h ** -m))
            if tree.intersect(first, second) == EMPTY:
                return n, m
    return None


def axis_intersection_lemma_check(g, h, tree,
                                  exponent_bound=DEFAULT_EXPONENT_BOUND
                                  ) -> CheckReport:
    '''
    The intersection of Char(g^n h^m) over nonzero exponents is empty when
    Axis(g) and Axis(h) share a nondegenerate segment and equals their
    bridge otherwise.

    Raises
    ------
    PreconditionError
        If g or h is elliptic or the two axes coincide
    '''
    inputs = _inputs(tree, g=g, h=h, exponent_bound=exponent_bound)
    tree.axis(h)
    result = tree.axis_overlap(g, h)
    if isinstance(result, SameAxis):
        raise PreconditionError(f"'{g}' and '{h}' have the same axis")

    intersection = characteristic_intersection(g, h, tree, exponent_bound)
    length = overlap_length(result)
    quantities = {'classification': result.kind, 'overlap_length': length}
    witness = {'intersection': _describe(tree, intersection)}

    if isinstance(result, Disjoint):
        expected = Segment(result.start, result.end)
        quantities['bridge_length'] = result.length
    elif length == 0:
        expected = Segment(result.segment.start_vertex,
                           result.segment.start_vertex)
        quantities['bridge_length'] = 0
    else:
        expected = EMPTY
        pair = disjoint_axes_witness(g, h, tree, exponent_bound)
        witness['exponent_pair'] = pair

    return CheckReport.decide(
        AXIS_INTERSECTION, inputs, _same_subtree(intersection, expected),
        quantities, witness,
        reason=f"intersection is {_describe(tree, intersection)}, expected "
               f"{_describe(tree, expected)}")


def wpd_check(g, tree, L=1, N=1) -> CheckReport:
    '''
    Every segment of Axis(g) of length L has a stabilizer of order at most
    N. Axes are periodic, so one fundamental domain of start points is
    enough.
    '''
    inputs = _inputs(tree, g=g, L=L, N=N)
    axis = tree.axis(g)
    worst = 1
    for p in range(axis.steps_per_period):
        q = p
        while axis.offset_at(q) - axis.offset_at(p) < L:
            q += 1
        order = tree.segment_stabilizer_order(axis.vertex_at(p),
                                              axis.vertex_at(q))
        if order is None:
            worst = None
            break
        worst = max(worst, order)
    holds = worst is not None and worst <= N
    return CheckReport.decide(WPD, inputs, holds,
                              {'max_segment_stabilizer': worst},
                              reason="a segment stabilizer is too large")


def overlap_lemma_check(g, h, tree, L=1, N=1) -> CheckReport:
    '''
    If Axis(g) and Char(h) share a segment of length at least
    (N + 2) L max(|g|, |h|) then h lies in E(g).

    Below the threshold the lemma makes no claim and the report is skipped.
    '''
    inputs = _inputs(tree, g=g, h=h, L=L, N=N)
    if not tree.is_loxodromic(g):
        return CheckReport.skipped(OVERLAP, inputs, "g is elliptic")
    wpd = wpd_check(g, tree, L, N)
    if not wpd.passed:
        return CheckReport.skipped(OVERLAP, inputs,
                                   f"g is not ({L},{N})-WPD", wpd.quantities)

    threshold = (N + 2) * L * max(tree.translation_length(g),
                                  tree.translation_length(h))
    result = tree.axis_overlap(g, h)
    length = overlap_length(result)
    quantities = {'overlap_length': 'unbounded' if length is None
                  else length,
                  'threshold': threshold,
                  'classification': result.kind}
    if length is not None and length < threshold:
        return CheckReport.skipped(OVERLAP, inputs,
                                   "overlap below threshold, no claim made",
                                   quantities)

    membership = in_elementary_closure(h, g)
    quantities['closure_search_bound'] = membership.search_bound
    return CheckReport.decide(OVERLAP, inputs, membership.member, quantities,
                              reason="h is not in E(g)")


def touching_axes(tree, g, h):
    '''
    True when Axis(g) and Char(h) meet in exactly one vertex.
    '''
    result = tree.axis_overlap(g, h)
    return not isinstance(result, (Disjoint, SameAxis)) and \
        result.length == 0
