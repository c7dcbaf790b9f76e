from __future__ import annotations

import math
import logging
from abc import ABC, abstractmethod
from collections import deque
from dataclasses import dataclass, field
from typing import Any, NamedTuple, Optional, Union

from tree_actions.errors import PreconditionError
from tree_actions.logger import Logger

# vertex_class of vertices in the base orbit (every Cayley tree vertex)
BASE = -1


class Vertex(NamedTuple):
    '''
    A vertex given by a canonical coset representative and its class.

    For Bass-Serre trees vertex_class is the factor index of the coset
    rep*G_i, or BASE for the orbit of the central vertex. Cayley trees and
    graph covers only use BASE.
    '''
    rep: Any
    vertex_class: int = BASE


@dataclass(frozen=True)
class AxisDescriptor:
    '''
    Exact description of the axis of a loxodromic element.

    The axis is the bi-infinite sequence of vertices vertex_at(p), p in Z,
    with vertex_at(p + steps_per_period) = element * vertex_at(p). The
    base vertex is vertex_at(0) and offset_at(p) is the signed distance from
    it along the axis.
    '''
    element: Any
    translation_length: Any
    conjugator: Any
    period: Any
    steps_per_period: int
    tree: MetricTree = field(compare=False, repr=False)

    def vertex_at(self, position):
        return self.tree._axis_vertex(self, position)

    def offset_at(self, position):
        return self.tree._axis_offset(self, position)

    @property
    def base_vertex(self):
        return self.vertex_at(0)

    @property
    def period_word(self):
        return self.period

    def fundamental_domain(self):
        return [self.vertex_at(p) for p in range(self.steps_per_period + 1)]


@dataclass(frozen=True)
class FixedSetDescriptor:
    '''
    Characteristic set of a nontrivial elliptic element.

    Edge stabilizers are trivial in every model, so the fixed set is the
    single vertex conjugator*G_factor.
    '''
    element: Any
    vertex: Vertex
    factor: int


CharSet = Union[AxisDescriptor, FixedSetDescriptor]


class Projection(NamedTuple):
    foot: Vertex
    distance: Any
    position: int


@dataclass(frozen=True)
class AxisSegment:
    '''
    The segment of an axis between two positions, start <= end.
    '''
    axis: AxisDescriptor
    start_offset: int
    end_offset: int

    def __post_init__(self):
        if self.start_offset > self.end_offset:
            raise PreconditionError("segment start lies after its end")

    @property
    def length(self):
        return self.axis.offset_at(self.end_offset) - \
            self.axis.offset_at(self.start_offset)

    @property
    def start_vertex(self):
        return self.axis.vertex_at(self.start_offset)

    @property
    def end_vertex(self):
        return self.axis.vertex_at(self.end_offset)

    def positions(self):
        return range(self.start_offset, self.end_offset + 1)


@dataclass(frozen=True)
class Disjoint:
    '''
    Two disjoint subtrees and the bridge joining them, start lying on the
    first one.
    '''
    start: Vertex
    end: Vertex
    length: Any
    kind: str = 'disjoint'


@dataclass(frozen=True)
class Overlap:
    '''
    A compact (possibly one-point) intersection, measured on the first axis.
    '''
    segment: AxisSegment
    kind: str = 'overlap'

    @property
    def length(self):
        return self.segment.length


@dataclass(frozen=True)
class SameAxis:
    axis: AxisDescriptor
    kind: str = 'same_axis'
    length: Optional[int] = None


OverlapResult = Union[Disjoint, Overlap, SameAxis]


def overlap_length(result: OverlapResult):
    '''
    Common length of an overlap result, None when unbounded.
    '''
    if isinstance(result, SameAxis):
        return None
    if isinstance(result, Disjoint):
        return 0
    return result.length


@dataclass(frozen=True)
class Line:
    axis: AxisDescriptor


@dataclass(frozen=True)
class Segment:
    start: Vertex
    end: Vertex


@dataclass(frozen=True)
class EmptySubtree:
    pass


EMPTY = EmptySubtree()


class Direction(NamedTuple):
    '''
    The direction at vertex containing the neighbour toward.
    '''
    vertex: Vertex
    toward: Vertex


class MetricTree(ABC):
    """
    A base class for the trees a presentation acts on.

    Subclasses describe vertices, the action, distances and axes through
    word combinatorics. All geometry (projections, overlaps, bridges,
    geodesics, subtree intersections and directions) is built here from
    those primitives, so no part of the infinite tree is ever materialized
    except for the bounded balls used by tests and DOT exports.

    Methods
    -------
    distance(u, v)
        Distance between two vertices
    act(g, v)
        Image of a vertex under a group element
    translation_length(g)
        Minimal displacement of g
    char_set(g)
        Axis or fixed set of a nontrivial element
    axis_overlap(g, h)
        Classification of Axis(g) against Char(h)
    """
    kind = None

    def __init__(self, presentation, log_level=logging.WARNING):
        self.presentation = presentation
        self._logger = Logger(logger_name=__file__,
                              log_level=log_level).get_logger()

    # Model primitives

    @property
    @abstractmethod
    def origin(self) -> Vertex:
        pass

    @abstractmethod
    def distance(self, u, v):
        pass

    @abstractmethod
    def act(self, g, v) -> Vertex:
        pass

    @abstractmethod
    def translation_length(self, g):
        pass

    @abstractmethod
    def char_set(self, g) -> CharSet:
        pass

    @abstractmethod
    def step_toward(self, u, v) -> Vertex:
        pass

    @abstractmethod
    def neighbors(self, v) -> list:
        pass

    @abstractmethod
    def _axis_vertex(self, axis, position) -> Vertex:
        pass

    def _axis_offset(self, axis, position):
        return position

    def format_vertex(self, v):
        return str(v.rep)

    def vertex_stabilizer_order(self, v):
        '''
        Order of the stabilizer of v, None when infinite.
        '''
        return 1

    def segment_stabilizer_order(self, u, v):
        # edge stabilizers are trivial in every model
        if u != v:
            return 1
        return self.vertex_stabilizer_order(u)

    # Elements

    def displacement(self, v, g):
        return self.distance(v, self.act(g, v))

    def is_loxodromic(self, g):
        return self.translation_length(g) > 0

    def axis(self, g) -> AxisDescriptor:
        char = self.char_set(g)
        if not isinstance(char, AxisDescriptor):
            raise PreconditionError(f"'{g}' is elliptic, it has no axis")
        return char

    def translate_axis(self, w, axis):
        '''
        The axis w*Axis(g), described as the axis of w g w^-1.
        '''
        return self.axis(axis.element.conjugate(w))

    def on_axis(self, v, g):
        axis = self._as_axis(g)
        return self.displacement(v, axis.element) == axis.translation_length

    def _as_axis(self, g_or_axis):
        if isinstance(g_or_axis, AxisDescriptor):
            return g_or_axis
        return self.axis(g_or_axis)

    def distance_to_axis(self, v, g_or_axis):
        axis = self._as_axis(g_or_axis)
        return _half(self.displacement(v, axis.element) -
                     axis.translation_length)

    def project_to_axis(self, v, g_or_axis) -> Projection:
        '''
        Closest-point projection of v onto an axis.

        The foot is found by minimizing the (unimodal) distance from v along
        the axis positions.
        '''
        axis = self._as_axis(g_or_axis)
        position = _argmin(lambda p: self.distance(v, axis.vertex_at(p)))
        foot = axis.vertex_at(position)
        return Projection(foot, self.distance(v, foot), position)

    def position_on_axis(self, v, axis):
        projection = self.project_to_axis(v, axis)
        if projection.distance != 0:
            raise PreconditionError(
                f"vertex {self.format_vertex(v)} is not on the axis")
        return projection.position

    # Overlaps and bridges

    def axis_overlap(self, g, h) -> OverlapResult:
        '''
        Classify Axis(g) against Char(h).

        Returns Disjoint with the bridge from Axis(g) to Char(h), Overlap
        with the maximal common segment measured on Axis(g), or SameAxis.

        Raises
        ------
        PreconditionError
            If either element is the identity or g is elliptic
        '''
        if g.is_identity or h.is_identity:
            raise PreconditionError("overlap is undefined for the identity")
        return self.overlap_with(self.axis(g), self.char_set(h))

    def overlap_with(self, axis, char) -> OverlapResult:
        if isinstance(char, FixedSetDescriptor):
            projection = self.project_to_axis(char.vertex, axis)
            if projection.distance == 0:
                return Overlap(AxisSegment(axis, projection.position,
                                           projection.position))
            return Disjoint(projection.foot, char.vertex,
                            projection.distance)
        return self.overlap_lines(axis, char)

    def overlap_lines(self, first, second) -> OverlapResult:
        '''
        Classify two axes.

        The gap of second's vertices to first is unimodal, so the closest
        point is found by descent and the common segment by galloping along
        second. A common segment reaching 4(|g|+|h|) certifies equal axes:
        with trivial edge stabilizers any overlap longer than |g|+|h| forces
        the two elements to commute.
        '''
        cap = 4 * (first.translation_length + second.translation_length)

        def gap(p):
            return self.distance_to_axis(second.vertex_at(p), first)

        start = _argmin(gap)
        closest = gap(start)
        if closest > 0:
            near = second.vertex_at(start)
            foot = self.project_to_axis(near, first).foot
            return Disjoint(foot, near, closest)

        def within_cap(p):
            return abs(second.offset_at(p) - second.offset_at(start)) < cap

        def on_first(p):
            return gap(p) == 0

        upper, upper_capped = _extent(on_first, within_cap, start, 1)
        lower, lower_capped = _extent(on_first, within_cap, start, -1)
        if upper_capped or lower_capped:
            return SameAxis(first)

        ends = sorted([
            self.position_on_axis(second.vertex_at(lower), first),
            self.position_on_axis(second.vertex_at(upper), first)
        ])
        return Overlap(AxisSegment(first, ends[0], ends[1]))

    def project_set(self, axis, char) -> Optional[AxisSegment]:
        '''
        Closest-point projection of a characteristic set onto an axis, None
        when it is the axis itself.
        '''
        result = self.overlap_with(axis, char)
        if isinstance(result, SameAxis):
            return None
        if isinstance(result, Disjoint):
            position = self.position_on_axis(result.start, axis)
            return AxisSegment(axis, position, position)
        return result.segment

    def segment_gap(self, first, second):
        '''
        Distance between two segments of the same axis.
        '''
        axis = first.axis
        gap = max(axis.offset_at(first.start_offset),
                  axis.offset_at(second.start_offset)) - \
            min(axis.offset_at(first.end_offset),
                axis.offset_at(second.end_offset))
        return max(gap, 0)

    def same_axis(self, g, h):
        if not self.is_loxodromic(g) or not self.is_loxodromic(h):
            return False
        return isinstance(self.axis_overlap(g, h), SameAxis)

    def bridge_between(self, first: CharSet, second: CharSet):
        '''
        Bridge from first to second, None when the two sets intersect.
        '''
        if isinstance(first, FixedSetDescriptor) and \
                isinstance(second, FixedSetDescriptor):
            if first.vertex == second.vertex:
                return None
            return Disjoint(first.vertex, second.vertex,
                            self.distance(first.vertex, second.vertex))
        if isinstance(first, FixedSetDescriptor):
            result = self.overlap_with(second, first)
            if isinstance(result, Disjoint):
                return Disjoint(result.end, result.start, result.length)
            return None
        result = self.overlap_with(first, second)
        return result if isinstance(result, Disjoint) else None

    def count_fundamental_domains(self, g, h) -> Optional[int]:
        '''
        Number of fundamental domains of Axis(g) inside Char(h), None when
        the two characteristic sets share the whole axis.
        '''
        result = self.axis_overlap(g, h)
        length = overlap_length(result)
        if length is None:
            return None
        return math.floor(length / self.translation_length(g))

    # Geodesics

    def geodesic(self, u, v) -> list:
        path = [u]
        while path[-1] != v:
            path.append(self.step_toward(path[-1], v))
        return path

    def in_geodesic(self, z, u, v):
        return self.distance(u, z) + self.distance(z, v) == \
            self.distance(u, v)

    def point_at(self, u, v, t):
        '''
        The vertex of [u, v] at distance t from u.
        '''
        current = u
        while self.distance(u, current) < t:
            current = self.step_toward(current, v)
        if self.distance(u, current) != t:
            raise PreconditionError(f"no vertex at distance {t} on geodesic")
        return current

    def median(self, u, v, w):
        t = _half(self.distance(u, w) + self.distance(u, v) -
                  self.distance(v, w))
        return self.point_at(u, v, t)

    # Subtrees

    def subtree(self, char: CharSet):
        if isinstance(char, AxisDescriptor):
            return Line(char)
        return Segment(char.vertex, char.vertex)

    def intersect(self, first, second):
        '''
        Intersection of two subtrees among Line, Segment and EMPTY.
        '''
        if isinstance(first, EmptySubtree) or \
                isinstance(second, EmptySubtree):
            return EMPTY
        if isinstance(first, Line) and isinstance(second, Line):
            result = self.overlap_lines(first.axis, second.axis)
            if isinstance(result, Disjoint):
                return EMPTY
            if isinstance(result, SameAxis):
                return first
            return Segment(result.segment.start_vertex,
                           result.segment.end_vertex)
        if isinstance(first, Line):
            first, second = second, first
        if isinstance(second, Line):
            u = self.project_to_axis(first.start, second.axis).foot
            v = self.project_to_axis(first.end, second.axis).foot
        else:
            u = self.median(second.start, second.end, first.start)
            v = self.median(second.start, second.end, first.end)
        if u != v:
            return Segment(u, v)
        if self.in_geodesic(u, first.start, first.end):
            return Segment(u, u)
        return EMPTY

    def subtree_length(self, subtree):
        if isinstance(subtree, Line):
            return None
        if isinstance(subtree, Segment):
            return self.distance(subtree.start, subtree.end)
        return 0

    def subtree_vertices(self, subtree):
        if isinstance(subtree, Segment):
            return self.geodesic(subtree.start, subtree.end)
        if isinstance(subtree, EmptySubtree):
            return []
        raise PreconditionError("a line has infinitely many vertices")

    # Directions

    def in_direction(self, z, direction):
        return self.distance(z, direction.toward) < \
            self.distance(z, direction.vertex)

    def translate_direction(self, g, direction):
        return Direction(self.act(g, direction.vertex),
                         self.act(g, direction.toward))

    def strictly_contains(self, outer, inner):
        '''
        True when the direction inner is a proper subset of outer.
        '''
        return self.in_direction(inner.vertex, outer) and \
            not self.in_direction(outer.vertex, inner)

    # Finite neighbourhoods

    def ball(self, center, radius):
        seen = {center: 0}
        queue = deque([center])
        while queue:
            v = queue.popleft()
            if seen[v] >= radius:
                continue
            for w in self.neighbors(v):
                if w not in seen:
                    seen[w] = seen[v] + 1
                    queue.append(w)
        return list(seen)

    def ball_to_dot(self, center, radius, name='ball'):
        '''
        DOT text of the ball of the given radius around center.
        '''
        vertices = self.ball(center, radius)
        index = {v: k for k, v in enumerate(vertices)}
        lines = [f"graph {name} {{"]
        for v, k in index.items():
            lines.append(f'  n{k} [label="{self.format_vertex(v)}"];')
        for v, k in index.items():
            for w in self.neighbors(v):
                j = index.get(w)
                if j is not None and k < j:
                    lines.append(f"  n{k} -- n{j};")
        lines.append("}")
        return '\n'.join(lines) + '\n'


def _half(value):
    # distances in unit trees are ints, graph covers use Fractions
    if isinstance(value, int):
        return value // 2
    return value / 2


def _argmin(fn, start=0):
    '''
    Minimize a unimodal function over the integers by galloping then
    bisecting in the descending direction.
    '''
    cache = {}

    def f(p):
        if p not in cache:
            cache[p] = fn(p)
        return cache[p]

    for direction in (1, -1):
        if f(start + direction) < f(start):
            break
    else:
        return start

    def descending(t):
        p = start + direction * t
        return f(p + direction) < f(p)

    low, high = 0, 1
    while descending(high):
        low, high = high, high * 2
    while high - low > 1:
        middle = (low + high) // 2
        if descending(middle):
            low = middle
        else:
            high = middle
    return start + direction * high


def _extent(predicate, allowed, start, direction):
    '''
    Last position from start in direction where predicate still holds.

    predicate holds on an interval containing start. Returns the position
    and whether the search stopped because allowed failed first.
    '''
    last, step = 0, 1
    while True:
        probe = start + direction * (last + step)
        if not allowed(probe):
            return probe, True
        if not predicate(probe):
            break
        last += step
        step *= 2
    low, high = last, last + step
    while high - low > 1:
        middle = (low + high) // 2
        probe = start + direction * middle
        if not allowed(probe):
            return probe, True
        if predicate(probe):
            low = middle
        else:
            high = middle
    return start + direction * low, False
