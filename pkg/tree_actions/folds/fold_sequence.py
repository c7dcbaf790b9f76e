from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from tree_actions.errors import MarkingError, WordParseError
from tree_actions.folds.marked_graph import Edge, MarkedGraph, tighten
from tree_actions.folds.morphism import GraphMorphism, lipschitz_constant
from tree_actions.logger import Logger
from tree_actions.models.reports import CheckReport

FOLD_DECOMPOSITION = 'fold_decomposition'


class GraphMove(ABC):
    '''
    An elementary move turning a marked graph into another one.
    '''
    kind = None

    @abstractmethod
    def apply(self, graph: MarkedGraph) -> MarkedGraph:
        pass

    @abstractmethod
    def to_line(self) -> str:
        pass


def _merge(graph, kept, removed, edges, marking):
    edges = {k: Edge(kept if e.origin == removed else e.origin,
                     kept if e.terminus == removed else e.terminus,
                     e.length)
             for k, e in edges.items()}
    vertices = set(graph.vertices) - {removed}
    return graph.with_edges(vertices, edges, marking)


def _kept_vertex(graph, first, second):
    # the base survives every merge
    if second == graph.base:
        return second, first
    return first, second


@dataclass(frozen=True)
class Rescale(GraphMove):
    factor: Fraction
    kind = 'rescale'

    def apply(self, graph):
        edges = {k: e._replace(length=e.length * self.factor)
                 for k, e in graph.edges.items()}
        return graph.with_edges(graph.vertices, edges, graph.marking)

    def to_line(self):
        return f"rescale {self.factor}"


@dataclass(frozen=True)
class Subdivide(GraphMove):
    '''
    Split edge at distance point from its origin, the second half getting
    id new_edge and the new vertex id vertex.
    '''
    edge: int
    point: Fraction
    vertex: int
    new_edge: int
    kind = 'subdivide'

    def apply(self, graph):
        old = graph.edges[self.edge]
        if not 0 < self.point < old.length:
            raise MarkingError(f"subdivision point {self.point} outside edge "
                               f"{self.edge}")
        if self.vertex in graph.vertices or self.new_edge in graph.edges:
            raise MarkingError("subdivision ids already in use")
        edges = dict(graph.edges)
        edges[self.edge] = Edge(old.origin, self.vertex, self.point)
        edges[self.new_edge] = Edge(self.vertex, old.terminus,
                                    old.length - self.point)

        def rewrite(dart):
            if dart == self.edge:
                return (self.edge, self.new_edge)
            if dart == -self.edge:
                return (-self.new_edge, -self.edge)
            return (dart,)

        marking = [tuple(d for dart in loop for d in rewrite(dart))
                   for loop in graph.marking]
        return graph.with_edges(set(graph.vertices) | {self.vertex}, edges,
                                marking)

    def to_line(self):
        return f"subdivide {self.edge} {self.point} {self.vertex} " \
            f"{self.new_edge}"


@dataclass(frozen=True)
class Collapse(GraphMove):
    '''
    Shrink an edge to to_length, or contract it to a point when to_length
    is 0.
    '''
    edge: int
    to_length: Fraction
    kind = 'collapse'

    def merged_vertices(self, graph):
        edge = graph.edges[self.edge]
        return _kept_vertex(graph, edge.origin, edge.terminus)

    def apply(self, graph):
        edge = graph.edges[self.edge]
        if self.to_length > 0:
            if self.to_length > edge.length:
                raise MarkingError(f"collapse would lengthen edge {self.edge}")
            edges = dict(graph.edges)
            edges[self.edge] = edge._replace(length=self.to_length)
            return graph.with_edges(graph.vertices, edges, graph.marking)
        if edge.origin == edge.terminus:
            raise MarkingError(f"edge {self.edge} is a loop and cannot be "
                               "contracted")
        kept, removed = self.merged_vertices(graph)
        edges = {k: e for k, e in graph.edges.items() if k != self.edge}
        marking = [tuple(d for d in loop if abs(d) != self.edge)
                   for loop in graph.marking]
        return _merge(graph, kept, removed, edges, marking)

    def to_line(self):
        return f"collapse {self.edge} {self.to_length}"


@dataclass(frozen=True)
class Fold(GraphMove):
    '''
    Identify the edges of two darts leaving the same vertex; the edge of
    second disappears.
    '''
    first: int
    second: int
    kind = 'fold'

    def merged_vertices(self, graph):
        return _kept_vertex(graph, graph.terminus(self.first),
                            graph.terminus(self.second))

    def apply(self, graph):
        if abs(self.first) == abs(self.second):
            raise MarkingError("cannot fold an edge with itself")
        if graph.origin(self.first) != graph.origin(self.second):
            raise MarkingError(f"darts {self.first} and {self.second} do not "
                               "share an origin")
        if graph.dart_length(self.first) != graph.dart_length(self.second):
            raise MarkingError("folded edges have different lengths")
        kept, removed = self.merged_vertices(graph)
        if kept == removed:
            raise MarkingError(f"folding {self.first} and {self.second} "
                               "would kill a loop")

        def rewrite(dart):
            if dart == self.second:
                return self.first
            if dart == -self.second:
                return -self.first
            return dart

        edges = {k: e for k, e in graph.edges.items()
                 if k != abs(self.second)}
        marking = [tuple(rewrite(d) for d in loop) for loop in graph.marking]
        return _merge(graph, kept, removed, edges, marking)

    def to_line(self):
        return f"fold {self.first} {self.second}"


@dataclass(frozen=True)
class Relabel(GraphMove):
    '''
    Rename vertices and edges; edge_map sends an edge id to a signed dart
    of the renamed graph.
    '''
    vertex_map: tuple
    edge_map: tuple
    kind = 'relabel'

    def apply(self, graph):
        vertices = dict(self.vertex_map)
        darts = dict(self.edge_map)
        edges = {}
        for k, e in graph.edges.items():
            dart = darts[k]
            ends = (vertices[e.origin], vertices[e.terminus])
            if dart < 0:
                ends = ends[::-1]
            edges[abs(dart)] = Edge(ends[0], ends[1], e.length)

        def rename(d):
            return darts[abs(d)] if d > 0 else -darts[abs(d)]

        marking = [tuple(rename(d) for d in loop) for loop in graph.marking]
        return graph.with_edges(set(vertices.values()), edges, marking,
                                base=vertices[graph.base])

    def to_line(self):
        vertex_part = ' '.join(f"{a}:{b}" for a, b in self.vertex_map)
        edge_part = ' '.join(f"{a}:{b}" for a, b in self.edge_map)
        return f"relabel v {vertex_part} e {edge_part}"


@dataclass(frozen=True)
class FoldSequence:
    '''
    An ordered list of moves whose composition realizes a morphism on
    markings.
    '''
    moves: tuple = ()

    def __len__(self):
        return len(self.moves)

    def replay(self, source):
        graph = source
        for move in self.moves:
            graph = move.apply(graph)
        return graph

    def reproduces(self, f: GraphMorphism):
        '''
        True when replaying on the source gives exactly the target graph and
        its marking loops.
        '''
        final = self.replay(f.source)
        return final.marking == tuple(tighten(l) for l in f.target.marking) \
            and final.edges == f.target.edges and final.base == f.target.base

    def prefix_length(self):
        count = 0
        for move in self.moves:
            if move.kind not in ('rescale', 'subdivide'):
                break
            count += 1
        return count

    def complexity_trace(self, source):
        '''
        (edge count, volume) before the first move and after each move.
        '''
        graph = source
        trace = [(len(graph.edges), graph.volume)]
        for move in self.moves:
            graph = move.apply(graph)
            trace.append((len(graph.edges), graph.volume))
        return trace

    def is_monotone(self, source):
        trace = self.complexity_trace(source)[self.prefix_length():]
        return all(later <= earlier for earlier, later in
                   zip(trace, trace[1:]))

    def subdivided_edge_count(self, source):
        return self.complexity_trace(source)[self.prefix_length()][0]

    def counts(self):
        return dict(Counter(move.kind for move in self.moves))

    def to_text(self):
        return ''.join(move.to_line() + '\n' for move in self.moves)


def _pairs(tokens, cast):
    return tuple((int(a), cast(b)) for a, b in
                 (token.split(':') for token in tokens))


def parse_fold_sequence(text) -> FoldSequence:
    '''
    Parse a move log written by FoldSequence.to_text, one move per line.
    '''
    moves = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        keyword, *values = line.split()
        try:
            match keyword:
                case 'rescale':
                    moves.append(Rescale(Fraction(values[0])))
                case 'subdivide':
                    edge, point, vertex, new_edge = values
                    moves.append(Subdivide(int(edge), Fraction(point),
                                           int(vertex), int(new_edge)))
                case 'collapse':
                    moves.append(Collapse(int(values[0]),
                                          Fraction(values[1])))
                case 'fold':
                    moves.append(Fold(int(values[0]), int(values[1])))
                case 'relabel':
                    split = values.index('e')
                    moves.append(Relabel(_pairs(values[1:split], int),
                                         _pairs(values[split + 1:], int)))
                case _:
                    raise WordParseError(f"unknown move '{keyword}'",
                                         text=raw, line=number)
        except (ValueError, IndexError, ZeroDivisionError) as e:
            if isinstance(e, WordParseError):
                raise
            raise WordParseError(f"invalid '{keyword}' move: {e}", text=raw,
                                 line=number) from e
    return FoldSequence(tuple(moves))


class FoldDecomposer():
    """
    Factor a morphism of marked graphs into elementary moves.

    The decomposition first rescales the source so that no edge is
    stretched, subdivides every edge at the preimages of target vertices,
    shrinks or contracts edgelets onto their images, then folds pairs of
    darts with equal images until the map is an isometry, which is finally
    recorded as a relabelling.

    Methods
    -------
    decompose(f)
        Return the FoldSequence of a valid morphism
    subdivide(f)
        Return the same map with every edge sent onto at most one target edge
    """

    def __init__(self, log_level=logging.WARNING):
        self._logger = Logger(logger_name=__file__,
                              log_level=log_level).get_logger()

    def _start(self, f):
        self._graph = f.source
        self._vertex_map = dict(f.vertex_map)
        self._edge_map = dict(f.edge_map)
        self._moves = []

    def _push(self, move):
        self._graph = move.apply(self._graph)
        self._moves.append(move)
        self._logger.debug(f"applied '{move.to_line()}'")

    def _subdivide_edges(self, target):
        for k in sorted(self._graph.edges):
            image = self._edge_map[k]
            if len(image) < 2:
                continue
            scale = self._graph.edges[k].length / target.path_length(image)
            current = k
            for i, dart in enumerate(image[:-1]):
                vertex = max(self._graph.vertices) + 1
                new_edge = max(self._graph.edges) + 1
                self._push(Subdivide(current, scale * target.dart_length(dart),
                                     vertex, new_edge))
                self._edge_map[current] = (dart,)
                self._edge_map[new_edge] = image[i + 1:]
                self._vertex_map[vertex] = target.terminus(dart)
                current = new_edge

    def subdivide(self, f: GraphMorphism) -> GraphMorphism:
        f.validate()
        self._start(f)
        self._subdivide_edges(f.target)
        return GraphMorphism(self._graph, f.target, self._vertex_map,
                             self._edge_map)

    def _find_fold(self):
        for v in sorted(self._graph.vertices):
            seen = {}
            for dart in self._graph.darts_at(v):
                image = self._edge_map[abs(dart)]
                key = image[0] if dart > 0 else -image[-1]
                if key in seen and abs(seen[key]) != abs(dart):
                    return seen[key], dart
                seen[key] = dart
        return None

    def decompose(self, f: GraphMorphism) -> FoldSequence:
        '''
        Raises
        ------
        MarkingError
            If the markings of f are inconsistent or f is not a homotopy
            equivalence
        '''
        f.validate()
        target = f.target
        self._start(f)

        # Stretch the source so every edge is at least as long as its image
        lipschitz = lipschitz_constant(f)
        if lipschitz > 1:
            self._push(Rescale(lipschitz))

        self._subdivide_edges(target)

        # Shrink edgelets onto their image edge
        for k in sorted(self._graph.edges):
            image = self._edge_map[k]
            if image and self._graph.edges[k].length > \
                    target.dart_length(image[0]):
                self._push(Collapse(k, target.dart_length(image[0])))

        # Contract edgelets sent to a vertex
        for k in sorted(self._graph.edges):
            if self._edge_map[k]:
                continue
            move = Collapse(k, Fraction(0))
            _, removed = move.merged_vertices(self._graph)
            self._push(move)
            del self._edge_map[k]
            del self._vertex_map[removed]

        # Fold darts with equal images
        while (pair := self._find_fold()) is not None:
            move = Fold(*pair)
            _, removed = move.merged_vertices(self._graph)
            self._push(move)
            del self._edge_map[abs(pair[1])]
            del self._vertex_map[removed]

        final = GraphMorphism(self._graph, target, self._vertex_map,
                              self._edge_map)
        if not final.is_isometry():
            raise MarkingError("morphism is not a homotopy equivalence, "
                               "folding stopped before an isometry")

        vertex_map = tuple(sorted(self._vertex_map.items()))
        edge_map = tuple(sorted((k, image[0])
                                for k, image in self._edge_map.items()))
        if any(a != b for a, b in vertex_map) or \
                any(a != b for a, b in edge_map):
            self._push(Relabel(vertex_map, edge_map))

        sequence = FoldSequence(tuple(self._moves))
        self._logger.info(f"decomposed morphism into {len(sequence)} moves: "
                          f"{sequence.counts()}")
        return sequence


def fold_decompose(f: GraphMorphism, log_level=logging.WARNING):
    return FoldDecomposer(log_level).decompose(f)


def collapse_morphism(source: MarkedGraph, edge_id) -> GraphMorphism:
    '''
    The quotient map contracting one non-loop edge to a vertex.
    '''
    move = Collapse(edge_id, Fraction(0))
    target = move.apply(source)
    kept, removed = move.merged_vertices(source)
    vertex_map = {v: (kept if v == removed else v) for v in source.vertices}
    edge_map = {k: (() if k == edge_id else (k,)) for k in source.edges}
    return GraphMorphism(source, target, vertex_map, edge_map).validate()


def fold_decomposition_check(f: GraphMorphism,
                             log_level=logging.WARNING) -> CheckReport:
    '''
    Replaying the decomposition of f on its source gives the target and its
    marking, the complexity never grows after the subdivision prefix and
    the number of later moves stays within twice the subdivided edge count
    plus one relabelling.
    '''
    inputs = {'source': f.source.to_text(), 'target': f.target.to_text()}
    sequence = fold_decompose(f, log_level)
    edges = sequence.subdivided_edge_count(f.source)
    later_moves = len(sequence) - sequence.prefix_length()
    quantities = {
        'moves': len(sequence),
        'counts': sequence.counts(),
        'subdivided_edges': edges,
        'reproduces': sequence.reproduces(f),
        'monotone': sequence.is_monotone(f.source)
    }
    holds = quantities['reproduces'] and quantities['monotone'] and \
        later_moves <= 2 * edges + 1
    return CheckReport.decide(
        FOLD_DECOMPOSITION, inputs, holds, quantities,
        witness={'moves': sequence.to_text()},
        reason="fold sequence does not reproduce f within the move budget")
