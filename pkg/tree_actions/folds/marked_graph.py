from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import NamedTuple

from tree_actions.errors import MarkingError, WordParseError
from tree_actions.free_group import GroupPresentation


class Edge(NamedTuple):
    origin: int
    terminus: int
    length: Fraction


def reverse_path(path):
    return tuple(-d for d in reversed(path))


def tighten(path):
    '''
    Cancel every backtrack d, -d of a dart path.
    '''
    stack = []
    for dart in path:
        if stack and stack[-1] == -dart:
            stack.pop()
        else:
            stack.append(dart)
    return tuple(stack)


def cyclic_tighten(loop):
    '''
    Split a tight closed path into (core, conjugator) with
    loop = conjugator + core + reverse(conjugator) and core cyclically tight.
    '''
    i, j = 0, len(loop) - 1
    while j > i and loop[i] == -loop[j]:
        i += 1
        j -= 1
    return tuple(loop[i:j + 1]), tuple(loop[:i])


def stallings_basis_check(words, rank):
    '''
    True when the words, given as sequences of signed generator indices
    1..rank, generate the free group of that rank.

    The subgroup is the whole group iff its folded Stallings graph is the
    rose with one petal per generator.
    '''
    parent = {}

    def find(v):
        while parent.setdefault(v, v) != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    edges = []
    counter = 1
    find(0)
    for word in words:
        if not word:
            continue
        current = 0
        for k, letter in enumerate(word):
            following = 0 if k == len(word) - 1 else counter
            if following:
                counter += 1
            if letter > 0:
                edges.append((current, letter, following))
            else:
                edges.append((following, -letter, current))
            current = following

    changed = True
    while changed:
        changed = False
        outgoing = defaultdict(set)
        for u, label, v in edges:
            outgoing[(find(u), label, 1)].add(find(v))
            outgoing[(find(v), label, -1)].add(find(u))
        for targets in outgoing.values():
            if len(targets) > 1:
                first, *rest = targets
                for other in rest:
                    parent[find(other)] = find(first)
                changed = True

    vertices = {find(v) for u, _, v in edges} | {find(u) for u, _, _ in edges}
    labels = {label for _, label, _ in edges}
    return vertices == {find(0)} and labels == set(range(1, rank + 1))


@dataclass(frozen=True)
class MarkedGraph:
    """
    A finite connected metric graph with a marking of its fundamental group.

    Edges carry positive rational lengths and integer ids. Dart +k runs along
    edge k from origin to terminus and dart -k runs backwards. marking[i] is
    a tight closed dart path at base representing the i-th free generator.

    Attributes
    ----------
    vertices: frozenset
        Vertex ids
    edges: dict
        Edge id to Edge
    base: int
        Basepoint vertex
    marking: tuple
        One tight loop at base per free generator
    """
    vertices: frozenset
    edges: dict
    base: int
    marking: tuple
    _incidence: dict = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        incidence = defaultdict(list)
        for k in sorted(self.edges):
            edge = self.edges[k]
            incidence[edge.origin].append(k)
            incidence[edge.terminus].append(-k)
        object.__setattr__(self, '_incidence', dict(incidence))

    @classmethod
    def rose(cls, rank, lengths=None):
        '''
        The rose with rank petals at vertex 0, petal k marking generator k.
        '''
        lengths = lengths or [1] * rank
        edges = {k + 1: Edge(0, 0, Fraction(lengths[k])) for k in range(rank)}
        return cls(frozenset([0]), edges, 0,
                   tuple((k + 1,) for k in range(rank)))

    @classmethod
    def theta(cls, lengths=(1, 1, 1)):
        '''
        Two vertices joined by three edges, marking a = e1 e2^-1 and
        b = e1 e3^-1.
        '''
        edges = {k + 1: Edge(0, 1, Fraction(lengths[k])) for k in range(3)}
        return cls(frozenset([0, 1]), edges, 0, ((1, -2), (1, -3)))

    # Darts

    def origin(self, dart):
        edge = self.edges[abs(dart)]
        return edge.origin if dart > 0 else edge.terminus

    def terminus(self, dart):
        edge = self.edges[abs(dart)]
        return edge.terminus if dart > 0 else edge.origin

    def dart_length(self, dart):
        return self.edges[abs(dart)].length

    def darts_at(self, vertex):
        return self._incidence.get(vertex, [])

    def valence(self, vertex):
        return len(self.darts_at(vertex))

    def path_length(self, path):
        return sum((self.dart_length(d) for d in path), Fraction(0))

    def path_end(self, path, start=None):
        return self.terminus(path[-1]) if path else \
            (self.base if start is None else start)

    def is_path(self, path, start):
        current = start
        for dart in path:
            if abs(dart) not in self.edges or self.origin(dart) != current:
                return False
            current = self.terminus(dart)
        return True

    # Invariants

    @property
    def rank(self):
        return len(self.edges) - len(self.vertices) + 1

    @property
    def volume(self):
        return sum((e.length for e in self.edges.values()), Fraction(0))

    @property
    def presentation(self):
        return GroupPresentation.free(len(self.marking))

    def is_connected(self):
        seen = {self.base}
        queue = deque([self.base])
        while queue:
            v = queue.popleft()
            for dart in self.darts_at(v):
                w = self.terminus(dart)
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return seen == set(self.vertices)

    def spanning_tree_paths(self):
        '''
        A tight path from base to every vertex along a BFS spanning tree.
        '''
        paths = {self.base: ()}
        queue = deque([self.base])
        while queue:
            v = queue.popleft()
            for dart in self.darts_at(v):
                w = self.terminus(dart)
                if w not in paths:
                    paths[w] = paths[v] + (dart,)
                    queue.append(w)
        return paths

    def loop_generators(self, loop):
        '''
        Express a loop at base as a word in the free basis dual to the edges
        outside a spanning tree, letters being signed 1-based indices.
        '''
        paths = self.spanning_tree_paths()
        tree_edges = {abs(d) for p in paths.values() for d in p}
        index = {k: i + 1 for i, k in
                 enumerate(sorted(set(self.edges) - tree_edges))}
        return [index[abs(d)] if d > 0 else -index[abs(d)]
                for d in loop if abs(d) in index]

    def validate(self):
        '''
        Raises
        ------
        MarkingError
            If the graph is disconnected, a length is not positive, a loop is
            not a tight closed path at base or the loops are not a basis
        '''
        if self.base not in self.vertices:
            raise MarkingError(f"base vertex {self.base} is not a vertex")
        for k, edge in self.edges.items():
            if edge.length <= 0:
                raise MarkingError(f"edge {k} has nonpositive length")
            if edge.origin not in self.vertices or \
                    edge.terminus not in self.vertices:
                raise MarkingError(f"edge {k} has an unknown endpoint")
        if not self.is_connected():
            raise MarkingError("graph is not connected")
        if len(self.marking) != self.rank:
            raise MarkingError(
                f"{len(self.marking)} marking loops for a graph of rank "
                f"{self.rank}")
        for i, loop in enumerate(self.marking):
            if not self.is_path(loop, self.base) or \
                    self.path_end(loop) != self.base:
                raise MarkingError(f"marking loop {i} is not closed at base")
            if tighten(loop) != loop or not loop:
                raise MarkingError(f"marking loop {i} is not tight")
        words = [self.loop_generators(loop) for loop in self.marking]
        if not stallings_basis_check(words, self.rank):
            raise MarkingError("marking loops do not form a basis")
        return self

    # Elements

    def loop_of(self, word):
        '''
        The tight loop at base representing a word in the marking basis.
        '''
        path = []
        for letter in word.letters:
            loop = self.marking[letter.factor]
            path.extend(loop if letter.exponent > 0 else reverse_path(loop))
        return tighten(path)

    # Construction helpers

    def with_edges(self, vertices, edges, marking, base=None):
        return replace(self, vertices=frozenset(vertices), edges=dict(edges),
                       marking=tuple(tighten(loop) for loop in marking),
                       base=self.base if base is None else base,
                       _incidence=None)

    def normalized(self):
        '''
        Relabel vertices 0.. and edges 1.. in increasing order, base first.
        '''
        order = [self.base] + sorted(v for v in self.vertices
                                     if v != self.base)
        vertex_ids = {v: i for i, v in enumerate(order)}
        edge_ids = {k: i + 1 for i, k in enumerate(sorted(self.edges))}
        edges = {edge_ids[k]: Edge(vertex_ids[e.origin],
                                   vertex_ids[e.terminus], e.length)
                 for k, e in self.edges.items()}
        marking = [tuple(edge_ids[abs(d)] * (1 if d > 0 else -1)
                         for d in loop) for loop in self.marking]
        return MarkedGraph(frozenset(vertex_ids.values()), edges, 0,
                           tuple(marking))

    def to_text(self):
        graph = self.normalized()
        lines = [f"vertices {len(graph.vertices)}", f"base {graph.base}"]
        for k in sorted(graph.edges):
            edge = graph.edges[k]
            lines.append(f"edge {edge.origin} {edge.terminus} {edge.length}")
        for loop in graph.marking:
            lines.append('loop ' + ' '.join(str(d) for d in loop))
        return '\n'.join(lines) + '\n'


def parse_marked_graph(text) -> MarkedGraph:
    '''
    Parse the plain text graph format.

    Lines are "vertices N", "base v", "edge origin terminus length" with
    edges numbered 1.. in order and lengths written p/q, and "loop d1 d2 ..."
    with signed edge numbers. Blank lines and lines starting with '#' are
    ignored.
    '''
    num_vertices = None
    base = 0
    edges = {}
    marking = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        keyword, *values = line.split()
        column = raw.index(keyword) + 1
        try:
            match keyword:
                case 'vertices':
                    num_vertices = int(values[0])
                case 'base':
                    base = int(values[0])
                case 'edge':
                    origin, terminus, length = values
                    edges[len(edges) + 1] = Edge(int(origin), int(terminus),
                                                 Fraction(length))
                case 'loop':
                    marking.append(tuple(int(d) for d in values))
                case _:
                    raise WordParseError(f"unknown keyword '{keyword}'",
                                         text=raw, line=number, column=column)
        except (ValueError, IndexError, ZeroDivisionError) as e:
            if isinstance(e, WordParseError):
                raise
            raise WordParseError(f"invalid '{keyword}' line: {e}", text=raw,
                                 line=number, column=column) from e

    if num_vertices is None:
        raise WordParseError("missing 'vertices' line", text=text)
    graph = MarkedGraph(frozenset(range(num_vertices)), edges, base,
                        tuple(marking))
    for loop in graph.marking:
        for d in loop:
            if abs(d) not in edges:
                raise MarkingError(f"loop uses unknown edge {abs(d)}")
    return graph.validate()
