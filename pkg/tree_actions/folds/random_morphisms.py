'''
Random and constructed morphisms between marked graphs.

Random morphisms are grown backwards from a target graph: starting from the
identity, inverse moves (unfolding, blowing up a vertex, stretching or
merging edges) are applied to the source while the map to the target is
updated, so every output is a valid marking-preserving morphism.
'''
import random
from fractions import Fraction

from tree_actions.errors import PreconditionError
from tree_actions.folds.fold_sequence import collapse_morphism
from tree_actions.folds.marked_graph import Edge, MarkedGraph, tighten
from tree_actions.folds.morphism import GraphMorphism

LENGTH_CHOICES = (Fraction(1), Fraction(2), Fraction(1, 2), Fraction(3, 2))
STRETCH_CHOICES = (Fraction(3, 2), Fraction(2), Fraction(5, 2))
INVERSE_MOVES = ('unfold', 'blow_up', 'stretch', 'merge')


class _MorphismBuilder():
    '''
    Mutable source graph with its map to a fixed target.
    '''

    def __init__(self, target):
        self.target = target
        self.graph = target
        self.vertex_map = {v: v for v in target.vertices}
        self.edge_map = {k: (k,) for k in target.edges}

    def image_of_dart(self, dart):
        image = self.edge_map[abs(dart)]
        return image if dart > 0 else tuple(-d for d in reversed(image))

    def morphism(self):
        return GraphMorphism(self.graph, self.target, dict(self.vertex_map),
                             dict(self.edge_map))

    def _split_vertex(self, w, moved, w2, to_new, to_old, new_edge):
        '''
        Move the darts in moved from w to the new vertex w2 and reroute the
        marking loops through the connecting paths to_new (w to w2) and
        to_old (w2 to w).
        '''
        graph = self.graph
        edges = dict(graph.edges)
        for dart in moved:
            edge = edges[abs(dart)]
            if dart > 0:
                edge = edge._replace(origin=w2)
            else:
                edge = edge._replace(terminus=w2)
            edges[abs(dart)] = edge
        edges[new_edge[0]] = new_edge[1]

        def arrival(dart):
            if graph.terminus(dart) != w:
                return None
            return w2 if -dart in moved else w

        def departure(dart):
            if graph.origin(dart) != w:
                return None
            return w2 if dart in moved else w

        def connector(here, there):
            if here is None or there is None or here == there:
                return ()
            return to_new if there == w2 else to_old

        marking = []
        for loop in graph.marking:
            rerouted = []
            current = w if graph.base == w else None
            for dart in loop:
                rerouted.extend(connector(current, departure(dart)))
                rerouted.append(dart)
                current = arrival(dart)
            if graph.base == w:
                rerouted.extend(connector(current, w))
            marking.append(tighten(rerouted))

        self.graph = graph.with_edges(set(graph.vertices) | {w2}, edges,
                                      marking)
        self.vertex_map[w2] = self.vertex_map[w]

    def unfold(self, rng):
        graph = self.graph
        candidates = []
        for k in sorted(graph.edges):
            for dart in (k, -k):
                w = graph.terminus(dart)
                if graph.origin(dart) == w:
                    continue
                others = [d for d in graph.darts_at(w) if d != -dart]
                if len(others) >= 2:
                    candidates.append((dart, others))
        if not candidates:
            return False
        dart, others = rng.choice(candidates)
        moved = set(rng.sample(others, rng.randint(1, len(others) - 1)))
        w2 = max(graph.vertices) + 1
        e2 = max(graph.edges) + 1
        edge = Edge(graph.origin(dart), w2, graph.dart_length(dart))
        self._split_vertex(graph.terminus(dart), moved, w2,
                           (-dart, e2), (-e2, dart), (e2, edge))
        self.edge_map[e2] = self.image_of_dart(dart)
        return True

    def blow_up(self, rng):
        graph = self.graph
        candidates = [v for v in sorted(graph.vertices)
                      if graph.valence(v) >= 3]
        if not candidates:
            return False
        w = rng.choice(candidates)
        darts = graph.darts_at(w)
        moved = set(rng.sample(darts, rng.randint(1, len(darts) - 1)))
        w2 = max(graph.vertices) + 1
        c = max(graph.edges) + 1
        edge = Edge(w, w2, rng.choice(LENGTH_CHOICES))
        self._split_vertex(w, moved, w2, (c,), (-c,), (c, edge))
        self.edge_map[c] = ()
        return True

    def stretch(self, rng):
        k = rng.choice(sorted(self.graph.edges))
        edges = dict(self.graph.edges)
        edges[k] = edges[k]._replace(
            length=edges[k].length * rng.choice(STRETCH_CHOICES))
        self.graph = self.graph.with_edges(self.graph.vertices, edges,
                                           self.graph.marking)
        return True

    def merge(self, rng):
        graph = self.graph
        candidates = [v for v in sorted(graph.vertices)
                      if v != graph.base and graph.valence(v) == 2 and
                      len({abs(d) for d in graph.darts_at(v)}) == 2]
        if not candidates:
            return False
        v = rng.choice(candidates)
        p, q = graph.darts_at(v)
        n = max(graph.edges) + 1
        edges = {k: e for k, e in graph.edges.items()
                 if k not in (abs(p), abs(q))}
        edges[n] = Edge(graph.terminus(p), graph.terminus(q),
                        graph.dart_length(p) + graph.dart_length(q))

        marking = []
        for loop in graph.marking:
            merged = []
            for dart in loop:
                if dart in (-p, -q):
                    merged.append(n if dart == -p else -n)
                elif dart not in (p, q):
                    merged.append(dart)
            marking.append(tuple(merged))

        image = tighten(self.image_of_dart(-p) + self.image_of_dart(q))
        self.graph = graph.with_edges(set(graph.vertices) - {v}, edges,
                                      marking)
        del self.edge_map[abs(p)], self.edge_map[abs(q)]
        del self.vertex_map[v]
        self.edge_map[n] = image
        return True


def random_target(rank, rng):
    lengths = [rng.choice(LENGTH_CHOICES) for _ in range(3)]
    if rank == 2 and rng.random() < 0.5:
        return MarkedGraph.theta(lengths)
    return MarkedGraph.rose(rank, lengths[:rank] + [1] * (rank - 3))


def random_morphism(rank, rng: random.Random, max_edges=6,
                    steps=8) -> GraphMorphism:
    '''
    A random valid morphism onto a rose or theta graph of the given rank,
    with at most max_edges source edges.
    '''
    builder = _MorphismBuilder(random_target(rank, rng))
    for _ in range(steps):
        move = rng.choice(INVERSE_MOVES)
        if move in ('unfold', 'blow_up') and \
                len(builder.graph.edges) >= max_edges:
            move = 'merge'
        getattr(builder, move)(rng)
    return builder.morphism().validate()


def random_collapse_morphism(rank, rng: random.Random, max_edges=6,
                             max_attempts=50) -> GraphMorphism:
    '''
    Contract a random non-loop edge of a random marked graph.
    '''
    for _ in range(max_attempts):
        graph = random_morphism(rank, rng, max_edges).source
        edges = [k for k, e in sorted(graph.edges.items())
                 if e.origin != e.terminus]
        if edges:
            return collapse_morphism(graph, rng.choice(edges))
    raise PreconditionError("no graph with a collapsible edge was drawn")


def single_fold_morphism(length=Fraction(1)) -> GraphMorphism:
    '''
    A morphism realized by one fold of two edges of the given length.

    The source has edges e1: 0 -> 1 and the loop e2 at 0, both sent to the
    petal a, and e3: 1 -> 0 sent to b, with marking a = e2 and
    b = e2^-1 e1 e3. Its bounded backtracking is exactly length.
    '''
    length = Fraction(length)
    source = MarkedGraph(
        frozenset([0, 1]),
        {1: Edge(0, 1, length), 2: Edge(0, 0, length), 3: Edge(1, 0,
                                                              Fraction(1))},
        0, ((2,), (-2, 1, 3)))
    target = MarkedGraph.rose(2, [length, Fraction(1)])
    return GraphMorphism(source, target, {0: 0, 1: 0},
                         {1: (1,), 2: (1,), 3: (2,)}).validate()
