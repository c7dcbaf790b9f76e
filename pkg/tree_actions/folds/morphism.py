from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from tree_actions.errors import MarkingError
from tree_actions.folds.marked_graph import MarkedGraph, reverse_path, tighten


@dataclass(frozen=True)
class GraphMorphism:
    '''
    A marking-preserving map between marked graphs.

    Every source edge is sent at constant speed along a tight dart path of
    the target, the empty path meaning the edge is sent to a vertex. The
    map lifts to an equivariant piecewise linear map between universal
    covers.
    '''
    source: MarkedGraph
    target: MarkedGraph
    vertex_map: dict
    edge_map: dict

    @classmethod
    def identity(cls, graph):
        return cls(graph, graph, {v: v for v in graph.vertices},
                   {k: (k,) for k in graph.edges})

    def image_of_dart(self, dart):
        image = self.edge_map[abs(dart)]
        return image if dart > 0 else reverse_path(image)

    def image_path(self, path):
        darts = []
        for dart in path:
            darts.extend(self.image_of_dart(dart))
        return tighten(darts)

    def image_length(self, edge_id):
        return self.target.path_length(self.edge_map[edge_id])

    def speed(self, edge_id):
        return self.image_length(edge_id) / self.source.edges[edge_id].length

    def validate(self):
        '''
        Raises
        ------
        MarkingError
            If the maps are incomplete, an edge image is not a tight path
            between the images of its endpoints, the base is not preserved
            or a marking loop is not sent onto the target loop
        '''
        self.source.validate()
        self.target.validate()
        if set(self.vertex_map) != set(self.source.vertices):
            raise MarkingError("vertex map does not cover the source")
        if set(self.edge_map) != set(self.source.edges):
            raise MarkingError("edge map does not cover the source")
        if self.vertex_map[self.source.base] != self.target.base:
            raise MarkingError("base vertex is not sent to the target base")
        for k, edge in self.source.edges.items():
            image = self.edge_map[k]
            start = self.vertex_map[edge.origin]
            if tighten(image) != tuple(image) or \
                    not self.target.is_path(image, start) or \
                    self.target.path_end(image, start) != \
                    self.vertex_map[edge.terminus]:
                raise MarkingError(f"image of edge {k} is not a tight path "
                                   "between its endpoint images")
        if len(self.source.marking) != len(self.target.marking):
            raise MarkingError("source and target ranks differ")
        for i, (loop, expected) in enumerate(zip(self.source.marking,
                                                 self.target.marking)):
            if self.image_path(loop) != tighten(expected):
                raise MarkingError(
                    f"marking loop {i} is not sent to the target loop")
        return self

    def is_isometry(self):
        images = [self.edge_map[k] for k in sorted(self.source.edges)]
        if any(len(image) != 1 for image in images):
            return False
        if len({abs(image[0]) for image in images}) != \
                len(self.target.edges) or \
                len(images) != len(self.target.edges):
            return False
        if len(set(self.vertex_map.values())) != len(self.target.vertices) \
                or len(self.vertex_map) != len(self.target.vertices):
            return False
        return all(self.source.edges[k].length == self.image_length(k)
                   for k in self.source.edges)


def lipschitz_constant(f: GraphMorphism) -> Fraction:
    '''
    Largest ratio of tightened image length to edge length; edges sent to a
    vertex contribute 0.
    '''
    return max((f.speed(k) for k in f.source.edges), default=Fraction(0))

