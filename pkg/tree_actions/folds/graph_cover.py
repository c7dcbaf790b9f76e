import logging

from tree_actions.errors import PreconditionError
from tree_actions.folds.marked_graph import (
    MarkedGraph,
    cyclic_tighten,
    reverse_path,
    tighten
)
from tree_actions.trees.base_tree import BASE, AxisDescriptor, MetricTree, Vertex


class GraphCover(MetricTree):
    """
    The universal cover of a marked metric graph as an F_n-tree.

    A vertex of the cover is a tight dart path starting at the base lift;
    distances are lengths of tightened paths and an element acts by
    prepending its marking loop. Distances are exact Fractions.

    Parameters
    ----------
    graph: MarkedGraph
        A valid marked graph
    log_level: int
        Level of the model logger
    """
    kind = 'graph_cover'

    def __init__(self, graph: MarkedGraph, log_level=logging.WARNING):
        super().__init__(graph.presentation, log_level)
        self.graph = graph

    @property
    def origin(self):
        return Vertex((), BASE)

    def vertex(self, path):
        return Vertex(tighten(path), BASE)

    def format_vertex(self, v):
        return ' '.join(str(d) for d in v.rep) or '*'

    def distance(self, u, v):
        return self.graph.path_length(tighten(reverse_path(u.rep) + v.rep))

    def act(self, g, v):
        return Vertex(tighten(self.graph.loop_of(g) + v.rep), BASE)

    def translation_length(self, g):
        core, _ = cyclic_tighten(self.graph.loop_of(g))
        return self.graph.path_length(core)

    def char_set(self, g):
        if g.is_identity:
            raise PreconditionError("the identity has no characteristic set")
        core, conjugator = cyclic_tighten(self.graph.loop_of(g))
        return AxisDescriptor(
            element=g,
            translation_length=self.graph.path_length(core),
            conjugator=conjugator,
            period=core,
            steps_per_period=len(core),
            tree=self
        )

    def _axis_vertex(self, axis, position):
        q, r = divmod(position, axis.steps_per_period)
        period = axis.period if q >= 0 else reverse_path(axis.period)
        path = axis.conjugator + period * abs(q) + axis.period[:r]
        return Vertex(tighten(path), BASE)

    def _axis_offset(self, axis, position):
        q, r = divmod(position, axis.steps_per_period)
        return q * axis.translation_length + \
            self.graph.path_length(axis.period[:r])

    def step_toward(self, u, v):
        way = tighten(reverse_path(u.rep) + v.rep)
        if not way:
            return u
        return Vertex(tighten(u.rep + way[:1]), BASE)

    def neighbors(self, v):
        end = self.graph.path_end(v.rep)
        return [Vertex(tighten(v.rep + (dart,)), BASE)
                for dart in self.graph.darts_at(end)]
