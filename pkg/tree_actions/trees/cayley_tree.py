import logging

from tree_actions.errors import PreconditionError, UnsupportedPresentationError
from tree_actions.free_group import ReducedWord, cyclic_reduce
from tree_actions.trees.base_tree import (
    BASE,
    AxisDescriptor,
    MetricTree,
    Vertex
)


class CayleyTree(MetricTree):
    """
    The Cayley tree of a free group with respect to its free basis.

    Vertices are group elements (as Vertex(word)), edges join w and w*x for
    every letter x, the group acts by left multiplication and
    d(u, v) = |u^-1 v|.

    Parameters
    ----------
    presentation: GroupPresentation
        A free group, finite factors are rejected
    log_level: int
        Level of the model logger
    """
    kind = 'cayley'

    def __init__(self, presentation, log_level=logging.WARNING):
        if not presentation.is_free:
            raise UnsupportedPresentationError(
                f"the Cayley tree model needs a free group, got {presentation}")
        super().__init__(presentation, log_level)
        self._letters = [ReducedWord(presentation, (x,))
                         for x in presentation.alphabet()]

    @property
    def origin(self):
        return Vertex(self.presentation.identity(), BASE)

    def vertex(self, word):
        return Vertex(word, BASE)

    def distance(self, u, v):
        return len(u.rep.inverse() * v.rep)

    def act(self, g, v):
        return Vertex(g * v.rep, BASE)

    def translation_length(self, g):
        return len(cyclic_reduce(g)[0])

    def char_set(self, g):
        if g.is_identity:
            raise PreconditionError("the identity has no characteristic set")
        core, conjugator = cyclic_reduce(g)
        return AxisDescriptor(
            element=g,
            translation_length=len(core),
            conjugator=conjugator,
            period=core,
            steps_per_period=len(core),
            tree=self
        )

    def _axis_vertex(self, axis, position):
        q, r = divmod(position, axis.steps_per_period)
        return Vertex(axis.conjugator * axis.period ** q * axis.period[:r],
                      BASE)

    def step_toward(self, u, v):
        w = u.rep.inverse() * v.rep
        if w.is_identity:
            return u
        return Vertex(u.rep * w[:1], BASE)

    def neighbors(self, v):
        return [Vertex(v.rep * x, BASE) for x in self._letters]
