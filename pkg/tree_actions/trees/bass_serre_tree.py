import logging
from functools import lru_cache

from tree_actions.errors import PreconditionError, PresentationError
from tree_actions.free_group import (
    Letter,
    ReducedWord,
    cyclic_reduce_syllables
)
from tree_actions.trees.base_tree import (
    BASE,
    AxisDescriptor,
    FixedSetDescriptor,
    MetricTree,
    Vertex
)

DEFAULT_Z_NEIGHBOR_CAP = 2


@lru_cache(maxsize=4096)
def _syllable_ends(core):
    '''
    Letter counts of the syllable prefixes of core and the factor of each
    syllable.
    '''
    ends, factors, total = [0], [], 0
    for factor, letters in core.syllables():
        total += len(letters)
        ends.append(total)
        factors.append(factor)
    return tuple(ends), tuple(factors)


class BassSerreTree(MetricTree):
    """
    The Bass-Serre tree of a free product G_0 * ... * G_{k-1}.

    With two factors the standard tree is used: vertices are the cosets
    w*G_0 and w*G_1, edges join cosets sharing an element and a syllable
    counts one unit. With three or more factors the star-of-groups tree is
    used: a central vertex class v0 with trivial stabilizer joined to
    w*G_i for each i, so a syllable counts two units. Vertex stabilizers are
    conjugates of the factors, edge stabilizers are trivial.

    Vertices are Vertex(rep, i) with rep the canonical representative (no
    trailing syllable of factor i) or Vertex(w, BASE) for w*v0.

    Parameters
    ----------
    presentation: GroupPresentation
        A free product of at least two factors
    z_neighbor_cap: int
        Largest |n| of a^n used when listing neighbours across a copy of Z
    log_level: int
        Level of the model logger
    """
    kind = 'bass_serre'

    def __init__(self, presentation, z_neighbor_cap=DEFAULT_Z_NEIGHBOR_CAP,
                 log_level=logging.WARNING):
        if presentation.num_factors < 2:
            raise PresentationError(
                "the Bass-Serre tree needs at least two factors, got "
                f"{presentation}")
        super().__init__(presentation, log_level)
        self.collapsed = presentation.num_factors == 2
        self.z_neighbor_cap = z_neighbor_cap

    @property
    def origin(self):
        if self.collapsed:
            return Vertex(self.presentation.identity(), 0)
        return Vertex(self.presentation.identity(), BASE)

    # Canonical representatives

    def _canonical(self, rep, factor):
        if rep.letters and rep.letters[-1].factor == factor:
            tail = rep.syllables()[-1][1]
            return rep[:len(rep) - len(tail)]
        return rep

    def vertex(self, rep, vertex_class):
        if vertex_class == BASE:
            if self.collapsed:
                raise PreconditionError(
                    "the two-factor tree has no central vertices")
            return Vertex(rep, BASE)
        return Vertex(self._canonical(rep, vertex_class), vertex_class)

    def format_vertex(self, v):
        if v.vertex_class == BASE:
            return f"{v.rep}.v0"
        label = self.presentation.format_letter(Letter(v.vertex_class, 1))
        return f"{v.rep}.G[{label}]"

    def vertex_stabilizer_order(self, v):
        if v.vertex_class == BASE:
            return 1
        m = self.presentation.order(v.vertex_class)
        return m if m else None

    # Distances

    def _depth(self, v):
        # star-model distance from the central vertex 1*v0
        syllables = v.rep.syllable_length()
        return 2 * syllables if v.vertex_class == BASE else 2 * syllables + 1

    def _from_factor(self, factor, v):
        # star-model distance from 1*G_factor
        if v.vertex_class == factor and v.rep.is_identity:
            return 0
        if v.rep.letters and v.rep.letters[0].factor == factor:
            return self._depth(v) - 1
        return self._depth(v) + 1

    def distance(self, u, v):
        moved = self.act(u.rep.inverse(), v)
        if u.vertex_class == BASE:
            star = self._depth(moved)
        else:
            star = self._from_factor(u.vertex_class, moved)
        return star // 2 if self.collapsed else star

    def act(self, g, v):
        return self.vertex(g * v.rep, v.vertex_class)

    # Elements

    def _unit(self):
        return 1 if self.collapsed else 2

    def translation_length(self, g):
        core, _ = cyclic_reduce_syllables(g)
        syllables = core.syllable_length()
        if syllables < 2:
            return 0
        return self._unit() * syllables

    def char_set(self, g):
        if g.is_identity:
            raise PreconditionError("the identity has no characteristic set")
        core, conjugator = cyclic_reduce_syllables(g)
        syllables = core.syllable_length()
        if syllables < 2:
            factor = core.letters[0].factor
            return FixedSetDescriptor(
                element=g,
                vertex=self.vertex(conjugator, factor),
                factor=factor
            )
        steps = self._unit() * syllables
        return AxisDescriptor(
            element=g,
            translation_length=steps,
            conjugator=conjugator,
            period=core,
            steps_per_period=steps,
            tree=self
        )

    def _axis_vertex(self, axis, position):
        q, r = divmod(position, axis.steps_per_period)
        ends, factors = _syllable_ends(axis.period)
        start = axis.conjugator * axis.period ** q
        if self.collapsed:
            return self.vertex(start * axis.period[:ends[r]], factors[r])
        j, odd = divmod(r, 2)
        rep = start * axis.period[:ends[j]]
        if odd:
            return self.vertex(rep, factors[j])
        return Vertex(rep, BASE)

    # Geodesics

    def _step_from_origin_of(self, vertex_class, target):
        '''
        First step from 1*G_class (or 1*v0) toward target.
        '''
        first = target.rep.syllables()[0] if target.rep.letters else None
        identity = self.presentation.identity()
        if vertex_class == BASE:
            if first is None:
                return target
            return Vertex(identity, first[0])
        if first is not None and first[0] == vertex_class:
            x = ReducedWord(self.presentation, first[1])
            if self.collapsed:
                return self.vertex(x, 1 - vertex_class)
            return Vertex(x, BASE)
        if self.collapsed:
            return Vertex(identity, 1 - vertex_class)
        return Vertex(identity, BASE)

    def step_toward(self, u, v):
        if u == v:
            return u
        moved = self.act(u.rep.inverse(), v)
        step = self._step_from_origin_of(u.vertex_class, moved)
        return self.act(u.rep, step)

    def factor_elements(self, factor):
        '''
        Nontrivial elements of G_factor listed for neighbourhoods, copies of
        Z truncated to |n| <= z_neighbor_cap.
        '''
        m = self.presentation.order(factor)
        if m:
            return [ReducedWord(self.presentation, (Letter(factor, e),))
                    for e in range(1, m)]
        generator = ReducedWord(self.presentation, (Letter(factor, 1),))
        return [generator ** n
                for n in range(-self.z_neighbor_cap, self.z_neighbor_cap + 1)
                if n != 0]

    def neighbors(self, v):
        identity = self.presentation.identity()
        if v.vertex_class == BASE:
            return [self.vertex(v.rep, i)
                    for i in range(self.presentation.num_factors)]
        elements = [identity] + self.factor_elements(v.vertex_class)
        if self.collapsed:
            other = 1 - v.vertex_class
            return [self.vertex(v.rep * x, other) for x in elements]
        return [Vertex(v.rep * x, BASE) for x in elements]
