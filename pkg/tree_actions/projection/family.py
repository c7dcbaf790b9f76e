'''
Families of axes Y_phi = Axis(phi(g)) indexed by automorphisms.

Every space of a family is a copy of Axis(g): the space of phi is read in
the coordinates pulled back by phi, so the projection of Y_psi onto Y_phi is
the closest-point projection of Axis(phi^-1 psi(g)) onto Axis(g).
'''
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from tree_actions.automorphisms import Automorphism
from tree_actions.errors import PreconditionError
from tree_actions.free_group import ReducedWord, in_elementary_closure, root
from tree_actions.logger import Logger
from tree_actions.models.reports import CheckReport
from tree_actions.trees import tree_for
from tree_actions.trees.base_tree import AxisDescriptor, AxisSegment

Y_EQUALITY = 'y_equality'


def axis_key(w: ReducedWord):
    '''
    Hashable key shared exactly by the loxodromic elements with one axis.

    Two loxodromic elements have the same axis iff they have a common root
    up to inversion, so the key is the shortlex smaller of root and its
    inverse. This holds in every supported tree: edge stabilizers of Cayley
    and Bass-Serre trees of free products are trivial, so the translations
    along one axis form an infinite cyclic group generated by the root.
    Elliptic words have no key.

    Raises
    ------
    PreconditionError
        If w is the identity or has finite order
    '''
    r, _ = root(w)
    return min(r, r.inverse(), key=ReducedWord.sort_key)


@dataclass
class ProjectionFamily:
    """
    A deduplicated family of axes Y_phi.

    Attributes
    ----------
    g: ReducedWord
        Loxodromic base element
    automorphisms: list
        The input automorphisms, in input order
    representatives: list
        (phi, Axis(phi(g))) for the first automorphism of every class
    dedup_classes: list
        Input indices of the automorphisms in every class
    tree: MetricTree
        Model the axes live in
    base_axis: AxisDescriptor
        Axis(g), the common coordinates of every space
    """
    g: ReducedWord
    automorphisms: list
    representatives: list
    dedup_classes: list
    tree: object = field(repr=False)
    base_axis: AxisDescriptor = field(repr=False)

    def __len__(self):
        return len(self.representatives)

    def representative(self, index) -> Automorphism:
        return self.representatives[index][0]

    def class_of(self, input_index):
        for k, members in enumerate(self.dedup_classes):
            if input_index in members:
                return k
        raise IndexError(f"no automorphism with input index {input_index}")

    @property
    def max_translation_length(self):
        return max(axis.translation_length
                   for _, axis in self.representatives)

    def pulled_back(self, x, y) -> ReducedWord:
        '''
        phi_y^-1 phi_x(g), whose axis is Y_x seen from Y_y.
        '''
        return self.representative(y).inverse()(self.representative(x)(self.g))

    def projection(self, x, y) -> AxisSegment:
        return projection(self, x, y)

    def translated(self, xi: Automorphism):
        '''
        The family of xi phi over the representatives, in the same order.
        '''
        return build_family(
            self.g, [xi.compose(phi) for phi, _ in self.representatives],
            self.tree)


def build_family(g: ReducedWord, automorphisms, tree=None,
                 log_level=logging.WARNING) -> ProjectionFamily:
    '''
    Group the automorphisms by the axis of phi(g).

    Raises
    ------
    PreconditionError
        If g is the identity, g or some phi(g) is elliptic or no
        automorphism is given
    '''
    logger = Logger(logger_name=__file__, log_level=log_level).get_logger()

    if g.is_identity:
        raise PreconditionError("the base element must be nontrivial")
    if not automorphisms:
        raise PreconditionError("a family needs at least one automorphism")
    tree = tree or tree_for(g.presentation)
    if not tree.is_loxodromic(g):
        raise PreconditionError(f"'{g}' is elliptic in the {tree.kind} tree")

    classes = {}
    representatives = []
    dedup_classes = []
    for i, phi in enumerate(automorphisms):
        image = phi(g)
        if not tree.is_loxodromic(image):
            raise PreconditionError(f"'{image}' = {phi}(g) is elliptic")
        key = axis_key(image)
        if key not in classes:
            classes[key] = len(representatives)
            representatives.append((phi, tree.axis(image)))
            dedup_classes.append([])
        dedup_classes[classes[key]].append(i)

    logger.info(f"built family of {len(representatives)} classes from "
                f"{len(automorphisms)} automorphisms")

    return ProjectionFamily(
        g=g,
        automorphisms=list(automorphisms),
        representatives=representatives,
        dedup_classes=dedup_classes,
        tree=tree,
        base_axis=tree.axis(g)
    )


def y_equality_check(phi_1: Automorphism, phi_2: Automorphism, g, tree=None
                     ) -> CheckReport:
    '''
    phi_1^-1 phi_2(g) lies in E(g) iff phi_1(g) and phi_2(g) have the same
    axis. Membership comes from the word algorithms, the axis comparison
    from the tree geometry.
    '''
    tree = tree or tree_for(g.presentation)
    element = phi_1.inverse().compose(phi_2)(g)
    membership = in_elementary_closure(element, g)
    same_axis = tree.same_axis(phi_1(g), phi_2(g))
    inputs = {'model': tree.kind, 'g': g, 'phi_1': phi_1, 'phi_2': phi_2}
    quantities = {
        'pulled_back': element,
        'in_elementary_closure': membership.member,
        'same_axis': same_axis
    }
    if membership.search_bound is not None:
        quantities['search_bound'] = membership.search_bound
    return CheckReport.decide(
        Y_EQUALITY, inputs, membership.member == same_axis, quantities,
        reason="E(g) membership and axis equality disagree")


def y_equality_sweep(g, automorphisms, tree=None, workers=1) -> list:
    '''
    y_equality_check on every unordered pair of the automorphisms.
    '''
    tree = tree or tree_for(g.presentation)
    pairs = [(automorphisms[i], automorphisms[j], g)
             for i in range(len(automorphisms))
             for j in range(i, len(automorphisms))]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            return list(executor.map(_y_equality_task, pairs,
                                     chunksize=256))
    return [y_equality_check(phi_1, phi_2, g, tree)
            for phi_1, phi_2, g in pairs]


def _y_equality_task(task):
    phi_1, phi_2, g = task
    return y_equality_check(phi_1, phi_2, g)


def projection(family: ProjectionFamily, x, y) -> AxisSegment:
    '''
    The projection pi_Y(X) of the space of class x onto the space of class
    y, as a segment of Axis(g).

    Raises
    ------
    PreconditionError
        If x and y are the same class
    '''
    if x == y:
        raise PreconditionError("projection onto the same class")
    char = family.tree.char_set(family.pulled_back(x, y))
    segment = family.tree.project_set(family.base_axis, char)
    if segment is None:
        raise PreconditionError(
            f"classes {x} and {y} share an axis, the family is not "
            "deduplicated")
    return segment
