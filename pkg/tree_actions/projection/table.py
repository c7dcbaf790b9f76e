'''
Projection tables of a family and the projection axioms.

All distances are measured on Axis(g) in tree length units. The table keeps
the offsets of every projection pi_Y(X) in two N x N arrays, so that the
distances d_Y(X, Z) over all triples are computed with numpy one space Y at
a time.
'''
import logging
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from pandas import DataFrame

from tree_actions.automorphisms import Automorphism
from tree_actions.errors import PreconditionError
from tree_actions.logger import Logger
from tree_actions.models.reports import CheckReport
from tree_actions.projection.family import (
    ProjectionFamily,
    axis_key,
    build_family,
    projection
)
from tree_actions.trees.base_tree import AxisSegment

PROJECTION_AXIOMS = 'projection_axioms'
PROJECTION_EQUIVARIANCE = 'projection_equivariance'
STABILIZER_INTERSECTION = 'stabilizer_intersection'
P2_GROWTH = 'p2_growth'

# K = (N + 2) L for (1, 1)-WPD elements
OVERLAP_CONSTANT = 3

RAW_PROJECTION_CAVEAT = (
    "distances use raw closest-point projections; the modified projections "
    "differ from them by at most 2 theta and are not computed")
ESTIMATE_CAVEAT = (
    "theta_formula is estimate-based: n(C) comes from the persistence "
    "estimator and is replaced by its lower bound C where not estimated")
FINITE_FAMILY_CAVEAT = (
    "P2 holds vacuously on a finite family; only witness-count growth "
    "across nested pools is meaningful")


def _row(family, y):
    return [projection(family, x, y) if x != y else None
            for x in range(len(family))]


def _row_task(task):
    family, y = task
    return [(s.start_offset, s.end_offset) if s is not None else None
            for s in _row(family, y)]


@dataclass
class ProjectionTable:
    '''
    Projections pi_Y(X) between every ordered pair of classes.

    starts[y, x] and ends[y, x] are the offsets on Axis(g) of the ends of
    pi_Y(X); the diagonal is unused.
    '''
    family: ProjectionFamily = field(repr=False)
    segments: dict
    starts: np.ndarray
    ends: np.ndarray

    def __len__(self):
        return len(self.family)

    def projection(self, x, y) -> AxisSegment:
        if x == y:
            raise PreconditionError("projection onto the same class")
        return self.segments[(x, y)]

    def diameter(self, x, y):
        return int(self.ends[y, x] - self.starts[y, x])

    def d(self, y, x, z):
        '''
        d_Y(X, Z), the diameter of pi_Y(X) together with pi_Y(Z).
        '''
        if y in (x, z):
            raise PreconditionError("d_Y(X, Z) needs X and Z distinct from Y")
        return int(max(self.ends[y, x], self.ends[y, z]) -
                   min(self.starts[y, x], self.starts[y, z]))

    def d_matrix(self, y):
        '''
        The matrix of d_Y(X, Z) over all X, Z; row and column y are unused.
        '''
        return np.maximum.outer(self.ends[y], self.ends[y]) - \
            np.minimum.outer(self.starts[y], self.starts[y])

    def _triple_mask(self, y):
        n = len(self)
        mask = ~np.eye(n, dtype=bool)
        mask[y, :] = False
        mask[:, y] = False
        return mask

    def p0_value(self):
        off_diagonal = ~np.eye(len(self), dtype=bool)
        return int((self.ends - self.starts)[off_diagonal].max())

    def p1_sweep(self, theta=None):
        '''
        Largest min(d_Y(X, Z), d_X(Y, Z)) over distinct triples, the triple
        attaining it and the number of triples violating P1 at theta.
        '''
        best, witness, violations = 0, None, 0
        for y in range(len(self)):
            first = self.d_matrix(y)
            # second[x, z] = d_X(Y, Z)
            second = np.maximum(self.ends[:, [y]], self.ends) - \
                np.minimum(self.starts[:, [y]], self.starts)
            smaller = np.where(self._triple_mask(y),
                               np.minimum(first, second), -1)
            x, z = np.unravel_index(np.argmax(smaller), smaller.shape)
            if smaller[x, z] > best:
                best, witness = int(smaller[x, z]), (int(y), int(x), int(z))
            if theta is not None:
                violations += int((smaller > theta).sum())
        return best, witness, violations

    def p2_counts(self, theta):
        '''
        For every pair X != Z the number of spaces U with d_U(X, Z) > theta.
        '''
        counts = np.zeros((len(self), len(self)), dtype=np.int64)
        for u in range(len(self)):
            large = (self.d_matrix(u) > theta) & self._triple_mask(u)
            counts += large
        return counts

    def largest_intermediate(self):
        '''
        max over Z of d_Z(X, Y), -1 when there is no third space.
        '''
        largest = np.full((len(self), len(self)), -1, dtype=np.int64)
        for z in range(len(self)):
            d = np.where(self._triple_mask(z), self.d_matrix(z), -1)
            largest = np.maximum(largest, d)
        return largest

    def to_frame(self) -> DataFrame:
        rows = []
        for (x, y), segment in sorted(self.segments.items()):
            rows.append([x, y, int(self.starts[y, x]), int(self.ends[y, x]),
                         int(self.ends[y, x] - self.starts[y, x])])
        return DataFrame(rows, columns=['x', 'y', 'start', 'end',
                                        'diameter'])


def build_table(family: ProjectionFamily, workers=1,
                log_level=logging.WARNING) -> ProjectionTable:
    '''
    Compute pi_Y(X) for every ordered pair of distinct classes.
    '''
    logger = Logger(logger_name=__file__, log_level=log_level).get_logger()
    n = len(family)
    axis = family.base_axis

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            rows = list(executor.map(_row_task,
                                     [(family, y) for y in range(n)]))
        segments = {(x, y): AxisSegment(axis, *rows[y][x])
                    for y in range(n) for x in range(n) if x != y}
    else:
        segments = {}
        for y in range(n):
            for x, segment in enumerate(_row(family, y)):
                if segment is not None:
                    segments[(x, y)] = segment

    starts = np.zeros((n, n), dtype=np.int64)
    ends = np.zeros((n, n), dtype=np.int64)
    for (x, y), segment in segments.items():
        starts[y, x] = axis.offset_at(segment.start_offset)
        ends[y, x] = axis.offset_at(segment.end_offset)

    logger.info(f"computed {len(segments)} projections for {n} classes")
    return ProjectionTable(family, segments, starts, ends)


@dataclass
class AxiomReport:
    '''
    Projection axioms of a family at a given theta.

    theta_empirical is the smallest theta satisfying P0 and P1 on the
    family, theta_formula the value of (2D + max(1, n(2D+1), n(K))) |g|
    with estimated n and D_empirical the largest projection diameter.
    '''
    theta: int
    theta_empirical: int
    theta_formula: int
    D_empirical: int
    D_formula: int
    p0_value: int
    p1_value: int
    p1_witness: Optional[tuple]
    p1_violations: int
    P2_counts: dict
    classes: int
    estimated_constants: dict = field(default_factory=dict)
    caveats: list = field(default_factory=list)

    @property
    def p0_holds(self):
        return self.p0_value <= self.theta

    @property
    def p1_holds(self):
        return self.p1_violations == 0

    @property
    def p2_max(self):
        return max(self.P2_counts.values(), default=0)

    def to_dict(self):
        return {
            'theta': self.theta,
            'theta_empirical': self.theta_empirical,
            'theta_formula': self.theta_formula,
            'D_empirical': self.D_empirical,
            'D_formula': self.D_formula,
            'p0_holds': self.p0_holds,
            'p1_holds': self.p1_holds,
            'p1_witness': self.p1_witness,
            'P2_counts': self.P2_counts,
            'P2_max': self.p2_max,
            'classes': self.classes,
            'estimated_constants': self.estimated_constants,
            'caveats': self.caveats
        }

    def to_check(self, family) -> CheckReport:
        return CheckReport.decide(
            PROJECTION_AXIOMS,
            {'model': family.tree.kind, 'g': family.g,
             'automorphisms': len(family.automorphisms)},
            self.p0_holds and self.p1_holds and
            self.theta_empirical <= self.theta_formula,
            self.to_dict(),
            witness={'p1_triple': self.p1_witness},
            reason="projection axioms fail at theta or theta_empirical "
                   "exceeds theta_formula")


def _persistence_constant(n_hat, c):
    '''
    n(C) from the estimate, or its lower bound C.
    '''
    value = (n_hat or {}).get(c)
    if value is not None:
        return value, True
    return max(1, math.ceil(c)), False


def theta_formula(translation_length, D_empirical, n_hat=None):
    '''
    Evaluate D = n(K |g|) |g| and theta = (2D + max(1, n(2D+1), n(K))) |g|.

    Returns (theta, D, estimated) where estimated tells for every constant
    C whether n(C) was estimated. D falls back to D_empirical when
    n(K |g|) was not estimated.
    '''
    estimated = {}
    k_length = OVERLAP_CONSTANT * translation_length
    n_k_length, estimated[k_length] = _persistence_constant(n_hat, k_length)
    if estimated[k_length]:
        D = n_k_length * translation_length
    else:
        D = D_empirical
    n_spread, estimated[2 * D + 1] = _persistence_constant(n_hat, 2 * D + 1)
    n_k, estimated[OVERLAP_CONSTANT] = _persistence_constant(
        n_hat, OVERLAP_CONSTANT)
    theta = (2 * D + max(1, n_spread, n_k)) * translation_length
    return theta, D, estimated


def verify_axioms(family: ProjectionFamily, theta=None, n_hat=None,
                  table: ProjectionTable = None, workers=1) -> AxiomReport:
    '''
    Check P0 and P1 exhaustively and count P2 witnesses.

    theta_empirical is max(P0 value, largest min(d_Y(X, Z), d_X(Y, Z))),
    the exact smallest theta for which both axioms hold. theta defaults to
    theta_empirical.

    Raises
    ------
    PreconditionError
        If the family has fewer than 3 classes
    '''
    if len(family) < 3:
        raise PreconditionError(
            f"the projection axioms need at least 3 classes, the family has "
            f"{len(family)}")
    table = table or build_table(family, workers)
    translation_length = family.base_axis.translation_length

    p0 = table.p0_value()
    p1, _, _ = table.p1_sweep()
    theta_empirical = max(p0, p1)
    theta = theta_empirical if theta is None else theta
    _, witness, violations = table.p1_sweep(theta)

    counts = table.p2_counts(theta)
    n = len(family)
    p2_counts = {f"{x},{z}": int(counts[x, z])
                 for x in range(n) for z in range(x + 1, n)
                 if counts[x, z] > 0}

    formula, D, estimated = theta_formula(translation_length, p0, n_hat)
    caveats = [RAW_PROJECTION_CAVEAT, FINITE_FAMILY_CAVEAT]
    if not all(estimated.values()):
        caveats.append(ESTIMATE_CAVEAT)

    return AxiomReport(
        theta=int(theta),
        theta_empirical=int(theta_empirical),
        theta_formula=int(formula),
        D_empirical=int(p0),
        D_formula=int(D),
        p0_value=int(p0),
        p1_value=int(p1),
        p1_witness=witness,
        p1_violations=violations,
        P2_counts=p2_counts,
        classes=n,
        estimated_constants={str(c): e for c, e in estimated.items()},
        caveats=caveats
    )


def equivariance_check(family: ProjectionFamily, table: ProjectionTable,
                       pool, samples=100, pairs=10, seed=0) -> CheckReport:
    '''
    Projections of the family translated by xi equal the projections of the
    family, for sampled xi of the pool and sampled pairs of classes.
    '''
    rng = random.Random(seed)
    inputs = {'model': family.tree.kind, 'g': family.g, 'samples': samples}
    if len(family) < 2 or not pool:
        return CheckReport.skipped(PROJECTION_EQUIVARIANCE, inputs,
                                   "needs two classes and a nonempty pool")

    checked = 0
    for _ in range(samples):
        xi = rng.choice(pool)
        translated = family.translated(xi)
        for _ in range(pairs):
            x, y = rng.sample(range(len(family)), 2)
            moved = projection(translated, x, y)
            checked += 1
            if (moved.start_offset, moved.end_offset) != \
                    (table.projection(x, y).start_offset,
                     table.projection(x, y).end_offset):
                return CheckReport.decide(
                    PROJECTION_EQUIVARIANCE, inputs, False,
                    {'checked': checked},
                    witness={'xi': xi, 'x': x, 'y': y},
                    reason="translated projection differs")
    return CheckReport.decide(PROJECTION_EQUIVARIANCE, inputs, True,
                              {'checked': checked})


def _power_of_inner(xi: Automorphism, u, bound):
    '''
    The nonzero k with xi = ad_{u^k} and |k| <= bound, or None.
    '''
    images = xi.generator_images()
    generators = xi.presentation.generators()
    for k in range(1, bound + 1):
        for power in (u ** k, u ** -k):
            if images == tuple(s.conjugate(power) for s in generators):
                return k if power == u ** k else -k
    return None


def stabilizer_intersection_probe(family: ProjectionFamily, pool,
                                  power_bound=4) -> CheckReport:
    '''
    Search the pool for automorphisms stabilizing two distinct classes.

    xi stabilizes the class of phi when xi phi(g) and phi(g) share an axis.
    No nontrivial power of ad_{phi(g)} may stabilize a second class, so
    every witness is compared with these powers; a match is a failure.
    '''
    inputs = {'model': family.tree.kind, 'g': family.g, 'pool': len(pool)}
    if len(family) < 2:
        raise PreconditionError("the probe needs at least 2 classes")

    keys = [axis_key(phi(family.g)) for phi, _ in family.representatives]
    witnesses = []
    most = 0
    for xi in pool:
        if xi.is_identity():
            continue
        stabilized = [k for k, (phi, _) in enumerate(family.representatives)
                      if axis_key(xi(phi(family.g))) == keys[k]]
        most = max(most, len(stabilized))
        if len(stabilized) < 2:
            continue
        witnesses.append({'xi': xi, 'classes': stabilized})
        for k in stabilized:
            image = family.representative(k)(family.g)
            power = _power_of_inner(xi, image, power_bound)
            if power is not None:
                return CheckReport.decide(
                    STABILIZER_INTERSECTION, inputs, False,
                    {'witnesses': len(witnesses),
                     'max_classes_stabilized': most},
                    witness={'xi': xi, 'classes': stabilized,
                             'class': k, 'power': power},
                    reason="a power of ad_phi(g) stabilizes two classes")

    return CheckReport.decide(
        STABILIZER_INTERSECTION, inputs, True,
        {'witnesses': len(witnesses), 'max_classes_stabilized': most},
        witness={'first': witnesses[0]} if witnesses else None)


def p2_growth(g, pools, tree=None, workers=1,
              log_level=logging.WARNING) -> CheckReport:
    '''
    Largest P2 witness count on the families of nested pools, all at the
    theta_empirical of the largest family.

    Growth faster than the number of classes is reported as a failure.
    '''
    logger = Logger(logger_name=__file__, log_level=log_level).get_logger()
    families = [build_family(g, pool, tree) for pool in pools]
    inputs = {'model': families[-1].tree.kind, 'g': g,
              'pool_sizes': [len(pool) for pool in pools]}
    families = [f for f in families if len(f) >= 3]
    if not families:
        return CheckReport.skipped(P2_GROWTH, inputs,
                                   "no family has 3 classes")

    tables = [build_table(f, workers) for f in families]
    last = tables[-1]
    theta = max(last.p0_value(), last.p1_sweep()[0])

    counts = [int(t.p2_counts(theta).max()) for t in tables]
    classes = [len(f) for f in families]
    logger.info(f"p2 counts {counts} for {classes} classes at theta {theta}")

    suspicious = [i for i in range(1, len(counts))
                  if counts[i - 1] > 0 and
                  counts[i] * classes[i - 1] > counts[i - 1] * classes[i]]
    return CheckReport.decide(
        P2_GROWTH, inputs, not suspicious,
        {'theta': theta, 'max_counts': counts, 'classes': classes},
        witness={'growth_steps': suspicious},
        reason="P2 witness counts grow faster than the family")
