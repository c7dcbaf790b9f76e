'''
Empirical persistence of long axis intersections.

A base element g persists when every element h whose axis shares at least
n(C) periods with Axis(g) keeps, under every automorphism phi, an overlap
of at least C periods of Axis(phi(g)). The estimator draws partners h with
a prescribed overlap and measures the image overlaps over a bounded pool of
automorphisms.
'''
import logging
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

from pandas import DataFrame

from tree_actions.automorphisms import Automorphism
from tree_actions.errors import PreconditionError, UnsupportedPresentationError
from tree_actions.free_group import (
    GroupPresentation,
    ReducedWord,
    in_elementary_closure,
    is_cyclically_reduced,
    letter_allowed_after
)
from tree_actions.logger import Logger
from tree_actions.models.reports import CheckReport
from tree_actions.trees import tree_for
from tree_actions.trees.base_tree import Disjoint, SameAxis

BASIS_COUNTEREXAMPLE = 'basis_counterexample'
DEHN_TWIST_CONTRAST = 'dehn_twist_contrast'

DEFAULT_CONSTANTS = (1, 2, 3)
DEFAULT_PARTNER_ATTEMPTS = 64

TRIAL_COLUMNS = [
    'm',
    'trial',
    'automorphism',
    'h',
    'input_overlap',
    'image_overlap',
    'image_translation_length'
]


def _partner_rng(seed, m, trial):
    return random.Random(f"{seed}/{m}/{trial}")


def generate_partner(g: ReducedWord, m: int, seed,
                     max_attempts=DEFAULT_PARTNER_ATTEMPTS) -> ReducedWord:
    '''
    Draw h = g^m t whose axis shares exactly m periods with Axis(g).

    The tail t is nontrivial, does not continue g at either end and keeps
    g^m t reduced and cyclically reduced, so the common segment of the two
    axes runs from the identity to g^m.

    Raises
    ------
    UnsupportedPresentationError
        If g does not live in a free group
    PreconditionError
        If m < 1, g is not cyclically reduced or no tail was found
    '''
    presentation = g.presentation
    if not presentation.is_free:
        raise UnsupportedPresentationError(
            "partners are only generated in free groups")
    if m < 1:
        raise PreconditionError(f"the overlap multiple must be >= 1, got {m}")
    if g.is_identity or not is_cyclically_reduced(g):
        raise PreconditionError(f"'{g}' must be cyclically reduced and "
                                "nontrivial")

    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    alphabet = presentation.alphabet()
    inverse = presentation.inverse_letter
    bad_first = {g[0], inverse(g[-1])}
    bad_last = {g[-1], inverse(g[0])}
    power = g ** m

    for _ in range(max_attempts):
        length = rng.randint(1, len(g) + 2)
        letters = []
        for i in range(length):
            options = [x for x in alphabet
                       if not letters or
                       letter_allowed_after(letters[-1], x, presentation)]
            if i == 0:
                options = [x for x in options if x not in bad_first]
            if i == length - 1:
                options = [x for x in options if x not in bad_last]
            if not options:
                break
            letters.append(rng.choice(options))
        if len(letters) != length:
            continue
        h = power * ReducedWord(presentation, tuple(letters))
        if not in_elementary_closure(h, g):
            return h

    raise PreconditionError(
        f"no partner with overlap {m} for '{g}' after {max_attempts} "
        "attempts")


def _common_overlap(tree, axis, partners):
    '''
    Length of Axis(g) intersected with the axes of every partner.
    '''
    start, end = -math.inf, math.inf
    for h in partners:
        result = tree.overlap_with(axis, tree.char_set(h))
        if isinstance(result, Disjoint):
            return 0
        if isinstance(result, SameAxis):
            continue
        start = max(start, result.segment.start_offset)
        end = min(end, result.segment.end_offset)
    if start == -math.inf:
        return math.inf
    if start > end:
        return 0
    return axis.offset_at(end) - axis.offset_at(start)


def _measure_partner(task):
    '''
    Rows of one partner set against the whole pool.
    '''
    g, m, trial, partners, pool = task
    tree = tree_for(g.presentation)
    input_overlap = _common_overlap(tree, tree.axis(g), partners)
    rows = []
    for automorphism in pool:
        image_axis = tree.axis(automorphism(g))
        image_overlap = _common_overlap(
            tree, image_axis, [automorphism(h) for h in partners])
        rows.append([
            m,
            trial,
            str(automorphism),
            ' '.join(str(h) for h in partners),
            input_overlap,
            image_overlap,
            image_axis.translation_length
        ])
    return rows


@dataclass
class PersistenceExperiment:
    '''
    Inputs of a persistence estimate.

    Attributes
    ----------
    g: ReducedWord
        Loxodromic base element
    automorphism_pool: list
        Automorphisms the overlaps are pushed through
    constants: tuple
        Values of C to estimate n(C) for
    max_multiple: int
        Largest overlap multiple m of |g| tried
    trials: int
        Partner sets drawn per multiple
    seed: int
        Root seed, partner seeds are derived from (seed, m, trial)
    partner_generator: Callable
        (g, m, rng) -> h with overlap at least m |g|
    pairs: bool
        Use two partners per trial and measure the common overlap
    pool_spec: str
        Description of the pool recorded in reports
    '''
    g: ReducedWord
    automorphism_pool: list
    constants: tuple = DEFAULT_CONSTANTS
    max_multiple: int = 6
    trials: int = 5
    seed: int = 0
    partner_generator: Callable = generate_partner
    pairs: bool = False
    pool_spec: str = ''


@dataclass
class PersistenceEstimate:
    '''
    Estimated n(C) values with the raw trial log.

    n_hat maps C to the smallest multiple m such that every trial with
    input overlap at least m |g| reached an image overlap of at least
    C |phi(g)|, or None when even the largest multiple failed. failures
    lists the trials failing at the largest multiple.
    '''
    g: ReducedWord
    constants: tuple
    n_hat: dict
    failures: list
    trials: DataFrame
    caveats: list = field(default_factory=list)
    pool_spec: str = ''
    max_multiple: int = 0

    @property
    def total(self):
        return all(n is not None for n in self.n_hat.values())

    def to_dict(self):
        return {
            'g': self.g,
            'C_range': list(self.constants),
            'max_multiple': self.max_multiple,
            'pool_spec': self.pool_spec,
            'n_hat': [{'C': c, 'n_hat': n} for c, n in self.n_hat.items()],
            'failures': self.failures,
            'restriction_caveats': self.caveats
        }


class PersistenceEstimator():
    """
    Run persistence experiments and keep their trial log.

    Attributes
    ----------
    workers: int
        Number of worker processes measuring partner sets

    Methods
    -------
    estimate(experiment)
        Measure every partner set against the pool and estimate n(C)
    get_stats()
        Summary of the last estimate
    get_trial_log()
        DataFrame of the last estimate's trials
    """

    def __init__(self, log_level=logging.WARNING, workers=1):

        self._logger = Logger(logger_name=__file__,
                              log_level=log_level).get_logger()
        self.workers = workers

        self._trial_log = DataFrame(columns=TRIAL_COLUMNS)
        self._stats = {}

    def get_stats(self):
        return self._stats

    def get_trial_log(self):
        return self._trial_log

    def _partner_sets(self, experiment):
        per_trial = 2 if experiment.pairs else 1
        for m in range(1, experiment.max_multiple + 1):
            for trial in range(experiment.trials):
                rng = _partner_rng(experiment.seed, m, trial)
                partners = [experiment.partner_generator(experiment.g, m, rng)
                            for _ in range(per_trial)]
                yield (experiment.g, m, trial, partners,
                       experiment.automorphism_pool)

    def estimate(self, experiment: PersistenceExperiment
                 ) -> PersistenceEstimate:
        '''
        Raises
        ------
        PreconditionError
            If the pool is empty or g is elliptic
        '''
        if not experiment.automorphism_pool:
            raise PreconditionError("the automorphism pool is empty")
        g = experiment.g
        tree = tree_for(g.presentation)
        translation_length = tree.translation_length(g)
        if translation_length == 0:
            raise PreconditionError(f"'{g}' is elliptic")

        self._logger.info(f"starting persistence estimate for '{g}' with "
                          f"{len(experiment.automorphism_pool)} "
                          "automorphisms")

        # Measure every partner set, rows keep the task order
        tasks = list(self._partner_sets(experiment))
        if self.workers > 1:
            with ProcessPoolExecutor(max_workers=self.workers) as executor:
                results = list(executor.map(_measure_partner, tasks))
        else:
            results = [_measure_partner(task) for task in tasks]
        rows = [row for result in results for row in result]
        self._trial_log = DataFrame(rows, columns=TRIAL_COLUMNS)

        n_hat, failures = self._calculate_n_hat(experiment,
                                                translation_length)

        caveats = [
            "partner sets are " +
            ("pairs" if experiment.pairs else "singletons {h}") +
            ", not arbitrary subsets",
            "automorphisms range over a bounded pool" +
            (f" ({experiment.pool_spec})" if experiment.pool_spec else ""),
            "each base element is estimated on its own"
        ]

        self._stats = {
            'trials': len(self._trial_log.index),
            'partner_sets': len(tasks),
            'failures': len(failures),
            'n_hat': n_hat
        }
        self._logger.info(f"finished persistence estimate: {self._stats}")

        return PersistenceEstimate(
            g=g,
            constants=tuple(experiment.constants),
            n_hat=n_hat,
            failures=failures,
            trials=self._trial_log,
            caveats=caveats,
            pool_spec=experiment.pool_spec,
            max_multiple=experiment.max_multiple
        )

    def _calculate_n_hat(self, experiment, translation_length):

        log = self._trial_log
        n_hat = {}
        failures = []
        top = experiment.max_multiple * translation_length

        for c in experiment.constants:

            # Rows missing C periods of the image axis
            failed = log[log['image_overlap'] <
                         c * log['image_translation_length']]

            n_hat[c] = None
            for m in range(1, experiment.max_multiple + 1):
                if not (failed['input_overlap'] >=
                        m * translation_length).any():
                    n_hat[c] = m
                    break

            for row in failed[failed['input_overlap'] >= top].itertuples():
                failures.append({
                    'C': c,
                    'automorphism': row.automorphism,
                    'h': row.h,
                    'input_overlap': row.input_overlap,
                    'image_overlap': row.image_overlap,
                    'image_translation_length': row.image_translation_length
                })

        return n_hat, failures


def estimate(experiment: PersistenceExperiment, log_level=logging.WARNING,
             workers=1) -> PersistenceEstimate:
    return PersistenceEstimator(log_level, workers).estimate(experiment)


def _f2_generators(presentation: Optional[GroupPresentation]):
    presentation = presentation or GroupPresentation.free(2)
    if not presentation.is_free or len(presentation.generators()) < 2:
        raise UnsupportedPresentationError(
            "the Dehn twist examples need a free group of rank at least 2")
    a, b = presentation.generators()[:2]
    return presentation, a, b


def basis_element_counterexample(N: int, presentation=None) -> CheckReport:
    '''
    The Dehn twist phi_N: a -> a, b -> a^-N b undoes the overlap of
    h_N = a^N b with Axis(a): phi_N(h_N) = b and the image overlap is 0.

    The report passes when every quantity matches these values.

    Raises
    ------
    PreconditionError
        If N < 1
    '''
    if N < 1:
        raise PreconditionError(f"N must be >= 1, got {N}")
    presentation, a, b = _f2_generators(presentation)
    tree = tree_for(presentation)
    twist = Automorphism.dehn_twist(presentation, N)
    h = a ** N * b
    image_g, image_h = twist(a), twist(h)

    input_overlap = _common_overlap(tree, tree.axis(a), [h])
    image_overlap = _common_overlap(tree, tree.axis(image_g), [image_h])
    quantities = {
        'N': N,
        'image_g': image_g,
        'image_h': image_h,
        'input_overlap': input_overlap,
        'image_overlap': image_overlap
    }
    holds = image_g == a and image_h == b and input_overlap == N and \
        image_overlap == 0
    return CheckReport.decide(
        BASIS_COUNTEREXAMPLE,
        {'g': a, 'h': h, 'automorphism': twist},
        holds, quantities,
        reason="Dehn twist did not undo the overlap with Axis(a)")


def dehn_twist_contrast(g: ReducedWord, N: int, seed, multiple=3
                        ) -> CheckReport:
    '''
    The twist phi_N applied to a partner of a non-basis g keeps at least one
    period of Axis(phi_N(g)) in the image overlap.
    '''
    presentation = g.presentation
    twist = Automorphism.dehn_twist(presentation, N)
    h = generate_partner(g, multiple, _partner_rng(seed, multiple, N))
    tree = tree_for(presentation)

    image_axis = tree.axis(twist(g))
    input_overlap = _common_overlap(tree, tree.axis(g), [h])
    image_overlap = _common_overlap(tree, image_axis, [twist(h)])
    quantities = {
        'N': N,
        'input_overlap': input_overlap,
        'image_overlap': image_overlap,
        'image_translation_length': image_axis.translation_length
    }
    return CheckReport.decide(
        DEHN_TWIST_CONTRAST,
        {'g': g, 'h': h, 'automorphism': twist},
        image_overlap >= image_axis.translation_length, quantities,
        reason="image overlap shorter than one period of Axis(phi(g))")
