import logging
import random

from tree_actions.automorphisms import inner_pool, nielsen_pool
from tree_actions.errors import ConfigError, PreconditionError
from tree_actions.free_group import cyclic_reduce
from tree_actions.models.reports import CheckReport
from tree_actions.persistence import (
    PersistenceEstimator,
    PersistenceExperiment
)
from tree_actions.projection import (
    build_complex,
    build_family,
    build_table,
    distance_sandwich_check,
    equivariance_check,
    hyperbolicity_check,
    p2_growth,
    stabilizer_intersection_probe,
    verify_axioms,
    y_equality_sweep
)
from tree_actions.projection.family import Y_EQUALITY
from tree_actions.projection.quasi_tree import (
    DISTANCE_SANDWICH,
    HYPERBOLICITY
)
from tree_actions.projection.table import (
    OVERLAP_CONSTANT,
    P2_GROWTH,
    PROJECTION_AXIOMS,
    PROJECTION_EQUIVARIANCE,
    STABILIZER_INTERSECTION
)
from tree_actions.suites.base_suite import BaseSuite
from tree_actions.trees import tree_for
from tree_actions.whitehead import sample_candidate_generic

# automorphisms of the pool pushed through the persistence estimate
PERSISTENCE_POOL_LIMIT = 64


class ComplexSuite(BaseSuite):
    '''
    Build the family of axes of g over an automorphism pool, verify the
    projection axioms and probe the quasi-tree C_K.

    The pool is the input automorphisms or the Nielsen pool of the
    configured length. K is chosen just above 11 theta_empirical so that the
    distance sandwich applies.
    '''

    lemma_ids = (PROJECTION_AXIOMS, Y_EQUALITY, PROJECTION_EQUIVARIANCE,
                 STABILIZER_INTERSECTION, P2_GROWTH, DISTANCE_SANDWICH,
                 HYPERBOLICITY)

    def __init__(self, log_level, config):
        super().__init__(log_level, config)
        self.suite_name = 'complex'
        self.tree = tree_for(self.presentation, log_level)

        self.family = None
        self.table = None
        self.axiom_report = None
        self.persistence = None
        self.quasi_tree = None

    def _base_element(self):
        words = self._words()
        if words:
            return words[0]
        if not self.presentation.is_free:
            raise ConfigError("the complex command needs --word outside "
                              "free groups")
        return sample_candidate_generic(
            self.presentation, self.seed,
            self._config.budget('candidate_length'))

    def _pool(self):
        if self._config.automorphisms:
            return self._automorphisms(), 'input'
        length = self._config.budget('pool_length')
        return nielsen_pool(self.presentation, length), \
            f"Nielsen words of length <= {length}"

    def _execute_suite(self):

        config = self._config
        g = self._base_element()
        pool, pool_spec = self._pool()

        # Build the deduplicated family
        self.family = build_family(g, pool, self.tree, self._log_level)
        if len(self.family) < 2:
            raise PreconditionError(
                f"all {len(pool)} automorphisms send Axis({g}) to a single "
                "axis, the family has one class; automorphisms are "
                "identified when phi_1^-1 phi_2(g) lies in E(g)")
        self._summary['complex'] = {
            'g': g,
            'pool_spec': pool_spec,
            'pool_size': len(pool),
            'classes': len(self.family),
            'class_sizes': [len(c) for c in self.family.dedup_classes]
        }
        self.table = build_table(self.family, config.workers,
                                 self._log_level)

        # Axioms with persistence constants estimated on part of the pool
        n_hat = self._estimate_persistence(g, pool, pool_spec)
        if len(self.family) >= 3:
            self.axiom_report = verify_axioms(self.family, n_hat=n_hat,
                                              table=self.table)
            self._log_check(self.axiom_report.to_check(self.family))
            for caveat in self.axiom_report.caveats:
                self._add_caveat(caveat)
        else:
            self._log_check(CheckReport.skipped(
                PROJECTION_AXIOMS, {'g': g, 'classes': len(self.family)},
                "the projection axioms need at least 3 classes"))

        # The class of phi(g) matches E(g) membership
        if self.presentation.is_free:
            y_pool = nielsen_pool(self.presentation,
                                  config.budget('y_pool_length'))
            self._log_checks(y_equality_sweep(g, y_pool, self.tree,
                                              config.workers))

        rng = random.Random(f"{self.seed}/complex")
        self._log_check(equivariance_check(
            self.family, self.table, pool,
            samples=config.budget('equivariance_samples'),
            seed=rng.getrandbits(32)))

        stabilizer_pool = inner_pool(self.presentation,
                                     config.budget('stabilizer_length'))
        self._log_check(stabilizer_intersection_probe(
            self.family, stabilizer_pool + pool))

        self._log_check(p2_growth(g, self._nested_pools(pool), self.tree,
                                  config.workers, self._log_level))

        if self.axiom_report is not None:
            self._probe_complex(rng)

    def _nested_pools(self, pool):
        if self._config.automorphisms:
            n = len(pool)
            return [pool[:max(1, n // 4)], pool[:max(1, n // 2)], pool]
        length = self._config.budget('pool_length')
        return [nielsen_pool(self.presentation, k)
                for k in range(max(1, length - 2), length + 1)]

    def _estimate_persistence(self, g, pool, pool_spec):
        '''
        Small persistence estimate feeding theta_formula, free groups only.
        '''
        if not self.presentation.is_free:
            self._add_caveat("persistence constants are not estimated "
                             "outside free groups")
            return None
        core, _ = cyclic_reduce(g)
        constants = tuple(sorted(set(self._config.constants) |
                                 {OVERLAP_CONSTANT}))
        experiment = PersistenceExperiment(
            g=core,
            automorphism_pool=pool[:PERSISTENCE_POOL_LIMIT],
            constants=constants,
            max_multiple=self._config.budget('max_multiple'),
            trials=self._config.budget('trials'),
            seed=self.seed,
            pairs=self._config.pairs,
            pool_spec=f"first {PERSISTENCE_POOL_LIMIT} of {pool_spec}")
        estimator = PersistenceEstimator(self._log_level,
                                         self._config.workers)
        self.persistence = estimator.estimate(experiment)
        for caveat in self.persistence.caveats:
            self._add_caveat(caveat)
        self._summary['complex']['persistence'] = self.persistence.to_dict()
        return self.persistence.n_hat

    def _probe_complex(self, rng):

        config = self._config
        theta = self.axiom_report.theta_empirical
        K = 11 * theta + 1
        spaces = list(range(min(len(self.family),
                                config.budget('complex_spaces'))))
        radius = config.budget('window_radius') or None

        self.quasi_tree = build_complex(self.family, self.table, K,
                                        window_radius=radius, spaces=spaces,
                                        theta=theta,
                                        log_level=self._log_level)
        graph = self.quasi_tree.graph
        self._summary['complex']['quasi_tree'] = {
            'K': K,
            'spaces': len(spaces),
            'window_radius': self.quasi_tree.window_radius,
            'nodes': graph.number_of_nodes(),
            'edges': graph.number_of_edges(),
            'dropped_edges': self.quasi_tree.dropped_edges
        }

        self._log_check(distance_sandwich_check(
            self.quasi_tree, theta, config.budget('sandwich_samples'),
            seed=rng.getrandbits(32)))
        self._log_check(hyperbolicity_check(
            self.quasi_tree, config.budget('quadruples'),
            seed=rng.getrandbits(32),
            progress=self._log_level <= logging.INFO))

    def get_frame(self):
        if self.table is None:
            return super().get_frame()
        return self.table.to_frame()
