from pandas import DataFrame

from tree_actions.automorphisms import nielsen_pool
from tree_actions.errors import ConfigError
from tree_actions.free_group import cyclic_reduce
from tree_actions.persistence import (
    BASIS_COUNTEREXAMPLE,
    DEHN_TWIST_CONTRAST,
    PersistenceEstimator,
    PersistenceExperiment,
    basis_element_counterexample,
    dehn_twist_contrast
)
from tree_actions.report_manager import frame_of_rows
from tree_actions.suites.base_suite import BaseSuite
from tree_actions.whitehead import is_primitive, sample_candidate_generic

TWIST_COLUMNS = ['N', 'input_overlap', 'image_overlap', 'verdict']


class PersistenceSuite(BaseSuite):
    '''
    Estimate n(C) for g over an automorphism pool.

    A primitive g cannot persist: the suite then runs the Dehn twist
    counterexample for a basis element over N = 1..counterexample_n.
    Otherwise the same twists are applied to partners of g, whose overlaps
    survive.
    '''

    lemma_ids = (BASIS_COUNTEREXAMPLE, DEHN_TWIST_CONTRAST)

    def __init__(self, log_level, config):
        super().__init__(log_level, config)
        self.suite_name = 'persistence'

        self.estimate = None
        self.twist_table = DataFrame(columns=TWIST_COLUMNS)

    def _base_element(self):
        words = self._words()
        if words:
            return words[0]
        return sample_candidate_generic(
            self.presentation, self.seed,
            self._config.budget('candidate_length'))

    def _execute_suite(self):

        config = self._config
        if not self.presentation.is_free:
            raise ConfigError("persistence experiments need a free group")

        g = self._base_element()
        core, conjugator = cyclic_reduce(g)
        if not conjugator.is_identity:
            self._add_caveat(f"'{g}' is measured through its cyclic core "
                             f"'{core}'")

        if config.automorphisms:
            pool = self._automorphisms()
            pool_spec = 'input'
        else:
            length = config.budget('pool_length')
            pool = nielsen_pool(self.presentation, length)
            pool_spec = f"Nielsen words of length <= {length}"

        # Estimate n(C) on the pool
        experiment = PersistenceExperiment(
            g=core,
            automorphism_pool=pool,
            constants=config.constants,
            max_multiple=config.budget('max_multiple'),
            trials=config.budget('trials'),
            seed=self.seed,
            pairs=config.pairs,
            pool_spec=pool_spec)
        self.estimate = PersistenceEstimator(
            self._log_level, config.workers).estimate(experiment)
        for caveat in self.estimate.caveats:
            self._add_caveat(caveat)

        primitive = is_primitive(core)
        self._summary['persistence'] = {
            'primitive': primitive,
            **self.estimate.to_dict()
        }

        # Dehn twists against a basis element or a partner of g
        N_max = config.budget('counterexample_n')
        if primitive:
            reports = [basis_element_counterexample(N, self.presentation)
                       for N in range(1, N_max + 1)]
        else:
            reports = [dehn_twist_contrast(core, N, self.seed)
                       for N in range(1, N_max + 1)]
        self._log_checks(reports)

        self.twist_table = DataFrame(
            [[r.quantities['N'], r.quantities['input_overlap'],
              r.quantities['image_overlap'], r.verdict.value]
             for r in reports],
            columns=TWIST_COLUMNS)
        self._summary['persistence']['twists'] = \
            self.twist_table.to_dict(orient='records')

    def get_frame(self):
        if self.estimate is None:
            return self.twist_table
        return frame_of_rows(self.estimate.trials.to_dict(orient='records'))
