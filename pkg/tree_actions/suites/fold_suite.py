import random
from fractions import Fraction

from tree_actions.errors import PreconditionError
from tree_actions.folds.bbt import (
    BBT_BOUND,
    COLLAPSE_COUNTING,
    FOLD_WITNESS,
    bbt_bound_check,
    collapse_counting_sweep,
    fold_witness_check
)
from tree_actions.folds.fold_sequence import (
    FOLD_DECOMPOSITION,
    fold_decomposition_check
)
from tree_actions.folds.random_morphisms import (
    random_collapse_morphism,
    random_morphism,
    single_fold_morphism
)
from tree_actions.suites.base_suite import BaseSuite

RANKS = (2, 3)
WITNESS_LENGTHS = (Fraction(1), Fraction(3, 2), Fraction(2))


class FoldSuite(BaseSuite):
    '''
    Fold decompositions, bounded backtracking and collapse counting on
    random morphisms between marked graphs of rank 2 and 3.
    '''

    lemma_ids = (FOLD_DECOMPOSITION, BBT_BOUND, FOLD_WITNESS,
                 COLLAPSE_COUNTING)

    def __init__(self, log_level, config):
        super().__init__(log_level, config)
        self.suite_name = 'folds'
        self._rng = random.Random(f"{self.seed}/folds")

    def _execute_suite(self):

        morphisms = self._config.budget('morphisms')
        max_edges = self._config.budget('max_edges')
        samples = self._config.budget('bbt_samples')
        path_length = self._config.budget('path_length')

        # Decompose and measure random morphisms
        for k in range(morphisms):
            f = random_morphism(RANKS[k % len(RANKS)], self._rng, max_edges)
            self._log_check(fold_decomposition_check(f, self._log_level))
            if samples:
                self._log_check(bbt_bound_check(
                    f, samples, path_length, seed=self._rng.getrandbits(32)))

        # The single fold attains its folded length exactly
        for length in WITNESS_LENGTHS if samples else ():
            self._log_check(fold_witness_check(
                single_fold_morphism(length), length, samples,
                seed=self._rng.getrandbits(32)))

        # Counting fundamental domains across collapses
        pairs = self._config.budget('collapse_pairs')
        drawn = 0
        for k in range(self._config.budget('collapse_morphisms')):
            try:
                f = random_collapse_morphism(RANKS[k % len(RANKS)],
                                             self._rng, max_edges)
            except PreconditionError as e:
                self._logger.warning(f"skipping collapse morphism: {e}")
                continue
            drawn += 1
            self._log_checks(collapse_counting_sweep(
                f, pairs, seed=self._rng.getrandbits(32)))

        self._summary['folds'] = {
            'morphisms': morphisms,
            'max_edges': max_edges,
            'bbt_samples': samples,
            'collapse_morphisms': drawn,
            'collapse_pairs': pairs
        }
