import pytest

from tree_actions.config import BUDGET_DEFAULTS, RunConfig
from tree_actions.errors import ConfigError, PreconditionError
from tree_actions.free_group import words_up_to_length
from tree_actions.models.base import Verdict
from tree_actions.persistence import (
    BASIS_COUNTEREXAMPLE,
    DEHN_TWIST_CONTRAST
)
from tree_actions.suites.analyze_suite import AnalyzeSuite
from tree_actions.suites.complex_suite import ComplexSuite
from tree_actions.suites.fold_suite import FoldSuite
from tree_actions.suites.lemma_suite import LemmaSuite, overlap_candidates
from tree_actions.suites.persistence_suite import PersistenceSuite
from tree_actions.trees.base_tree import overlap_length

ZERO_BUDGETS = {name: 0 for name in BUDGET_DEFAULTS}

SMALL_COMPLEX = {
    'pool_length': 2,
    'y_pool_length': 1,
    'complex_spaces': 4,
    'sandwich_samples': 20,
    'quadruples': 50,
    'stabilizer_length': 1,
    'equivariance_samples': 5,
    'trials': 1,
    'max_multiple': 2
}


def _run(suite_class, command, **kwargs):
    config = RunConfig(command, **kwargs)
    suite = suite_class(config.log_level, config)
    return suite, suite.run()


def _rows(result):
    return {str(row['word']): row
            for row in result.summary['analyze']['words']}


def test_analyze_free():
    _, result = _run(AnalyzeSuite, 'analyze', words=['abAB', 'aA', 'abab'])
    rows = _rows(result)

    assert rows['abAB']['translation_length'] == 4
    assert rows['abAB']['primitive'] is False
    assert rows['abAB']['root_exponent'] == 1

    assert rows['1']['identity']
    assert rows['1']['action'] == 'elliptic'

    assert str(rows['abab']['root']) == 'ab'
    assert rows['abab']['root_exponent'] == 2
    assert rows['abab']['action'] == 'loxodromic'
    assert result.verdict == Verdict.PASS


def test_analyze_torsion():
    _, result = _run(AnalyzeSuite, 'analyze', presentation='Z2*Z3',
                     words=['s1', 's1s2'])
    rows = _rows(result)
    assert rows['s1']['finite_order']
    assert rows['s1']['action'] == 'elliptic'
    assert 'primitive' not in rows['s1']
    assert rows['s1s2']['translation_length'] == 2


def test_analyze_needs_words():
    config = RunConfig('analyze')
    with pytest.raises(ConfigError):
        AnalyzeSuite(config.log_level, config).run()


def test_lemmas_without_budget_are_skipped():
    suite, result = _run(LemmaSuite, 'lemmas', budgets=ZERO_BUDGETS)
    assert [check.lemma_id for check in result.checks] == \
        list(LemmaSuite.lemma_ids)
    assert result.verdict == Verdict.SKIPPED
    assert suite.get_stats()['total_checks'] == 0


def test_lemmas_self_test_fails():
    _, result = _run(LemmaSuite, 'lemmas', self_test=True,
                     budgets={**ZERO_BUDGETS, 'word_length': 3})
    assert result.verdict == Verdict.FAIL
    assert any(c.startswith('self-test') for c in result.caveats)


@pytest.mark.parametrize('presentation', ['F2', 'Z2*Z3'])
def test_lemmas_small_run(presentation):
    budgets = {'word_length': 2, 'torsion_syllables': 2,
               'overlap_length': 2, 'instances': 5, 'exponent_bound': 2}
    suite, result = _run(LemmaSuite, 'lemmas', presentation=presentation,
                         seed=11, budgets=budgets)
    assert result.verdict != Verdict.FAIL
    assert suite.get_stats()['total_failures'] == 0
    assert result.summary['lemmas']['exhaustive_length'] == 2


def test_folds_small_run():
    budgets = {'morphisms': 4, 'max_edges': 4, 'bbt_samples': 10,
               'path_length': 3, 'collapse_morphisms': 2,
               'collapse_pairs': 10}
    suite, result = _run(FoldSuite, 'folds', seed=3, budgets=budgets)
    assert result.verdict == Verdict.PASS
    assert result.summary['folds']['morphisms'] == 4
    assert not suite.get_frame().empty


def test_folds_without_samples():
    _, result = _run(FoldSuite, 'folds',
                     budgets={'morphisms': 2, 'bbt_samples': 0,
                              'collapse_morphisms': 0})
    verdicts = {check.lemma_id: check.verdict for check in result.checks}
    assert verdicts['fold_decomposition'] == Verdict.PASS
    assert verdicts['bbt_bound'] == Verdict.SKIPPED


@pytest.mark.slow
def test_complex_small_run():
    suite, result = _run(ComplexSuite, 'complex', words=['aabb'],
                         budgets=SMALL_COMPLEX)
    summary = result.summary['complex']
    assert summary['classes'] >= 3
    assert suite.quasi_tree is not None
    assert [check.lemma_id for check in result.checks] == \
        list(ComplexSuite.lemma_ids)
    assert result.verdict != Verdict.FAIL


def test_complex_single_class():
    config = RunConfig('complex', words=['aabb'],
                       automorphisms=['id', 'inner aabb'],
                       budgets=SMALL_COMPLEX)
    with pytest.raises(PreconditionError):
        ComplexSuite(config.log_level, config).run()


def test_complex_torsion_needs_a_word():
    config = RunConfig('complex', presentation='Z2*Z3')
    with pytest.raises(ConfigError):
        ComplexSuite(config.log_level, config).run()


def test_persistence_of_a_basis_element():
    budgets = {'trials': 1, 'max_multiple': 2, 'pool_length': 1,
               'counterexample_n': 3}
    suite, result = _run(PersistenceSuite, 'persistence', words=['a'],
                         budgets=budgets)
    checks = {check.lemma_id: check for check in result.checks}

    assert result.summary['persistence']['primitive'] is True
    assert checks[BASIS_COUNTEREXAMPLE].verdict == Verdict.PASS
    assert checks[BASIS_COUNTEREXAMPLE].quantities['passed'] == 3
    assert checks[DEHN_TWIST_CONTRAST].verdict == Verdict.SKIPPED
    assert list(suite.twist_table.N) == [1, 2, 3]
    assert suite.estimate is not None


def test_persistence_needs_a_free_group():
    config = RunConfig('persistence', presentation='Z2*Z3', words=['s1s2'])
    with pytest.raises(ConfigError):
        PersistenceSuite(config.log_level, config).run()


def test_overlap_candidates_cover_every_long_overlap(f2, cayley):
    words = [w for w in words_up_to_length(f2, 3) if not w.is_identity]
    candidates = overlap_candidates(cayley, words)
    long_overlaps = 0
    for g in words:
        for h in words:
            length = overlap_length(cayley.axis_overlap(g, h))
            threshold = 3 * max(cayley.translation_length(g),
                                cayley.translation_length(h))
            if length is None or length >= threshold:
                long_overlaps += 1
                assert h in candidates.get(g, []), (str(g), str(h))
    assert long_overlaps >= len(words)
    assert f2.word('b') not in candidates[f2.word('a')]


def test_sweep_failures_reach_the_check_log():
    suite, result = _run(LemmaSuite, 'lemmas', self_test=True,
                         budgets={**ZERO_BUDGETS, 'word_length': 2})
    failures = suite.get_check_log().query('verdict == "fail"')
    assert len(failures.index) == suite.get_stats()['total_failures'] > 0
    bridge = result.checks[0]
    assert bridge.quantities['failed'] == len(failures.index)
    assert bridge.inputs['instances'] == \
        result.summary['lemmas']['bridge_pairs']
