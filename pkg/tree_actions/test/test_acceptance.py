'''
Full-scale runs of the sweeps, selected with the acceptance profile.
'''
import pytest

from tree_actions.config import RunConfig
from tree_actions.folds.bbt import COLLAPSE_COUNTING
from tree_actions.lemmas import AXIS_INTERSECTION, BRIDGE_PRODUCT, OVERLAP
from tree_actions.models.base import Verdict
from tree_actions.projection.quasi_tree import (
    DISTANCE_SANDWICH,
    HYPERBOLICITY
)
from tree_actions.suites.complex_suite import ComplexSuite
from tree_actions.suites.fold_suite import FoldSuite
from tree_actions.suites.lemma_suite import LemmaSuite

pytestmark = pytest.mark.slow

WORKERS = 4


def _run(suite_class, command, **kwargs):
    config = RunConfig(command, profile='acceptance', **kwargs)
    suite = suite_class(config.log_level, config)
    return suite, suite.run()


def _checks(result):
    return {check.lemma_id: check for check in result.checks}


@pytest.mark.parametrize('presentation, length', [('F2', 6), ('Z2*Z3', 4)])
def test_bridge_products_exhaustive(presentation, length):
    suite, result = _run(LemmaSuite, 'lemmas', presentation=presentation,
                         workers=WORKERS,
                         budgets={'instances': 0, 'overlap_length': 0})
    summary = result.summary['lemmas']
    assert summary['exhaustive_length'] == length
    bridge = _checks(result)[BRIDGE_PRODUCT]
    assert bridge.verdict == Verdict.PASS
    assert bridge.quantities['failed'] == 0
    assert bridge.inputs['instances'] == summary['bridge_pairs'] > 0
    assert suite.get_stats()['total_failures'] == 0


def test_overlap_lemma_exhaustive_to_length_8():
    _, result = _run(LemmaSuite, 'lemmas', workers=WORKERS,
                     budgets={'word_length': 0, 'instances': 0})
    summary = result.summary['lemmas']
    # 1 + 4 (3^8 - 1) / 2 reduced words, the identity excluded
    assert summary['overlap_pairs'] == 13120 ** 2
    assert summary['overlap_decided'] > 0
    overlap = _checks(result)[OVERLAP]
    assert overlap.verdict == Verdict.PASS
    assert overlap.quantities['failed'] == 0


def test_axis_intersections_per_branch():
    _, result = _run(LemmaSuite, 'lemmas',
                     budgets={'word_length': 4, 'overlap_length': 0})
    branches = result.summary['lemmas']['axis_intersection_branches']
    assert branches == {'disjoint': 1000, 'touching': 1000, 'overlap': 1000}
    assert not any(c.startswith('axis intersection branch')
                   for c in result.caveats)
    check = _checks(result)[AXIS_INTERSECTION]
    assert check.verdict == Verdict.PASS
    assert check.quantities['failed'] == 0
    assert result.verdict == Verdict.PASS


def test_collapse_counting_on_a_thousand_pairs():
    _, result = _run(FoldSuite, 'folds',
                     budgets={'morphisms': 0, 'bbt_samples': 0})
    summary = result.summary['folds']
    collapse = _checks(result)[COLLAPSE_COUNTING]
    assert collapse.verdict == Verdict.PASS
    assert collapse.quantities['failed'] == 0
    assert collapse.inputs['instances'] == \
        summary['collapse_morphisms'] * summary['collapse_pairs']


def test_complex_sandwich_and_hyperbolicity():
    # the Nielsen pool of length 3 keeps the projection table small
    suite, result = _run(ComplexSuite, 'complex', words=['aabb'],
                         workers=WORKERS,
                         budgets={'pool_length': 3, 'y_pool_length': 2})
    checks = _checks(result)

    sandwich = checks[DISTANCE_SANDWICH]
    assert sandwich.verdict != Verdict.FAIL
    assert sandwich.quantities['measured'] + \
        sandwich.quantities['window_artifacts'] == 1000

    hyperbolicity = checks[HYPERBOLICITY]
    assert hyperbolicity.verdict == Verdict.PASS
    spaces = result.summary['complex']['quasi_tree']['spaces']
    assert hyperbolicity.quantities['measured'] >= 10 ** 4 - spaces
    assert hyperbolicity.quantities['sampled_nodes'] > 64
