import json
from fractions import Fraction

import numpy as np
import pytest

from tree_actions.config import RunConfig
from tree_actions.errors import ConfigError
from tree_actions.models.base import Verdict, to_jsonable
from tree_actions.models.reports import CheckReport, CheckTally, SuiteResult
from tree_actions.report_manager import SCHEMA_VERSION, ReportManager
from tree_actions.suites.analyze_suite import AnalyzeSuite
from tree_actions.suites.base_suite import _aggregate_tally
from tree_actions.trees.base_tree import Vertex


def _check(verdict, lemma_id='overlap', reason=None):
    return CheckReport(lemma_id=lemma_id, inputs={}, verdict=verdict,
                       reason=reason)


def test_decide():
    assert CheckReport.decide('wpd', {}, True, reason='x').reason is None
    failed = CheckReport.decide('wpd', {}, False, reason='too large')
    assert failed.failed
    assert failed.reason == 'too large'


@pytest.mark.parametrize('verdicts, expected', [
    ([Verdict.PASS, Verdict.FAIL, Verdict.SKIPPED], Verdict.FAIL),
    ([Verdict.PASS, Verdict.SKIPPED], Verdict.PASS),
    ([Verdict.SKIPPED], Verdict.SKIPPED),
    ([], Verdict.SKIPPED)
])
def test_suite_verdict(verdicts, expected):
    result = SuiteResult('lemmas', checks=[_check(v) for v in verdicts])
    assert result.verdict == expected


def test_analysis_without_checks_passes():
    assert SuiteResult('analyze', summary={'analyze': {}}).verdict == \
        Verdict.PASS


def test_extend():
    first = SuiteResult('lemmas', checks=[_check(Verdict.PASS)],
                        caveats=['bounded pool'])
    second = SuiteResult('folds', checks=[_check(Verdict.FAIL)],
                         caveats=['bounded pool', 'sampled'])
    first.extend(second)
    assert first.counts() == {'pass': 1, 'fail': 1, 'skipped': 0}
    assert first.caveats == ['bounded pool', 'sampled']
    assert first.command == 'lemmas'


def _tally(reports):
    tally = CheckTally('overlap')
    for report in reports:
        tally.add(report)
    return tally


def test_aggregate_tally():
    reports = [_check(Verdict.PASS), _check(Verdict.FAIL, reason='first'),
               _check(Verdict.FAIL, reason='second')]
    aggregated = _aggregate_tally(_tally(reports))
    assert aggregated.verdict == Verdict.FAIL
    assert aggregated.reason == 'first'
    assert aggregated.quantities == {'passed': 1, 'failed': 2, 'skipped': 0}

    skipped = _aggregate_tally(_tally([
        _check(Verdict.SKIPPED, reason='below threshold'),
        _check(Verdict.SKIPPED, reason='below threshold'),
        _check(Verdict.SKIPPED, reason='elliptic')]))
    assert skipped.verdict == Verdict.SKIPPED
    assert skipped.reason == 'below threshold'


def test_tally_merge_keeps_failures_in_order():
    first = _tally([_check(Verdict.PASS), _check(Verdict.FAIL, reason='a')])
    second = _tally([_check(Verdict.FAIL, reason='b'),
                     _check(Verdict.SKIPPED, reason='no claim')])
    merged = first.merge(second)
    assert merged.total == 4
    assert [r.reason for r in merged.failures] == ['a', 'b']
    assert merged.reasons == {'no claim': 1}
    assert _aggregate_tally(merged).witness['first_failure']['reason'] == 'a'


def test_to_jsonable(word):
    assert to_jsonable(Fraction(3, 2)) == '3/2'
    assert to_jsonable(Fraction(4, 2)) == 2
    assert to_jsonable(np.int64(5)) == 5
    assert to_jsonable(Verdict.PASS) == 'pass'
    assert to_jsonable(Vertex(word('ab'))) == ['ab', -1]
    assert to_jsonable({'w': word('aB'), 'ids': {3, 1}}) == \
        {'w': 'aB', 'ids': [1, 3]}


@pytest.fixture
def analyzed():
    config = RunConfig('analyze', words=['abAB', 'abab'], seed=4)
    suite = AnalyzeSuite(config.log_level, config)
    return config, suite, suite.run()


def test_json_report(analyzed):
    config, suite, result = analyzed
    manager = ReportManager(config.log_level, config)
    result.environment = manager.environment()
    document = json.loads(manager.render(result, [suite]))
    assert document['schema_version'] == SCHEMA_VERSION
    assert document['config']['seed'] == 4
    assert document['verdict'] == 'pass'
    assert 'timing' in document
    assert document['environment']['seed'] == 4
    assert [row['word'] for row in
            document['summary']['analyze']['words']] == ['abAB', 'abab']


def test_json_is_deterministic(analyzed):
    config, suite, result = analyzed
    manager = ReportManager(config.log_level, config)
    again = AnalyzeSuite(config.log_level, config).run()
    first = json.loads(manager.to_json(result))
    second = json.loads(manager.to_json(again))
    first.pop('timing')
    second.pop('timing')
    assert first == second


def test_text_report(analyzed):
    config, _, result = analyzed
    text = ReportManager(config.log_level, config).to_text(result)
    assert text.startswith('command: analyze\nverdict: pass\n')
    assert 'root_exponent=2' in text


def test_dot_report(analyzed):
    config, suite, _ = analyzed
    dot = ReportManager(config.log_level, config).to_dot(suite)
    assert dot.startswith('graph ball {')


def test_dot_needs_a_quasi_tree():
    config = RunConfig('complex')

    class Empty:
        quasi_tree = None

    with pytest.raises(ConfigError):
        ReportManager(config.log_level, config).to_dot(Empty())


def test_save_result(analyzed, tmp_path):
    config, suite, result = analyzed
    config.format = 'csv'
    config.out = str(tmp_path / 'reports' / 'analyze.csv')
    ReportManager(config.log_level, config).save_result(result, [suite])
    with open(config.out) as f:
        header = f.readline()
    assert header.startswith('word,length,identity')
