import json
import time
from abc import ABC, abstractmethod
from collections import Counter

from pandas import DataFrame

from tree_actions.automorphisms import parse_automorphism
from tree_actions.config import RunConfig
from tree_actions.free_group import GroupPresentation, parse_word
from tree_actions.logger import Logger
from tree_actions.models.base import Verdict, to_jsonable
from tree_actions.models.reports import CheckReport, CheckTally, SuiteResult

CHECK_LOG_COLUMNS = ['lemma_id', 'verdict', 'reason', 'inputs']


class BaseSuite(ABC):
    '''
    A base suite class for use as a template for all commands.

    The base class contains the bookkeeping shared by every command: the
    check log, suite stats and the aggregation of many instances of one
    check into a single report per lemma. Subclasses only implement
    _execute_suite and log their checks through _log_check.
    '''

    # lemma ids every run reports, a lemma without instances is skipped
    lemma_ids = ()

    def __init__(self, log_level, config: RunConfig):

        self._logger = Logger(logger_name=__file__,
                              log_level=log_level).get_logger()
        self._log_level = log_level
        self._config = config

        self.suite_name = None
        self.presentation = GroupPresentation.parse(config.presentation)
        self.seed = config.seed

        # Metrics used for suite stats
        self.total_checks = 0
        self.total_passes = 0
        self.total_failures = 0
        self.total_skips = 0

        self._reports = []
        self._tallies = {}
        self._summary = {}
        self._caveats = []
        self._timing = {}
        self._check_log = DataFrame(columns=CHECK_LOG_COLUMNS)

    def run(self) -> SuiteResult:
        '''
        Run the suite and aggregate its checks.
        '''
        self._logger.info(f"starting {self.suite_name} suite with seed "
                          f"{self.seed}")

        start = time.perf_counter()
        self._execute_suite()
        self._timing[self.suite_name] = round(time.perf_counter() - start, 3)

        self._calculate_stats()
        self._logger.info(f"finished {self.suite_name} suite: "
                          f"{self.total_passes} passed, "
                          f"{self.total_failures} failed, "
                          f"{self.total_skips} skipped")

        return SuiteResult(command=self._config.command,
                           checks=self._aggregate(),
                           summary=self._summary,
                           caveats=self._caveats,
                           timing=self._timing)

    def get_stats(self):
        return self._suite_stats

    def get_check_log(self):
        return self._check_log

    def get_reports(self):
        return list(self._reports)

    def get_frame(self):
        '''
        The table written by CSV reports, the check log by default.
        '''
        return self._check_log

    @abstractmethod
    def _execute_suite(self):
        pass

    def _words(self):
        '''
        The input words of the run, parsed in its presentation.
        '''
        return [parse_word(text, self.presentation)
                for text in self._config.words]

    def _automorphisms(self):
        '''
        The input automorphisms of the run, moves separated by ';'.
        '''
        return [parse_automorphism(text.replace(';', '\n'),
                                   self.presentation)
                for text in self._config.automorphisms]

    def _log_check(self, report: CheckReport):
        self._reports.append(report)
        if report.failed:
            self._logger.warning(f"{report.lemma_id} failed: {report.reason}")

    def _log_checks(self, reports):
        for report in reports:
            self._log_check(report)

    def _log_tally(self, tally: CheckTally):
        '''
        Record a sweep by its verdict counts, its failures enter the check
        log in full.
        '''
        for report in tally.failures:
            self._logger.warning(f"{report.lemma_id} failed: {report.reason}")
        if tally.lemma_id in self._tallies:
            self._tallies[tally.lemma_id].merge(tally)
        else:
            self._tallies[tally.lemma_id] = tally

    def _add_caveat(self, caveat):
        if caveat not in self._caveats:
            self._caveats.append(caveat)

    def _calculate_stats(self):

        failed = [r for tally in self._tallies.values()
                  for r in tally.failures]
        rows = [[r.lemma_id, r.verdict.value, r.reason,
                 json.dumps(to_jsonable(r.inputs), sort_keys=True)]
                for r in self._reports + failed]
        self._check_log = DataFrame(rows, columns=CHECK_LOG_COLUMNS)

        # tallied failures are already in the check log
        tallied = Counter()
        for tally in self._tallies.values():
            tallied.update(tally.counts)
        tallied[Verdict.FAIL] -= len(failed)

        results = self._check_log
        passes = results.query('verdict == "pass"')
        failures = results.query('verdict == "fail"')
        skips = results.query('verdict == "skipped"')

        self.total_checks = len(results.index) + sum(tallied.values())
        self.total_passes = len(passes.index) + tallied[Verdict.PASS]
        self.total_failures = len(failures.index) + tallied[Verdict.FAIL]
        self.total_skips = len(skips.index) + tallied[Verdict.SKIPPED]

        per_lemma = {}
        for lemma_id, group in results.groupby('lemma_id', sort=True):
            per_lemma[lemma_id] = group['verdict'].value_counts().to_dict()
        for lemma_id, tally in sorted(self._tallies.items()):
            counts = per_lemma.setdefault(lemma_id, {})
            for verdict, count in tally.counts.items():
                if verdict != Verdict.FAIL:
                    counts[verdict.value] = counts.get(verdict.value, 0) + \
                        count

        self._suite_stats = {
            'suite_name': self.suite_name,
            'seed': self.seed,
            'total_checks': self.total_checks,
            'total_passes': self.total_passes,
            'total_failures': self.total_failures,
            'total_skips': self.total_skips,
            'per_lemma': per_lemma
        }

    def _aggregate(self):
        '''
        One report per lemma, in order of first appearance.

        A lemma checked once keeps its own report. Otherwise the verdict is
        fail if any instance failed, pass if any passed and skipped when
        every instance was skipped, with the first failure as witness.
        '''
        grouped = {lemma_id: [] for lemma_id in self.lemma_ids}
        for report in self._reports:
            grouped.setdefault(report.lemma_id, []).append(report)
        for lemma_id in self._tallies:
            grouped.setdefault(lemma_id, [])

        aggregated = []
        for lemma_id, reports in grouped.items():
            tally = CheckTally(lemma_id)
            for report in reports:
                tally.add(report)
            if lemma_id in self._tallies:
                tally.merge(self._tallies[lemma_id])
            if not tally.total:
                aggregated.append(CheckReport.skipped(
                    lemma_id, {'instances': 0},
                    "no instances within the configured budgets"))
                continue
            if tally.total == 1 and reports:
                aggregated.append(reports[0])
                continue
            aggregated.append(_aggregate_tally(tally))
        return aggregated


def _aggregate_tally(tally: CheckTally):
    counts = tally.counts
    quantities = {'passed': counts[Verdict.PASS],
                  'failed': counts[Verdict.FAIL],
                  'skipped': counts[Verdict.SKIPPED]}
    inputs = {'instances': tally.total}

    if tally.failures:
        first = tally.failures[0]
        return CheckReport(lemma_id=tally.lemma_id, inputs=inputs,
                           quantities=quantities, verdict=Verdict.FAIL,
                           witness={'first_failure': first.to_dict()},
                           reason=first.reason)
    if counts[Verdict.PASS]:
        return CheckReport(lemma_id=tally.lemma_id, inputs=inputs,
                           quantities=quantities)

    # every instance was skipped, keep the most common reason
    reason, _ = tally.reasons.most_common(1)[0]
    return CheckReport.skipped(tally.lemma_id, inputs, reason, quantities)
