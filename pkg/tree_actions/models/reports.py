from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from tree_actions.models.base import Verdict, to_jsonable


@dataclass
class CheckReport:
    '''
    Outcome of one executable check.

    inputs holds the witness words needed to re-verify the row, quantities
    the computed values, witness the objects certifying the verdict and
    reason the explanation of a skip or failure.
    '''
    lemma_id: str
    inputs: dict
    quantities: dict = field(default_factory=dict)
    verdict: Verdict = Verdict.PASS
    witness: dict = field(default_factory=dict)
    reason: Optional[str] = None

    @classmethod
    def skipped(cls, lemma_id, inputs, reason, quantities=None):
        return cls(lemma_id=lemma_id, inputs=inputs,
                   quantities=quantities or {}, verdict=Verdict.SKIPPED,
                   reason=reason)

    @classmethod
    def decide(cls, lemma_id, inputs, holds, quantities=None, witness=None,
               reason=None):
        return cls(lemma_id=lemma_id, inputs=inputs,
                   quantities=quantities or {},
                   verdict=Verdict.PASS if holds else Verdict.FAIL,
                   witness=witness or {},
                   reason=None if holds else reason)

    @property
    def passed(self):
        return self.verdict == Verdict.PASS

    @property
    def failed(self):
        return self.verdict == Verdict.FAIL

    def to_dict(self):
        return to_jsonable({
            'lemma_id': self.lemma_id,
            'inputs': self.inputs,
            'quantities': self.quantities,
            'verdict': self.verdict,
            'witness': self.witness,
            'reason': self.reason
        })


@dataclass
class CheckTally:
    '''
    Verdict counts of many instances of one check.

    Only failures are kept whole; skipped instances leave their reason.
    '''
    lemma_id: str
    counts: Counter = field(default_factory=Counter)
    reasons: Counter = field(default_factory=Counter)
    failures: list = field(default_factory=list)

    @property
    def total(self):
        return sum(self.counts.values())

    def add(self, report: CheckReport):
        self.counts[report.verdict] += 1
        if report.verdict == Verdict.SKIPPED:
            self.reasons[report.reason] += 1
        elif report.failed:
            self.failures.append(report)

    def merge(self, other):
        self.counts.update(other.counts)
        self.reasons.update(other.reasons)
        self.failures.extend(other.failures)
        return self


@dataclass
class SuiteResult:
    '''
    Aggregate of the checks run by one command.

    The overall verdict is fail iff any check failed, skipped when nothing
    ran to a decision and pass otherwise.
    '''
    command: str
    checks: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    caveats: list = field(default_factory=list)
    timing: dict = field(default_factory=dict)
    environment: dict = field(default_factory=dict)

    @property
    def verdict(self):
        verdicts = {check.verdict for check in self.checks}
        if Verdict.FAIL in verdicts:
            return Verdict.FAIL
        if Verdict.PASS in verdicts:
            return Verdict.PASS
        # an analysis without checks is informational
        if not self.checks and self.summary:
            return Verdict.PASS
        return Verdict.SKIPPED

    def counts(self):
        counts = {verdict.value: 0 for verdict in Verdict}
        for check in self.checks:
            counts[check.verdict.value] += 1
        return counts

    def extend(self, other):
        self.checks.extend(other.checks)
        self.summary.update(other.summary)
        self.caveats.extend(c for c in other.caveats
                            if c not in self.caveats)
        self.timing.update(other.timing)
        return self

    def to_dict(self, include_timing=True):
        result = {
            'command': self.command,
            'verdict': self.verdict,
            'counts': self.counts(),
            'summary': self.summary,
            'caveats': self.caveats,
            'checks': [check.to_dict() for check in self.checks],
            'environment': self.environment
        }
        if include_timing:
            result['timing'] = self.timing
        return to_jsonable(result)
