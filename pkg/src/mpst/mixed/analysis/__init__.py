"""Static analysis of protocols: commitments, awareness, balance, annotations and validation."""
# flake8: noqa

from mpst.mixed.analysis._checks import CheckResult
from mpst.mixed.analysis.annotations import ANNOTATIONS, check_annotations
from mpst.mixed.analysis.awareness import (AWARENESS, CLEAR_TERMINATION,
                                           MODES, SEMANTIC, SINGLE_DECISION,
                                           SYNTACTIC, AwarenessFailure,
                                           AwarenessVerdict,
                                           awareness_verdicts, check_awareness,
                                           semantic_awareness, summarize,
                                           syntactic_awareness)
from mpst.mixed.analysis.balance import BALANCE, check_balance, imbalance
from mpst.mixed.analysis.commitments import (AMBIGUOUS, CONFLICT, CommitIssue,
                                             CommitReport, LabelOccurrence,
                                             MCCommitments, WellFormedness,
                                             analyze_commitments, format_site,
                                             well_formed)
from mpst.mixed.analysis.validate import (ACCEPT, PROJECTABILITY, REJECT,
                                          REPORT_SCHEMA, WELL_FORMEDNESS,
                                          ValidationReport,
                                          check_projectability, validate)

__all__ = [
    'CheckResult', 'ANNOTATIONS', 'check_annotations',
    'AWARENESS', 'CLEAR_TERMINATION', 'MODES', 'SEMANTIC', 'SINGLE_DECISION', 'SYNTACTIC',
    'AwarenessFailure', 'AwarenessVerdict', 'awareness_verdicts', 'check_awareness',
    'semantic_awareness', 'summarize', 'syntactic_awareness',
    'BALANCE', 'check_balance', 'imbalance',
    'AMBIGUOUS', 'CONFLICT', 'CommitIssue', 'CommitReport', 'LabelOccurrence', 'MCCommitments',
    'WellFormedness', 'analyze_commitments', 'format_site', 'well_formed',
    'ACCEPT', 'PROJECTABILITY', 'REJECT', 'REPORT_SCHEMA', 'WELL_FORMEDNESS',
    'ValidationReport', 'check_projectability', 'validate',
]
