"""Bounded verification of correspondence, progress, orphan-message freedom and state invariants."""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING

from mpst.mixed.verification.correspondence import (silent,
                                                    verify_correspondence)
from mpst.mixed.verification.progress import verify_omf, verify_progress
from mpst.mixed.verification.sweep import invariant_sweep
from mpst.mixed.verification.verdict import (CHECKS, CORRESPONDENCE,
                                             GLOBAL_PROGRESS, INVARIANTS,
                                             LOCAL_PROGRESS, OMF, PROGRESS,
                                             REPORT_SCHEMA, Verdict,
                                             VerificationReport)

if TYPE_CHECKING:
    from collections.abc import Callable, Iterable

    from mpst.mixed.core import GlobalType, Label
    from mpst.mixed.semantics import ExplorationBounds

__all__ = ['silent', 'verify_correspondence', 'verify_omf', 'verify_progress', 'invariant_sweep',
           'CHECKS', 'CORRESPONDENCE', 'GLOBAL_PROGRESS', 'INVARIANTS', 'LOCAL_PROGRESS', 'OMF', 'PROGRESS',
           'REPORT_SCHEMA', 'Verdict', 'VerificationReport', 'verify_all']

logger = logging.getLogger('rich')

_VERIFIERS = {
    CORRESPONDENCE: verify_correspondence,
    PROGRESS: verify_progress,
    OMF: verify_omf,
    INVARIANTS: invariant_sweep,
}


def verify_all(g0: GlobalType, bounds: ExplorationBounds | None = None, skip: Iterable[str] = (), *,
               gc_labels: dict[str, frozenset[Label]] | None = None, jobs: int = 1,
               progress: Callable[[int, int], None] | None = None) -> list[Verdict]:
    """Runs every verification not listed in ``skip``, in the order of :data:`CHECKS`.

    Args:
        g0 (GlobalType): Initial global type
        bounds (ExplorationBounds | None, optional): Exploration limits. Defaults to None.
        skip (Iterable[str], optional): Checks to leave out. Defaults to ().
        gc_labels (dict[str, frozenset[Label]] | None, optional): Observer commit labels. Defaults to None.
        jobs (int, optional): Worker threads. Defaults to 1.
        progress (Callable[[int, int], None] | None, optional): Exploration progress callback. Defaults to None.

    Raises:
        ValueError: Unknown check in ``skip``

    Returns:
        list[Verdict]: One verdict per check run
    """
    skip = set(skip)
    unknown = skip - set(CHECKS)
    if unknown:
        raise ValueError(f'Unknown check(s) {sorted(unknown)}, expected some of {CHECKS}')
    verdicts = []
    for name in CHECKS:
        if name in skip:
            continue
        verdict = _VERIFIERS[name](g0, bounds, gc_labels=gc_labels, jobs=jobs, progress=progress)  # type: ignore[operator]
        logger.debug(f'{name}: {verdict.status} ({verdict.states} states, {verdict.seconds:.2f}s)')
        verdicts.append(verdict)
    return verdicts
