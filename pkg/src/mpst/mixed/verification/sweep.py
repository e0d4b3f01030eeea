"""Structural invariants checked over every explored global type."""

from __future__ import annotations

import logging
import time
from typing import TYPE_CHECKING

from mpst.mixed.core import FAIL, INCONCLUSIVE, PASS
from mpst.mixed.frontend import MATH, render
from mpst.mixed.semantics import (INVARIANTS, TRUNCATED,
                                  check_state_invariants, explore_global)
from mpst.mixed.verification._base import Base, global_trace
from mpst.mixed.verification.verdict import INVARIANTS as SWEEP
from mpst.mixed.verification.verdict import Verdict

if TYPE_CHECKING:
    from collections.abc import Callable

    from mpst.mixed.core import GlobalType, Label
    from mpst.mixed.semantics import ExplorationBounds

logger = logging.getLogger('rich')

MAX_REPORTED = 20


def invariant_sweep(g0: GlobalType, bounds: ExplorationBounds | None = None, *,
                    gc_labels: dict[str, frozenset[Label]] | None = None, jobs: int = 1,
                    progress: Callable[[int, int], None] | None = None) -> Verdict:
    """Checks every structural invariant at every explored state of ``g0`` and along every edge.

    Coherence, unique instances, well-nestedness and monotonicity are checked on the
    global types; balance, projectability and the absence of stale messages in the
    derived systems are checked on every state as well.

    Args:
        g0 (GlobalType): Initial global type
        bounds (ExplorationBounds | None, optional): Exploration limits. Defaults to None.
        gc_labels (dict[str, frozenset[Label]] | None, optional): Observer commit labels. Defaults to None.
        jobs (int, optional): Worker threads. Defaults to 1.
        progress (Callable[[int, int], None] | None, optional): Exploration progress callback. Defaults to None.

    Returns:
        Verdict: Failure carries the trace to the first violating state
    """
    started = time.perf_counter()
    base = Base.of(g0, bounds, gc_labels, jobs, progress)
    space = explore_global(g0, base.bounds, base.committing, jobs, progress)
    violations = check_state_invariants(space, INVARIANTS, base.roles, base.gc_mode, base.observers)
    elapsed = time.perf_counter() - started
    if violations:
        first = violations[0]
        term = render(space.states[first.state].term, MATH)
        messages = tuple(str(v) for v in violations[:MAX_REPORTED])
        if len(violations) > MAX_REPORTED:
            messages += (f'... {len(violations) - MAX_REPORTED} more',)
        return Verdict(SWEEP, FAIL, global_trace(space, first.state) + ((term, first.invariant),),
                       len(space), space.n_edges, elapsed, space.completeness, messages)
    status = INCONCLUSIVE if space.completeness == TRUNCATED else PASS
    logger.debug(f'Invariant sweep over {len(space)} states: {status}')
    return Verdict(SWEEP, status, (), len(space), space.n_edges, elapsed, space.completeness)
