"""Seeded random runs of a derived system.

A run repeatedly picks one enabled transition of the system until every role has ended,
nothing is enabled any more, or the step limit is reached. The scheduler is uniform by
default; with ``erlang_priority`` it only picks sends and instantiations when no receive
or purge is enabled, the way a process mailbox is served before new work starts.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING

from mpst.mixed.analysis.commitments import analyze_commitments
from mpst.mixed.core import Purge, Recv, local_final
from mpst.mixed.frontend import render_system
from mpst.mixed.projection import derive_system
from mpst.mixed.semantics import LocalSemantics, purge

if TYPE_CHECKING:
    from collections.abc import Mapping

    from mpst.mixed.core import Label, Message, Role, System, TransitionLabel
    from mpst.mixed.frontend import Protocol

logger = logging.getLogger('rich')

FINISHED = 'finished'
STUCK = 'stuck'
LIMIT = 'step-limit'


@dataclass(frozen=True)
class SimulationStep:
    """One transition taken during a run.

    Attributes:
        index (int): Step number, starting at 1
        role (Role): Acting role
        label (TransitionLabel): Transition label
        purged (tuple[Message, ...]): Messages removed by a purge step
    """

    index: int
    role: Role
    label: TransitionLabel
    purged: tuple[Message, ...] = ()

    def __str__(self) -> str:
        line = f'{self.index:>4}  {self.role:<8} {self.label}'
        if self.purged:
            line += '  purged ' + ' '.join(str(m) for m in self.purged)
        return line


@dataclass(frozen=True)
class Simulation:
    """A finished run.

    Attributes:
        seed (int): Scheduler seed
        initial (System): Starting system
        steps (tuple[SimulationStep, ...]): Transitions in order
        final (System): System after the last step
        outcome (str): ``finished``, ``stuck`` or ``step-limit``
    """

    seed: int
    initial: System
    steps: tuple[SimulationStep, ...]
    final: System
    outcome: str

    @property
    def finished(self) -> bool:
        return self.outcome == FINISHED

    def lines(self) -> list[str]:
        """Trace log of the run."""
        out = [f'# seed {self.seed}', f'# start {render_system(self.initial)}']
        out.extend(str(s) for s in self.steps)
        out.append(f'# {self.outcome} after {len(self.steps)} steps: {render_system(self.final)}')
        return out

    def write(self, path: Path) -> Path:
        """Writes the trace log to ``path``."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text('\n'.join(self.lines()) + '\n', encoding='utf-8')
        return path


def _removed(system: System, role: Role) -> tuple[Message, ...]:
    config = system.get(role)
    kept = purge(config.behavior, config.inbox)
    return tuple(m for sender, msgs in config.inbox.entries for m in msgs if m not in kept.get(sender))


def simulate(system: System, committing: Mapping[str, frozenset[Label]], seed: int = 0,
             max_steps: int = 100, erlang_priority: bool = False) -> Simulation:
    """Runs ``system`` under a seeded scheduler.

    Args:
        system (System): Initial system
        committing (Mapping[str, frozenset[Label]]): Committing sets of the base protocol
        seed (int, optional): Scheduler seed. Defaults to 0.
        max_steps (int, optional): Step limit. Defaults to 100.
        erlang_priority (bool, optional): Prefer receives and purges. Defaults to False.

    Returns:
        Simulation: The run, identical for identical arguments
    """
    rng = random.Random(seed)
    semantics = LocalSemantics(committing)
    current = system
    steps: list[SimulationStep] = []
    outcome = LIMIT
    while len(steps) < max_steps:
        if all(local_final(c) for c in current.configs):
            outcome = FINISHED
            break
        enabled = semantics.steps(current)
        if not enabled:
            outcome = STUCK
            break
        if erlang_priority:
            served = [s for s in enabled if isinstance(s[0], (Recv, Purge))]
            enabled = served or enabled
        label, target, role, _ = rng.choice(enabled)
        purged = _removed(current, role) if isinstance(label, Purge) else ()
        steps.append(SimulationStep(len(steps) + 1, role, label, purged))
        current = target
    else:
        if all(local_final(c) for c in current.configs):
            outcome = FINISHED

    logger.debug(f'Simulation with seed {seed}: {outcome} after {len(steps)} steps')
    return Simulation(seed, system, tuple(steps), current, outcome)


def simulate_protocol(protocol: Protocol, seed: int = 0, max_steps: int = 100,
                      erlang_priority: bool = False) -> Simulation:
    """Runs the system derived from a parsed protocol; see :func:`simulate`."""
    report = analyze_commitments(protocol.body, protocol.gc_labels())
    system = derive_system(protocol.body, protocol.roles)
    return simulate(system, report.as_mapping(), seed, max_steps, erlang_priority)
