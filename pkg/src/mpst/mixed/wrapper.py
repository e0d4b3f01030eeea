"""mpst-mixed CLI wrapper implementation.

Quiet programmatic counterparts of the commands: they return values instead of
printing and exiting.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import TYPE_CHECKING

from mpst.mixed.analysis import analyze_commitments, validate
from mpst.mixed.cli import ProgramContext
from mpst.mixed.efsm import compile_efsm
from mpst.mixed.projection import project
from mpst.mixed.verification import VerificationReport, verify_all

if TYPE_CHECKING:
    from collections.abc import Iterable

    from mpst.mixed.analysis import ValidationReport
    from mpst.mixed.core import LocalType
    from mpst.mixed.efsm import EFSM


def _context(projects_path: Path | str, config_path: Path | str) -> ProgramContext:
    projects_path = Path(projects_path)
    if not projects_path.exists() or not projects_path.is_dir():
        raise FileNotFoundError(f'Invalid projects_path: {projects_path}')
    pc = ProgramContext(projects_path=projects_path, create_dirs=False, config_path=Path(config_path))
    rich = logging.getLogger('rich')
    rich.setLevel(logging.CRITICAL + 1)
    pc.quiet = True
    return pc


def check(protocol_path: Path | str, mode: str | None = None, strict: bool | None = None,
          projects_path: Path | str = 'projects/', config_path: Path | str = 'mixed_config.yaml') -> ValidationReport:
    """mpst-mixed ``check`` wrapper.

    Args:
        protocol_path (Path | str): Protocol path, also looked up relative to projects_path
        mode (str | None, optional): Awareness mode, the configuration value when None. Defaults to None.
        strict (bool | None, optional): Strict mode, the configuration value when None. Defaults to None.
        projects_path (Path | str, optional): Path to projects directory. Defaults to 'projects/'.
        config_path (Path | str, optional): Configuration file path. Will create one no matter what if nonexistent. Defaults to 'mixed_config.yaml'

    Returns:
        ValidationReport: Results of every check
    """
    pc = _context(projects_path, config_path)
    protocol = pc.load_protocol(protocol_path)
    return validate(protocol, mode or pc.config['AWARENESS_MODE'], pc.bounds(),
                    pc.config['STRICT'] if strict is None else strict, pc.config['JOBS'])


def project_roles(protocol_path: Path | str, projects_path: Path | str = 'projects/',
                  config_path: Path | str = 'mixed_config.yaml') -> dict[str, LocalType]:
    """mpst-mixed ``project`` wrapper, without validation.

    Returns:
        dict[str, LocalType]: Local behavior of every declared role
    """
    pc = _context(projects_path, config_path)
    protocol = pc.load_protocol(protocol_path)
    return {role: project(protocol.body, role)[0] for role in protocol.roles}


def efsm(protocol_path: Path | str, role: str, projects_path: Path | str = 'projects/',
         config_path: Path | str = 'mixed_config.yaml') -> EFSM:
    """mpst-mixed ``efsm`` wrapper, without validation.

    Returns:
        EFSM: Machine of ``role``
    """
    pc = _context(projects_path, config_path)
    protocol = pc.load_protocol(protocol_path)
    committing = analyze_commitments(protocol.body, protocol.gc_labels()).as_mapping()
    return compile_efsm(project(protocol.body, role)[0], role, committing)


def verify(protocol_path: Path | str, skip: Iterable[str] = (), rec_bound: int | None = None,
           queue_bound: int | None = None, depth: int | None = None, strict: bool | None = None,
           projects_path: Path | str = 'projects/', config_path: Path | str = 'mixed_config.yaml') -> VerificationReport:
    """mpst-mixed ``verify`` wrapper, without validation.

    Args:
        protocol_path (Path | str): Protocol path, also looked up relative to projects_path
        skip (Iterable[str], optional): Checks to leave out. Defaults to ().
        rec_bound (int | None, optional): Recursion bound override. Defaults to None.
        queue_bound (int | None, optional): Queue bound override. Defaults to None.
        depth (int | None, optional): Depth bound override. Defaults to None.
        strict (bool | None, optional): Strict mode, the configuration value when None. Defaults to None.
        projects_path (Path | str, optional): Path to projects directory. Defaults to 'projects/'.
        config_path (Path | str, optional): Configuration file path. Defaults to 'mixed_config.yaml'

    Returns:
        VerificationReport: One verdict per check run
    """
    pc = _context(projects_path, config_path)
    protocol = pc.load_protocol(protocol_path)
    bounds = pc.bounds(depth=depth, rec_bound=rec_bound, queue_bound=queue_bound)
    verdicts = verify_all(protocol.body, bounds, skip, gc_labels=protocol.gc_labels(), jobs=pc.config['JOBS'])
    return VerificationReport(protocol.name, tuple(verdicts), bounds,
                              pc.config['STRICT'] if strict is None else strict)
