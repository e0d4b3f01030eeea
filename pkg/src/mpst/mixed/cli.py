"""CLI and Program Context module for mpst-mixed.

This module is used to provide the program context for other modules.
It is also used to run the command line interface: ``check``, ``project``, ``efsm``,
``simulate``, ``verify`` and ``list``.
"""
from __future__ import annotations

import contextlib
import json
import logging
import os
import pkgutil
import sys
from pathlib import Path
from typing import TYPE_CHECKING, Literal, Optional

import click
import fastjsonschema  # type: ignore
import graphviz  # type: ignore
import typer
from rich.console import Console
from rich.logging import RichHandler
from rich.progress import Progress
from rich.table import Table
from rich.traceback import install

from mpst.mixed.analysis import (ACCEPT, MODES, REJECT, CheckResult,
                                 ValidationReport, analyze_commitments,
                                 validate)
from mpst.mixed.core import FAIL, INCONCLUSIVE, PASS
from mpst.mixed.efsm import (DOT, FORMATS, IMAGE_FORMATS, JSON, compile_efsm,
                             emit, render_efsm)
from mpst.mixed.exceptions import (ConfigError, MixedError,
                                   ProtocolSyntaxError)
from mpst.mixed.frontend import MATH, SCRIBBLE, STYLES, parse, render
from mpst.mixed.frontend.parser import EXPECT_RE
from mpst.mixed.projection import project
from mpst.mixed.schemas import validate_config, validate_report, yaml
from mpst.mixed.semantics import (ExplorationBounds, dump_global_graph,
                                  explore_global)
from mpst.mixed.simulate import STUCK, simulate_protocol
from mpst.mixed.verification import (CHECKS, CORRESPONDENCE,
                                     VerificationReport, verify_all)

if TYPE_CHECKING:
    from collections.abc import Callable, Iterator, Sequence

    from mpst.mixed.frontend import Protocol
    from mpst.mixed.verification import Verdict

install(show_locals=True, max_frames=100)

EXIT_OK = 0
EXIT_REJECT = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 64
EXIT_NOINPUT = 66

SUFFIX = '.mscr'
SKIP_ALIASES = {'corr': CORRESPONDENCE}

_EXIT_CODES = {
    ACCEPT: EXIT_OK,
    PASS: EXIT_OK,
    REJECT: EXIT_REJECT,
    FAIL: EXIT_REJECT,
    INCONCLUSIVE: EXIT_INCONCLUSIVE,
}


class ProgramContext:
    """Class to provide context and data for other functions. Also used for the mpst-mixed CLI."""

    def __init__(self,
                 output_path: Path | str = 'output/',
                 projects_path: Path | str = 'projects/',
                 create_dirs: bool = True,
                 config_path: Path | str = Path('mixed_config.yaml')) -> None:
        """Initializes ProgramContext and also sets up mpst-mixed for use.

        Args:
            output_path (Path | str, optional): Output path. Defaults to 'output'.
            projects_path (Path | str, optional): Projects path from which to search from. Defaults to 'projects'.
            create_dirs (bool, optional): Whether or not to create the directories specified. Defaults to True.
            config_path (Path | str, optional): Configuration file location. Will create one if nonexistent no matter what
        """
        self.quiet = False  # Default value
        self.running_from: Literal['WRAPPER', 'DIRECT'] = 'WRAPPER'  # Default value

        # Load the config
        self.config_path = Path(config_path) if config_path else Path('mixed_config.yaml')
        self.config: dict = {}
        self._config_cache: dict = {}  # Used to skip schema validation
        self._config_template = pkgutil.get_data('mpst.mixed', 'resources/config_template.yaml')
        assert self._config_template is not None, 'Data file "resources/config_template.yaml" nonexistent, try reinstalling!'
        self.reload_config()

        # Setup logger, results go to stdout and everything else to stderr
        if self.config['DEBUG_LOGGING']:
            log_level = logging.DEBUG
        else:
            log_level = logging.INFO
        logging.basicConfig(handlers=[RichHandler(level=log_level, markup=True, console=Console(stderr=True))],
                            format='%(message)s',
                            datefmt='[%X]',
                            level='NOTSET')
        self.logger = logging.getLogger('rich')
        self.console = Console(highlight=False)

        self.output_path = Path(output_path)
        self.projects_path = Path(projects_path)
        if create_dirs:
            self.output_path.mkdir(parents=True, exist_ok=True)
            self.projects_path.mkdir(parents=True, exist_ok=True)

    def reload_config(self) -> None:
        """Reloads the configuration file.

        Raises:
            ConfigError: The file does not match the schema or the template version
            FileNotFoundError: The configured Graphviz directory does not exist
        """
        # Create config if nonexistent
        if not self.config_path.exists():
            with open(self.config_path, mode='wb') as cfg:
                cfg.write(self._config_template)

        with self.config_path.open(mode='r') as f:
            config = yaml.load(f)

        if not isinstance(config, dict):
            raise ConfigError(f'The configuration file "{self.config_path}" is not a mapping')
        # Skips the schema validation when nothing changed
        if config != self._config_cache:
            try:
                validate_config(config)
            except fastjsonschema.JsonSchemaException as exc:
                raise ConfigError(f'Invalid configuration file "{self.config_path}": {exc.message}') from exc
            self._config_cache = config

        template_load = yaml.load(self._config_template)
        if config['CONFIG_VER'] != template_load['CONFIG_VER']:
            raise ConfigError(
                f'Config version mismatch! Delete the old configuration file to regenerate {config["CONFIG_VER"]=} {template_load["CONFIG_VER"]=}')

        if config['GRAPHVIZ'] != 'path':
            if Path(config['GRAPHVIZ']).exists() and Path(config['GRAPHVIZ']).is_dir():
                os.environ["PATH"] += os.pathsep + str(Path(config['GRAPHVIZ']))
            else:
                raise FileNotFoundError(
                    f'The Graphviz binaries path does not exist: "{config["GRAPHVIZ"]}"')
        self.config = config

    def log(self, msg, level=logging.DEBUG):
        """Logging method for mpst-mixed.

        Args:
            msg (str): The message
            level (logging.DEBUG, logging.INFO, etc., optional): Logging level. Defaults to logging.DEBUG.
        """
        self.logger.log(level, f'{msg}')

    def echo(self, text: str = '') -> None:
        """Writes one line of command output to stdout."""
        typer.echo(text)

    # ---------------------------------------------------------------------------- #
    #                                    Helpers                                   #
    # ---------------------------------------------------------------------------- #
    def resolve(self, path: Path | str) -> Path:
        """Finds a protocol file, first as given and then under the projects path.

        Args:
            path (Path | str): Protocol path, ``.mscr`` is added when there is no suffix

        Raises:
            FileNotFoundError: No such file

        Returns:
            Path: Existing file
        """
        path = Path(path)
        if path.suffix == '':
            path = path.with_suffix(SUFFIX)
        for candidate in (path, self.projects_path / path):
            if candidate.is_file():
                return candidate
        raise FileNotFoundError(f'The specified protocol "{path}" could not be found!')

    def load_protocol(self, path: Path | str) -> Protocol:
        """Reads and parses a protocol file."""
        source = self.resolve(path)
        protocol = parse(source.read_text(encoding='utf-8'))
        self.log(f'Current protocol: "{protocol.name}" from "{source}"', logging.INFO)
        return protocol

    def bounds(self, max_states: int | None = None, depth: int | None = None,
               rec_bound: int | None = None, queue_bound: int | None = None) -> ExplorationBounds:
        """Exploration bounds from the configuration, overridden by the given values."""
        return ExplorationBounds(
            max_states=self.config['MAX_STATES'] if max_states is None else max_states,
            max_depth=self.config['MAX_DEPTH'] if depth is None else depth,
            rec_bound=self.config['REC_BOUND'] if rec_bound is None else rec_bound,
            queue_bound=self.config['QUEUE_BOUND'] if queue_bound is None else queue_bound,
        )

    @contextlib.contextmanager
    def exploring(self, title: str) -> Iterator[Callable[[int, int], None]]:
        """Transient progress bar fed by the exploration progress callback."""
        with Progress(disable=bool(self.quiet), transient=True, console=Console(stderr=True)) as progress:
            task = progress.add_task(f'[cyan]{title}', total=None)

            def update(states: int, depth: int) -> None:
                progress.update(task, completed=states, description=f'[cyan]{title}[/] depth {depth}')
            yield update

    def gate(self, protocol: Protocol, force: bool, strict: bool | None = None) -> None:
        """Stops the command unless the protocol passes validation.

        Args:
            protocol (Protocol): Parsed protocol
            force (bool): Skip validation
            strict (bool | None, optional): Strict mode, the configuration value when None

        Raises:
            typer.Exit: The protocol is rejected
        """
        if force:
            self.log(f'{protocol.name}: validation skipped with --force', logging.WARNING)
            return
        strict = self.config['STRICT'] if strict is None else strict
        report = validate(protocol, self.config['AWARENESS_MODE'], self.bounds(), strict, self.config['JOBS'])
        if report.overall == REJECT:
            for c in report.checks:
                for message in c.messages if not c.passed else ():
                    self.log(f'{c.name}: {message}', logging.ERROR)
            self.log(f'{protocol.name} is rejected, use --force to go on anyway', logging.ERROR)
            raise typer.Exit(EXIT_REJECT)

    def dump_graph(self, protocol: Protocol, bounds: ExplorationBounds, jobs: int, path: Path) -> None:
        """Writes the explored global transition system of a protocol as DOT."""
        committing = analyze_commitments(protocol.body, protocol.gc_labels()).as_mapping()
        with self.exploring(f'{protocol.name} global graph') as update:
            space = explore_global(protocol.body, bounds, committing, jobs, update)
        dump_global_graph(space, path, self.config)
        self.log(f'Wrote the global graph of {protocol.name} ({len(space)} states) to "{path}"', logging.INFO)

    def emit_report(self, doc: dict) -> None:
        """Validates a report document and writes it to stdout as JSON."""
        validate_report(doc)
        self.echo(json.dumps(doc, indent=2))

    def echo_validation(self, report: ValidationReport) -> None:
        """Human-readable validation report."""
        self.echo(f'protocol {report.protocol} ({report.mode})')
        for c in report.checks:
            self.echo(f'  {c.status:<13} {c.name}')
            for message in c.messages:
                self.echo(f'      {message}')
        if report.report is not None:
            for mc in report.report:
                self.echo(f'  mixed choice {mc.name}: committing {{{", ".join(sorted(mc.committing))}}}'
                          f' non-committing {{{", ".join(sorted(mc.noncommitting))}}}')
        self.echo(report.overall)

    def echo_verdict(self, verdict: Verdict, indent: str = '  ') -> None:
        """Human-readable verdict, wall time left out."""
        self.echo(f'{indent}{verdict.status:<13} {verdict.name:<16} {verdict.completeness:<11}'
                  f' states={verdict.states} edges={verdict.edges}')
        for message in verdict.messages:
            self.echo(f'{indent}    {message}')
        if verdict.counterexample:
            self.echo(f'{indent}    counterexample:')
            for n, (state, label) in enumerate(verdict.counterexample, start=1):
                self.echo(f'{indent}      {n}. {state}  --{label}-->')

    # ---------------------------------------------------------------------------- #
    #                                   Commands                                   #
    # ---------------------------------------------------------------------------- #
    def _check(self,
               file: Path = typer.Argument(..., help='Protocol file, also looked up in ./projects'),
               mode: Optional[str] = typer.Option(None, help='Awareness mode: syntactic or semantic'),
               as_json: bool = typer.Option(False, '--json', help='Print the report as JSON'),
               strict: Optional[bool] = typer.Option(None, '--strict/--no-strict', help='Reject on inconclusive checks'),
               depth: Optional[int] = typer.Option(None, help='Longest run explored by semantic awareness'),
               rec_bound: Optional[int] = typer.Option(None, help='Unfoldings of one recursion variable'),
               queue_bound: Optional[int] = typer.Option(None, help='Messages in transit between two roles'),
               max_states: Optional[int] = typer.Option(None, help='States explored before giving up'),
               jobs: Optional[int] = typer.Option(None, help='Worker threads'),
               dump_global_graph: Optional[Path] = typer.Option(None, help='Write the explored global graph as DOT')):
        """Validates a protocol: exit 0 accept, 1 reject, 2 inconclusive."""
        mode = mode or self.config['AWARENESS_MODE']
        if mode not in MODES:
            raise typer.BadParameter(f'Unknown mode {mode}, expected one of {MODES}', param_hint='--mode')
        strict = self.config['STRICT'] if strict is None else strict
        try:
            protocol = self.load_protocol(file)
        except ProtocolSyntaxError as exc:
            report = ValidationReport(Path(file).stem, mode, strict, (CheckResult('syntax', FAIL, (str(exc),)),))
            if as_json:
                self.emit_report(report.as_dict())
            else:
                self.echo(f'{REJECT}: {file}: {exc}')
            raise typer.Exit(EXIT_REJECT) from None

        bounds = self.bounds(max_states, depth, rec_bound, queue_bound)
        jobs = jobs or self.config['JOBS']
        report = validate(protocol, mode, bounds, strict, jobs)
        if as_json:
            self.emit_report(report.as_dict())
        else:
            self.echo_validation(report)
        if dump_global_graph is not None:
            self.dump_graph(protocol, bounds, jobs, dump_global_graph)
        raise typer.Exit(_EXIT_CODES[report.overall])

    def _project(self,
                 file: Path = typer.Argument(..., help='Protocol file, also looked up in ./projects'),
                 role: Optional[str] = typer.Option(None, help='Role to project onto, every role when omitted'),
                 style: str = typer.Option(SCRIBBLE, help='Rendering: scribble or math'),
                 force: bool = typer.Option(False, help='Skip validation')):
        """Prints the local behavior of one or every role."""
        if style not in STYLES:
            raise typer.BadParameter(f'Unknown style {style}, expected one of {STYLES}', param_hint='--style')
        protocol = self.load_protocol(file)
        if role is not None and role not in protocol.roles:
            raise typer.BadParameter(f'{role} is not a role of {protocol.name}', param_hint='--role')
        self.gate(protocol, force)
        roles_ = [role] if role is not None else list(protocol.roles)
        for r in roles_:
            local, _ = project(protocol.body, r)
            if style == MATH:
                self.echo(f'{r}: {render(local, MATH)}')
            else:
                if len(roles_) > 1:
                    self.echo(f'// {r}')
                self.echo(render(local, SCRIBBLE))

    def _efsm(self,
              file: Path = typer.Argument(..., help='Protocol file, also looked up in ./projects'),
              role: str = typer.Option(..., help='Role the machine runs as'),
              fmt: Optional[str] = typer.Option(None, '--format', help='dot, json, svg, png or pdf'),
              output: Optional[Path] = typer.Option(None, '--output', '-o', help='Output file'),
              force: bool = typer.Option(False, help='Skip validation')):
        """Compiles the projection onto one role into an event-driven state machine."""
        fmt = fmt or self.config['OUTPUT_FORMAT']
        if fmt not in FORMATS:
            raise typer.BadParameter(f'Unknown format {fmt}, expected one of {FORMATS}', param_hint='--format')
        protocol = self.load_protocol(file)
        if role not in protocol.roles:
            raise typer.BadParameter(f'{role} is not a role of {protocol.name}', param_hint='--role')
        self.gate(protocol, force)

        committing = analyze_commitments(protocol.body, protocol.gc_labels()).as_mapping()
        machine = compile_efsm(project(protocol.body, role)[0], role, committing)
        if output is None and fmt in (DOT, JSON):
            typer.echo(emit(machine, fmt, self.config), nl=False)
            return
        target = output or self.output_path / f'{protocol.name}_{role}.{fmt}'
        if fmt in IMAGE_FORMATS:
            path = render_efsm(machine, target.stem, target.parent, fmt, self.config)
        else:
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(emit(machine, fmt, self.config), encoding='utf-8')
            path = target
        self.log(f'Wrote the EFSM of {role} to "{path}"', logging.INFO)

    def _simulate(self,
                  file: Path = typer.Argument(..., help='Protocol file, also looked up in ./projects'),
                  seed: int = typer.Option(0, help='Scheduler seed'),
                  max_steps: int = typer.Option(100, help='Step limit'),
                  trace: Optional[Path] = typer.Option(None, help='Also write the trace log to this file'),
                  erlang_priority: bool = typer.Option(False, help='Prefer receives and purges over sends'),
                  force: bool = typer.Option(False, help='Skip validation')):
        """Runs the derived system under a seeded random scheduler."""
        protocol = self.load_protocol(file)
        self.gate(protocol, force)
        run = simulate_protocol(protocol, seed, max_steps, erlang_priority)
        for line in run.lines():
            self.echo(line)
        if trace is not None:
            self.log(f'Wrote the trace to "{run.write(trace)}"', logging.INFO)
        if run.outcome == STUCK:
            raise typer.Exit(EXIT_REJECT)

    def _verify(self,
                file: Path = typer.Argument(..., help='Protocol file, also looked up in ./projects'),
                depth: Optional[int] = typer.Option(None, help='Longest run explored'),
                rec_bound: Optional[int] = typer.Option(None, help='Unfoldings of one recursion variable'),
                queue_bound: Optional[int] = typer.Option(None, help='Messages in transit between two roles'),
                max_states: Optional[int] = typer.Option(None, help='States explored before giving up'),
                skip: Optional[list[str]] = typer.Option(None, help='Check to leave out, repeatable: '
                                                         'correspondence (corr), progress, omf, invariants'),
                as_json: bool = typer.Option(False, '--json', help='Print the report as JSON'),
                strict: Optional[bool] = typer.Option(None, '--strict/--no-strict', help='Fail on inconclusive checks'),
                jobs: Optional[int] = typer.Option(None, help='Worker threads'),
                dump_global_graph: Optional[Path] = typer.Option(None, help='Write the explored global graph as DOT'),
                force: bool = typer.Option(False, help='Skip validation')):
        """Runs the bounded verification suite: exit 0 when every check passes."""
        skipped = [SKIP_ALIASES.get(s, s) for s in skip or []]
        unknown = sorted(set(skipped) - set(CHECKS))
        if unknown:
            raise typer.BadParameter(f'Unknown check(s) {unknown}, expected some of {CHECKS}', param_hint='--skip')
        strict = self.config['STRICT'] if strict is None else strict
        protocol = self.load_protocol(file)
        self.gate(protocol, force, strict)

        bounds = self.bounds(max_states, depth, rec_bound, queue_bound)
        jobs = jobs or self.config['JOBS']
        with self.exploring(protocol.name) as update:
            verdicts = verify_all(protocol.body, bounds, skipped, gc_labels=protocol.gc_labels(), jobs=jobs,
                                  progress=update)
        for v in verdicts:
            self.log(f'{v.name}: {v.status} in {v.seconds:.2f}s')
        report = VerificationReport(protocol.name, tuple(verdicts), bounds, strict)
        if as_json:
            self.emit_report(report.as_dict())
        else:
            self.echo(f'protocol {protocol.name}')
            for v in verdicts:
                self.echo_verdict(v)
                for part in v.parts:
                    self.echo_verdict(part, '      ')
            self.echo(report.overall)
        if report.overall == INCONCLUSIVE:
            self.log(f'{protocol.name}: some checks were inconclusive within the bounds', logging.WARNING)
        if dump_global_graph is not None:
            self.dump_graph(protocol, bounds, jobs, dump_global_graph)
        raise typer.Exit(_EXIT_CODES[report.overall])

    def _list(self):
        """Lists the protocols under ./projects with their expected verdicts."""
        table = Table(title=f'{self.projects_path.as_posix()}', title_justify='left')
        table.add_column('Protocol file')
        table.add_column('Expected')
        table.add_column('Check')
        for path in sorted(self.projects_path.glob(f'**/*{SUFFIX}')):
            found = EXPECT_RE.search(path.read_text(encoding='utf-8'))
            table.add_row(path.relative_to(self.projects_path).as_posix(),
                          found['verdict'] if found else '-',
                          (found['check'] or '') if found else '')
        self.console.print(table)

    def _callback(self,
                  quiet: Optional[bool] = typer.Option(False, '--quiet', '-q', help='Disable logging'),
                  config: Optional[Path] = typer.Option(None, help='Configuration file path')):
        """Validation, projection, EFSM compilation and bounded verification of mixed choice protocols."""
        self.quiet = bool(quiet)
        self.logger.setLevel(logging.CRITICAL + 1 if quiet else logging.NOTSET)

        if config:
            config = Path(config).absolute()
            if config.is_file() and config.exists():
                self.config_path = Path(config).resolve()
                self.reload_config()
            else:
                raise FileNotFoundError(
                    f'Specified configuration path "{config}" is invalid or does not exist.')

    def app(self) -> typer.Typer:
        """The typer application bound to this context."""
        app = typer.Typer(add_completion=False, no_args_is_help=True)
        app.callback()(self._callback)
        app.command('check')(self._check)
        app.command('project')(self._project)
        app.command('efsm')(self._efsm)
        app.command('simulate')(self._simulate)
        app.command('verify')(self._verify)
        app.command('list')(self._list)
        return app

    def main(self, argv: Sequence[str] | None = None) -> int:
        """Runs one command line and maps its outcome to an exit code.

        Args:
            argv (Sequence[str] | None, optional): Arguments, ``sys.argv[1:]`` when None

        Returns:
            int: 0 accept or pass, 1 reject or fail, 2 inconclusive, 64 usage error, 66 missing input
        """
        self.running_from = 'DIRECT'
        command = typer.main.get_command(self.app())
        try:
            code = command.main(args=list(argv) if argv is not None else None, prog_name='mixed',
                                standalone_mode=False)
        except click.UsageError as exc:
            exc.show()
            return EXIT_USAGE
        except click.Abort:
            return EXIT_REJECT
        except ProtocolSyntaxError as exc:
            exc.add_note(self.running_from)
            self.log(f'{REJECT}: {exc}', logging.ERROR)
            return EXIT_REJECT
        except ConfigError as exc:
            exc.add_note(self.running_from)
            self.log(str(exc), logging.ERROR)
            return EXIT_USAGE
        except (OSError, graphviz.ExecutableNotFound) as exc:
            exc.add_note(self.running_from)
            self.log(str(exc), logging.ERROR)
            return EXIT_NOINPUT
        except MixedError as exc:
            exc.add_note(self.running_from)
            self.log(f'{type(exc).__name__}: {exc}', logging.ERROR)
            return EXIT_REJECT
        return code if isinstance(code, int) else EXIT_OK


def run_cli():
    """Runs the CLI."""
    try:
        cli = ProgramContext()
    except ConfigError as exc:
        logging.getLogger('rich').error(str(exc))
        sys.exit(EXIT_USAGE)
    sys.exit(cli.main())


if __name__ == '__main__':
    run_cli()
