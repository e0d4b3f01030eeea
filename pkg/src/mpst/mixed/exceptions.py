"""Exceptions for mpst-mixed."""

from __future__ import annotations


class MixedError(Exception):
    """Base exception for mpst-mixed."""
    pass


class ProtocolSyntaxError(MixedError):
    """Error while parsing a protocol source."""

    def __init__(self, msg: str, line: int = 0, column: int = 0) -> None:
        """Stores the source position next to the message.

        Args:
            msg (str): Description of the error
            line (int, optional): 1-based line. Defaults to 0 (unknown).
            column (int, optional): 1-based column. Defaults to 0 (unknown).
        """
        super().__init__(f'{msg} (line {line}, column {column})' if line else msg)
        self.line = line
        self.column = column


class ProtocolShapeError(ProtocolSyntaxError):
    """Mixed choice whose sides do not start with an observer pair q->p / p->q."""
    pass


class ScopeError(ProtocolSyntaxError):
    """Undeclared role, unbound continue, shadowed rec or duplicate MC name."""
    pass


class MalformedTypeError(MixedError):
    """Syntax tree that breaks a constructor invariant."""
    pass


class CommitAnalysisError(MixedError):
    """Error while computing committing sets."""
    pass


class ProjectionError(MixedError):
    """Global type that cannot be projected onto a role."""

    def __init__(self, msg: str, role: str | None = None) -> None:
        """Stores the role the projection failed for.

        Args:
            msg (str): Description of the error
            role (str | None, optional): Role being projected. Defaults to None.
        """
        super().__init__(f'[{role}] {msg}' if role else msg)
        self.role = role


class InvariantViolation(MixedError):
    """Internal invariant broken, never caused by user input."""
    pass


class EfsmError(MixedError):
    """Local type that cannot be compiled into an EFSM."""
    pass


class ConfigError(MixedError):
    """Invalid configuration file."""
    pass
