"""JSON Schema validators for the configuration file and the JSON documents mpst-mixed writes."""

from __future__ import annotations

import functools
import pkgutil
from typing import TYPE_CHECKING

import fastjsonschema  # type: ignore
import ruamel.yaml as ruamel  # type: ignore

if TYPE_CHECKING:
    from collections.abc import Callable

yaml = ruamel.YAML(typ='safe', pure=True)


@functools.cache
def _validator(resource: str) -> Callable[[object], object]:
    return fastjsonschema.compile(yaml.load(pkgutil.get_data('mpst.mixed', resource)))  # type: ignore


def validate_config(loaded: dict) -> bool:
    """Validates the configuration dictionary inputted.

    Args:
        loaded (dict): Configuration file as a dictionary

    Returns:
        bool: True
    """
    _validator('resources/config_schema.json')(loaded)
    return True


def validate_report(loaded: dict) -> bool:
    """Validates a validation or verification report before it is written.

    Args:
        loaded (dict): Report as a dictionary

    Returns:
        bool: True
    """
    _validator('resources/report_schema.json')(loaded)
    return True


def validate_efsm(loaded: dict) -> bool:
    """Validates an ``efsm/1`` document.

    Args:
        loaded (dict): EFSM document as a dictionary

    Returns:
        bool: True
    """
    _validator('resources/efsm_schema.json')(loaded)
    return True
