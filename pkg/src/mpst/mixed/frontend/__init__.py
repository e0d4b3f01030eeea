"""Protocol language front end: parsing, desugaring and rendering."""
# flake8: noqa

from mpst.mixed.frontend.parser import parse
from mpst.mixed.frontend.protocol import (EXPLICIT_OBSERVER, FAILED_ROLE,
                                          Protocol, Site, SourceAnnotation)
from mpst.mixed.frontend.render import (MATH, SCRIBBLE, STYLES, render,
                                        render_protocol, render_system)

__all__ = ['parse', 'EXPLICIT_OBSERVER', 'FAILED_ROLE', 'Protocol', 'Site', 'SourceAnnotation',
           'MATH', 'SCRIBBLE', 'STYLES', 'render', 'render_protocol', 'render_system']
