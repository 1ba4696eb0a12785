"""Generalized Turing machines for computable analysis.

Machines whose tapes hold elements of arbitrary carrier sets, the naming
systems that connect them to symbol sequences, and tools for checking that
symbol-level machines realize abstract ones.
"""

from .errors import GTMError
from .machine import Machine, MultiFunction, TestFunction, enumerate_outcomes, run, step
from .names import Stream
from .dsl import parse, render, validate

__all__ = [
    "GTMError", "Machine", "MultiFunction", "TestFunction", "Stream",
    "enumerate_outcomes", "parse", "render", "run", "step", "validate",
]
__version__ = "0.1.0"
