"""Rational-inattention delegation toolkit (C++ core)."""

from ._ridel import *  # noqa: F401,F403
from ._ridel import InvalidInput, NonConvergence  # noqa: F401

__version__ = "0.1.0"
