"""Quantum rotor under Caldeira-Leggett dissipation, on a truncated momentum basis."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
