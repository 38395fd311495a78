"""Numerical model of the photonic J1-J2 tetramer quantum simulation."""

from ._vbsim import *  # noqa: F401,F403
from ._vbsim import __version__  # noqa: F401
