"""Witness-based tangle bounds for three-qubit states."""

from ._tanglebound import *  # noqa: F401,F403

__version__ = "0.1.0"
