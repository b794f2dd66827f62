"""Variational minimizers and their regularity diagnostics."""

from ._varlab import *  # noqa: F401,F403
