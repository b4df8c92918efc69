"""Runge-Kutta error bounds and shot-noise resource budgets."""

from ._rkbudget import *  # noqa: F401,F403
from ._rkbudget import InfeasibleBudget, SingularMatrixError  # noqa: F401

__version__ = "0.1.0"
