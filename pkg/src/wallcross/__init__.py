"""Exact wall-crossing workbench for Lawrence toric and hypertoric DM stacks."""

from .errors import WallcrossError
from .gitchambers import GitData, StabilityVector

__all__ = ["GitData", "StabilityVector", "WallcrossError"]
__version__ = "0.1.0"
