"""Exact computations in the lowest two-sided cell of rank-3 weighted Coxeter groups."""

from .cache import CacheStore
from .cells import CellAtlas, CellGeometry
from .coxeter import ClassificationReport, Element, Group, GroupBall, GroupConfig
from .errors import (
    ConfigError,
    DomainError,
    InvariantViolation,
    LowcellError,
    NodeCapExceeded,
    OutOfBallError,
)
from .hecke import HeckeAlgebra, HeckeElement
from .jring import JElement, JRing, Prop42Result
from .klbasis import KLTable
from .laurent import LaurentPoly
from .verify import SuiteReport, run_all, run_suite

__all__ = [
    "CacheStore",
    "CellAtlas",
    "CellGeometry",
    "ClassificationReport",
    "ConfigError",
    "DomainError",
    "Element",
    "Group",
    "GroupBall",
    "GroupConfig",
    "HeckeAlgebra",
    "HeckeElement",
    "InvariantViolation",
    "JElement",
    "JRing",
    "KLTable",
    "LaurentPoly",
    "LowcellError",
    "NodeCapExceeded",
    "OutOfBallError",
    "Prop42Result",
    "SuiteReport",
    "run_all",
    "run_suite",
]

__version__ = "0.1.0"
