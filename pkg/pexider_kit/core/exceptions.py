"""
Error hierarchy shared by the numerical core and the CLI
"""
from typing import Any, List, Optional, Tuple


class PexiderError(Exception):
    """Base class for every error raised by the toolkit"""


class DomainError(PexiderError, ValueError):
    """Evaluation requested outside the admissible part of a domain"""

    def __init__(self, message: str, x: Optional[float] = None, domain: Any = None):
        super().__init__(message)
        self.x = x
        self.domain = domain


class RangeError(PexiderError, ValueError):
    """Target lies outside the image of a function or outside a sumset"""

    def __init__(self, message: str, y: Optional[float] = None, image: Any = None):
        super().__init__(message)
        self.y = y
        self.image = image


class MonotonicityError(PexiderError, ValueError):
    """A function expected to be strictly monotone is not"""


class GeometryError(PexiderError, ValueError):
    """Inconsistent interval input (H not inside I, opposite senses, ...)"""


class QuadratureError(PexiderError, ArithmeticError):
    """Adaptive quadrature did not reach the requested tolerance"""


class ConstraintError(PexiderError, ValueError):
    """Constant set violates the partially affine constraint identities"""

    def __init__(self, message: str, failures: Optional[List[Any]] = None):
        super().__init__(message)
        self.failures = failures or []


class ContinuityError(PexiderError, ValueError):
    """Pieces do not meet at a junction"""


class DegeneracyError(PexiderError, ValueError):
    """Profile constants are degenerate (ad - bc = 0, a = 0, ...)"""


class RegimeError(PexiderError, ValueError):
    """Reconstructed derivatives leave the admissible regime"""


class CoverageError(PexiderError, ValueError):
    """Sub-sumsets fail to cover the sumset or disagree on an overlap"""


class SpecError(PexiderError, ValueError):
    """Case specification violates its preconditions"""


class EvaluationError(PexiderError, ValueError):
    """A residual grid point could not be evaluated"""

    def __init__(self, message: str, point: Optional[Tuple[float, float]] = None):
        super().__init__(message)
        self.point = point


class ArtifactError(PexiderError, ValueError):
    """Artifact file is unreadable or inconsistent"""


class OutputError(PexiderError, OSError):
    """Report, artifact or data file could not be written"""


class ConfigError(PexiderError, ValueError):
    """Run configuration is unreadable or lacks a section the command needs"""
