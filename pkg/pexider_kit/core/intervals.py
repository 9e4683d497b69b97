"""
Open real intervals with finite endpoints
"""
from dataclasses import dataclass
from typing import Optional, Tuple
import math

import numpy as np

from pexider_kit.config import get_settings
from pexider_kit.core.exceptions import GeometryError

settings = get_settings()


@dataclass(frozen=True)
class OpenInterval:
    """The interval ]lo, hi[ with lo < hi, both finite"""

    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise GeometryError(f"Interval endpoints must be finite, got ]{self.lo}, {self.hi}[")
        if not self.lo < self.hi:
            raise GeometryError(f"Empty interval ]{self.lo}, {self.hi}[")
        object.__setattr__(self, "lo", float(self.lo))
        object.__setattr__(self, "hi", float(self.hi))

    @property
    def length(self) -> float:
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def default_margin(self) -> float:
        """Interior margin used by evaluators when none is requested"""
        return settings.INTERIOR_MARGIN_REL * self.length

    def contains_point(self, x: float, margin: float = 0.0) -> bool:
        return self.lo + margin <= x <= self.hi - margin

    def contains(self, other: "OpenInterval", slack: float = 0.0) -> bool:
        """other ⊆ self up to slack on both endpoints"""
        return other.lo >= self.lo - slack and other.hi <= self.hi + slack

    def strictly_contains(self, other: "OpenInterval", slack: float = 0.0) -> bool:
        """other ⊊ self: contained, and at least one endpoint reaches further out by more than slack"""
        return self.contains(other, slack) and (self.lo < other.lo - slack or self.hi > other.hi + slack)

    def intersect(self, other: "OpenInterval", slack: Optional[float] = None) -> Optional["OpenInterval"]:
        slack = settings.EMPTY_SLACK if slack is None else slack
        return make_interval(max(self.lo, other.lo), min(self.hi, other.hi), slack)

    def __add__(self, other: "OpenInterval") -> "OpenInterval":
        """Minkowski sum"""
        return OpenInterval(self.lo + other.lo, self.hi + other.hi)

    def __sub__(self, other: "OpenInterval") -> "OpenInterval":
        """Minkowski difference {a - b}"""
        return OpenInterval(self.lo - other.hi, self.hi - other.lo)

    def shifted(self, t: float) -> "OpenInterval":
        return OpenInterval(self.lo + t, self.hi + t)

    def scaled(self, c: float) -> "OpenInterval":
        if c == 0:
            raise GeometryError("Cannot scale an interval by zero")
        a, b = c * self.lo, c * self.hi
        return OpenInterval(min(a, b), max(a, b))

    def half_sum(self, other: "OpenInterval") -> "OpenInterval":
        """½(self + other)"""
        return OpenInterval(0.5 * (self.lo + other.lo), 0.5 * (self.hi + other.hi))

    def shrink(self, margin: float) -> Tuple[float, float]:
        """Closed box [lo + margin, hi - margin]"""
        if 2 * margin >= self.length:
            raise GeometryError(f"Margin {margin} swallows ]{self.lo}, {self.hi}[")
        return self.lo + margin, self.hi - margin

    def grid(self, n: int, margin: Optional[float] = None) -> np.ndarray:
        """n uniform points on the margin-shrunk closed box"""
        margin = self.default_margin if margin is None else margin
        a, b = self.shrink(margin)
        return np.linspace(a, b, n)

    def as_tuple(self) -> Tuple[float, float]:
        return (self.lo, self.hi)

    def __str__(self) -> str:
        return f"]{self.lo:.12g}, {self.hi:.12g}["


def make_interval(lo: float, hi: float, slack: Optional[float] = None) -> Optional[OpenInterval]:
    """Build ]lo, hi[ or return None when it is shorter than the emptiness slack"""
    slack = settings.EMPTY_SLACK if slack is None else slack
    if hi - lo <= slack:
        return None
    return OpenInterval(lo, hi)
