from pydantic import BaseModel, Field
from typing import Any, Dict, List, Literal, Optional, Tuple

from pexider_kit.core.intervals import OpenInterval


class GridSpec(BaseModel):
    n: int = Field(ge=2)
    margin: float = Field(ge=0)
    sampling: Literal["uniform", "stratified"] = "uniform"
    seed: Optional[int] = None


class ResidualReport(BaseModel):
    label: str
    max_abs: float
    mean_abs: float
    worst_point: Tuple[float, float]
    samples: int
    margin: float
    grid: GridSpec
    bound: Optional[float] = None

    @property
    def passed(self) -> bool:
        return self.bound is None or self.max_abs < self.bound

    def with_bound(self, bound: float) -> "ResidualReport":
        return self.model_copy(update={"bound": bound})


class AffineInterval(BaseModel):
    interval: OpenInterval
    slope: float
    intercept: float
    samples: int


class AffinityReport(BaseModel):
    intervals: List[AffineInterval]
    tolerance: float
    threshold: float
    samples: int
    verdict: Literal["GloballyAffine", "PartiallyAffine", "NowhereAffine"]


class ConstraintCheck(BaseModel):
    identity: str
    lhs: float
    rhs: float
    passed: bool
    side: Optional[Literal["-", "+"]] = None
    k: Optional[int] = None


class IntervalSetReport(BaseModel):
    H: OpenInterval
    I: OpenInterval
    ext: Optional[OpenInterval] = None
    ref: Optional[OpenInterval] = None
    star: Optional[OpenInterval] = None
    side_minus: Optional[OpenInterval] = None
    side_plus: Optional[OpenInterval] = None
    restricted: Dict[str, Optional[OpenInterval]] = Field(default_factory=dict)


class SelftestCheck(BaseModel):
    name: str
    passed: bool
    detail: Dict[str, Any] = Field(default_factory=dict)


class SelftestReport(BaseModel):
    seed: int
    checks: List[SelftestCheck]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)
