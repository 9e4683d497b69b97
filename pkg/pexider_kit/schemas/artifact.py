from pydantic import BaseModel, Field, model_validator
from typing import Any, Dict, List, Literal, Optional, Tuple

from pexider_kit.schemas.config import ProfilesBuild
from pexider_kit.schemas.reports import ResidualReport


class Provenance(BaseModel):
    package: str
    version: str
    command: str
    family: Optional[str] = None
    seed: int = 0
    config_sha256: str


class SampledFunction(BaseModel):
    """Values and exact slopes of one function at increasing nodes covering its closed domain"""
    name: str
    domain: Tuple[float, float]
    x: List[float] = Field(min_length=2)
    value: List[float]
    slope: List[float]

    @model_validator(mode="after")
    def check_lengths(self):
        if not len(self.x) == len(self.value) == len(self.slope):
            raise ValueError(f"{self.name}: x, value and slope differ in length")
        return self


class SolutionArtifact(BaseModel):
    schema_version: Literal[1] = 1
    provenance: Provenance
    family: str
    regime: Literal["Affine", "PartiallyAffine", "NowhereAffine"]
    I: Tuple[float, float]
    sumset: Tuple[float, float]
    functions: Dict[str, SampledFunction]
    params: Dict[str, Any] = Field(default_factory=dict)
    profiles: Optional[ProfilesBuild] = None
    residual: Optional[ResidualReport] = None
    bound: float
    config: Dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def check_functions(self):
        missing = {"F", "f1", "f2", "g1", "g2", "G"} - set(self.functions)
        if missing:
            raise ValueError(f"artifact lacks functions: {sorted(missing)}")
        return self
