from pydantic import AfterValidator, BaseModel, Field
from typing import Annotated, List, Literal, Optional, Tuple, Union

from pexider_kit.schemas.functions import FunctionSpec


def _check_interval(value: Tuple[float, float]) -> Tuple[float, float]:
    lo, hi = value
    if not lo < hi:
        raise ValueError(f"interval ]{lo}, {hi}[ is empty")
    return value


Interval = Annotated[Tuple[float, float], AfterValidator(_check_interval)]


class _ConfigBase(BaseModel):
    class Config:
        extra = "forbid"


# Build specs, one per family

class AffineBuild(_ConfigBase):
    family: Literal["affine"] = "affine"
    I: Interval
    A: float
    alpha: float = 0.0
    B: float
    beta1: float = 0.0
    beta2: float = 0.0
    g1: FunctionSpec
    g2: FunctionSpec


class PartialBuild(_ConfigBase):
    family: Literal["partial"] = "partial"
    I: Interval
    K: Tuple[float, float]
    A: float
    B: float
    C_minus: float = 0.0
    C_plus: float = 0.0
    D_minus: float = 1.0
    D_plus: float = 1.0
    alpha: float = 0.0
    beta1: float = 0.0
    beta2: float = 0.0
    gamma1_minus: float = 0.0
    gamma2_minus: float = 0.0
    gamma1_plus: float = 0.0
    gamma2_plus: float = 0.0
    delta1_minus: float = 0.0
    delta2_minus: float = 0.0
    delta1_plus: float = 0.0
    delta2_plus: float = 0.0
    F_minus: Optional[FunctionSpec] = None
    F_plus: Optional[FunctionSpec] = None
    g1_mid: Optional[FunctionSpec] = None
    g2_mid: Optional[FunctionSpec] = None


class ExampleBuild(_ConfigBase):
    family: Literal["paper-example"] = "paper-example"


class AnchorsModel(_ConfigBase):
    x0: Optional[float] = None
    F0: float = 0.0
    f10: float = 0.0
    f20: float = 0.0
    g10: float = 0.0
    g20: float = 0.0


class ProfilesBuild(_ConfigBase):
    family: Literal["profiles"] = "profiles"
    case: Literal["trig", "linear", "hyperbolic", "constant", "trig-zero", "linear-zero", "hyperbolic-zero"]
    I: Interval
    a: float
    b: float
    c: float = 0.0
    d: float = 0.0
    gamma: float = 0.0
    lam: float = 0.0
    nu: float = 0.0
    phi: Optional[FunctionSpec] = None
    anchors: AnchorsModel = Field(default_factory=AnchorsModel)
    quad_tol: Optional[float] = Field(default=None, gt=0)
    grid_size: Optional[int] = Field(default=None, ge=16)


BuildSpec = Annotated[
    Union[AffineBuild, PartialBuild, ExampleBuild, ProfilesBuild],
    Field(discriminator="family"),
]


# Run-level sections

class GridModel(_ConfigBase):
    n: Optional[int] = Field(default=None, ge=2)
    margin: Optional[float] = Field(default=None, ge=0)
    sampling: Literal["uniform", "stratified"] = "uniform"


class TolerancesModel(_ConfigBase):
    residual_bound: Optional[float] = Field(default=None, gt=0)
    classify_tol: Optional[float] = Field(default=None, gt=0)
    classify_n: Optional[int] = Field(default=None, ge=16)


class OutputModel(_ConfigBase):
    path: Optional[str] = None
    samples: Optional[int] = Field(default=None, ge=2)
    export_n: int = Field(default=201, ge=2)
    export_margin: float = Field(default=1e-6, ge=0)


class GeometryModel(_ConfigBase):
    I: Interval
    H: Interval
    g1: FunctionSpec
    g2: FunctionSpec
    points: List[float] = Field(default_factory=list)


class SelftestModel(_ConfigBase):
    instances: int = Field(default=100, ge=1)
    n: int = Field(default=100, ge=2)


class RunConfig(_ConfigBase):
    """Top-level run configuration file"""
    schema_version: Literal[1] = 1
    build: Optional[BuildSpec] = None
    grid: GridModel = Field(default_factory=GridModel)
    tolerances: TolerancesModel = Field(default_factory=TolerancesModel)
    output: OutputModel = Field(default_factory=OutputModel)
    geometry: Optional[GeometryModel] = None
    selftest: SelftestModel = Field(default_factory=SelftestModel)
    seed: int = 0
