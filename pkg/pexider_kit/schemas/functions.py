from pydantic import BaseModel, Field, field_validator, model_validator
from typing import Annotated, List, Literal, Tuple, Union


class _FunctionBase(BaseModel):
    class Config:
        extra = "forbid"


class AffineFn(_FunctionBase):
    """slope·x + intercept"""
    kind: Literal["affine"] = "affine"
    slope: float
    intercept: float = 0.0


class PolynomialFn(_FunctionBase):
    """Ascending coefficients c0 + c1·x + c2·x² + ..."""
    kind: Literal["polynomial"] = "polynomial"
    coefficients: List[float] = Field(min_length=1)


class ExpFn(_FunctionBase):
    """scale·exp(rate·x + shift) + offset"""
    kind: Literal["exp"] = "exp"
    scale: float = 1.0
    rate: float = 1.0
    shift: float = 0.0
    offset: float = 0.0


class LogFn(_FunctionBase):
    """scale·log(a·x + b) + offset"""
    kind: Literal["log"] = "log"
    scale: float = 1.0
    a: float = 1.0
    b: float = 0.0
    offset: float = 0.0


class TrigFn(_FunctionBase):
    """p·sin(κx) + q·cos(κx) + offset"""
    kind: Literal["trig"] = "trig"
    p: float = 1.0
    q: float = 0.0
    kappa: float = 1.0
    offset: float = 0.0


class HyperbolicFn(_FunctionBase):
    """p·sinh(κx) + q·cosh(κx) + offset"""
    kind: Literal["hyperbolic"] = "hyperbolic"
    p: float = 1.0
    q: float = 0.0
    kappa: float = 1.0
    offset: float = 0.0


class RationalFn(_FunctionBase):
    """numerator(x) / denominator(x), both with ascending coefficients"""
    kind: Literal["rational"] = "rational"
    numerator: List[float] = Field(min_length=1)
    denominator: List[float] = Field(min_length=1)


class PieceSpec(_FunctionBase):
    lo: float
    hi: float
    fn: "ClosedFunctionSpec"

    @model_validator(mode="after")
    def check_order(self):
        if not self.lo < self.hi:
            raise ValueError(f"piece [{self.lo}, {self.hi}] has no length")
        return self


class PiecewiseFn(_FunctionBase):
    """Closed-form pieces tiling [pieces[0].lo, pieces[-1].hi]"""
    kind: Literal["piecewise"] = "piecewise"
    pieces: List[PieceSpec] = Field(min_length=1)

    @field_validator("pieces")
    @classmethod
    def check_tiling(cls, pieces: List[PieceSpec]) -> List[PieceSpec]:
        for left, right in zip(pieces, pieces[1:]):
            if left.hi != right.lo:
                raise ValueError(f"pieces must tile: {left.hi} != {right.lo}")
        return pieces

    @property
    def span(self) -> Tuple[float, float]:
        return self.pieces[0].lo, self.pieces[-1].hi


ClosedFunctionSpec = Annotated[
    Union[AffineFn, PolynomialFn, ExpFn, LogFn, TrigFn, HyperbolicFn, RationalFn],
    Field(discriminator="kind"),
]

FunctionSpec = Annotated[
    Union[AffineFn, PolynomialFn, ExpFn, LogFn, TrigFn, HyperbolicFn, RationalFn, PiecewiseFn],
    Field(discriminator="kind"),
]

PieceSpec.model_rebuild()
