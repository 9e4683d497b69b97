"""
FunctionSpec (config data) -> Fn1D
"""
import logging

from pexider_kit.core.exceptions import SpecError
from pexider_kit.core.expressions import (
    Const,
    Exp,
    Expr,
    Log,
    Poly,
    Quotient,
    hyperbolic_combination,
    trig_combination,
)
from pexider_kit.core.intervals import OpenInterval
from pexider_kit.core.piecewise_fn import ClosedForm, Fn1D, Transported
from pexider_kit.schemas.functions import (
    AffineFn,
    ExpFn,
    HyperbolicFn,
    LogFn,
    PiecewiseFn,
    PolynomialFn,
    RationalFn,
    TrigFn,
)

logger = logging.getLogger(__name__)


def to_expr(spec) -> Expr:
    """Expression tree of a closed-form spec"""
    if isinstance(spec, AffineFn):
        return Poly((spec.intercept, spec.slope))
    elif isinstance(spec, PolynomialFn):
        return Poly(tuple(spec.coefficients))
    elif isinstance(spec, ExpFn):
        return Const(spec.scale) * Exp(spec.rate, spec.shift) + spec.offset
    elif isinstance(spec, LogFn):
        return Const(spec.scale) * Log(spec.a, spec.b) + spec.offset
    elif isinstance(spec, TrigFn):
        return trig_combination(spec.p, spec.q, spec.kappa) + spec.offset
    elif isinstance(spec, HyperbolicFn):
        return hyperbolic_combination(spec.p, spec.q, spec.kappa) + spec.offset
    elif isinstance(spec, RationalFn):
        return Quotient(Poly(tuple(spec.numerator)), Poly(tuple(spec.denominator)))
    raise SpecError(f"Unknown closed-form kind: {getattr(spec, 'kind', type(spec).__name__)}")


def build_fn(spec, domain: OpenInterval, name: str = "f") -> Fn1D:
    """
    Fn1D on domain from a function spec

    Piecewise specs are assembled on their own span and then restricted;
    the span must cover the requested domain.
    """
    if isinstance(spec, PiecewiseFn):
        lo, hi = spec.span
        span = OpenInterval(lo, hi)
        if not span.contains(domain):
            raise SpecError(f"{name}: pieces span {span} but {domain} is required")
        fn = Fn1D.from_pieces(span, [(p.lo, p.hi, ClosedForm(to_expr(p.fn))) for p in spec.pieces], name)
        if span == domain:
            return fn
        logger.debug(f"Restricting {name} from {span} to {domain}")
        return Fn1D.from_body(domain, Transported(fn), name)
    return Fn1D.from_expr(domain, to_expr(spec), name)
