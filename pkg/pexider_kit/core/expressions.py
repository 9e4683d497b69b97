"""
Closed-form expressions in one variable with exact derivatives

Expressions are small immutable trees over constants, polynomials,
sin/cos/sinh/cosh of κx, exp and log of affine arguments, sums, products
and quotients. Every node evaluates on numpy arrays and returns its
derivative as another expression; nothing here differentiates numerically.
"""
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Iterator, Tuple, Union

import numpy as np
from numpy.polynomial import Polynomial

Number = Union[int, float]


class Expr(ABC):
    """Base expression node"""

    @abstractmethod
    def __call__(self, x: np.ndarray) -> np.ndarray:
        ...

    @abstractmethod
    def derivative(self) -> "Expr":
        ...

    def denominators(self) -> Iterator["Expr"]:
        """Every quotient denominator reachable from this node"""
        return iter(())

    def __add__(self, other: Union["Expr", Number]) -> "Expr":
        return Sum((self, as_expr(other)))

    def __radd__(self, other: Number) -> "Expr":
        return Sum((as_expr(other), self))

    def __sub__(self, other: Union["Expr", Number]) -> "Expr":
        return Sum((self, Product(Const(-1.0), as_expr(other))))

    def __rsub__(self, other: Number) -> "Expr":
        return Sum((as_expr(other), Product(Const(-1.0), self)))

    def __mul__(self, other: Union["Expr", Number]) -> "Expr":
        return Product(self, as_expr(other))

    def __rmul__(self, other: Number) -> "Expr":
        return Product(as_expr(other), self)

    def __truediv__(self, other: Union["Expr", Number]) -> "Expr":
        return Quotient(self, as_expr(other))

    def __neg__(self) -> "Expr":
        return Product(Const(-1.0), self)


def as_expr(value: Union[Expr, Number]) -> Expr:
    if isinstance(value, Expr):
        return value
    return Const(float(value))


@dataclass(frozen=True)
class Const(Expr):
    c: float

    def __call__(self, x):
        return np.full(np.shape(x), self.c, dtype=float)

    def derivative(self):
        return Const(0.0)


@dataclass(frozen=True)
class Poly(Expr):
    """Polynomial with ascending coefficients"""

    coefficients: Tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(float(c) for c in self.coefficients) or (0.0,))

    @property
    def polynomial(self) -> Polynomial:
        return Polynomial(self.coefficients)

    def __call__(self, x):
        return self.polynomial(np.asarray(x, dtype=float))

    def derivative(self):
        return Poly(tuple(self.polynomial.deriv().coef))


@dataclass(frozen=True)
class Sin(Expr):
    """sin(κx)"""

    kappa: float = 1.0

    def __call__(self, x):
        return np.sin(self.kappa * np.asarray(x, dtype=float))

    def derivative(self):
        return Product(Const(self.kappa), Cos(self.kappa))


@dataclass(frozen=True)
class Cos(Expr):
    """cos(κx)"""

    kappa: float = 1.0

    def __call__(self, x):
        return np.cos(self.kappa * np.asarray(x, dtype=float))

    def derivative(self):
        return Product(Const(-self.kappa), Sin(self.kappa))


@dataclass(frozen=True)
class Sinh(Expr):
    """sinh(κx)"""

    kappa: float = 1.0

    def __call__(self, x):
        return np.sinh(self.kappa * np.asarray(x, dtype=float))

    def derivative(self):
        return Product(Const(self.kappa), Cosh(self.kappa))


@dataclass(frozen=True)
class Cosh(Expr):
    """cosh(κx)"""

    kappa: float = 1.0

    def __call__(self, x):
        return np.cosh(self.kappa * np.asarray(x, dtype=float))

    def derivative(self):
        return Product(Const(self.kappa), Sinh(self.kappa))


@dataclass(frozen=True)
class Exp(Expr):
    """exp(rate·x + shift)"""

    rate: float = 1.0
    shift: float = 0.0

    def __call__(self, x):
        return np.exp(self.rate * np.asarray(x, dtype=float) + self.shift)

    def derivative(self):
        return Product(Const(self.rate), self)


@dataclass(frozen=True)
class Log(Expr):
    """log(a·x + b), defined where a·x + b > 0"""

    a: float = 1.0
    b: float = 0.0

    def __call__(self, x):
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.log(self.a * np.asarray(x, dtype=float) + self.b)

    def derivative(self):
        return Quotient(Const(self.a), Poly((self.b, self.a)))

    def denominators(self):
        yield Poly((self.b, self.a))


@dataclass(frozen=True)
class Sum(Expr):
    terms: Tuple[Expr, ...]

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        total = np.zeros(np.shape(x))
        for term in self.terms:
            total = total + term(x)
        return total

    def derivative(self):
        return Sum(tuple(term.derivative() for term in self.terms))

    def denominators(self):
        for term in self.terms:
            yield from term.denominators()


@dataclass(frozen=True)
class Product(Expr):
    left: Expr
    right: Expr

    def __call__(self, x):
        return self.left(x) * self.right(x)

    def derivative(self):
        return Sum((
            Product(self.left.derivative(), self.right),
            Product(self.left, self.right.derivative()),
        ))

    def denominators(self):
        yield from self.left.denominators()
        yield from self.right.denominators()


@dataclass(frozen=True)
class Quotient(Expr):
    numerator: Expr
    denominator: Expr

    def __call__(self, x):
        return self.numerator(x) / self.denominator(x)

    def derivative(self):
        top = Sum((
            Product(self.numerator.derivative(), self.denominator),
            Product(Const(-1.0), Product(self.numerator, self.denominator.derivative())),
        ))
        return Quotient(top, Product(self.denominator, self.denominator))

    def denominators(self):
        yield self.denominator
        yield from self.numerator.denominators()
        yield from self.denominator.denominators()


def trig_combination(p: float, q: float, kappa: float) -> Expr:
    """p·sin(κx) + q·cos(κx)"""
    return Sum((Product(Const(p), Sin(kappa)), Product(Const(q), Cos(kappa))))


def hyperbolic_combination(p: float, q: float, kappa: float) -> Expr:
    """p·sinh(κx) + q·cosh(κx)"""
    return Sum((Product(Const(p), Sinh(kappa)), Product(Const(q), Cosh(kappa))))


IDENTITY = Poly((0.0, 1.0))
