"""
Piecewise scalar functions with exact derivatives

An Fn1D is a domain plus an ordered partition into pieces; each piece
carries a body that knows its value and its derivative. Bodies:

- ClosedForm: an expression tree (see core.expressions)
- NumericAntiderivative: y0 + ∫_{x0}^{x} integrand, adaptive quadrature
  from a precomputed checkpoint grid; derivative is the integrand itself
- Transported: outer·h(s·x + t) + slope·x + intercept for another Fn1D h
- Tabulated: Hermite cubic through sampled values and slopes
- CallableBody: plain vectorized callables (value, optional derivative)

Evaluation is vectorized over numpy arrays. Points outside the ε-interior
of the domain are rejected unless the caller passes an explicit margin
(margin=0 admits the closed domain, which is how endpoint limits are taken).
"""
from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Optional, Sequence, Tuple, Union
import logging

import numpy as np
from scipy.integrate import quad_vec
from scipy.interpolate import CubicHermiteSpline

from pexider_kit.config import get_settings
from pexider_kit.core.exceptions import (
    ContinuityError,
    DomainError,
    GeometryError,
    MonotonicityError,
    QuadratureError,
    RangeError,
)
from pexider_kit.core.expressions import Expr, Poly
from pexider_kit.core.intervals import OpenInterval

settings = get_settings()
logger = logging.getLogger(__name__)

ArrayLike = Union[float, Sequence[float], np.ndarray]


# ---------------------------------------------------------------------------
# Bodies
# ---------------------------------------------------------------------------

class Body(ABC):
    """Value/derivative provider for one piece"""

    @abstractmethod
    def value(self, x: np.ndarray) -> np.ndarray:
        ...

    @abstractmethod
    def derivative(self, x: np.ndarray) -> np.ndarray:
        ...

    def validate(self, lo: float, hi: float) -> None:
        """Hook run when the body is attached to [lo, hi]"""

    def breakpoints(self, lo: float, hi: float) -> Tuple[float, ...]:
        """Interior kinks of the body inside ]lo, hi["""
        return ()


class ClosedForm(Body):
    """Expression-backed body; derivative is the symbolic derivative"""

    def __init__(self, expr: Expr):
        self.expr = expr
        self._prime = expr.derivative()

    def value(self, x):
        return self.expr(x)

    def derivative(self, x):
        return self._prime(x)

    def validate(self, lo, hi):
        samples = np.linspace(lo, hi, settings.DENOMINATOR_SAMPLES)
        for den in self.expr.denominators():
            d = den(samples)
            if not np.all(np.isfinite(d)) or np.any(d == 0) or (d.min() < 0 < d.max()):
                where = samples[np.argmin(np.abs(d))]
                raise DomainError(
                    f"Denominator vanishes on [{lo:.12g}, {hi:.12g}] near x={where:.12g}",
                    x=float(where),
                )
        v = self.expr(samples)
        if not np.all(np.isfinite(v)):
            where = samples[~np.isfinite(v)][0]
            raise DomainError(f"Expression is not finite at x={where:.12g}", x=float(where))

    def __repr__(self):
        return f"ClosedForm({self.expr!r})"


def affine_body(A: float, b: float) -> ClosedForm:
    """A·x + b"""
    return ClosedForm(Poly((b, A)))


def quadratic_body(p: float, q: float, r: float) -> ClosedForm:
    """p·x² + q·x + r"""
    return ClosedForm(Poly((r, q, p)))


class NumericAntiderivative(Body):
    """
    y0 + ∫_{x0}^{x} integrand

    Checkpoint values at uniformly spaced anchors across the closed domain
    are computed once at construction; an evaluation integrates from the
    nearest anchor only. The anchor count is fixed there and never refined
    on demand: pass `checkpoints` for a denser set. The derivative is the
    integrand, never a difference quotient.
    """

    def __init__(
        self,
        integrand: "Fn1D",
        x0: float,
        y0: float,
        tol: Optional[float] = None,
        checkpoints: Optional[int] = None,
        max_subdivisions: Optional[int] = None,
    ):
        self.integrand = integrand
        self.x0 = float(x0)
        self.y0 = float(y0)
        self.tol = settings.QUAD_TOL if tol is None else float(tol)
        self.max_subdivisions = settings.QUAD_MAX_SUBDIVISIONS if max_subdivisions is None else max_subdivisions
        count = settings.QUAD_CHECKPOINTS if checkpoints is None else checkpoints
        if self.tol <= 0:
            raise ValueError(f"Quadrature tolerance must be positive, got {self.tol}")
        if count < 2:
            raise ValueError(f"Need at least two checkpoints, got {count}")

        lo, hi = integrand.domain.as_tuple()
        self._anchors = np.linspace(lo, hi, count)
        self._step = (hi - lo) / (count - 1)

        segments = self._integrate(self._anchors[:-1], self._anchors[1:], self.tol / (count - 1))
        from_lo = np.concatenate(([0.0], np.cumsum(segments)))
        j0 = self._nearest(np.array([self.x0]))
        at_x0 = from_lo[j0] + self._integrate(self._anchors[j0], np.array([self.x0]), self.tol)
        self._anchor_values = self.y0 + from_lo - at_x0[0]
        logger.debug(f"Antiderivative of {integrand.name}: {count} checkpoints on [{lo:.6g}, {hi:.6g}]")

    @property
    def checkpoint_count(self) -> int:
        return len(self._anchors)

    def _nearest(self, x: np.ndarray) -> np.ndarray:
        idx = np.rint((x - self._anchors[0]) / self._step).astype(int)
        return np.clip(idx, 0, len(self._anchors) - 1)

    def _integrate(self, a: np.ndarray, b: np.ndarray, tol: float) -> np.ndarray:
        """Vector of ∫_a^b integrand, all components in one adaptive Gauss-Kronrod run"""
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        if a.size == 0:
            return np.zeros(0)
        width = b - a

        def scaled(s: float) -> np.ndarray:
            return width * self.integrand.eval(a + s * width, margin=0.0)

        result, error, info = quad_vec(
            scaled, 0.0, 1.0,
            epsabs=tol, epsrel=0.0, norm="max",
            limit=self.max_subdivisions, full_output=True,
        )
        if info.status != 0 and error > tol:
            raise QuadratureError(
                f"Quadrature of {self.integrand.name} did not converge "
                f"(status {info.status}, error estimate {error:.3g} > {tol:.3g})"
            )
        return np.asarray(result, dtype=float)

    def value(self, x):
        x = np.asarray(x, dtype=float)
        j = self._nearest(x)
        return self._anchor_values[j] + self._integrate(self._anchors[j], x, self.tol)

    def derivative(self, x):
        return self.integrand.eval(x, margin=0.0)

    def breakpoints(self, lo, hi):
        return tuple(b for b in self.integrand.breakpoints() if lo < b < hi)


class Transported(Body):
    """outer·h(s·x + t) + slope·x + intercept"""

    def __init__(
        self,
        inner: "Fn1D",
        inner_scale: float = 1.0,
        inner_shift: float = 0.0,
        outer_scale: float = 1.0,
        slope: float = 0.0,
        intercept: float = 0.0,
    ):
        if inner_scale == 0:
            raise ValueError("Transported body needs a nonzero inner scale")
        self.inner = inner
        self.inner_scale = float(inner_scale)
        self.inner_shift = float(inner_shift)
        self.outer_scale = float(outer_scale)
        self.slope = float(slope)
        self.intercept = float(intercept)

    def _argument(self, x):
        return self.inner_scale * np.asarray(x, dtype=float) + self.inner_shift

    def value(self, x):
        x = np.asarray(x, dtype=float)
        inner = self.inner.eval(self._argument(x), margin=0.0)
        return self.outer_scale * inner + self.slope * x + self.intercept

    def derivative(self, x):
        inner = self.inner.deriv(self._argument(x), margin=0.0)
        return self.outer_scale * self.inner_scale * inner + self.slope

    def breakpoints(self, lo, hi):
        mapped = ((b - self.inner_shift) / self.inner_scale for b in self.inner.breakpoints())
        return tuple(sorted(x for x in mapped if lo < x < hi))


class Tabulated(Body):
    """Hermite cubic through (nodes, values, slopes)"""

    def __init__(self, nodes: ArrayLike, values: ArrayLike, slopes: ArrayLike):
        self.nodes = np.asarray(nodes, dtype=float)
        self.spline = CubicHermiteSpline(self.nodes, np.asarray(values, float), np.asarray(slopes, float))
        self._prime = self.spline.derivative()

    def value(self, x):
        return self.spline(np.asarray(x, dtype=float))

    def derivative(self, x):
        return self._prime(np.asarray(x, dtype=float))


class CallableBody(Body):
    """Vectorized callables; derivative optional"""

    def __init__(self, f: Callable[[np.ndarray], np.ndarray], fprime: Optional[Callable] = None, label: str = "callable"):
        self.f = f
        self.fprime = fprime
        self.label = label

    def value(self, x):
        return np.asarray(self.f(np.asarray(x, dtype=float)), dtype=float)

    def derivative(self, x):
        if self.fprime is None:
            raise NotImplementedError(f"{self.label} has no derivative attached")
        return np.asarray(self.fprime(np.asarray(x, dtype=float)), dtype=float)


# ---------------------------------------------------------------------------
# Pieces and functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Piece:
    lo: float
    hi: float
    body: Body

    def __post_init__(self):
        if not self.lo < self.hi:
            raise GeometryError(f"Piece [{self.lo}, {self.hi}] has no length")
        self.body.validate(self.lo, self.hi)


@dataclass(frozen=True, eq=False)
class Fn1D:
    """A scalar function on an open interval, piecewise by construction"""

    domain: OpenInterval
    pieces: Tuple[Piece, ...]
    name: str = "f"

    def __post_init__(self):
        pieces = tuple(self.pieces)
        object.__setattr__(self, "pieces", pieces)
        if not pieces:
            raise GeometryError(f"{self.name}: at least one piece is required")
        if pieces[0].lo != self.domain.lo or pieces[-1].hi != self.domain.hi:
            raise GeometryError(
                f"{self.name}: pieces span [{pieces[0].lo}, {pieces[-1].hi}] but domain is {self.domain}"
            )
        for left, right in zip(pieces, pieces[1:]):
            if left.hi != right.lo:
                raise GeometryError(f"{self.name}: gap or overlap between pieces at {left.hi} / {right.lo}")

    # construction helpers

    @classmethod
    def from_body(cls, domain: OpenInterval, body: Body, name: str = "f") -> "Fn1D":
        return cls(domain, (Piece(domain.lo, domain.hi, body),), name)

    @classmethod
    def from_expr(cls, domain: OpenInterval, expr: Expr, name: str = "f") -> "Fn1D":
        return cls.from_body(domain, ClosedForm(expr), name)

    @classmethod
    def from_callable(
        cls,
        domain: OpenInterval,
        f: Callable[[np.ndarray], np.ndarray],
        fprime: Optional[Callable] = None,
        name: str = "f",
    ) -> "Fn1D":
        return cls.from_body(domain, CallableBody(f, fprime, label=name), name)

    @classmethod
    def from_pieces(cls, domain: OpenInterval, parts: Iterable[Tuple[float, float, Body]], name: str = "f") -> "Fn1D":
        return cls(domain, tuple(Piece(lo, hi, body) for lo, hi, body in parts), name)

    @classmethod
    def from_samples(
        cls,
        domain: OpenInterval,
        nodes: ArrayLike,
        values: ArrayLike,
        slopes: ArrayLike,
        name: str = "f",
    ) -> "Fn1D":
        """Re-ingest tabulated samples; nodes must cover the closed domain"""
        nodes = np.asarray(nodes, dtype=float)
        if nodes[0] > domain.lo or nodes[-1] < domain.hi:
            raise DomainError(f"{name}: samples cover [{nodes[0]}, {nodes[-1]}], not the domain {domain}")
        return cls.from_body(domain, Tabulated(nodes, values, slopes), name)

    # evaluation

    @cached_property
    def _cuts(self) -> np.ndarray:
        return np.array([p.hi for p in self.pieces[:-1]], dtype=float)

    def _check_domain(self, flat: np.ndarray, margin: Optional[float]) -> None:
        margin = self.domain.default_margin if margin is None else margin
        bad = ~((flat >= self.domain.lo + margin) & (flat <= self.domain.hi - margin))
        if bad.any():
            x = float(flat[bad][0])
            raise DomainError(
                f"{self.name}: x={x:.17g} outside [{self.domain.lo + margin:.17g}, {self.domain.hi - margin:.17g}]",
                x=x,
                domain=self.domain,
            )

    def _evaluate(self, x: ArrayLike, margin: Optional[float], derivative: bool):
        arr = np.asarray(x, dtype=float)
        flat = np.atleast_1d(arr).ravel()
        self._check_domain(flat, margin)
        out = np.empty_like(flat)
        if len(self.pieces) == 1:
            body = self.pieces[0].body
            out[:] = body.derivative(flat) if derivative else body.value(flat)
        else:
            idx = np.searchsorted(self._cuts, flat, side="left")
            for i, piece in enumerate(self.pieces):
                mask = idx == i
                if mask.any():
                    sub = flat[mask]
                    out[mask] = piece.body.derivative(sub) if derivative else piece.body.value(sub)
        if arr.ndim == 0:
            return float(out[0])
        return out.reshape(arr.shape)

    def eval(self, x: ArrayLike, margin: Optional[float] = None):
        return self._evaluate(x, margin, derivative=False)

    def deriv(self, x: ArrayLike, margin: Optional[float] = None):
        return self._evaluate(x, margin, derivative=True)

    __call__ = eval

    # structure

    def breakpoints(self) -> Tuple[float, ...]:
        """Piece boundaries plus kinks of nested bodies, sorted"""
        points = set(float(c) for c in self._cuts)
        for piece in self.pieces:
            points.update(piece.body.breakpoints(piece.lo, piece.hi))
        return tuple(sorted(points))

    def boundary_values(self) -> Tuple[float, float]:
        """Continuous extension at (lo, hi)"""
        lo = self.pieces[0].body.value(np.array([self.domain.lo]))[0]
        hi = self.pieces[-1].body.value(np.array([self.domain.hi]))[0]
        return float(lo), float(hi)

    @cached_property
    def monotone_direction(self) -> int:
        """+1 increasing, -1 decreasing; raises MonotonicityError otherwise"""
        samples = np.linspace(self.domain.lo, self.domain.hi, settings.MONOTONE_SAMPLES)
        values = self.eval(samples, margin=0.0)
        steps = np.diff(values)
        try:
            slopes = self.deriv(samples, margin=0.0)
        except NotImplementedError:
            slopes = steps
        if not (np.all(np.isfinite(values)) and np.all(np.isfinite(slopes))):
            raise MonotonicityError(f"{self.name}: non-finite samples on {self.domain}")
        if np.all(steps > 0) and not np.any(slopes < 0):
            return 1
        if np.all(steps < 0) and not np.any(slopes > 0):
            return -1
        turn = samples[1:][np.sign(steps) != np.sign(steps[0])]
        where = f" near x={turn[0]:.12g}" if turn.size else ""
        raise MonotonicityError(f"{self.name} is not strictly monotone on {self.domain}{where}")

    def check_continuity(self, rtol: Optional[float] = None, derivative: bool = False) -> None:
        """Left/right limits agree at each internal boundary to rtol·(1+|value|)"""
        rtol = settings.CONTINUITY_RTOL if rtol is None else rtol
        for left, right in zip(self.pieces, self.pieces[1:]):
            c = np.array([left.hi])
            if derivative:
                a, b = left.body.derivative(c)[0], right.body.derivative(c)[0]
                what = "derivative"
            else:
                a, b = left.body.value(c)[0], right.body.value(c)[0]
                what = "value"
            if abs(a - b) > rtol * (1.0 + abs(a)):
                raise ContinuityError(f"{self.name}: {what} jumps at x={left.hi:.12g} ({a:.17g} vs {b:.17g})")

    def negated(self) -> "Fn1D":
        return Fn1D.from_body(self.domain, Transported(self, outer_scale=-1.0), f"-{self.name}")

    def renamed(self, name: str) -> "Fn1D":
        return Fn1D(self.domain, self.pieces, name)

    def __repr__(self):
        return f"Fn1D({self.name!r}, domain={self.domain}, pieces={len(self.pieces)})"


def derivative_fn(f: Fn1D, name: Optional[str] = None) -> Fn1D:
    """f′ as an Fn1D on the same domain (closed-domain evaluation of f.deriv)"""
    return Fn1D.from_callable(f.domain, lambda x: f.deriv(x, margin=0.0), name=name or f"{f.name}'")


# ---------------------------------------------------------------------------
# Calculus operations
# ---------------------------------------------------------------------------

def antiderivative(integrand: Fn1D, x0: float, y0: float, tol: Optional[float] = None, name: Optional[str] = None) -> Fn1D:
    """Fn1D whose derivative is integrand and whose value at x0 is y0"""
    tol = settings.QUAD_TOL if tol is None else tol
    if tol <= 0:
        raise ValueError(f"Quadrature tolerance must be positive, got {tol}")
    if not integrand.domain.contains_point(x0, integrand.domain.default_margin):
        raise DomainError(f"Anchor x0={x0} is not interior to {integrand.domain}", x=x0, domain=integrand.domain)
    body = NumericAntiderivative(integrand, x0, y0, tol)
    return Fn1D.from_body(integrand.domain, body, name or f"∫{integrand.name}")


def _bisect(
    fun: Callable[[np.ndarray], np.ndarray],
    target: np.ndarray,
    a: np.ndarray,
    b: np.ndarray,
    tol: float,
    direction: int,
) -> np.ndarray:
    """Vectorized bisection for increasing (direction=+1) or decreasing fun on [a, b]"""
    a = a.astype(float).copy()
    b = b.astype(float).copy()
    result = 0.5 * (a + b)
    active = np.arange(target.size)
    for _ in range(settings.BISECTION_MAX_ITER):
        if active.size == 0:
            break
        mid = 0.5 * (a[active] + b[active])
        resid = direction * (fun(mid) - target[active])
        result[active] = mid
        width = b[active] - a[active]
        floor = 4.0 * np.finfo(float).eps * np.maximum(1.0, np.maximum(np.abs(a[active]), np.abs(b[active])))
        done = (np.abs(resid) <= tol) | (width <= floor)
        right = resid < 0
        a[active] = np.where(right & ~done, mid, a[active])
        b[active] = np.where(~right & ~done, mid, b[active])
        active = active[~done]
    if active.size:
        logger.debug(f"Bisection stopped after {settings.BISECTION_MAX_ITER} iterations with {active.size} open brackets")
    return result


def monotone_inverse(f: Fn1D, y: ArrayLike, tol: Optional[float] = None):
    """x with |f(x) - y| ≤ tol, by bisection inside the piece whose image holds y"""
    tol = settings.INVERSE_TOL if tol is None else tol
    direction = f.monotone_direction
    y_arr = np.asarray(y, dtype=float)
    flat = np.atleast_1d(y_arr).ravel()

    cuts = np.array([f.domain.lo] + [p.hi for p in f.pieces], dtype=float)
    values = f.eval(cuts, margin=0.0)
    low, high = min(values[0], values[-1]), max(values[0], values[-1])
    slack = settings.EMPTY_SLACK * (1.0 + max(abs(low), abs(high)))
    bad = ~((flat >= low - slack) & (flat <= high + slack))
    if bad.any():
        y_bad = float(flat[bad][0])
        raise RangeError(f"{f.name}: y={y_bad:.17g} outside image [{low:.17g}, {high:.17g}]", y=y_bad, image=(low, high))

    ordered = values if direction > 0 else -values
    key = flat if direction > 0 else -flat
    j = np.clip(np.searchsorted(ordered, key, side="left"), 1, len(cuts) - 1)
    x = _bisect(lambda t: f.eval(t, margin=0.0), flat, cuts[j - 1], cuts[j], tol, direction)
    if y_arr.ndim == 0:
        return float(x[0])
    return x.reshape(y_arr.shape)


def diagonal_solve(
    g1: Fn1D,
    g2: Fn1D,
    u: ArrayLike,
    tol: Optional[float] = None,
    margin: Optional[float] = None,
):
    """
    t with |g1(t) + g2(t) - u| ≤ tol

    Targets inside the sumset but beyond the images of the margin-shrunk
    bracket are clamped to the bracket end. margin=0 brackets the closed
    domain.
    """
    tol = settings.INVERSE_TOL if tol is None else tol
    if g1.domain != g2.domain:
        raise GeometryError(f"g1 and g2 live on different domains: {g1.domain} vs {g2.domain}")
    if g1.monotone_direction != g2.monotone_direction:
        raise MonotonicityError(f"{g1.name} and {g2.name} are monotone in opposite senses")
    direction = g1.monotone_direction
    domain = g1.domain
    margin = domain.default_margin if margin is None else margin

    def diagonal(t):
        return g1.eval(t, margin=0.0) + g2.eval(t, margin=0.0)

    limits = diagonal(np.array([domain.lo, domain.hi]))
    low, high = float(limits.min()), float(limits.max())
    u_arr = np.asarray(u, dtype=float)
    flat = np.atleast_1d(u_arr).ravel()
    slack = settings.EMPTY_SLACK * (1.0 + max(abs(low), abs(high)))
    bad = ~((flat >= low - slack) & (flat <= high + slack))
    if bad.any():
        u_bad = float(flat[bad][0])
        raise RangeError(f"u={u_bad:.17g} outside sumset [{low:.17g}, {high:.17g}]", y=u_bad, image=(low, high))

    a, b = domain.lo + margin, domain.hi - margin
    ends = diagonal(np.array([a, b]))
    inner_low, inner_high = min(ends), max(ends)
    below = flat <= inner_low
    above = flat >= inner_high
    t = np.empty_like(flat)
    t[below] = a if direction > 0 else b
    t[above] = b if direction > 0 else a
    if margin > 0 and (below.any() or above.any()):
        logger.warning(f"diagonal_solve clamped {int(below.sum() + above.sum())} target(s) to the margin")
    inside = ~(below | above)
    if inside.any():
        n = int(inside.sum())
        t[inside] = _bisect(diagonal, flat[inside], np.full(n, a), np.full(n, b), tol, direction)
    if u_arr.ndim == 0:
        return float(t[0])
    return t.reshape(u_arr.shape)
