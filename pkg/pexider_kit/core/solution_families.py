"""
Builders for the solution families of

    F((x+y)/2) + f1(x) + f2(y) = G(g1(x) + g2(y))

- build_affine: F affine on all of I, g1 and g2 free
- build_partially_affine: F affine on K̄ = ½(K+I) only, with affine
  g's and f's on the side sets K⁻, K⁺ tied together by the constraint set
- paper_example: a fixed once-differentiable partially affine tuple
- aux_profiles / reconstruct_from_profiles / solve_for_G: the nowhere
  affine regime, built from derivative profiles by integration
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple
import dataclasses
import math
import logging

import numpy as np

from pexider_kit.config import get_settings
from pexider_kit.core.exceptions import (
    ConstraintError,
    ContinuityError,
    CoverageError,
    DegeneracyError,
    DomainError,
    MonotonicityError,
    RangeError,
    RegimeError,
    SpecError,
)
from pexider_kit.core.expressions import (
    Const,
    Expr,
    Poly,
    Product,
    Quotient,
    Sum,
    hyperbolic_combination,
    trig_combination,
)
from pexider_kit.core.interval_geometry import sumset_image
from pexider_kit.core.intervals import OpenInterval, make_interval
from pexider_kit.core.piecewise_fn import (
    Body,
    Fn1D,
    Tabulated,
    Transported,
    affine_body,
    antiderivative,
    diagonal_solve,
    quadratic_body,
)
from pexider_kit.core.verification import check_const

settings = get_settings()
logger = logging.getLogger(__name__)

AFFINE = "Affine"
PARTIALLY_AFFINE = "PartiallyAffine"
NOWHERE_AFFINE = "NowhereAffine"


@dataclass(frozen=True, eq=False)
class SolutionTuple:
    I: OpenInterval
    F: Fn1D
    f1: Fn1D
    f2: Fn1D
    g1: Fn1D
    g2: Fn1D
    G: Fn1D
    regime: str
    family: str = "custom"
    params: Any = None
    profiles: Optional["AuxProfiles"] = None

    @property
    def functions(self) -> Dict[str, Fn1D]:
        return {"F": self.F, "f1": self.f1, "f2": self.f2, "g1": self.g1, "g2": self.g2, "G": self.G}

    def replace(self, **changes) -> "SolutionTuple":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True, eq=False)
class AffineParams:
    I: OpenInterval
    A: float
    alpha: float
    B: float
    beta1: float
    beta2: float
    g1: Fn1D
    g2: Fn1D

    @property
    def beta(self) -> float:
        return self.beta1 + self.beta2


@dataclass(frozen=True, eq=False)
class PartiallyAffineParams:
    """
    Constants of the partially affine family. K = [k_lo, k_hi] ∩ I;
    k_lo == I.lo (k_hi == I.hi) means K⁻ (K⁺) is empty and the matching
    side constants are placeholders.
    """

    I: OpenInterval
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
    F_minus: Optional[Fn1D] = None
    F_plus: Optional[Fn1D] = None
    g1_mid: Optional[Fn1D] = None
    g2_mid: Optional[Fn1D] = None

    @property
    def k_lo(self) -> float:
        return float(self.K[0])

    @property
    def k_hi(self) -> float:
        return float(self.K[1])

    @property
    def has_minus(self) -> bool:
        return self.k_lo > self.I.lo

    @property
    def has_plus(self) -> bool:
        return self.k_hi < self.I.hi

    @property
    def K_interior(self) -> OpenInterval:
        return OpenInterval(self.k_lo, self.k_hi)

    @property
    def K_minus(self) -> Optional[OpenInterval]:
        return make_interval(self.I.lo, self.k_lo)

    @property
    def K_plus(self) -> Optional[OpenInterval]:
        return make_interval(self.k_hi, self.I.hi)

    @property
    def K_bar(self) -> OpenInterval:
        """½(K + I)"""
        return OpenInterval(0.5 * (self.I.lo + self.k_lo), 0.5 * (self.k_hi + self.I.hi))

    @property
    def beta(self) -> float:
        return self.beta1 + self.beta2

    def C(self, side: str) -> float:
        return self.C_minus if side == "-" else self.C_plus

    def D(self, side: str) -> float:
        return self.D_minus if side == "-" else self.D_plus

    def gamma(self, side: str, k: int) -> float:
        return getattr(self, f"gamma{k}_{'minus' if side == '-' else 'plus'}")

    def delta(self, side: str, k: int) -> float:
        return getattr(self, f"delta{k}_{'minus' if side == '-' else 'plus'}")

    def beta_k(self, k: int) -> float:
        return self.beta1 if k == 1 else self.beta2

    def sides(self) -> List[str]:
        return [s for s, present in (("-", self.has_minus), ("+", self.has_plus)) if present]

    def replace(self, **changes) -> "PartiallyAffineParams":
        return dataclasses.replace(self, **changes)


class ProfileCase(str, Enum):
    TRIG = "trig"
    LINEAR = "linear"
    HYPERBOLIC = "hyperbolic"
    CONSTANT = "constant"
    TRIG_ZERO = "trig-zero"
    LINEAR_ZERO = "linear-zero"
    HYPERBOLIC_ZERO = "hyperbolic-zero"

    @property
    def label(self) -> str:
        return {
            "trig": "1.1", "linear": "1.2", "hyperbolic": "1.3", "constant": "2",
            "trig-zero": "3.1", "linear-zero": "3.2", "hyperbolic-zero": "3.3",
        }[self.value]

    @property
    def psi1_vanishes(self) -> bool:
        return self in (ProfileCase.CONSTANT, ProfileCase.TRIG_ZERO, ProfileCase.LINEAR_ZERO, ProfileCase.HYPERBOLIC_ZERO)

    @property
    def shape(self) -> str:
        return self.value.replace("-zero", "")


@dataclass(frozen=True, eq=False)
class AuxProfiles:
    case: ProfileCase
    a: float
    b: float
    c: float
    d: float
    gamma: float
    lam: float
    nu: float
    I: OpenInterval
    phi: Fn1D
    psi1: Fn1D
    psi2: Fn1D
    Psi1: Fn1D
    Psi2: Fn1D

    @property
    def kappa(self) -> float:
        return math.sqrt(abs(self.gamma))

    @property
    def functions(self) -> Dict[str, Fn1D]:
        return {"phi": self.phi, "psi1": self.psi1, "psi2": self.psi2, "Psi1": self.Psi1, "Psi2": self.Psi2}


@dataclass(frozen=True)
class Anchors:
    """Integration constants; x0=None means the domain midpoint"""

    x0: Optional[float] = None
    F0: float = 0.0
    f10: float = 0.0
    f20: float = 0.0
    g10: float = 0.0
    g20: float = 0.0


@dataclass(frozen=True, eq=False)
class DerivedProfiles:
    """(φ, ψ₁, ψ₂, Ψ₁, Ψ₂) recomputed from a tuple's derivatives"""

    phi: Fn1D
    psi1: Fn1D
    psi2: Fn1D
    Psi1: Fn1D
    Psi2: Fn1D
    functions: Dict[str, Fn1D] = field(default_factory=dict)


# ---------------------------------------------------------------------------
# Affine family
# ---------------------------------------------------------------------------

def build_affine(params: AffineParams) -> SolutionTuple:
    """
    F(x) = A·x + α, f_k = -F/2 + B·g_k + β_k, G(u) = B·u + β

    Steps:
    1. Check g1, g2 strictly monotone in the same sense on I
    2. Assemble F, f_k from g_k
    3. Put G on the sumset g1(I) + g2(I)
    """
    I = params.I
    g1 = _on_domain(params.g1, I, "g1")
    g2 = _on_domain(params.g2, I, "g2")
    _require_same_sense(g1, g2)

    F = Fn1D.from_body(I, affine_body(params.A, params.alpha), "F")
    f1 = Fn1D.from_body(I, _f_from_g(g1, params.A, params.alpha, params.B, params.beta1), "f1")
    f2 = Fn1D.from_body(I, _f_from_g(g2, params.A, params.alpha, params.B, params.beta2), "f2")
    S = sumset_image(g1, g2, I, I)
    G = Fn1D.from_body(S, affine_body(params.B, params.beta), "G")

    logger.info(f"Built affine tuple on {I}: A={params.A}, alpha={params.alpha}, B={params.B}, G on {S}")
    return SolutionTuple(I=I, F=F, f1=f1, f2=f2, g1=g1, g2=g2, G=G, regime=AFFINE, family="affine", params=params)


def _f_from_g(g: Fn1D, A: float, alpha: float, B: float, beta_k: float) -> Transported:
    """-(A·x + α)/2 + B·g(x) + β_k"""
    return Transported(g, outer_scale=B, slope=-0.5 * A, intercept=-0.5 * alpha + beta_k)


# ---------------------------------------------------------------------------
# Partially affine family
# ---------------------------------------------------------------------------

def build_partially_affine(params: PartiallyAffineParams) -> SolutionTuple:
    """
    Assemble the partially affine tuple

    Steps:
    1. Validate K and the constraint set (ConstraintError names failing identities)
    2. Resolve the nonaffine stubs (caller-supplied or default quadratics)
    3. Check stub junctions C¹ within JUNCTION_TOL
    4. Assemble F, g_k, f_k piecewise and check monotonicity / continuity
    5. Assemble G over the sub-sumsets, checking coverage and overlap agreement
    """
    _validate_K(params)
    checks = check_const(params)
    failures = [c for c in checks if not c.passed]
    if failures:
        names = "; ".join(f"{c.identity} (lhs={c.lhs:.17g}, rhs={c.rhs:.17g})" for c in failures)
        logger.error(f"Constraint set violated: {names}")
        raise ConstraintError(f"Constraint set violated: {names}", failures)

    I, A, B, alpha = params.I, params.A, params.B, params.alpha
    K_bar = params.K_bar
    user_stubs = any(s is not None for s in (params.F_minus, params.F_plus, params.g1_mid, params.g2_mid))
    rtol = settings.JUNCTION_TOL if user_stubs else settings.CONTINUITY_RTOL

    # F
    F_parts: List[Tuple[float, float, Body]] = []
    mid_lo = K_bar.lo if params.has_minus else I.lo
    mid_hi = K_bar.hi if params.has_plus else I.hi
    if params.has_minus:
        stub = params.F_minus or default_F_stub(params, "-")
        _require_covers(stub, OpenInterval(I.lo, K_bar.lo), "F_minus")
        _check_junction(stub, K_bar.lo, A * K_bar.lo + alpha, A, "F_minus")
        F_parts.append((I.lo, K_bar.lo, Transported(stub)))
    F_parts.append((mid_lo, mid_hi, affine_body(A, alpha)))
    if params.has_plus:
        stub = params.F_plus or default_F_stub(params, "+")
        _require_covers(stub, OpenInterval(K_bar.hi, I.hi), "F_plus")
        _check_junction(stub, K_bar.hi, A * K_bar.hi + alpha, A, "F_plus")
        F_parts.append((K_bar.hi, I.hi, Transported(stub)))
    F = Fn1D.from_pieces(I, F_parts, "F")

    # g_k and f_k
    gs, fs = [], []
    for k in (1, 2):
        stub = getattr(params, f"g{k}_mid") or default_g_stub(params, k)
        _require_covers(stub, params.K_interior, f"g{k}_mid")
        g_parts: List[Tuple[float, float, Body]] = []
        f_parts: List[Tuple[float, float, Body]] = []
        if params.has_minus:
            D, delta = params.D("-"), params.delta("-", k)
            _check_junction(stub, params.k_lo, D * params.k_lo + delta, D, f"g{k}_mid")
            g_parts.append((I.lo, params.k_lo, affine_body(D, delta)))
            f_parts.append((I.lo, params.k_lo, affine_body(params.C("-"), params.gamma("-", k))))
        g_parts.append((params.k_lo, params.k_hi, Transported(stub)))
        f_parts.append((params.k_lo, params.k_hi, _f_from_g(stub, A, alpha, B, params.beta_k(k))))
        if params.has_plus:
            D, delta = params.D("+"), params.delta("+", k)
            _check_junction(stub, params.k_hi, D * params.k_hi + delta, D, f"g{k}_mid")
            g_parts.append((params.k_hi, I.hi, affine_body(D, delta)))
            f_parts.append((params.k_hi, I.hi, affine_body(params.C("+"), params.gamma("+", k))))
        gs.append(Fn1D.from_pieces(I, g_parts, f"g{k}"))
        fs.append(Fn1D.from_pieces(I, f_parts, f"f{k}"))
    g1, g2 = gs
    f1, f2 = fs
    _require_same_sense(g1, g2)
    for fn in (F, f1, f2, g1, g2):
        fn.check_continuity(rtol)

    G = _assemble_partial_G(params, F, g1, g2, rtol)
    logger.info(f"Built partially affine tuple on {I}: K=[{params.k_lo}, {params.k_hi}], K_bar={K_bar}, G on {G.domain}")
    return SolutionTuple(
        I=I, F=F, f1=f1, f2=f2, g1=g1, g2=g2, G=G,
        regime=PARTIALLY_AFFINE, family="partial", params=params,
    )


def _side_G_body(params: PartiallyAffineParams, F: Fn1D, side: str) -> Transported:
    """G(u) = F((u - δ)/(2D)) + (C/D)(u - δ) + γ on g1(K^±) + g2(K^±)"""
    C, D = params.C(side), params.D(side)
    delta = params.delta(side, 1) + params.delta(side, 2)
    gamma = params.gamma(side, 1) + params.gamma(side, 2)
    return Transported(
        F,
        inner_scale=1.0 / (2.0 * D),
        inner_shift=-delta / (2.0 * D),
        slope=C / D,
        intercept=gamma - C * delta / D,
    )


def _assemble_partial_G(params: PartiallyAffineParams, F: Fn1D, g1: Fn1D, g2: Fn1D, rtol: float) -> Fn1D:
    I = params.I
    S = sumset_image(g1, g2, I, I)
    parts = {"-": params.K_minus, "0": params.K_interior, "+": params.K_plus}
    present = {name: J for name, J in parts.items() if J is not None}

    # every pair of parts, plus g(K̄) + g(K̄)
    subsets: Dict[str, OpenInterval] = {}
    for n1, J1 in present.items():
        for n2, J2 in present.items():
            subsets[f"{n1}{n2}"] = sumset_image(g1, g2, J1, J2)
    subsets["bar"] = sumset_image(g1, g2, params.K_bar, params.K_bar)
    _check_coverage(S, list(subsets.values()))

    middle = affine_body(params.B, params.beta)
    sides: List[Tuple[OpenInterval, Body]] = []
    for side, key in (("-", "--"), ("+", "++")):
        if key in subsets:
            body = _side_G_body(params, F, side)
            _check_overlaps(S, subsets, key, body, middle)
            sides.append((subsets[key], body))

    lower = [(seg, body) for seg, body in sides if seg.lo == S.lo]
    upper = [(seg, body) for seg, body in sides if seg.hi == S.hi]
    G_parts: List[Tuple[float, float, Body]] = []
    start, stop = S.lo, S.hi
    if lower:
        seg, body = lower[0]
        G_parts.append((S.lo, seg.hi, body))
        start = seg.hi
    if upper:
        stop = upper[0][0].lo
    G_parts.append((start, stop, middle))
    if upper:
        seg, body = upper[0]
        G_parts.append((seg.lo, S.hi, body))
    G = Fn1D.from_pieces(S, G_parts, "G")
    G.check_continuity(rtol)
    return G


def _check_coverage(S: OpenInterval, subsets: List[OpenInterval]) -> None:
    slack = settings.EMPTY_SLACK * (1.0 + max(abs(S.lo), abs(S.hi)))
    ordered = sorted(subsets, key=lambda J: J.lo)
    gaps = []
    reach = ordered[0].lo
    if reach > S.lo + slack:
        gaps.append((S.lo, reach))
    for J in ordered:
        if J.lo > reach + slack:
            gaps.append((reach, J.lo))
        reach = max(reach, J.hi)
    if reach < S.hi - slack:
        gaps.append((reach, S.hi))
    if gaps:
        text = ", ".join(f"[{a:.12g}, {b:.12g}]" for a, b in gaps)
        raise CoverageError(f"Sub-sumsets leave gaps in {S}: {text}")


def _check_overlaps(S: OpenInterval, subsets: Dict[str, OpenInterval], key: str, body: Body, middle: Body) -> None:
    """The side formula must agree with B·u + β wherever its sub-sumset meets another one"""
    for name, J in subsets.items():
        if name == key or name == ("++" if key == "--" else "--"):
            continue
        overlap = subsets[key].intersect(J)
        if overlap is None:
            continue
        u = np.linspace(overlap.lo, overlap.hi, 33)
        side_values = body.value(u)
        middle_values = middle.value(u)
        gap = np.abs(side_values - middle_values)
        if np.any(gap > settings.JUNCTION_TOL * (1.0 + np.abs(middle_values))):
            where = u[np.argmax(gap)]
            raise CoverageError(
                f"G formulas disagree on the overlap of sub-sumsets {key} and {name} at u={where:.12g} "
                f"(difference {gap.max():.3g})"
            )


def default_F_stub(params: PartiallyAffineParams, side: str) -> Fn1D:
    """Quadratic continuation of A·x + α beyond K̄, C¹ at the junction"""
    I, A, alpha = params.I, params.A, params.alpha
    if side == "-":
        m, span, domain = params.K_bar.lo, params.K_bar.lo - I.lo, OpenInterval(I.lo, params.K_bar.lo)
    else:
        m, span, domain = params.K_bar.hi, I.hi - params.K_bar.hi, OpenInterval(params.K_bar.hi, I.hi)
    curvature = (A if A != 0 else 1.0) / (2.0 * span)
    # curvature·(x - m)² + A·x + α
    body = quadratic_body(curvature, A - 2.0 * curvature * m, alpha + curvature * m * m)
    return Fn1D.from_body(domain, body, f"F{side}stub")


def default_g_stub(params: PartiallyAffineParams, k: int) -> Fn1D:
    """Monotone continuation of the affine side pieces of g_k across K"""
    lo, hi = params.k_lo, params.k_hi
    span = hi - lo
    domain = params.K_interior
    if params.has_minus and params.has_plus:
        Dm, Dp = params.D("-"), params.D("+")
        if Dm * Dp < 0:
            raise MonotonicityError("D^- and D^+ have opposite signs; g_k cannot be monotone across K")
        v0 = Dm * lo + params.delta("-", k)
        v1 = Dp * hi + params.delta("+", k)
        return Fn1D.from_body(domain, Tabulated([lo, hi], [v0, v1], [Dm, Dp]), f"g{k}stub")
    if params.has_minus:
        D, delta, anchor = params.D("-"), params.delta("-", k), lo
        q = D / (2.0 * span)
    else:
        D, delta, anchor = params.D("+"), params.delta("+", k), hi
        q = -D / (2.0 * span)
    # D·x + δ + q·(x - anchor)²
    body = quadratic_body(q, D - 2.0 * q * anchor, delta + q * anchor * anchor)
    return Fn1D.from_body(domain, body, f"g{k}stub")


def _validate_K(params: PartiallyAffineParams) -> None:
    I = params.I
    lo, hi = params.k_lo, params.k_hi
    if not (I.lo <= lo < hi <= I.hi):
        raise SpecError(f"K=[{lo}, {hi}] must be a subinterval of {I} with positive length")
    if lo == I.lo and hi == I.hi:
        raise SpecError("K must differ from I; the globally affine case belongs to build_affine")


def _check_junction(stub: Fn1D, x: float, value: float, slope: float, label: str) -> None:
    v = stub.eval(x, margin=0.0)
    s = stub.deriv(x, margin=0.0)
    tol = settings.JUNCTION_TOL
    if abs(v - value) > tol * (1.0 + abs(value)):
        raise ContinuityError(f"{label}: value {v:.17g} at x={x:.12g} does not meet the affine part {value:.17g}")
    if abs(s - slope) > tol * (1.0 + abs(slope)):
        raise ContinuityError(f"{label}: slope {s:.17g} at x={x:.12g} does not meet the affine slope {slope:.17g}")


def _require_covers(stub: Fn1D, J: OpenInterval, label: str) -> None:
    slack = settings.EMPTY_SLACK * (1.0 + J.length)
    if not stub.domain.contains(J, slack):
        raise SpecError(f"{label} is defined on {stub.domain} but must cover {J}")


# ---------------------------------------------------------------------------
# The fixed example
# ---------------------------------------------------------------------------

def example_partial_params() -> PartiallyAffineParams:
    """I = ]0,4[, K = [2,4[, A = 4, B = 3, C⁻ = D⁻ = 1, everything else 0"""
    return PartiallyAffineParams(
        I=OpenInterval(0.0, 4.0), K=(2.0, 4.0), A=4.0, B=3.0,
        C_minus=1.0, D_minus=1.0, C_plus=0.0, D_plus=1.0,
    )


def paper_example() -> SolutionTuple:
    """The hard-coded once-differentiable partially affine tuple on ]0,4["""
    I = OpenInterval(0.0, 4.0)
    F = Fn1D.from_pieces(I, [(0.0, 1.0, quadratic_body(2.0, 0.0, 2.0)), (1.0, 4.0, affine_body(4.0, 0.0))], "F")
    fs = [
        Fn1D.from_pieces(I, [(0.0, 2.0, affine_body(1.0, 0.0)), (2.0, 4.0, quadratic_body(0.75, -2.0, 3.0))], f"f{k}")
        for k in (1, 2)
    ]
    gs = [
        Fn1D.from_pieces(I, [(0.0, 2.0, affine_body(1.0, 0.0)), (2.0, 4.0, quadratic_body(0.25, 0.0, 1.0))], f"g{k}")
        for k in (1, 2)
    ]
    G = Fn1D.from_pieces(
        OpenInterval(0.0, 10.0),
        [(0.0, 2.0, quadratic_body(0.5, 1.0, 2.0)), (2.0, 10.0, affine_body(3.0, 0.0))],
        "G",
    )
    return SolutionTuple(
        I=I, F=F, f1=fs[0], f2=fs[1], g1=gs[0], g2=gs[1], G=G,
        regime=PARTIALLY_AFFINE, family="paper-example", params=example_partial_params(),
    )


# ---------------------------------------------------------------------------
# Nowhere affine regime: profiles, reconstruction, G recovery
# ---------------------------------------------------------------------------

def aux_profiles(
    case: ProfileCase,
    a: float,
    b: float,
    c: float = 0.0,
    d: float = 0.0,
    gamma: float = 0.0,
    lam: float = 0.0,
    nu: float = 0.0,
    I: Optional[OpenInterval] = None,
    phi_override: Optional[Fn1D] = None,
) -> AuxProfiles:
    """
    Build (φ, ψ₁, ψ₂, Ψ₁, Ψ₂) for one of the seven cases, κ = √|γ|

    Fraction cases share φ = (numerator)/(denominator) with ψ₁ equal to the
    denominator (cases 1.x) or identically zero (cases 3.x); Ψ₁ = φ·ψ₁ always.
    Case 2 takes φ from the caller, ψ₁ = Ψ₁ = 0, ψ₂ = a, Ψ₂ = b (ν unused).
    """
    case = ProfileCase(case)
    if I is None:
        raise SpecError("Profiles need a domain interval I")
    kappa = math.sqrt(abs(gamma))

    if case is ProfileCase.CONSTANT:
        if a == 0:
            raise DegeneracyError("Case 2 requires a != 0")
        if phi_override is None:
            raise SpecError("Case 2 leaves φ arbitrary: supply phi_override")
        if not phi_override.domain.contains(I, settings.EMPTY_SLACK):
            raise SpecError(f"phi_override is defined on {phi_override.domain}, not on {I}")
        phi = phi_override.renamed("phi")
        psi1 = Fn1D.from_expr(I, Const(0.0), "psi1")
        psi2 = Fn1D.from_expr(I, Const(a), "psi2")
        Psi1 = Fn1D.from_expr(I, Const(0.0), "Psi1")
        Psi2 = Fn1D.from_expr(I, Const(b), "Psi2")
        return AuxProfiles(case, a, b, c, d, gamma, lam, nu, I, phi, psi1, psi2, Psi1, Psi2)

    if a * d - b * c == 0:
        raise DegeneracyError(f"ad - bc = 0 for a={a}, b={b}, c={c}, d={d}")
    shape = case.shape
    if shape == "trig" and not gamma < 0:
        raise SpecError(f"Trigonometric cases need gamma < 0, got {gamma}")
    if shape == "hyperbolic" and not gamma > 0:
        raise SpecError(f"Hyperbolic cases need gamma > 0, got {gamma}")
    if shape == "linear" and gamma != 0:
        raise SpecError(f"Linear cases need gamma = 0, got {gamma}")

    den, num, psi2_expr, Psi2_expr = _fraction_parts(shape, a, b, c, d, kappa, lam, nu)
    _require_nonvanishing(den, I, "denominator")
    phi_expr: Expr = Quotient(num, den)
    psi1_expr: Expr = Const(0.0) if case.psi1_vanishes else den
    Psi1_expr: Expr = Const(0.0) if case.psi1_vanishes else Product(phi_expr, den)
    _require_nonvanishing(psi2_expr + psi1_expr, I, "psi2 + psi1")
    _require_nonvanishing(psi2_expr - psi1_expr, I, "psi2 - psi1")

    profiles = AuxProfiles(
        case, a, b, c, d, gamma, lam, nu, I,
        phi=Fn1D.from_expr(I, phi_expr, "phi"),
        psi1=Fn1D.from_expr(I, psi1_expr, "psi1"),
        psi2=Fn1D.from_expr(I, psi2_expr, "psi2"),
        Psi1=Fn1D.from_expr(I, Psi1_expr, "Psi1"),
        Psi2=Fn1D.from_expr(I, Psi2_expr, "Psi2"),
    )
    logger.info(f"Built profiles for case {case.label} ({case.value}) on {I}, kappa={kappa:.6g}")
    return profiles


def _fraction_parts(shape: str, a, b, c, d, kappa, lam, nu) -> Tuple[Expr, Expr, Expr, Expr]:
    """(denominator, numerator, ψ₂, Ψ₂) for the trig / linear / hyperbolic shapes"""
    if shape == "trig":
        den = trig_combination(a, b, kappa)
        num = trig_combination(c, d, kappa)
        psi2 = Sum((trig_combination(b, -a, kappa), Const(lam)))
        Psi2 = Sum((trig_combination(d, -c, kappa), Const(nu)))
    elif shape == "hyperbolic":
        den = hyperbolic_combination(a, b, kappa)
        num = hyperbolic_combination(c, d, kappa)
        psi2 = Sum((hyperbolic_combination(b, a, kappa), Const(lam)))
        Psi2 = Sum((hyperbolic_combination(d, c, kappa), Const(nu)))
    elif shape == "linear":
        den = Poly((b, a))
        num = Poly((d, c))
        psi2 = Poly((lam, b, 0.5 * a))
        Psi2 = Poly((nu, d, 0.5 * c))
    else:
        raise SpecError(f"Unknown profile shape: {shape}")
    return den, num, psi2, Psi2


def _require_nonvanishing(fn, I: OpenInterval, label: str) -> None:
    samples = np.linspace(I.lo, I.hi, settings.PROFILE_DENOMINATOR_SAMPLES)
    values = np.asarray(fn(samples), dtype=float)
    if not np.all(np.isfinite(values)) or np.any(values == 0) or (values.min() < 0 < values.max()):
        where = samples[np.argmin(np.abs(values))]
        raise DomainError(f"{label} vanishes on {I} near x={where:.12g}", x=float(where), domain=I)


def reconstruct_from_profiles(
    p: AuxProfiles,
    anchors: Optional[Anchors] = None,
    tol: Optional[float] = None,
) -> Tuple[Fn1D, Fn1D, Fn1D, Fn1D, Fn1D]:
    """
    Integrate F′ = 2φ, g_k′ = 2/(ψ₂ - (-1)^k ψ₁), f_k′ = -(Ψ₂ - (-1)^k Ψ₁)/(ψ₂ - (-1)^k ψ₁)

    Returns (F, f1, f2, g1, g2) pinned at the anchors.
    """
    anchors = anchors or Anchors()
    tol = settings.QUAD_TOL if tol is None else tol
    I = p.I
    x0 = I.midpoint if anchors.x0 is None else anchors.x0

    def closed(fn: Fn1D):
        return lambda x: fn.eval(x, margin=0.0)

    phi, psi1, psi2, Psi1, Psi2 = (closed(fn) for fn in (p.phi, p.psi1, p.psi2, p.Psi1, p.Psi2))

    def denominator(k: int):
        sign = (-1.0) ** k
        return lambda x: psi2(x) - sign * psi1(x)

    samples = np.linspace(I.lo, I.hi, settings.PROFILE_DENOMINATOR_SAMPLES)
    d1, d2 = denominator(1)(samples), denominator(2)(samples)
    if not (np.all(d1 > 0) and np.all(d2 > 0)) and not (np.all(d1 < 0) and np.all(d2 < 0)):
        raise RegimeError(
            f"g1′ and g2′ must keep one common sign on {I}: "
            f"psi2+psi1 in [{d1.min():.6g}, {d1.max():.6g}], psi2-psi1 in [{d2.min():.6g}, {d2.max():.6g}]"
        )

    F_prime = Fn1D.from_callable(I, lambda x: 2.0 * phi(x), name="F'")
    g_primes, f_primes = [], []
    for k in (1, 2):
        den = denominator(k)
        sign = (-1.0) ** k
        g_primes.append(Fn1D.from_callable(I, lambda x, den=den: 2.0 / den(x), name=f"g{k}'"))
        f_primes.append(Fn1D.from_callable(
            I, lambda x, den=den, sign=sign: -(Psi2(x) - sign * Psi1(x)) / den(x), name=f"f{k}'",
        ))

    F = antiderivative(F_prime, x0, anchors.F0, tol, "F")
    f1 = antiderivative(f_primes[0], x0, anchors.f10, tol, "f1")
    f2 = antiderivative(f_primes[1], x0, anchors.f20, tol, "f2")
    g1 = antiderivative(g_primes[0], x0, anchors.g10, tol, "g1")
    g2 = antiderivative(g_primes[1], x0, anchors.g20, tol, "g2")
    _require_same_sense(g1, g2)
    logger.info(f"Reconstructed case {p.case.label} tuple on {I} (anchor x0={x0:.6g}, tol={tol:g})")
    return F, f1, f2, g1, g2


@dataclass(frozen=True, eq=False)
class RecoveredG(Fn1D):
    """
    G memoized on diagonal nodes of the sumset

    Keeps the tuple it was recovered from, so `refine` can re-tabulate on a
    denser grid. Points outside the closed sumset raise RangeError.
    """

    sources: Tuple[Fn1D, ...] = ()
    tol: Optional[float] = None
    grid_size: int = 0

    def _check_domain(self, flat: np.ndarray, margin: Optional[float]) -> None:
        outside = (flat < self.domain.lo) | (flat > self.domain.hi)
        if outside.any():
            u = float(flat[outside][0])
            raise RangeError(f"{self.name}: u={u:.17g} lies outside the sumset {self.domain}", y=u, image=self.domain)
        super()._check_domain(flat, margin)

    def refine(self, factor: int = 2) -> "RecoveredG":
        """Recover G again with (grid_size - 1)·factor + 1 uniform nodes"""
        if factor < 2:
            raise ValueError(f"Refinement factor must be at least 2, got {factor}")
        if not self.sources:
            raise ValueError(f"{self.name} carries no source tuple to refine from")
        return solve_for_G(*self.sources, tol=self.tol, grid_size=(self.grid_size - 1) * factor + 1)


def solve_for_G(
    F: Fn1D,
    f1: Fn1D,
    f2: Fn1D,
    g1: Fn1D,
    g2: Fn1D,
    tol: Optional[float] = None,
    grid_size: Optional[int] = None,
) -> RecoveredG:
    """
    G on g1(I) + g2(I) from G(g1(t) + g2(t)) = F(t) + f1(t) + f2(t)

    Nodes: a uniform grid on the sumset plus the diagonal images of every
    piece breakpoint. Slopes come from differentiating along the diagonal,
    G′(u) = (F′ + f1′ + f2′)(t) / (g1′ + g2′)(t), so the Hermite memo
    interpolates exact values and exact derivatives. Call `refine` on the
    result for a denser memo.
    """
    grid_size = settings.G_GRID_SIZE if grid_size is None else grid_size
    if grid_size < 2:
        raise ValueError(f"G needs at least two grid nodes, got {grid_size}")
    _require_same_sense(g1, g2)
    I = g1.domain
    S = sumset_image(g1, g2, I, I)

    kinks = sorted({b for fn in (F, f1, f2, g1, g2) for b in fn.breakpoints() if I.lo < b < I.hi})
    extra = g1.eval(np.array(kinks), margin=0.0) + g2.eval(np.array(kinks), margin=0.0) if kinks else np.zeros(0)
    nodes = np.unique(np.concatenate((np.linspace(S.lo, S.hi, grid_size), extra)))
    keep = np.concatenate(([True], np.diff(nodes) > 1e-9 * S.length))
    nodes = nodes[keep]
    nodes[0], nodes[-1] = S.lo, S.hi

    t = diagonal_solve(g1, g2, nodes, tol, margin=0.0)
    values = F.eval(t, margin=0.0) + f1.eval(t, margin=0.0) + f2.eval(t, margin=0.0)
    rise = F.deriv(t, margin=0.0) + f1.deriv(t, margin=0.0) + f2.deriv(t, margin=0.0)
    run = g1.deriv(t, margin=0.0) + g2.deriv(t, margin=0.0)
    memo = Fn1D.from_samples(S, nodes, values, rise / run, "G")
    logger.info(f"Recovered G on {S} from {nodes.size} diagonal nodes")
    return RecoveredG(S, memo.pieces, "G", sources=(F, f1, f2, g1, g2), tol=tol, grid_size=grid_size)


def build_from_profiles(
    p: AuxProfiles,
    anchors: Optional[Anchors] = None,
    tol: Optional[float] = None,
    grid_size: Optional[int] = None,
) -> SolutionTuple:
    """Profiles → reconstruction → G recovery, packaged as a tuple"""
    F, f1, f2, g1, g2 = reconstruct_from_profiles(p, anchors, tol)
    G = solve_for_G(F, f1, f2, g1, g2, tol=None, grid_size=grid_size)
    return SolutionTuple(
        I=p.I, F=F, f1=f1, f2=f2, g1=g1, g2=g2, G=G,
        regime=NOWHERE_AFFINE, family="profiles", params=anchors or Anchors(), profiles=p,
    )


def profiles_from_tuple(s: SolutionTuple) -> DerivedProfiles:
    """φ = ½F′, ψ_k = 1/g1′ + (-1)^k/g2′, Ψ_k = -f1′/g1′ - (-1)^k f2′/g2′"""
    I = s.I

    def d(fn: Fn1D):
        return lambda x: fn.deriv(x, margin=0.0)

    F1, f1p, f2p, g1p, g2p = (d(fn) for fn in (s.F, s.f1, s.f2, s.g1, s.g2))
    phi = Fn1D.from_callable(I, lambda x: 0.5 * F1(x), name="phi")
    psi1 = Fn1D.from_callable(I, lambda x: 1.0 / g1p(x) - 1.0 / g2p(x), name="psi1")
    psi2 = Fn1D.from_callable(I, lambda x: 1.0 / g1p(x) + 1.0 / g2p(x), name="psi2")
    Psi1 = Fn1D.from_callable(I, lambda x: -f1p(x) / g1p(x) + f2p(x) / g2p(x), name="Psi1")
    Psi2 = Fn1D.from_callable(I, lambda x: -f1p(x) / g1p(x) - f2p(x) / g2p(x), name="Psi2")
    functions = {"phi": phi, "psi1": psi1, "psi2": psi2, "Psi1": Psi1, "Psi2": Psi2}
    return DerivedProfiles(phi, psi1, psi2, Psi1, Psi2, functions)


# ---------------------------------------------------------------------------
# Shared helpers
# ---------------------------------------------------------------------------

def family_bound(family: str, case: Optional[str] = None) -> float:
    """Residual bound a family's tuples must meet on dense grids"""
    if family in ("affine", "partial", "paper-example"):
        return 1e-12
    if family == "profiles":
        shape = ProfileCase(case).shape if case else "linear"
        return 1e-6 if shape in ("trig", "hyperbolic") else 1e-7
    raise ValueError(f"Unknown family: {family}")


def _on_domain(g: Fn1D, I: OpenInterval, name: str) -> Fn1D:
    if g.domain == I:
        return g.renamed(name)
    if not g.domain.contains(I):
        raise SpecError(f"{name} is defined on {g.domain}, which does not cover {I}")
    return Fn1D.from_body(I, Transported(g), name)


def _require_same_sense(g1: Fn1D, g2: Fn1D) -> None:
    if g1.monotone_direction != g2.monotone_direction:
        raise MonotonicityError(f"{g1.name} and {g2.name} are monotone in opposite senses")


__all__ = [
    "AFFINE",
    "PARTIALLY_AFFINE",
    "NOWHERE_AFFINE",
    "SolutionTuple",
    "AffineParams",
    "PartiallyAffineParams",
    "ProfileCase",
    "AuxProfiles",
    "Anchors",
    "DerivedProfiles",
    "build_affine",
    "build_partially_affine",
    "paper_example",
    "example_partial_params",
    "default_F_stub",
    "default_g_stub",
    "aux_profiles",
    "reconstruct_from_profiles",
    "solve_for_G",
    "RecoveredG",
    "build_from_profiles",
    "profiles_from_tuple",
    "family_bound",
]
