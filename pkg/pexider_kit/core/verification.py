"""
Residual harnesses, constraint ledger, affinity classifier and the
constructions of the three solution cases of

    φ((x+y)/2)·(ψ1(x) - ψ2(y)) = 0
"""
from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable, List, Optional, Sequence, Tuple, Union
import logging

import numpy as np

from pexider_kit.config import get_settings
from pexider_kit.core.exceptions import DomainError, EvaluationError, GeometryError, RangeError, SpecError
from pexider_kit.core.expressions import Const
from pexider_kit.core.interval_geometry import image, u_star
from pexider_kit.core.intervals import OpenInterval
from pexider_kit.core.piecewise_fn import CallableBody, Fn1D, affine_body, monotone_inverse, quadratic_body
from pexider_kit.schemas.reports import AffineInterval, AffinityReport, ConstraintCheck, GridSpec, ResidualReport

if TYPE_CHECKING:
    from pexider_kit.core.solution_families import AuxProfiles, PartiallyAffineParams, SolutionTuple

settings = get_settings()
logger = logging.getLogger(__name__)

CONST_SLACK = 1e-12
SYSTEM_BOUND = 1e-10


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------

def sample_box(I1: OpenInterval, I2: OpenInterval, grid: GridSpec) -> Tuple[np.ndarray, np.ndarray]:
    """
    Flattened (x, y) sample points on the margin-shrunk box I1 × I2

    uniform: the n × n tensor grid; stratified: one seeded uniform draw
    per cell of the same n × n partition.
    """
    a1, b1 = I1.shrink(grid.margin)
    a2, b2 = I2.shrink(grid.margin)
    if grid.sampling == "uniform":
        X, Y = np.meshgrid(np.linspace(a1, b1, grid.n), np.linspace(a2, b2, grid.n), indexing="ij")
        return X.ravel(), Y.ravel()
    rng = np.random.default_rng(grid.seed)
    i, j = np.meshgrid(np.arange(grid.n), np.arange(grid.n), indexing="ij")
    jitter = rng.random((2, grid.n * grid.n))
    x = a1 + (i.ravel() + jitter[0]) * (b1 - a1) / grid.n
    y = a2 + (j.ravel() + jitter[1]) * (b2 - a2) / grid.n
    return x, y


def _grid_spec(n: Optional[int], margin: Optional[float], sampling: str, seed: Optional[int]) -> GridSpec:
    return GridSpec(
        n=settings.RESIDUAL_N if n is None else n,
        margin=settings.RESIDUAL_MARGIN if margin is None else margin,
        sampling=sampling,
        seed=seed,
    )


def _at(fn: Fn1D, arg: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """fn on the closed domain at each grid argument, evaluated once per distinct value"""
    distinct, inverse = np.unique(arg, return_inverse=True)
    try:
        values = fn.eval(distinct, margin=0.0)
    except (DomainError, RangeError) as exc:
        bad = getattr(exc, "x", None)
        if bad is None:
            bad = getattr(exc, "y", None)
        hit = np.flatnonzero(arg == bad) if bad is not None else np.array([], dtype=int)
        idx = int(hit[0]) if hit.size else 0
        point = (float(x[idx]), float(y[idx]))
        logger.error(f"Evaluation of {fn.name} failed at (x, y) = {point}: {exc}")
        raise EvaluationError(f"Evaluation of {fn.name} failed at (x, y) = {point}: {exc}", point=point) from exc
    return np.asarray(values)[inverse.ravel()]


def _report(label: str, residual: np.ndarray, x: np.ndarray, y: np.ndarray, grid: GridSpec,
            bound: Optional[float]) -> ResidualReport:
    if not np.all(np.isfinite(residual)):
        k = int(np.flatnonzero(~np.isfinite(residual))[0])
        point = (float(x[k]), float(y[k]))
        raise EvaluationError(f"{label}: non-finite residual at (x, y) = {point}", point=point)
    worst = int(np.argmax(residual))
    report = ResidualReport(
        label=label,
        max_abs=float(residual[worst]),
        mean_abs=float(np.mean(residual)),
        worst_point=(float(x[worst]), float(y[worst])),
        samples=int(residual.size),
        margin=grid.margin,
        grid=grid,
        bound=bound,
    )
    logger.info(f"Residual {label}: max={report.max_abs:.3e} mean={report.mean_abs:.3e} over {report.samples} samples")
    return report


# ---------------------------------------------------------------------------
# Residuals
# ---------------------------------------------------------------------------

def residual_main(
    s: "SolutionTuple",
    n: Optional[int] = None,
    margin: Optional[float] = None,
    sampling: str = "uniform",
    seed: Optional[int] = None,
    bound: Optional[float] = None,
) -> ResidualReport:
    """|F((x+y)/2) + f1(x) + f2(y) - G(g1(x) + g2(y))| over I × I"""
    grid = _grid_spec(n, margin, sampling, seed)
    x, y = sample_box(s.I, s.I, grid)
    lhs = _at(s.F, 0.5 * (x + y), x, y) + _at(s.f1, x, x, y) + _at(s.f2, y, x, y)
    u = _at(s.g1, x, x, y) + _at(s.g2, y, x, y)
    rhs = _at(s.G, u, x, y)
    return _report("main", np.abs(lhs - rhs), x, y, grid, bound)


def residual_aux(
    phi: Fn1D,
    psi1: Fn1D,
    psi2: Fn1D,
    I1: OpenInterval,
    I2: OpenInterval,
    n: Optional[int] = None,
    margin: Optional[float] = None,
    sampling: str = "uniform",
    seed: Optional[int] = None,
    bound: Optional[float] = None,
) -> ResidualReport:
    """|φ((x+y)/2)·(ψ1(x) - ψ2(y))| over I1 × I2"""
    slack = settings.EMPTY_SLACK * (1.0 + max(I1.length, I2.length))
    if not phi.domain.contains(I1.half_sum(I2), slack):
        raise GeometryError(f"φ is defined on {phi.domain}, which does not cover ½(I1 + I2) = {I1.half_sum(I2)}")
    if not psi1.domain.contains(I1, slack) or not psi2.domain.contains(I2, slack):
        raise GeometryError(f"ψ1 on {psi1.domain} / ψ2 on {psi2.domain} do not cover {I1} / {I2}")
    grid = _grid_spec(n, margin, sampling, seed)
    x, y = sample_box(I1, I2, grid)
    residual = np.abs(_at(phi, 0.5 * (x + y), x, y) * (_at(psi1, x, x, y) - _at(psi2, y, x, y)))
    return _report("aux", residual, x, y, grid, bound)


def residual_system(
    p: Union["AuxProfiles", object],
    n: Optional[int] = None,
    margin: Optional[float] = None,
    sampling: str = "uniform",
    seed: Optional[int] = None,
    bound: Optional[float] = None,
) -> Tuple[ResidualReport, ResidualReport]:
    """
    eq.1: |φ((x+y)/2)(ψ1(x) + ψ1(y)) - Ψ1(x) - Ψ1(y)|
    eq.2: |φ((x+y)/2)(ψ2(x) - ψ2(y)) - Ψ2(x) + Ψ2(y)|
    """
    I = getattr(p, "I", None) or p.phi.domain
    for fn in (p.phi, p.psi1, p.psi2, p.Psi1, p.Psi2):
        if not fn.domain.contains(I, settings.EMPTY_SLACK * (1.0 + I.length)):
            raise GeometryError(f"{fn.name} is defined on {fn.domain}, not on {I}")
    grid = _grid_spec(n, margin, sampling, seed)
    x, y = sample_box(I, I, grid)
    phi_m = _at(p.phi, 0.5 * (x + y), x, y)
    psi1_x, psi1_y = _at(p.psi1, x, x, y), _at(p.psi1, y, x, y)
    psi2_x, psi2_y = _at(p.psi2, x, x, y), _at(p.psi2, y, x, y)
    Psi1_x, Psi1_y = _at(p.Psi1, x, x, y), _at(p.Psi1, y, x, y)
    Psi2_x, Psi2_y = _at(p.Psi2, x, x, y), _at(p.Psi2, y, x, y)
    first = np.abs(phi_m * (psi1_x + psi1_y) - Psi1_x - Psi1_y)
    second = np.abs(phi_m * (psi2_x - psi2_y) - Psi2_x + Psi2_y)
    return (
        _report("system.1", first, x, y, grid, bound),
        _report("system.2", second, x, y, grid, bound),
    )


def residual_extension(
    s: "SolutionTuple",
    params: "PartiallyAffineParams",
    n: Optional[int] = None,
    margin: Optional[float] = None,
    bound: Optional[float] = None,
) -> Tuple[ResidualReport, ResidualReport]:
    """
    The extended formulas on U* for U = K̄ (where F = A·x + α):

    1. f_k(x) + ½(A·x + α) - B·g_k(x) = β_k, k = 1 at x and k = 2 at y
    2. G(g1(x) + g2(y)) = F((x+y)/2) - ½A(x+y) - α + B(g1(x) + g2(y)) + β
    """
    A, B, alpha = params.A, params.B, params.alpha
    star = u_star(params.K_bar, s.g1, s.g2, s.I)
    grid = _grid_spec(n, margin if margin is not None else star.default_margin, "uniform", None)
    x, y = sample_box(star, star, grid)
    g1x, g2y = _at(s.g1, x, x, y), _at(s.g2, y, x, y)
    e1 = np.abs(_at(s.f1, x, x, y) + 0.5 * (A * x + alpha) - B * g1x - params.beta1)
    e2 = np.abs(_at(s.f2, y, x, y) + 0.5 * (A * y + alpha) - B * g2y - params.beta2)
    u = g1x + g2y
    G_plus = _at(s.F, 0.5 * (x + y), x, y) - 0.5 * A * (x + y) - alpha + B * u + params.beta
    logger.info(f"Checking extended formulas on U*={star}")
    return (
        _report("extension.f", np.maximum(e1, e2), x, y, grid, bound),
        _report("extension.G", np.abs(_at(s.G, u, x, y) - G_plus), x, y, grid, bound),
    )


# ---------------------------------------------------------------------------
# Constraint ledger
# ---------------------------------------------------------------------------

_SUPERSCRIPT = {"-": "⁻", "+": "⁺"}
_SUBSCRIPT = {1: "₁", 2: "₂"}


def _check(identity: str, lhs: float, rhs: float, side=None, k=None) -> ConstraintCheck:
    passed = abs(lhs - rhs) <= CONST_SLACK * max(1.0, abs(lhs), abs(rhs))
    return ConstraintCheck(identity=identity, lhs=lhs, rhs=rhs, passed=passed, side=side, k=k)


def check_const(params: "PartiallyAffineParams") -> List[ConstraintCheck]:
    """
    Evaluate the constraint set of the partially affine family, skipping
    identities that only concern an empty side:

        D⁻·D⁺ ≠ 0
        C^± + A/2 = B·D^±
        γ_k^± + α/2 = B·δ_k^± + β_k      (k = 1, 2)
    """
    sides = params.sides()
    checks: List[ConstraintCheck] = []

    product = 1.0
    for side in sides:
        product *= params.D(side)
    name = "·".join(f"D{_SUPERSCRIPT[side]}" for side in sides) + " ≠ 0"
    checks.append(ConstraintCheck(identity=name, lhs=product, rhs=0.0, passed=abs(product) > CONST_SLACK))

    for side in sides:
        sup = _SUPERSCRIPT[side]
        checks.append(_check(
            f"C{sup} + A/2 = B·D{sup}",
            params.C(side) + 0.5 * params.A,
            params.B * params.D(side),
            side=side,
        ))
        for k in (1, 2):
            sub = _SUBSCRIPT[k]
            checks.append(_check(
                f"γ{sub}{sup} + α/2 = B·δ{sub}{sup} + β{sub}",
                params.gamma(side, k) + 0.5 * params.alpha,
                params.B * params.delta(side, k) + params.beta_k(k),
                side=side,
                k=k,
            ))
    failed = [c.identity for c in checks if not c.passed]
    if failed:
        logger.info(f"Constraint ledger: {len(failed)} of {len(checks)} identities fail: {failed}")
    else:
        logger.debug(f"Constraint ledger: all {len(checks)} identities pass")
    return checks


# ---------------------------------------------------------------------------
# Affinity classifier
# ---------------------------------------------------------------------------

def classify_affine_intervals(
    F: Fn1D,
    tol: Optional[float] = None,
    n: Optional[int] = None,
    margin: Optional[float] = None,
) -> AffinityReport:
    """
    Maximal runs of samples on which F′ is constant up to the tolerance

    Steps:
    1. Sample F′ at n points of the margin-shrunk domain
    2. Grow runs greedily while max(F′) - min(F′) over the run ≤ tol·max|F′|
    3. Keep runs longer than 3 samples, fit slope/intercept by least squares
    4. Merge neighbouring kept runs whose lines agree to the threshold
       (a dropped run of at most 3 samples may sit between them)
    5. Verdict: one interval over every sample is globally affine, no kept
       run is nowhere affine, anything else partially affine
    """
    tol = settings.CLASSIFY_TOL if tol is None else tol
    n = settings.CLASSIFY_N if n is None else n
    if n < 16:
        raise ValueError(f"Classifier needs at least 16 samples, got {n}")
    x = F.domain.grid(n, margin)
    slopes = np.asarray(F.deriv(x, margin=0.0), dtype=float)
    scale = float(np.max(np.abs(slopes)))
    threshold = tol * scale if scale > 0 else tol

    runs: List[Tuple[int, int]] = []
    start = 0
    low = high = slopes[0]
    for i in range(1, n):
        low, high = min(low, slopes[i]), max(high, slopes[i])
        if high - low > threshold:
            runs.append((start, i - 1))
            start = i
            low = high = slopes[i]
    runs.append((start, n - 1))

    def fit(first: int, last: int) -> Tuple[float, float]:
        xs = x[first:last + 1]
        design = np.column_stack((xs, np.ones_like(xs)))
        (slope, intercept), *_ = np.linalg.lstsq(design, F.eval(xs, margin=0.0), rcond=None)
        return float(slope), float(intercept)

    kept = [(first, last, *fit(first, last)) for first, last in runs if last - first + 1 > 3]
    merged: List[Tuple[int, int, float, float]] = []
    for first, last, slope, intercept in kept:
        if merged:
            p_first, p_last, p_slope, p_intercept = merged[-1]
            joint = 0.5 * (x[p_last] + x[first])
            same_line = (
                abs(slope - p_slope) <= threshold
                and abs((slope - p_slope) * joint + intercept - p_intercept) <= threshold * F.domain.length
            )
            if same_line and first - p_last <= 4:
                merged[-1] = (p_first, last, *fit(p_first, last))
                logger.debug(f"Merged affine runs ending at x={x[p_last]:.6g} and starting at x={x[first]:.6g}")
                continue
        merged.append((first, last, slope, intercept))

    intervals: List[AffineInterval] = []
    for first, last, slope, intercept in merged:
        lo = F.domain.lo if first == 0 else float(x[first])
        hi = F.domain.hi if last == n - 1 else float(x[last])
        intervals.append(AffineInterval(interval=OpenInterval(lo, hi), slope=slope,
                                        intercept=intercept, samples=last - first + 1))

    if len(merged) == 1 and merged[0][0] == 0 and merged[0][1] == n - 1:
        verdict = "GloballyAffine"
    elif not intervals:
        verdict = "NowhereAffine"
    else:
        verdict = "PartiallyAffine"
    logger.info(f"Classified {F.name}: {verdict} with {len(intervals)} affine interval(s), threshold {threshold:.3g}")
    return AffinityReport(intervals=intervals, tolerance=tol, threshold=threshold, samples=n, verdict=verdict)


# ---------------------------------------------------------------------------
# Constructions for the three cases of φ((x+y)/2)(ψ1(x) - ψ2(y)) = 0
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class TrivialCase:
    """Case 1: φ ≡ 0 with free ψ's, or ψ1 ≡ ψ2 ≡ D with free φ"""

    I1: OpenInterval
    I2: OpenInterval
    phi_zero: bool = True
    D: Optional[float] = None
    phi: Optional[Fn1D] = None
    psi1: Optional[Fn1D] = None
    psi2: Optional[Fn1D] = None


@dataclass(frozen=True)
class BandCase:
    """
    Case 2: ψ_i = D on U_i = ]inf I_i, a_i[, E on V_i = ]b_i, sup I_i[,
    k_value on K_i = I_i ∖ (U_i ∪ V_i); φ vanishes on ½(K1+I2) ∪ ½(I1+K2)
    """

    I1: OpenInterval
    I2: OpenInterval
    a: Tuple[float, float]
    b: Tuple[float, float]
    D: float
    E: float
    k_value: Optional[float] = None


@dataclass(frozen=True)
class IndexCase:
    """
    Case 3: ψ_j ≡ D on I_j; ψ_i = D on the disjoint open intervals U_n ⊂ I_i
    and other elsewhere; φ vanishes on ½((I_i ∖ ∪U_n) + I_j)
    """

    I1: OpenInterval
    I2: OpenInterval
    j: int
    D: float
    U: Tuple[OpenInterval, ...]
    other: Optional[float] = None


PeterSpec = Union[TrivialCase, BandCase, IndexCase]


def peter_triple(case: int, spec: PeterSpec) -> Tuple[Fn1D, Fn1D, Fn1D, OpenInterval, OpenInterval]:
    """(φ, ψ1, ψ2, I1, I2) satisfying the chosen case exactly"""
    expected = {1: TrivialCase, 2: BandCase, 3: IndexCase}.get(case)
    if expected is None:
        raise SpecError(f"Unknown case {case}; expected 1, 2 or 3")
    if not isinstance(spec, expected):
        raise SpecError(f"Case {case} needs a {expected.__name__}, got {type(spec).__name__}")
    if case == 1:
        triple = _trivial_triple(spec)
    elif case == 2:
        triple = _band_triple(spec)
    else:
        triple = _index_triple(spec)
    logger.info(f"Constructed case {case} triple on I1={spec.I1}, I2={spec.I2}")
    return triple


def _constant(domain: OpenInterval, value: float, name: str) -> Fn1D:
    return Fn1D.from_expr(domain, Const(float(value)), name)


def _steps(domain: OpenInterval, parts: Sequence[Tuple[float, float, float]], name: str) -> Fn1D:
    """Piecewise constant function from (lo, hi, value) triples, empty parts dropped"""
    kept = [(lo, hi, affine_body(0.0, v)) for lo, hi, v in parts if hi > lo]
    return Fn1D.from_pieces(domain, kept, name)


def _vanishing_on(domain: OpenInterval, zeros: Sequence[Tuple[float, float]], name: str = "phi") -> Fn1D:
    """
    0 on each closed zero interval (clipped to the domain), and a polynomial
    bump that is nonzero on every open gap between them
    """
    clipped = []
    for lo, hi in sorted(zeros):
        lo, hi = max(lo, domain.lo), min(hi, domain.hi)
        if hi <= lo:
            continue
        if clipped and lo <= clipped[-1][1]:
            clipped[-1] = (clipped[-1][0], max(clipped[-1][1], hi))
        else:
            clipped.append((lo, hi))
    if not clipped:
        raise SpecError(f"Zero set of φ misses {domain}")
    parts = []
    cursor = domain.lo
    for lo, hi in clipped:
        if lo > cursor:
            parts.append((cursor, lo, _gap_body(cursor, lo, left_open=cursor == domain.lo)))
        parts.append((lo, hi, affine_body(0.0, 0.0)))
        cursor = hi
    if cursor < domain.hi:
        parts.append((cursor, domain.hi, _gap_body(cursor, domain.hi, right_open=True)))
    return Fn1D.from_pieces(domain, parts, name)


def _gap_body(lo: float, hi: float, left_open: bool = False, right_open: bool = False):
    if left_open:
        return affine_body(-1.0, hi)  # hi - t
    if right_open:
        return affine_body(1.0, -lo)  # t - lo
    return quadratic_body(-1.0, lo + hi, -lo * hi)  # (t - lo)(hi - t)


def _trivial_triple(spec: TrivialCase):
    S = spec.I1.half_sum(spec.I2)
    if spec.phi_zero:
        if spec.D is not None:
            raise SpecError("Case 1 takes either phi_zero or a common constant D, not both")
        phi = _constant(S, 0.0, "phi")
        psi1 = spec.psi1 or _constant(spec.I1, 1.0, "psi1")
        psi2 = spec.psi2 or _constant(spec.I2, -1.0, "psi2")
    else:
        if spec.D is None:
            raise SpecError("Case 1 without phi_zero needs the common constant D")
        if spec.psi1 is not None or spec.psi2 is not None:
            raise SpecError("Case 1 with a common constant D fixes both ψ's")
        phi = spec.phi or Fn1D.from_body(S, affine_body(1.0, 0.0), "phi")
        psi1 = _constant(spec.I1, spec.D, "psi1")
        psi2 = _constant(spec.I2, spec.D, "psi2")
    return phi, psi1, psi2, spec.I1, spec.I2


def _band_triple(spec: BandCase):
    Is = (spec.I1, spec.I2)
    for i, (I, a, b) in enumerate(zip(Is, spec.a, spec.b), start=1):
        if not I.lo <= a <= b <= I.hi:
            raise SpecError(f"Need inf I{i} ≤ a{i} ≤ b{i} ≤ sup I{i}, got a{i}={a}, b{i}={b} on {I}")
        if a == I.hi or b == I.lo:
            raise SpecError(f"U{i} and V{i} must differ from I{i}")
    u_nonempty = all(a > I.lo for I, a in zip(Is, spec.a))
    v_nonempty = all(b < I.hi for I, b in zip(Is, spec.b))
    if not (u_nonempty or v_nonempty):
        raise SpecError("U1, U2 must both be nonempty or V1, V2 must both be nonempty")

    k_value = spec.k_value if spec.k_value is not None else 0.5 * (spec.D + spec.E) + 1.0
    psis = [
        _steps(I, [(I.lo, a, spec.D), (a, b, k_value), (b, I.hi, spec.E)], f"psi{i}")
        for i, (I, a, b) in enumerate(zip(Is, spec.a, spec.b), start=1)
    ]
    (lo1, hi1), (lo2, hi2) = spec.I1.as_tuple(), spec.I2.as_tuple()
    (a1, a2), (b1, b2) = spec.a, spec.b
    zeros = [(0.5 * (a1 + lo2), 0.5 * (b1 + hi2)), (0.5 * (lo1 + a2), 0.5 * (hi1 + b2))]
    phi = _vanishing_on(spec.I1.half_sum(spec.I2), zeros)
    return phi, psis[0], psis[1], spec.I1, spec.I2


def _index_triple(spec: IndexCase):
    if spec.j not in (1, 2):
        raise SpecError(f"j must be 1 or 2, got {spec.j}")
    Ij, Ii = (spec.I1, spec.I2) if spec.j == 1 else (spec.I2, spec.I1)
    if not spec.U:
        raise SpecError("Case 3 needs at least one interval U_n")
    U = sorted(spec.U, key=lambda J: J.lo)
    for J in U:
        if not Ii.contains(J):
            raise SpecError(f"U_n={J} is not inside I_i={Ii}")
    for left, right in zip(U, U[1:]):
        if right.lo < left.hi:
            raise SpecError(f"U_n intervals {left} and {right} overlap")

    # complement components of ∪U_n in I_i, closed in I_i
    complement = []
    cursor = Ii.lo
    for J in U:
        if J.lo > cursor or (J.lo == cursor and cursor > Ii.lo):
            complement.append((cursor, J.lo))
        cursor = J.hi
    if cursor < Ii.hi:
        complement.append((cursor, Ii.hi))
    if not complement:
        raise SpecError("The U_n must not exhaust I_i")

    other = spec.other if spec.other is not None else spec.D + 2.0
    parts = []
    cursor = Ii.lo
    for J in U:
        parts.append((cursor, J.lo, other))
        parts.append((J.lo, J.hi, spec.D))
        cursor = J.hi
    parts.append((cursor, Ii.hi, other))
    psi_i = _steps(Ii, parts, "psi_i")
    psi_j = _constant(Ij, spec.D, "psi_j")

    zeros = [(0.5 * (c_lo + Ij.lo), 0.5 * (c_hi + Ij.hi)) for c_lo, c_hi in complement]
    phi = _vanishing_on(spec.I1.half_sum(spec.I2), zeros)
    psi1, psi2 = (psi_j.renamed("psi1"), psi_i.renamed("psi2")) if spec.j == 1 else (psi_i.renamed("psi1"), psi_j.renamed("psi2"))
    return phi, psi1, psi2, spec.I1, spec.I2


# ---------------------------------------------------------------------------
# Linkage from a differentiable tuple to the auxiliary equation
# ---------------------------------------------------------------------------

def aux_pair_from_tuple(
    s: "SolutionTuple",
    B: float,
    U: OpenInterval,
) -> Tuple[Fn1D, Fn1D, Fn1D, OpenInterval, OpenInterval]:
    """
    φ(t) = G′(2t) - B on ½(g1(U*) + g2(U*)) and ψ_k = g_k′ ∘ g_k⁻¹ on g_k(U*)
    for an affinity interval U of F
    """
    star = u_star(U, s.g1, s.g2, s.I)
    I1, I2 = image(s.g1, star), image(s.g2, star)
    G = s.G

    def phi_value(t: np.ndarray) -> np.ndarray:
        return G.deriv(2.0 * np.asarray(t, dtype=float), margin=0.0) - B

    def linked(g: Fn1D) -> Callable[[np.ndarray], np.ndarray]:
        return lambda v: g.deriv(monotone_inverse(g, v), margin=0.0)

    phi = Fn1D.from_body(I1.half_sum(I2), CallableBody(phi_value, label="phi"), "phi")
    psi1 = Fn1D.from_body(I1, CallableBody(linked(s.g1), label="psi1"), "psi1")
    psi2 = Fn1D.from_body(I2, CallableBody(linked(s.g2), label="psi2"), "psi2")
    logger.info(f"Auxiliary pair on U*={star}: I1={I1}, I2={I2}")
    return phi, psi1, psi2, I1, I2
