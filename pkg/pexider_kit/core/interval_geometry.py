"""
Interval set constructions around an open subinterval H of I

For continuous g1, g2 strictly monotone in the same sense on I:

    S      = g1(H) + g2(H)
    H_k(x) = g_{3-k}^{-1}(S - g_k(x)) ∩ H
    H_ext  = {x in I : H_1(x) and H_2(x) nonempty}
    H_ref  = (2H - H) ∩ I
    U*     = U_ext ∩ U_ref

Images of open intervals are taken from endpoint limits (continuous
extension of the boundary piece), so they are exact for closed-form g's.
"""
from typing import Optional, Tuple
import logging

import numpy as np

from pexider_kit.config import get_settings
from pexider_kit.core.exceptions import GeometryError
from pexider_kit.core.intervals import OpenInterval, make_interval
from pexider_kit.core.piecewise_fn import Fn1D, monotone_inverse
from pexider_kit.schemas.reports import IntervalSetReport

settings = get_settings()
logger = logging.getLogger(__name__)

__all__ = [
    "OpenInterval",
    "image",
    "sumset_image",
    "side_sets",
    "h_ref",
    "h_k",
    "h_ext",
    "u_star",
    "interval_sets",
    "side_sum_within",
]


def _slack(scale: float) -> float:
    return settings.EMPTY_SLACK * (1.0 + abs(scale))


def image(g: Fn1D, J: OpenInterval) -> OpenInterval:
    """g(J) for strictly monotone g, from endpoint limits"""
    if not g.domain.contains(J, _slack(g.domain.length)):
        raise GeometryError(f"{J} is not inside the domain {g.domain} of {g.name}")
    _ = g.monotone_direction  # raises on non-monotone g
    ends = g.eval(np.array([J.lo, J.hi]), margin=0.0)
    return OpenInterval(float(ends.min()), float(ends.max()))


def sumset_image(g1: Fn1D, g2: Fn1D, J1: OpenInterval, J2: OpenInterval) -> OpenInterval:
    """g1(J1) + g2(J2)"""
    return image(g1, J1) + image(g2, J2)


def side_sets(H: OpenInterval, I: OpenInterval) -> Tuple[Optional[OpenInterval], Optional[OpenInterval]]:
    """(H⁻, H⁺): the parts of I strictly below and strictly above H"""
    _require_inside(H, I)
    return make_interval(I.lo, H.lo), make_interval(H.hi, I.hi)


def h_ref(H: OpenInterval, I: OpenInterval) -> OpenInterval:
    """(2H - H) ∩ I"""
    _require_inside(H, I)
    reflected = OpenInterval(2 * H.lo - H.hi, 2 * H.hi - H.lo)
    return reflected.intersect(I)


def h_k(H: OpenInterval, x: float, k: int, g1: Fn1D, g2: Fn1D, I: OpenInterval) -> Optional[OpenInterval]:
    """Restricted preimage g_{3-k}^{-1}(g1(H) + g2(H) - g_k(x)) ∩ H, None when empty"""
    if k not in (1, 2):
        raise GeometryError(f"k must be 1 or 2, got {k}")
    _require_pair(g1, g2, I)
    _require_inside(H, I)
    if not I.lo < x < I.hi:
        raise GeometryError(f"x={x} is not in {I}")
    gk, other = (g1, g2) if k == 1 else (g2, g1)
    S = sumset_image(g1, g2, H, H)
    target = S.shifted(-gk.eval(x, margin=0.0))
    return _preimage(other, target, H)


def h_ext(H: OpenInterval, g1: Fn1D, g2: Fn1D, I: OpenInterval) -> OpenInterval:
    """{x in I : H_1(x) ≠ ∅ and H_2(x) ≠ ∅}"""
    _require_pair(g1, g2, I)
    _require_inside(H, I)
    S = sumset_image(g1, g2, H, H)
    first = _preimage(g1, S - image(g2, H), I)
    second = _preimage(g2, S - image(g1, H), I)
    if first is None or second is None:
        raise GeometryError(f"Extension of {H} came out empty")
    ext = first.intersect(second)
    if ext is None:
        raise GeometryError(f"Extension of {H} came out empty")
    return ext


def u_star(U: OpenInterval, g1: Fn1D, g2: Fn1D, I: OpenInterval) -> OpenInterval:
    """U_ext ∩ U_ref"""
    star = h_ext(U, g1, g2, I).intersect(h_ref(U, I))
    if star is None:
        raise GeometryError(f"U* of {U} came out empty")
    return star


def side_sum_within(H: OpenInterval, I: OpenInterval, slack: float = 0.0) -> Optional[bool]:
    """H⁻ + H⁺ ⊆ H + I; None when a side is empty"""
    minus, plus = side_sets(H, I)
    if minus is None or plus is None:
        return None
    return (H + I).contains(minus + plus, slack)


def interval_sets(
    H: OpenInterval,
    g1: Fn1D,
    g2: Fn1D,
    I: OpenInterval,
    points: Tuple[float, ...] = (),
) -> IntervalSetReport:
    """All set constructions for H in one report, plus H_k(x) for the given points"""
    minus, plus = side_sets(H, I)
    ext = h_ext(H, g1, g2, I)
    ref = h_ref(H, I)
    restricted = {}
    for x in points:
        for k in (1, 2):
            restricted[f"H_{k}({x:.12g})"] = h_k(H, x, k, g1, g2, I)
    report = IntervalSetReport(
        H=H,
        I=I,
        ext=ext,
        ref=ref,
        star=ext.intersect(ref),
        side_minus=minus,
        side_plus=plus,
        restricted=restricted,
    )
    logger.info(f"Interval sets for H={H} in I={I}: ext={ext}, ref={ref}, star={report.star}")
    return report


def _require_inside(H: OpenInterval, I: OpenInterval) -> None:
    if not I.contains(H, _slack(I.length)):
        raise GeometryError(f"{H} is not a subinterval of {I}")


def _require_pair(g1: Fn1D, g2: Fn1D, I: OpenInterval) -> None:
    for g in (g1, g2):
        if not g.domain.contains(I, _slack(I.length)):
            raise GeometryError(f"{g.name} is defined on {g.domain}, which does not cover {I}")
    if g1.monotone_direction != g2.monotone_direction:
        raise GeometryError(f"{g1.name} and {g2.name} are monotone in opposite senses")


def _preimage(g: Fn1D, target: OpenInterval, within: OpenInterval) -> Optional[OpenInterval]:
    """g^{-1}(target) ∩ within for strictly monotone g"""
    img = image(g, within)
    hit = target.intersect(img)
    if hit is None:
        return None
    if g.monotone_direction > 0:
        low_end, high_end = within.lo, within.hi
    else:
        low_end, high_end = within.hi, within.lo

    def pull(v: float) -> float:
        if abs(v - img.lo) <= _slack(v):
            return low_end
        if abs(v - img.hi) <= _slack(v):
            return high_end
        return monotone_inverse(g, v)

    a, b = pull(hit.lo), pull(hit.hi)
    return make_interval(min(a, b), max(a, b))
