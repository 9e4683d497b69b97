"""
Seeded random strictly monotone functions for property suites
"""
from typing import Tuple

import numpy as np

from pexider_kit.core.expressions import Exp, Poly
from pexider_kit.core.intervals import OpenInterval
from pexider_kit.core.piecewise_fn import Fn1D, affine_body, quadratic_body


def random_monotone(rng: np.random.Generator, I: OpenInterval, direction: int = 1, name: str = "g") -> Fn1D:
    """
    c0 + c1·x + c3·(x - m)³ + ce·exp(r·(x - m)/L) with c1 > 0, c3, ce ≥ 0,
    negated when direction < 0; every third draw is a two-piece C¹ function
    """
    m, L = I.midpoint, I.length
    if rng.integers(3) == 0:
        fn = _two_piece(rng, I, name)
    else:
        c0 = rng.normal()
        c1 = rng.uniform(0.2, 3.0) / L
        c3 = rng.uniform(0.0, 2.0) / L**3
        ce = rng.uniform(0.0, 1.0)
        rate = rng.uniform(0.1, 2.0) / L
        expr = Poly((c0 - c3 * m**3, c1 + 3 * c3 * m**2, -3 * c3 * m, c3)) + ce * Exp(rate, -rate * m)
        fn = Fn1D.from_expr(I, expr, name)
    return fn if direction > 0 else fn.negated().renamed(name)


def _two_piece(rng: np.random.Generator, I: OpenInterval, name: str) -> Fn1D:
    """Affine on the left of a random knot, convex quadratic on the right, joined with matching slope"""
    knot = rng.uniform(I.lo + 0.2 * I.length, I.hi - 0.2 * I.length)
    slope = rng.uniform(0.2, 3.0) / I.length
    curvature = rng.uniform(0.1, 2.0) / I.length**2
    value = rng.normal()
    left = affine_body(slope, value - slope * knot)
    # value + slope·(x - knot) + curvature·(x - knot)²
    right = quadratic_body(
        curvature,
        slope - 2 * curvature * knot,
        value - slope * knot + curvature * knot**2,
    )
    return Fn1D.from_pieces(I, [(I.lo, knot, left), (knot, I.hi, right)], name)


def random_subinterval(rng: np.random.Generator, I: OpenInterval, min_fraction: float = 0.05) -> OpenInterval:
    """Uniformly drawn H ⊆ I of length at least min_fraction·|I|"""
    while True:
        lo, hi = np.sort(rng.uniform(I.lo, I.hi, size=2))
        if hi - lo >= min_fraction * I.length:
            return OpenInterval(float(lo), float(hi))


def random_pair(rng: np.random.Generator, I: OpenInterval, direction: int = 1) -> Tuple[Fn1D, Fn1D]:
    return random_monotone(rng, I, direction, "g1"), random_monotone(rng, I, direction, "g2")
