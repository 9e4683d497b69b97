"""
Property checks of the interval set constructions on one (H, g1, g2, I) instance
"""
from typing import Dict, List, Optional
import logging

import numpy as np

from pexider_kit.core.interval_geometry import h_ext, h_k, h_ref, side_sum_within
from pexider_kit.core.intervals import OpenInterval
from pexider_kit.core.piecewise_fn import Fn1D
from pexider_kit.core.random_functions import random_pair, random_subinterval

logger = logging.getLogger(__name__)

EPS_SCHEDULE = (1e-2, 1e-3, 1e-4, 1e-5)


def _tol(I: OpenInterval) -> float:
    return 1e-8 * (1.0 + I.length)


def _inside(inner: Optional[OpenInterval], outer: Optional[OpenInterval], tol: float) -> bool:
    if inner is None:
        return True
    return outer is not None and outer.contains(inner, tol)


def _same(first: OpenInterval, second: OpenInterval, tol: float) -> bool:
    return abs(first.lo - second.lo) <= tol and abs(first.hi - second.hi) <= tol


def check_instance(
    H: OpenInterval,
    g1: Fn1D,
    g2: Fn1D,
    I: OpenInterval,
    rng: np.random.Generator,
    points_per_side: int = 5,
) -> Dict[str, bool]:
    """
    Evaluate every set-level property on one instance

    Steps:
    1. H ⊆ H_ext and H ⊆ H_ref, strictly when H ≠ I
    2. H_k(inf H) ⊇ H, and H_k(a - ε) grows towards H as ε shrinks
    3. For random x < a = inf H with H_k(x) ≠ ∅ and u ∈ [x, a]: H_k(x) ⊆ H_k(u)
    4. The same x: inf H_k(x) ≥ a and sup H_k(x) = sup H
    5. H⁻ + H⁺ ⊆ H + I when both sides exist
    6. Negating both g's leaves H_ext unchanged
    """
    tol = _tol(I)
    results: Dict[str, bool] = {}
    proper = H.lo > I.lo + tol or H.hi < I.hi - tol

    ext, ref = h_ext(H, g1, g2, I), h_ref(H, I)
    results["ext_contains_H"] = ext.contains(H, tol) and (not proper or ext.strictly_contains(H, tol))
    results["ref_contains_H"] = ref.contains(H, tol) and (not proper or ref.strictly_contains(H, tol))

    a, b = H.lo, H.hi
    if a > I.lo + tol:
        at_a = all(_inside(H, h_k(H, a, k, g1, g2, I), tol) for k in (1, 2))
        growing = True
        for k in (1, 2):
            previous = None
            for eps in EPS_SCHEDULE:
                x = a - eps * (a - I.lo)
                current = h_k(H, x, k, g1, g2, I)
                growing &= _inside(previous, current, tol)
                previous = current if current is not None else previous
        results["limit_at_inf_H"] = at_a and growing

        nested, ends = True, True
        for x in rng.uniform(I.lo, a, size=points_per_side):
            if not I.lo < x < a:
                continue
            u = rng.uniform(x, a)
            for k in (1, 2):
                at_x = h_k(H, x, k, g1, g2, I)
                if at_x is None:
                    continue
                nested &= _inside(at_x, h_k(H, u, k, g1, g2, I), tol)
                ends &= at_x.lo >= a - tol and abs(at_x.hi - b) <= tol
        results["monotone_in_x"] = nested
        results["left_endpoints"] = ends

    within = side_sum_within(H, I, tol)
    if within is not None:
        results["side_sum"] = within

    mirrored = h_ext(H, g1.negated(), g2.negated(), I)
    results["decreasing_symmetry"] = _same(mirrored, ext, tol)

    failed = [name for name, ok in results.items() if not ok]
    if failed:
        logger.warning(f"Geometry properties failed for H={H} in I={I}: {failed}")
    return results


def run_suite(rng: np.random.Generator, instances: int, I: Optional[OpenInterval] = None) -> Dict[str, List[int]]:
    """Failure indices per property over random increasing and decreasing instances"""
    I = I or OpenInterval(0.0, 4.0)
    failures: Dict[str, List[int]] = {}
    for index in range(instances):
        direction = 1 if index % 2 == 0 else -1
        g1, g2 = random_pair(rng, I, direction)
        H = I if index % 10 == 9 else random_subinterval(rng, I)
        for name, ok in check_instance(H, g1, g2, I, rng).items():
            failures.setdefault(name, [])
            if not ok:
                failures[name].append(index)
    logger.info(f"Geometry suite: {instances} instances, failing properties: "
                f"{[name for name, idx in failures.items() if idx]}")
    return failures
