"""
Self-test battery: the fixed example, the constraint ledger, the seven
profile cases, the three case constructions and the random geometry suite
"""
from typing import Callable, List
import logging

import numpy as np

from pexider_kit.core.engine import PROFILE_CORPUS, BuildEngine, default_build_spec, mirrored_example_spec
from pexider_kit.core.geometry_checks import run_suite
from pexider_kit.core.intervals import OpenInterval
from pexider_kit.core.solution_families import (
    build_from_profiles,
    example_partial_params,
    family_bound,
    paper_example,
)
from pexider_kit.core.verification import (
    SYSTEM_BOUND,
    BandCase,
    IndexCase,
    TrivialCase,
    check_const,
    peter_triple,
    residual_aux,
    residual_main,
    residual_system,
)
from pexider_kit.schemas.reports import SelftestCheck, SelftestReport

logger = logging.getLogger(__name__)

CLOSED_FORM_BOUND = 1e-12

# (point, function, expected value) on the example tuple
EXAMPLE_VALUES = (
    (0.5, "F", 2.5),
    (2.0, "F", 8.0),
    (3.0, "f1", 3.75),
    (3.0, "f2", 3.75),
    (3.0, "g1", 3.25),
    (3.0, "g2", 3.25),
    (4.25, "G", 12.75),
)

CASE_SPECS = {
    "cases.1.phi_zero": (1, TrivialCase(OpenInterval(0.0, 1.0), OpenInterval(1.0, 3.0))),
    "cases.1.common_constant": (1, TrivialCase(OpenInterval(0.0, 1.0), OpenInterval(1.0, 3.0), phi_zero=False, D=2.0)),
    "cases.2": (2, BandCase(OpenInterval(0.0, 2.0), OpenInterval(0.0, 2.0), a=(0.5, 0.5), b=(1.5, 1.5), D=1.0, E=3.0)),
    "cases.3": (3, IndexCase(OpenInterval(0.0, 2.0), OpenInterval(0.0, 2.0), j=1, D=1.0, U=(OpenInterval(0.0, 1.0),))),
}


def _residual_check(name: str, report) -> SelftestCheck:
    return SelftestCheck(
        name=name,
        passed=report.passed,
        detail={"max_abs": report.max_abs, "bound": report.bound, "worst_point": list(report.worst_point)},
    )


def _guarded(name: str, check: Callable[[], List[SelftestCheck]]) -> List[SelftestCheck]:
    """Run one group; an exception fails the group instead of aborting the battery"""
    try:
        return check()
    except Exception as exc:
        logger.error(f"Selftest group {name} raised {type(exc).__name__}: {exc}")
        return [SelftestCheck(name=name, passed=False, detail={"error": f"{type(exc).__name__}: {exc}"})]


def example_checks(n: int) -> List[SelftestCheck]:
    s = paper_example()
    checks = [_residual_check("example.residual", residual_main(s, n=n, bound=CLOSED_FORM_BOUND))]
    misses = {}
    for point, name, expected in EXAMPLE_VALUES:
        value = float(s.functions[name].eval(point))
        if abs(value - expected) > CLOSED_FORM_BOUND * max(1.0, abs(expected)):
            misses[f"{name}({point})"] = value
    checks.append(SelftestCheck(name="example.values", passed=not misses, detail=misses))
    mirrored = BuildEngine().build(mirrored_example_spec())
    checks.append(_residual_check("example.mirrored", residual_main(mirrored, n=n, bound=CLOSED_FORM_BOUND)))
    return checks


def constraint_checks() -> List[SelftestCheck]:
    params = example_partial_params()
    ledger = check_const(params)
    failing = [c.identity for c in check_const(params.replace(B=2.0)) if not c.passed]
    return [
        SelftestCheck(
            name="constraints.example",
            passed=all(c.passed for c in ledger),
            detail={"failing": [c.identity for c in ledger if not c.passed]},
        ),
        SelftestCheck(
            name="constraints.B2",
            passed="C⁻ + A/2 = B·D⁻" in failing,
            detail={"failing": failing},
        ),
    ]


def profile_checks(case: str, n: int) -> List[SelftestCheck]:
    spec = default_build_spec("profiles", case)
    profiles = BuildEngine().profiles(spec)
    first, second = residual_system(profiles, n=n, bound=SYSTEM_BOUND)
    s = build_from_profiles(profiles)
    main = residual_main(s, n=n, bound=family_bound("profiles", case))
    return [
        _residual_check(f"profiles.{case}.system.1", first),
        _residual_check(f"profiles.{case}.system.2", second),
        _residual_check(f"profiles.{case}.reconstruction", main),
    ]


def case_check(name: str, n: int) -> List[SelftestCheck]:
    case, spec = CASE_SPECS[name]
    phi, psi1, psi2, I1, I2 = peter_triple(case, spec)
    return [_residual_check(name, residual_aux(phi, psi1, psi2, I1, I2, n=n, bound=CLOSED_FORM_BOUND))]


def geometry_checks(rng: np.random.Generator, instances: int) -> List[SelftestCheck]:
    failures = run_suite(rng, instances)
    return [
        SelftestCheck(name=f"geometry.{name}", passed=not indices, detail={"failed_instances": indices})
        for name, indices in sorted(failures.items())
    ]


def run_selftest(seed: int = 0, instances: int = 100, n: int = 100) -> SelftestReport:
    """
    Run every group and collect the checks

    Steps:
    1. Example fidelity: residual, spot values, mirrored example
    2. Constraint ledger on the example and on its B = 2 variant
    3. Seven profile cases: system residuals and reconstructed tuples
    4. Case constructions of φ((x+y)/2)(ψ1(x) - ψ2(y)) = 0
    5. Geometry properties over `instances` seeded random pairs
    """
    rng = np.random.default_rng(seed)
    checks: List[SelftestCheck] = []
    checks += _guarded("example", lambda: example_checks(n))
    checks += _guarded("constraints", constraint_checks)
    for case in PROFILE_CORPUS:
        checks += _guarded(f"profiles.{case}", lambda case=case: profile_checks(case, n))
    for name in CASE_SPECS:
        checks += _guarded(name, lambda name=name: case_check(name, n))
    checks += _guarded("geometry", lambda: geometry_checks(rng, instances))

    report = SelftestReport(seed=seed, checks=checks)
    failed = [c.name for c in checks if not c.passed]
    logger.info(f"Selftest: {len(checks) - len(failed)} of {len(checks)} checks passed, failing: {failed}")
    return report
