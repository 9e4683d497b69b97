"""
Build engine: turns a validated build spec into a solution tuple
"""
from typing import Any, Dict, Optional
import logging

from pexider_kit.config import get_settings
from pexider_kit.core.function_factory import build_fn
from pexider_kit.core.intervals import OpenInterval
from pexider_kit.core.solution_families import (
    AffineParams,
    Anchors,
    AuxProfiles,
    PartiallyAffineParams,
    SolutionTuple,
    aux_profiles,
    build_affine,
    build_from_profiles,
    build_partially_affine,
    family_bound,
    paper_example,
)
from pexider_kit.schemas.config import (
    AffineBuild,
    ExampleBuild,
    PartialBuild,
    ProfilesBuild,
)
from pexider_kit.schemas.functions import AffineFn, ExpFn, PolynomialFn

settings = get_settings()
logger = logging.getLogger(__name__)

FAMILIES = ("affine", "partial", "paper-example", "profiles")

# Constant sets for the seven profile cases; every one keeps its denominators
# and ψ2 ± ψ1 away from zero on I.
PROFILE_CORPUS: Dict[str, Dict[str, Any]] = {
    "trig": dict(a=1.0, b=2.0, c=0.0, d=1.0, gamma=-1.0, lam=5.0, nu=0.0, I=(0.0, 1.0)),
    "linear": dict(a=0.0, b=1.0, c=1.0, d=0.0, gamma=0.0, lam=2.0, nu=0.0, I=(1.0, 2.0)),
    "hyperbolic": dict(a=1.0, b=2.0, c=0.0, d=1.0, gamma=1.0, lam=2.0, nu=0.0, I=(0.0, 1.0)),
    "constant": dict(a=2.0, b=0.0, I=(0.0, 1.0), phi=ExpFn()),
    "trig-zero": dict(a=1.0, b=2.0, c=0.0, d=1.0, gamma=-1.0, lam=5.0, nu=0.0, I=(0.0, 1.0)),
    "linear-zero": dict(a=0.0, b=1.0, c=1.0, d=0.0, gamma=0.0, lam=2.0, nu=0.0, I=(1.0, 2.0)),
    "hyperbolic-zero": dict(a=1.0, b=2.0, c=0.0, d=1.0, gamma=1.0, lam=2.0, nu=0.0, I=(0.0, 1.0)),
}


class BuildEngine:
    """Dispatches a build spec to its family builder"""

    def build(self, spec) -> SolutionTuple:
        """
        Build the tuple described by spec

        Steps:
        1. Resolve function specs into Fn1D on the right domains
        2. Call the family builder (constraint and continuity checks live there)
        3. Return the tuple; the caller measures residuals
        """
        family = spec.family
        logger.info(f"Building family '{family}'")
        if family == "affine":
            return build_affine(self.affine_params(spec))
        elif family == "partial":
            return build_partially_affine(self.partial_params(spec))
        elif family == "paper-example":
            return paper_example()
        elif family == "profiles":
            anchors = Anchors(**spec.anchors.model_dump())
            return build_from_profiles(self.profiles(spec), anchors, tol=spec.quad_tol, grid_size=spec.grid_size)
        raise ValueError(f"Unknown family: {family}")

    def bound(self, spec, override: Optional[float] = None) -> float:
        if override is not None:
            return override
        return family_bound(spec.family, getattr(spec, "case", None))

    def affine_params(self, spec: AffineBuild) -> AffineParams:
        I = OpenInterval(*spec.I)
        return AffineParams(
            I=I, A=spec.A, alpha=spec.alpha, B=spec.B, beta1=spec.beta1, beta2=spec.beta2,
            g1=build_fn(spec.g1, I, "g1"), g2=build_fn(spec.g2, I, "g2"),
        )

    def partial_params(self, spec: PartialBuild) -> PartiallyAffineParams:
        constants = spec.model_dump(exclude={"family", "I", "K", "F_minus", "F_plus", "g1_mid", "g2_mid"})
        params = PartiallyAffineParams(I=OpenInterval(*spec.I), K=tuple(spec.K), **constants)
        if not params.I.lo <= params.k_lo < params.k_hi <= params.I.hi:
            return params  # the builder reports the bad K
        K_bar, I = params.K_bar, params.I
        stubs = {}
        if spec.F_minus is not None and params.has_minus:
            stubs["F_minus"] = build_fn(spec.F_minus, OpenInterval(I.lo, K_bar.lo), "F_minus")
        if spec.F_plus is not None and params.has_plus:
            stubs["F_plus"] = build_fn(spec.F_plus, OpenInterval(K_bar.hi, I.hi), "F_plus")
        for name in ("g1_mid", "g2_mid"):
            stub = getattr(spec, name)
            if stub is not None:
                stubs[name] = build_fn(stub, params.K_interior, name)
        return params.replace(**stubs) if stubs else params

    def profiles(self, spec: ProfilesBuild) -> AuxProfiles:
        I = OpenInterval(*spec.I)
        phi = build_fn(spec.phi, I, "phi") if spec.phi is not None else None
        return aux_profiles(
            spec.case, spec.a, spec.b, spec.c, spec.d, spec.gamma, spec.lam, spec.nu, I, phi_override=phi,
        )

    def params_record(self, spec) -> Dict[str, Any]:
        """Plain constants stored alongside an artifact"""
        if spec.family in ("partial", "affine"):
            return spec.model_dump(mode="json", exclude={"family"})
        if spec.family == "paper-example":
            return example_spec().model_dump(mode="json", exclude={"family"})
        return {}


def example_spec() -> PartialBuild:
    """The example constants: I = ]0,4[, K = [2,4[, A = 4, B = 3, C⁻ = D⁻ = 1"""
    return PartialBuild(I=(0.0, 4.0), K=(2.0, 4.0), A=4.0, B=3.0, C_minus=1.0, D_minus=1.0)


def mirrored_example_spec() -> PartialBuild:
    """The example reflected by x ↦ 4 - x, so K⁺ is nonempty and K⁻ is empty"""
    return PartialBuild(
        I=(0.0, 4.0), K=(0.0, 2.0), A=-4.0, alpha=16.0, B=3.0,
        C_plus=-1.0, D_plus=-1.0,
        gamma1_plus=4.0, gamma2_plus=4.0, delta1_plus=4.0, delta2_plus=4.0,
        F_plus=PolynomialFn(coefficients=[34.0, -16.0, 2.0]),
        g1_mid=PolynomialFn(coefficients=[5.0, -2.0, 0.25]),
        g2_mid=PolynomialFn(coefficients=[5.0, -2.0, 0.25]),
    )


def default_build_spec(family: str, case: Optional[str] = None):
    """Ready-made build spec for a family (and profile case)"""
    if family == "affine":
        return AffineBuild(
            I=(0.0, 1.0), A=2.0, alpha=1.0, B=3.0, beta1=1.0, beta2=-1.0,
            g1=AffineFn(slope=1.0), g2=PolynomialFn(coefficients=[0.0, 1.0, 0.0, 1.0]),
        )
    elif family == "partial":
        return example_spec()
    elif family == "paper-example":
        return ExampleBuild()
    elif family == "profiles":
        case = case or "linear"
        if case not in PROFILE_CORPUS:
            raise ValueError(f"Unknown profile case: {case}")
        return ProfilesBuild(case=case, **PROFILE_CORPUS[case])
    raise ValueError(f"Unknown family: {family}")
