import dataclasses
import math

import numpy as np
import pytest

from pexider_kit.core.engine import PROFILE_CORPUS, BuildEngine, default_build_spec, mirrored_example_spec
from pexider_kit.core.exceptions import (
    ConstraintError,
    ContinuityError,
    DegeneracyError,
    DomainError,
    RangeError,
    SpecError,
)
from pexider_kit.core.expressions import IDENTITY, Exp, Poly
from pexider_kit.core.intervals import OpenInterval
from pexider_kit.core.piecewise_fn import Fn1D, affine_body, diagonal_solve, quadratic_body
from pexider_kit.core.random_functions import random_pair
from pexider_kit.core.solution_families import (
    AffineParams,
    Anchors,
    ProfileCase,
    aux_profiles,
    build_affine,
    build_from_profiles,
    build_partially_affine,
    example_partial_params,
    profiles_from_tuple,
    reconstruct_from_profiles,
    solve_for_G,
)
from pexider_kit.core.verification import classify_affine_intervals, residual_extension, residual_main, residual_system

UNIT = OpenInterval(0.0, 1.0)
FRACTION_CASES = ["trig", "linear", "hyperbolic", "trig-zero", "linear-zero", "hyperbolic-zero"]


def affine_params(g2=None, **changes):
    params = AffineParams(
        I=UNIT, A=2.0, alpha=1.0, B=3.0, beta1=1.0, beta2=-1.0,
        g1=Fn1D.from_expr(UNIT, IDENTITY, "g1"),
        g2=g2 or Fn1D.from_expr(UNIT, Poly((0.0, 1.0, 0.0, 1.0)), "g2"),
    )
    return dataclasses.replace(params, **changes)


def corpus_profiles(case):
    constants = dict(PROFILE_CORPUS[case])
    I = OpenInterval(*constants.pop("I"))
    phi = constants.pop("phi", None)
    override = Fn1D.from_expr(I, Exp(), "exp") if phi is not None else None
    return aux_profiles(ProfileCase(case), I=I, phi_override=override, **constants)


@pytest.fixture(scope="module")
def linear_tuple():
    return build_from_profiles(corpus_profiles("linear"))


@pytest.fixture(scope="module")
def reconstructed():
    cache = {}

    def get(case):
        if case not in cache:
            cache[case] = build_from_profiles(corpus_profiles(case))
        return cache[case]

    return get


class TestAffineFamily:
    def test_zero_tuple(self):
        identity = Fn1D.from_expr(UNIT, IDENTITY)
        s = build_affine(affine_params(g2=identity, g1=identity, A=0.0, alpha=0.0, B=0.0, beta1=0.0, beta2=0.0))
        x = UNIT.grid(11)
        for name in ("F", "f1", "f2"):
            np.testing.assert_array_equal(s.functions[name].eval(x), 0.0)
        assert residual_main(s, n=20).max_abs == 0.0

    def test_cubic_g2(self):
        s = build_affine(affine_params())
        assert s.G.domain.as_tuple() == (0.0, 3.0)
        assert residual_main(s, n=50).max_abs < 1e-12

    def test_g_can_be_chosen_freely(self):
        s = build_affine(affine_params(g2=Fn1D.from_expr(UNIT, Exp(), "exp")))
        assert residual_main(s, n=50).max_abs < 1e-12

    def test_opposite_senses_rejected(self):
        with pytest.raises(ValueError):
            build_affine(affine_params(g2=Fn1D.from_expr(UNIT, -1.0 * IDENTITY)))

    @pytest.mark.parametrize("seed", range(50))
    def test_random_parameters(self, seed):
        rng = np.random.default_rng(seed)
        g1, g2 = random_pair(rng, UNIT, direction=1 if seed % 2 else -1)
        A, alpha, B, beta1, beta2 = rng.normal(size=5)
        s = build_affine(AffineParams(I=UNIT, A=A, alpha=alpha, B=B, beta1=beta1, beta2=beta2, g1=g1, g2=g2))
        assert residual_main(s, n=50).max_abs < 1e-12


class TestPartiallyAffineFamily:
    def test_example_spot_values(self, example):
        assert example.F.eval(0.5) == 2.5
        assert example.G.eval(4.25) == 12.75
        lhs = example.F.eval(2.0) + example.f1.eval(1.0) + example.f2.eval(3.0)
        assert lhs == 12.75
        assert example.G.eval(example.g1.eval(1.0) + example.g2.eval(3.0)) == 12.75

    def test_example_residual(self, example):
        assert residual_main(example, n=200).max_abs < 1e-12

    def test_builder_reproduces_example(self, example):
        built = build_partially_affine(example_partial_params())
        x = np.linspace(0.01, 3.99, 97)
        for name in ("F", "f1", "f2", "g1", "g2"):
            np.testing.assert_allclose(built.functions[name].eval(x), example.functions[name].eval(x), atol=1e-12)
        u = np.linspace(0.01, 9.99, 97)
        np.testing.assert_allclose(built.G.eval(u), example.G.eval(u), atol=1e-12)
        assert built.G.domain == example.G.domain
        assert residual_main(built, n=200).max_abs < 1e-12

    def test_constraint_violation_names_identity(self):
        with pytest.raises(ConstraintError) as info:
            build_partially_affine(example_partial_params().replace(B=2.0))
        assert "C⁻ + A/2 = B·D⁻" in str(info.value)
        assert [c.identity for c in info.value.failures][0] == "C⁻ + A/2 = B·D⁻"

    def test_mirrored_example(self):
        s = BuildEngine().build(mirrored_example_spec())
        assert s.params.has_plus and not s.params.has_minus
        assert residual_main(s, n=200).max_abs < 1e-12

    def test_junction_mismatch(self):
        stub = Fn1D.from_expr(OpenInterval(0.0, 1.0), IDENTITY, "bad")
        with pytest.raises(ContinuityError):
            build_partially_affine(example_partial_params().replace(F_minus=stub))

    def test_K_must_be_proper(self):
        with pytest.raises(SpecError):
            build_partially_affine(example_partial_params().replace(K=(0.0, 4.0)))
        with pytest.raises(SpecError):
            build_partially_affine(example_partial_params().replace(K=(3.0, 3.0)))

    def test_extension_formulas_hold_on_u_star(self):
        params = example_partial_params()
        s = build_partially_affine(params)
        for report in residual_extension(s, params, n=60):
            assert report.max_abs < 1e-9, report.label

    def test_affine_g_forces_affine_f(self, example):
        x = np.linspace(0.05, 1.95, 40)
        for f in (example.f1, example.f2):
            np.testing.assert_allclose(f.deriv(x), 1.0, atol=1e-9)

    def test_derivatives_match_central_differences(self, example):
        x = np.random.default_rng(5).uniform(0.1, 3.9, 20)
        h = 1e-5
        for fn in example.functions.values():
            t = fn.domain.lo + (x - 0.0) / 4.0 * fn.domain.length
            estimate = (fn.eval(t + h) - fn.eval(t - h)) / (2 * h)
            np.testing.assert_allclose(fn.deriv(t), estimate, atol=1e-6)


class TestProfiles:
    def test_linear_case_closed_forms(self):
        p = corpus_profiles("linear")
        x = np.linspace(1.01, 1.99, 25)
        np.testing.assert_allclose(p.phi.eval(x), x, atol=1e-15)
        np.testing.assert_allclose(p.psi1.eval(x), 1.0, atol=1e-15)
        np.testing.assert_allclose(p.psi2.eval(x), x + 2.0, atol=1e-15)
        np.testing.assert_allclose(p.Psi1.eval(x), x, atol=1e-15)
        np.testing.assert_allclose(p.Psi2.eval(x), 0.5 * x**2, atol=1e-15)
        first, second = residual_system(p, n=50)
        assert first.max_abs < 1e-14
        assert second.max_abs < 1e-14

    @pytest.mark.parametrize("case", sorted(PROFILE_CORPUS))
    def test_every_case_solves_the_system(self, case):
        p = corpus_profiles(case)
        assert p.case.value == case
        for report in residual_system(p, n=60):
            assert report.max_abs < 1e-10, f"{case} {report.label}"
        if p.case.psi1_vanishes:
            np.testing.assert_array_equal(p.psi1.eval(p.I.grid(9)), 0.0)

    def test_Psi1_is_phi_times_psi1(self):
        p = corpus_profiles("trig")
        x = p.I.grid(33)
        np.testing.assert_allclose(p.Psi1.eval(x), p.phi.eval(x) * p.psi1.eval(x), atol=1e-14)

    def test_trig_denominator_positive(self):
        p = corpus_profiles("trig")
        x = np.linspace(0.0, 1.0, 4096)
        assert np.all(np.sin(x) + 2 * np.cos(x) > 0)
        assert p.kappa == 1.0

    def test_corrupted_Psi2_is_detected(self):
        p = corpus_profiles("linear")
        corrupted = Fn1D.from_pieces(
            p.I, [(1.0, 1.5, quadratic_body(0.5, 0.0, 0.0)), (1.5, 2.0, quadratic_body(0.5, 0.0, 1.0))], "Psi2",
        )
        _, second = residual_system(dataclasses.replace(p, Psi2=corrupted), n=40)
        assert second.max_abs >= 0.5

    def test_degenerate_constants(self):
        with pytest.raises(DegeneracyError):
            aux_profiles(ProfileCase.LINEAR, a=1.0, b=2.0, c=2.0, d=4.0, I=OpenInterval(1.0, 2.0))
        with pytest.raises(DegeneracyError):
            aux_profiles(ProfileCase.CONSTANT, a=0.0, b=1.0, I=UNIT, phi_override=Fn1D.from_expr(UNIT, Exp()))

    def test_vanishing_denominator(self):
        with pytest.raises(DomainError):
            aux_profiles(ProfileCase.LINEAR, a=1.0, b=-1.5, c=0.0, d=1.0, I=OpenInterval(1.0, 2.0))

    def test_case_preconditions(self):
        with pytest.raises(SpecError):
            aux_profiles(ProfileCase.TRIG, a=1.0, b=2.0, c=0.0, d=1.0, gamma=1.0, I=UNIT)
        with pytest.raises(SpecError):
            aux_profiles(ProfileCase.CONSTANT, a=2.0, b=0.0, I=UNIT)


class TestReconstruction:
    def test_linear_oracle(self):
        F, f1, f2, g1, g2 = reconstruct_from_profiles(corpus_profiles("linear"), Anchors(x0=1.5))
        x = np.linspace(1.01, 1.99, 31)
        np.testing.assert_allclose(F.eval(x), x**2 - 2.25, atol=1e-9)
        np.testing.assert_allclose(g1.eval(x), 2 * np.log((x + 3) / 4.5), atol=1e-9)
        np.testing.assert_allclose(g2.eval(x), 2 * np.log((x + 1) / 2.5), atol=1e-9)
        assert g1.eval(2.0, margin=0.0) == pytest.approx(0.21072, abs=1e-5)

    def test_anchors_pin_values(self):
        anchors = Anchors(x0=1.25, F0=1.0, f10=2.0, f20=3.0, g10=4.0, g20=5.0)
        fns = reconstruct_from_profiles(corpus_profiles("linear"), anchors)
        assert [fn.eval(1.25) for fn in fns] == pytest.approx([1.0, 2.0, 3.0, 4.0, 5.0], abs=1e-9)

    def test_constant_case(self):
        F, f1, f2, g1, g2 = reconstruct_from_profiles(corpus_profiles("constant"))
        x = UNIT.grid(17)
        for g in (g1, g2):
            np.testing.assert_allclose(g.eval(x), x - 0.5, atol=1e-10)
        for f in (f1, f2):
            np.testing.assert_allclose(f.eval(x), 0.0, atol=1e-12)
        np.testing.assert_allclose(F.eval(x), 2 * (np.exp(x) - math.exp(0.5)), atol=1e-9)

    def test_F_derivative_is_twice_phi(self):
        p = corpus_profiles("hyperbolic")
        F, *_ = reconstruct_from_profiles(p)
        x = np.random.default_rng(11).uniform(0.01, 0.99, 20)
        np.testing.assert_array_equal(F.deriv(x), 2.0 * p.phi.eval(x))

    def test_linear_tuple_residual(self, linear_tuple):
        assert residual_main(linear_tuple, n=100).max_abs < 1e-7

    @pytest.mark.parametrize("case", ["trig", "hyperbolic", "trig-zero", "linear-zero", "hyperbolic-zero"])
    def test_other_cases_end_to_end(self, reconstructed, case):
        assert residual_main(reconstructed(case), n=100).max_abs < 1e-6

    @pytest.mark.parametrize("case", sorted(PROFILE_CORPUS))
    def test_profiles_round_trip(self, reconstructed, case):
        s = reconstructed(case)
        derived = profiles_from_tuple(s)
        x = s.I.grid(50)
        for name, fn in s.profiles.functions.items():
            np.testing.assert_allclose(derived.functions[name].eval(x), fn.eval(x), atol=1e-9, err_msg=name)

    @pytest.mark.parametrize("case", FRACTION_CASES)
    def test_reconstructions_are_nowhere_affine(self, reconstructed, case):
        report = classify_affine_intervals(reconstructed(case).F, tol=1e-6, n=4096)
        assert report.verdict == "NowhereAffine"
        assert report.intervals == []


class TestSolveForG:
    def test_example(self, example):
        G = solve_for_G(example.F, example.f1, example.f2, example.g1, example.g2)
        assert G.eval(4.25) == pytest.approx(12.75, abs=1e-9)
        assert G.domain.as_tuple() == pytest.approx((0.0, 10.0))

    def test_affine_family(self):
        s = build_affine(affine_params())
        G = solve_for_G(s.F, s.f1, s.f2, s.g1, s.g2)
        u = G.domain.grid(101)
        np.testing.assert_allclose(G.eval(u), 3.0 * u, atol=1e-10)

    @pytest.mark.parametrize("seed", range(100))
    def test_covers_the_sumset_of_random_pairs(self, seed):
        I = OpenInterval(0.0, 4.0)
        rng = np.random.default_rng(seed)
        g1, g2 = random_pair(rng, I, direction=1 if seed % 2 else -1)
        zero = Fn1D.from_body(I, affine_body(0.0, 0.0), "zero")
        G = solve_for_G(Fn1D.from_expr(I, IDENTITY, "F"), zero, zero, g1, g2)
        S = G.domain
        u = rng.uniform(S.lo + S.default_margin, S.hi - S.default_margin, 1000)
        values = G.eval(u)
        assert np.all(np.isfinite(values))
        np.testing.assert_allclose(values, diagonal_solve(g1, g2, u, margin=0.0), atol=1e-4)
        for outside in (S.lo - 1.0, S.hi + 1.0):
            with pytest.raises(RangeError) as info:
                G.eval(outside)
            assert info.value.y == outside
            assert info.value.image == S

    def test_refinement_doubles_the_memo(self, example):
        G = solve_for_G(example.F, example.f1, example.f2, example.g1, example.g2)
        finer = G.refine()
        assert (G.grid_size, finer.grid_size) == (513, 1025)
        assert finer.domain == G.domain
        assert finer.eval(4.25) == pytest.approx(12.75, abs=1e-9)
        assert finer.refine(3).grid_size == 3073
        with pytest.raises(ValueError):
            G.refine(1)

    def test_refined_reconstruction_keeps_the_residual(self, linear_tuple):
        finer = linear_tuple.G.refine()
        assert residual_main(linear_tuple.replace(G=finer), n=100).max_abs < 1e-7


def test_default_specs_build_for_every_family():
    engine = BuildEngine()
    for family in ("affine", "partial", "paper-example"):
        spec = default_build_spec(family)
        s = engine.build(spec)
        assert residual_main(s, n=60).max_abs < engine.bound(spec)
