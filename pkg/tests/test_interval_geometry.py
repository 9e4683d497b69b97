import numpy as np
import pytest
from hypothesis import given, settings

from conftest import monotone_instances, monotone_library
from pexider_kit.core.exceptions import GeometryError, MonotonicityError
from pexider_kit.core.expressions import Poly
from pexider_kit.core.geometry_checks import check_instance, run_suite
from pexider_kit.core.interval_geometry import (
    h_ext,
    h_k,
    h_ref,
    interval_sets,
    side_sets,
    side_sum_within,
    sumset_image,
    u_star,
)
from pexider_kit.core.intervals import OpenInterval
from pexider_kit.core.piecewise_fn import Fn1D, quadratic_body

I = OpenInterval(0.0, 4.0)
H = OpenInterval(1.0, 2.0)


def approx_interval(J, lo, hi, abs=1e-12):
    assert J is not None
    assert J.lo == pytest.approx(lo, abs=abs)
    assert J.hi == pytest.approx(hi, abs=abs)


@pytest.fixture
def ident(identity_on):
    return identity_on(0.0, 4.0)


class TestSumset:
    def test_identity(self, identity_on):
        g = identity_on(0.0, 4.0)
        J = OpenInterval(1.0, 2.0)
        assert sumset_image(g, g, J, J).as_tuple() == (2.0, 4.0)

    def test_example_branch(self, identity_on):
        J = OpenInterval(2.0, 4.0)
        g2 = Fn1D.from_body(J, quadratic_body(0.25, 0.0, 1.0), "g2")
        assert sumset_image(identity_on(0.0, 4.0), g2, J, J).as_tuple() == (4.0, 9.0)

    def test_example_covers_G_domain(self, example):
        assert sumset_image(example.g1, example.g2, I, I).as_tuple() == (0.0, 10.0)
        assert example.G.domain.as_tuple() == (0.0, 10.0)

    def test_non_monotone_rejected(self):
        g = Fn1D.from_expr(OpenInterval(-1.0, 1.0), Poly((0.0, 0.0, 1.0)))
        J = OpenInterval(-0.5, 0.5)
        with pytest.raises(MonotonicityError):
            sumset_image(g, g, J, J)


class TestSideSetsAndReflection:
    def test_side_sets(self):
        minus, plus = side_sets(H, I)
        assert minus.as_tuple() == (0.0, 1.0)
        assert plus.as_tuple() == (2.0, 4.0)
        assert side_sets(I, I) == (None, None)
        minus, plus = side_sets(OpenInterval(0.0, 2.0), I)
        assert minus is None
        assert plus.as_tuple() == (2.0, 4.0)

    def test_side_sets_need_containment(self):
        with pytest.raises(GeometryError):
            side_sets(OpenInterval(3.0, 5.0), I)

    def test_h_ref(self):
        assert h_ref(H, I).as_tuple() == (0.0, 3.0)
        assert h_ref(I, I).as_tuple() == (0.0, 4.0)
        assert h_ref(OpenInterval(3.0, 4.0), I).as_tuple() == (2.0, 4.0)

    def test_side_sum(self):
        assert side_sum_within(H, I) is True
        assert side_sum_within(I, I) is None


class TestRestrictedPreimages:
    def test_left_of_H(self, ident):
        approx_interval(h_k(H, 0.5, 1, ident, ident, I), 1.5, 2.0)

    def test_inside_H_gives_H(self, ident):
        for k in (1, 2):
            assert h_k(H, 1.5, k, ident, ident, I) == H

    def test_far_right_is_empty(self, ident):
        assert h_k(H, 3.5, 1, ident, ident, I) is None

    def test_bad_index_and_point(self, ident):
        with pytest.raises(GeometryError):
            h_k(H, 0.5, 3, ident, ident, I)
        with pytest.raises(GeometryError):
            h_k(H, 4.5, 1, ident, ident, I)

    def test_opposite_senses_rejected(self, ident):
        with pytest.raises(GeometryError):
            h_k(H, 0.5, 1, ident, ident.negated(), I)


class TestExtension:
    def test_identity(self, ident):
        approx_interval(h_ext(H, ident, ident, I), 0.0, 3.0)

    def test_whole_interval(self, ident):
        assert h_ext(I, ident, ident, I) == I

    def test_strict_growth_for_proper_H(self, ident):
        assert h_ext(H, ident, ident, I).strictly_contains(H)

    def test_u_star_intersects_with_reflection(self, ident):
        approx_interval(u_star(OpenInterval(3.0, 4.0), ident, ident, I), 2.0, 4.0)

    def test_example_report(self, example):
        report = interval_sets(OpenInterval(2.0, 4.0), example.g1, example.g2, I, points=(0.5, 3.0))
        assert report.ref.as_tuple() == (0.0, 4.0)
        assert report.side_minus.as_tuple() == (0.0, 2.0)
        assert report.side_plus is None
        assert report.ext.contains(OpenInterval(2.0, 4.0))
        assert report.restricted["H_1(3)"] == OpenInterval(2.0, 4.0)
        assert set(report.restricted) == {"H_1(0.5)", "H_2(0.5)", "H_1(3)", "H_2(3)"}


@given(monotone_instances())
@settings(max_examples=200, deadline=None)
def test_set_properties_hold_on_random_instances(instance):
    H_, g1, g2, I_ = instance
    results = check_instance(H_, g1, g2, I_, np.random.default_rng(0))
    failed = [name for name, ok in results.items() if not ok]
    assert not failed, f"{failed} for H={H_}, g1={g1!r}, g2={g2!r}"


@pytest.mark.parametrize("name", sorted(monotone_library(I)))
def test_set_properties_hold_on_library(name, rng):
    g = monotone_library(I)[name]
    for H_ in (H, OpenInterval(0.5, 3.9), I):
        for g1, g2 in ((g, g), (g.negated(), g.negated())):
            assert all(check_instance(H_, g1, g2, I, rng).values())


def test_suite_reports_no_failures(rng):
    failures = run_suite(rng, instances=20)
    assert "decreasing_symmetry" in failures
    assert all(not indices for indices in failures.values())
