import numpy as np
import pytest

from pexider_kit.core.exceptions import GeometryError
from pexider_kit.core.intervals import OpenInterval, make_interval


def test_rejects_empty_and_unbounded():
    with pytest.raises(GeometryError):
        OpenInterval(1.0, 1.0)
    with pytest.raises(GeometryError):
        OpenInterval(2.0, 1.0)
    with pytest.raises(GeometryError):
        OpenInterval(0.0, float("inf"))


def test_minkowski_arithmetic():
    J = OpenInterval(1.0, 2.0)
    assert (J + J).as_tuple() == (2.0, 4.0)
    assert (OpenInterval(2.0, 4.0) - J).as_tuple() == (0.0, 3.0)
    assert J.half_sum(OpenInterval(3.0, 6.0)).as_tuple() == (2.0, 4.0)
    assert J.scaled(-2.0).as_tuple() == (-4.0, -2.0)
    assert J.shifted(0.5).as_tuple() == (1.5, 2.5)


def test_intersect_reports_empty_as_none():
    assert OpenInterval(0.0, 1.0).intersect(OpenInterval(1.0, 2.0)) is None
    assert OpenInterval(0.0, 2.0).intersect(OpenInterval(1.0, 3.0)).as_tuple() == (1.0, 2.0)
    assert make_interval(0.0, 1e-13) is None


def test_containment():
    I = OpenInterval(0.0, 4.0)
    H = OpenInterval(1.0, 2.0)
    assert I.contains(H)
    assert I.strictly_contains(H)
    assert I.contains(I)
    assert not I.strictly_contains(I)
    assert not H.contains(I)


def test_grid_respects_margin():
    I = OpenInterval(0.0, 4.0)
    x = I.grid(9, margin=0.0)
    np.testing.assert_allclose(x, np.linspace(0.0, 4.0, 9))
    shrunk = I.grid(2, margin=0.5)
    assert shrunk.tolist() == [0.5, 3.5]
    assert I.grid(5)[0] == pytest.approx(4e-6)
    with pytest.raises(GeometryError):
        I.shrink(2.0)
