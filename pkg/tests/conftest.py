import pytest

from ifmlab import (
    CoordinateSpace,
    FiniteTabulated,
    SelfMap,
    finite_tabulated,
    induced_from_metric,
    min_max,
)


@pytest.fixture
def line():
    return induced_from_metric(CoordinateSpace(1), min_max())


@pytest.fixture
def plane():
    return induced_from_metric(CoordinateSpace(2), min_max())


@pytest.fixture
def three_point_space():
    """Constant nearness 0.4 / non-nearness 0.5 between any two of a, b, c."""
    domain = FiniteTabulated(
        ["a", "b", "c"],
        {
            ("a", "b"): (0.4, 0.5),
            ("a", "c"): (0.4, 0.5),
            ("b", "c"): (0.4, 0.5),
        },
    )
    return finite_tabulated(domain, min_max())


@pytest.fixture
def half_plus_one():
    return SelfMap.affine([[0.5]], [1.0])


@pytest.fixture
def swap_scale_map():
    """(x, y) -> (2y, x/8): expands one axis, its square is scaling by 1/4."""
    return SelfMap.affine([[0.0, 2.0], [0.125, 0.0]], [0.0, 0.0])
