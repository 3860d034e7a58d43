import math

import pytest
from fbpyutils_mixing.bounds.integrate import integrate_reciprocal
from fbpyutils_mixing.flows.profiles import StepProfile


@pytest.fixture
def constant():
    return StepProfile("root", None, [0.5], [0.5], 0.5)


def test_identity_weight(constant):
    assert integrate_reciprocal(constant, "identity", 0.25, 1.0) == pytest.approx(2 * math.log(4))


def test_square_weight(constant):
    assert integrate_reciprocal(constant, "square", 0.25, 1.0) == pytest.approx(4 * math.log(4))


def test_min_square_linear_weight(constant):
    # min(0.25, 0.25 * 0.5) = 0.125
    assert integrate_reciprocal(constant, "min_square_linear", 0.25, 1.0, r=0.25) == pytest.approx(
        8 * math.log(4)
    )


def test_sum_over_pieces():
    profile = StepProfile("root", None, [0.25, 0.5], [1.0, 0.5], 0.5)
    expected = math.log(0.25 / 0.125) / 1.0 + math.log(4.0 / 0.25) / 0.5
    assert integrate_reciprocal(profile, "identity", 0.125, 4.0) == pytest.approx(expected)


def test_vanishing_profile_is_infinite():
    profile = StepProfile("root", None, [0.25, 0.5], [0.5, 0.0], 0.0)
    assert integrate_reciprocal(profile, "identity", 0.1, 1.0) == math.inf
    assert integrate_reciprocal(profile, "identity", 0.1, 0.25) < math.inf


def test_empty_range(constant):
    assert integrate_reciprocal(constant, "identity", 1.0, 0.5) == 0.0


def test_invalid_arguments(constant):
    with pytest.raises(ValueError, match="Lower limit must be positive"):
        integrate_reciprocal(constant, "identity", 0.0, 1.0)
    with pytest.raises(ValueError, match="Unknown weight"):
        integrate_reciprocal(constant, "cube", 0.1, 1.0)
    with pytest.raises(ValueError, match="needs r"):
        integrate_reciprocal(constant, "min_square_linear", 0.1, 1.0)
