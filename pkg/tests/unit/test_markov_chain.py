import numpy as np
import pytest
from fbpyutils_mixing.chain.core import (
    Distribution,
    MarkovChain,
    chi_square_distance,
    distance_trajectory,
    empirical_mixing_time,
    ergodic_flow,
    stationary_distribution,
    time_reversal,
)
from fbpyutils_mixing.chain.generators import (
    generate_complete_graph_walk,
    generate_cycle_walk,
    generate_random_chain,
)
from fbpyutils_mixing.errors import ChainValidationError, ErgodicityError


@pytest.fixture
def two_state():
    return MarkovChain.from_matrix([[0.75, 0.25], [0.5, 0.5]], name="two-state")


def test_from_matrix_computes_stationary_distribution(two_state):
    assert np.allclose(two_state.pi, [2 / 3, 1 / 3])
    assert two_state.n == 2
    assert two_state.alpha == 0.5
    assert two_state.pi_min == pytest.approx(1 / 3)


def test_from_matrix_accepts_supplied_pi():
    chain = MarkovChain.from_matrix([[0.5, 0.5], [0.5, 0.5]], pi=[0.5, 0.5])
    assert chain.pi.tolist() == [0.5, 0.5]


def test_from_matrix_rejects_non_square():
    with pytest.raises(ChainValidationError, match="square"):
        MarkovChain.from_matrix([[0.5, 0.5]])


def test_from_matrix_rejects_single_state():
    with pytest.raises(ChainValidationError, match="at least 2"):
        MarkovChain.from_matrix([[1.0]])


def test_from_matrix_rejects_bad_row_sum():
    with pytest.raises(ChainValidationError, match="Row 1 sums"):
        MarkovChain.from_matrix([[0.5, 0.5], [0.5, 0.4]])


def test_from_matrix_row_sum_tolerance():
    chain = MarkovChain.from_matrix([[0.5, 0.5 + 5e-10], [0.25, 0.75]])
    assert chain.n == 2
    assert np.allclose(chain.P.sum(axis=1), 1.0, rtol=0.0, atol=1e-15)
    assert np.allclose(chain.pi, [1 / 3, 2 / 3], rtol=0.0, atol=1e-9)


def test_from_matrix_rejects_negative_entries():
    with pytest.raises(ChainValidationError, match=r"\[0,1\]"):
        MarkovChain.from_matrix([[1.5, -0.5], [0.5, 0.5]])


def test_from_matrix_rejects_reducible_chain():
    with pytest.raises(ErgodicityError):
        MarkovChain.from_matrix([[1.0, 0.0], [0.0, 1.0]])


def test_from_matrix_rejects_non_stationary_pi():
    with pytest.raises(ChainValidationError, match="not stationary"):
        MarkovChain.from_matrix([[0.75, 0.25], [0.5, 0.5]], pi=[0.5, 0.5])


def test_from_matrix_rejects_non_positive_pi():
    with pytest.raises(ChainValidationError, match="strictly positive"):
        MarkovChain.from_matrix([[0.5, 0.5], [0.5, 0.5]], pi=[1.0, 0.0])


def test_from_matrix_respects_state_cap():
    with pytest.raises(ChainValidationError, match="limited to 2"):
        MarkovChain.from_matrix(np.full((3, 3), 1 / 3), max_states=2)


def test_matrices_are_read_only(two_state):
    with pytest.raises(ValueError):
        two_state.P[0, 0] = 0.0


def test_flow_matrix_columns_sum_to_pi(two_state):
    assert np.allclose(two_state.flow_matrix.sum(axis=0), two_state.pi)


def test_stationary_distribution_solve():
    assert np.allclose(stationary_distribution([[0.75, 0.25], [0.5, 0.5]]).weights, [2 / 3, 1 / 3])


def test_distribution_point_mass():
    assert Distribution.point_mass(3, 1).weights.tolist() == [0.0, 1.0, 0.0]


def test_time_reversal_of_rotation():
    rotation = generate_cycle_walk(3, 0.0)
    reversal = time_reversal(rotation)
    assert reversal.P[0].tolist() == [0.0, 0.0, 1.0]
    assert time_reversal(reversal) is rotation
    assert time_reversal(rotation) is reversal
    assert rotation.reversal is reversal


def test_time_reversal_of_reversible_chain(two_state):
    assert np.allclose(time_reversal(two_state).P, two_state.P)


def test_ergodic_flow():
    chain = generate_cycle_walk(3, 0.5)
    assert ergodic_flow(chain, [0], [1]) == pytest.approx(1 / 6)
    assert ergodic_flow(chain, [0], [2]) == 0.0


def test_chi_square_distance():
    chain = generate_complete_graph_walk(2)
    assert chi_square_distance([0.75, 0.25], chain) == pytest.approx(0.5)
    assert chi_square_distance(chain.pi, chain) == pytest.approx(0.0)


def test_chi_square_distance_length_mismatch():
    with pytest.raises(ValueError, match="2 entries"):
        chi_square_distance([0.5, 0.25, 0.25], generate_complete_graph_walk(2))


def test_distance_trajectory_halves_on_complete_graph():
    distances = distance_trajectory(generate_complete_graph_walk(2), 0, 3)
    assert np.allclose(distances, [1.0, 0.5, 0.25, 0.125])


def test_empirical_mixing_time_counts_from_zero():
    chain = generate_complete_graph_walk(2)
    assert empirical_mixing_time(chain, 0, 1.0) == 0
    assert empirical_mixing_time(chain, 0, 0.5) == 1


@pytest.mark.parametrize("n, expected", [(8, 3), (16, 3), (32, 4)])
def test_empirical_mixing_time_complete_graph(n, expected):
    assert empirical_mixing_time(generate_complete_graph_walk(n), 0, 0.5) == expected


def test_empirical_mixing_time_periodic_chain_not_reached():
    assert empirical_mixing_time(generate_cycle_walk(3, 0.0), 0, 0.5, max_steps=200) is None


def test_empirical_mixing_time_invalid_arguments(two_state):
    with pytest.raises(ValueError, match="out of range"):
        empirical_mixing_time(two_state, 5, 0.5)
    with pytest.raises(ValueError, match="positive"):
        empirical_mixing_time(two_state, 0, 0.0)
    with pytest.raises(ValueError, match="max_steps"):
        empirical_mixing_time(two_state, 0, 0.5, max_steps=0)


def _lazy_random_chain(seed):
    rng = np.random.default_rng(seed)
    chain = generate_random_chain(rng, int(rng.integers(2, 9)))
    return MarkovChain.from_matrix((np.eye(chain.n) + chain.P) / 2.0, name=f"lazy-{chain.name}")


@pytest.mark.parametrize("seed", [0, 3, 7, 21, 42])
def test_distance_trajectory_non_increasing_for_lazy_chains(seed):
    chain = _lazy_random_chain(seed)
    for x in range(chain.n):
        distances = distance_trajectory(chain, x, 40)
        assert np.all(np.diff(distances) <= 1e-12)


@pytest.mark.parametrize("seed", [0, 3, 7, 21, 42])
def test_empirical_mixing_time_monotone_in_eps(seed):
    chain = _lazy_random_chain(seed)
    eps_values = [0.05, 0.1, 0.25, 0.5, 1.0, 2.0]
    for x in range(chain.n):
        times = [empirical_mixing_time(chain, x, eps) for eps in eps_values]
        assert all(t is not None for t in times)
        assert times == sorted(times, reverse=True)
