import numpy as np
import pytest
from fbpyutils_mixing.chain.generators import (
    degree_matrix,
    generate_cayley_walk,
    generate_complete_graph_walk,
    generate_cycle_walk,
    generate_eulerian_walk,
    random_fleet,
)
from fbpyutils_mixing.chain.groups import cyclic_group, symmetric_group
from fbpyutils_mixing.errors import ChainValidationError, ErgodicityError


def test_generate_cycle_walk():
    chain = generate_cycle_walk(5, 0.5)
    assert chain.n == 5
    assert chain.alpha == 0.5
    assert chain.P[4, 0] == 0.5
    assert np.allclose(chain.pi, 0.2)
    assert chain.name == "cycle(n=5,alpha=0.5)"


def test_generate_cycle_walk_without_holding_is_periodic_rotation():
    chain = generate_cycle_walk(3, 0.0)
    assert chain.alpha == 0.0
    assert chain.P[0].tolist() == [0.0, 1.0, 0.0]


@pytest.mark.parametrize("n, alpha", [(2, 0.5), (5, 1.0), (5, -0.1)])
def test_generate_cycle_walk_invalid(n, alpha):
    with pytest.raises(ValueError):
        generate_cycle_walk(n, alpha)


def test_generate_complete_graph_walk():
    chain = generate_complete_graph_walk(4)
    assert chain.P[0, 0] == pytest.approx(5 / 8)
    assert chain.P[0, 1] == pytest.approx(1 / 8)
    assert chain.alpha == pytest.approx(5 / 8)


def test_generate_complete_graph_walk_invalid():
    with pytest.raises(ValueError, match="n >= 2"):
        generate_complete_graph_walk(1)


def test_degree_matrix():
    d = degree_matrix(3, [(0, 1), (1, 2, 2), (0, 1)])
    assert d.tolist() == [[0, 2, 0], [0, 0, 2], [0, 0, 0]]


def test_degree_matrix_invalid_arc():
    with pytest.raises(ValueError, match="not valid"):
        degree_matrix(2, [(0, 2)])


def test_generate_eulerian_walk_directed_triangle():
    d = degree_matrix(3, [(0, 1), (1, 2), (2, 0)])
    chain = generate_eulerian_walk(d, d=2)
    assert chain.P[0].tolist() == [0.5, 0.5, 0.0]
    assert chain.alpha == 0.5
    assert np.allclose(chain.pi, 1 / 3)
    assert chain.name == "eulerian(n=3,d=2)"


def test_generate_eulerian_walk_self_loops_count_as_holding():
    d = np.ones((3, 3), dtype=int)
    chain = generate_eulerian_walk(d)
    assert np.allclose(chain.P, 1 / 3)


def test_generate_eulerian_walk_rejects_unbalanced_degrees():
    with pytest.raises(ChainValidationError, match="not Eulerian"):
        generate_eulerian_walk([[0, 2], [1, 0]])


def test_generate_eulerian_walk_rejects_small_normaliser():
    with pytest.raises(ChainValidationError, match="smaller than the maximum degree"):
        generate_eulerian_walk([[0, 2], [2, 0]], d=1)


def test_generate_eulerian_walk_rejects_disconnected_graph():
    d = [[1, 0], [0, 1]]
    with pytest.raises(ErgodicityError):
        generate_eulerian_walk(d)


def test_generate_cayley_walk_cyclic():
    chain = generate_cayley_walk(cyclic_group(5, ["id", "+1"], [0.5, 0.5]))
    assert chain.P[0].tolist() == [0.5, 0.5, 0.0, 0.0, 0.0]
    assert chain.name == "cayley(Z5)"


def test_generate_cayley_walk_symmetric_group_is_doubly_stochastic():
    chain = generate_cayley_walk(symmetric_group(3, ["id", "(12)", "(123)"]))
    assert chain.n == 6
    assert np.allclose(chain.P.sum(axis=0), 1.0)
    assert chain.alpha == pytest.approx(1 / 3)


def test_random_fleet_is_deterministic():
    first = random_fleet(7, 5, 5)
    second = random_fleet(7, 5, 5)
    assert [c.n for c in first] == [c.n for c in second]
    assert all(np.array_equal(a.P, b.P) for a, b in zip(first, second))
    assert all(2 <= c.n <= 5 for c in first)
    assert first[0].name.startswith("random#0")
