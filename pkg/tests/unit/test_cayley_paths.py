import pytest
from fbpyutils_mixing.chain.generators import generate_cayley_walk, generate_cycle_walk
from fbpyutils_mixing.chain.groups import cyclic_group, symmetric_group
from fbpyutils_mixing.errors import PathFamilyError
from fbpyutils_mixing.paths.alternating import alt_vertex_congestion
from fbpyutils_mixing.paths.cayley import (
    cayley_alternating_diameter,
    cayley_alternating_paths,
    cayley_word_paths,
    shortest_words,
)
from fbpyutils_mixing.paths.congestion import edge_congestion, vertex_congestion

GROUPS = [
    cyclic_group(5, ["id", "+1"], [0.5, 0.5]),
    cyclic_group(7, ["id", "+1"], [0.5, 0.5]),
    cyclic_group(5, ["+1", "+2"], [0.5, 0.5]),
    cyclic_group(5, ["+1", "-1"], [0.5, 0.5]),
    symmetric_group(3, ["id", "(12)", "(123)"]),
]


def test_shortest_words():
    assert shortest_words(cyclic_group(3, ["+1"])) == {0: (), 1: (1,), 2: (1, 1)}


def test_cayley_word_paths_lazy_cycle():
    group = cyclic_group(5, ["id", "+1"], [0.5, 0.5])
    paths = cayley_word_paths(group, generate_cayley_walk(group))
    assert paths.diameter == 4
    assert paths.vertex_bound == 4.0
    assert paths.edge_bound == 8.0
    assert paths.counts.loc["3", "1"] == 3
    assert paths.family.path(3, 1) == (3, 4, 0, 1)


def test_cayley_word_paths_symmetric_generators():
    group = cyclic_group(5, ["+1", "-1"], [0.5, 0.5])
    paths = cayley_word_paths(group, generate_cayley_walk(group))
    assert paths.diameter == 2
    assert paths.vertex_bound == 1.5


@pytest.mark.parametrize("group", GROUPS, ids=lambda g: g.name + ":" + ",".join(g.generator_labels()))
def test_cayley_congestion_strictly_below_word_bounds(group):
    chain = generate_cayley_walk(group)
    paths = cayley_word_paths(group, chain)
    assert vertex_congestion(chain, paths.family) < paths.vertex_bound
    assert edge_congestion(chain, paths.family) < paths.edge_bound


@pytest.mark.parametrize("group", GROUPS, ids=lambda g: g.name + ":" + ",".join(g.generator_labels()))
def test_cayley_alternating_congestion_below_bound(group):
    chain = generate_cayley_walk(group)
    alternating = cayley_alternating_paths(group, chain)
    rho_dot, _ = alt_vertex_congestion(chain, alternating.family)
    assert rho_dot <= alternating.vertex_bound + 1e-12


def test_cayley_alternating_diameter():
    assert cayley_alternating_diameter(cyclic_group(5, ["+1", "+2"])) == 5


def test_cayley_alternating_paths_fail_without_odd_words():
    with pytest.raises(PathFamilyError, match=r"Elements \[0\]"):
        cayley_alternating_paths(cyclic_group(2, ["+1"]))


def test_cayley_word_paths_chain_mismatch():
    with pytest.raises(PathFamilyError, match="order 5"):
        cayley_word_paths(cyclic_group(5, ["+1"]), generate_cycle_walk(3, 0.5))
