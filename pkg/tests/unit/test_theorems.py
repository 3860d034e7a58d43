import math

import numpy as np
import pytest
from fbpyutils_mixing.bounds.theorems import (
    NotApplicable,
    baseline_poincare,
    bound_evolving,
    bound_no_holding,
    bound_paths_holding,
    bound_paths_noholding,
    bound_small_holding,
    cayley_holding_bound,
    cayley_noholding_bound,
    ceiling,
    eulerian_display_bounds,
)
from fbpyutils_mixing.chain.core import MarkovChain, empirical_mixing_time
from fbpyutils_mixing.chain.generators import (
    generate_complete_graph_walk,
    generate_cycle_walk,
    generate_random_chain,
)
from fbpyutils_mixing.chain.groups import cyclic_group
from fbpyutils_mixing.errors import PathFamilyError
from fbpyutils_mixing.flows.profiles import build_profile
from fbpyutils_mixing.paths.alternating import derive_alternating_from_plain
from fbpyutils_mixing.paths.family import build_bfs_paths


@pytest.fixture
def cycle5():
    return generate_cycle_walk(5, 0.5)


@pytest.fixture
def flip():
    return MarkovChain.from_matrix([[0.0, 1.0], [1.0, 0.0]], name="flip")


def test_ceiling():
    assert ceiling(2.1) == 3
    assert ceiling(-3.2) == 0
    assert ceiling(math.inf) == math.inf


def test_not_applicable_str():
    assert str(NotApplicable("alpha=0")) == "not applicable: alpha=0"


def test_bound_small_holding_requires_holding(flip):
    value = bound_small_holding(flip, 0, 0.5, 0.5)
    assert isinstance(value, NotApplicable)
    assert "exceeds the holding probability" in value.reason


def test_bound_small_holding_uses_supplied_profile(cycle5):
    profile = build_profile(cycle5, "r_conductance", r=0.25)
    value = bound_small_holding(cycle5, 0, 0.5, 0.25, profile=profile)
    assert value == bound_small_holding(cycle5, 0, 0.5, 0.25)
    assert isinstance(value, int) and value > 0


def test_bound_small_holding_rejects_wrong_profile(cycle5):
    profile = build_profile(cycle5, "root")
    with pytest.raises(ValueError, match="Expected a 'r_conductance' profile"):
        bound_small_holding(cycle5, 0, 0.5, 0.25, profile=profile)


def test_bound_no_holding_periodic_chain_is_infinite(flip):
    assert bound_no_holding(flip, 0, 0.5, 0.5) == math.inf


def test_bound_evolving(cycle5, flip):
    assert bound_evolving(flip, 0, 0.5) == math.inf
    plain = bound_evolving(cycle5, 0, 0.5)
    sharper = bound_evolving(cycle5, 0, 0.5, use_sharper=True)
    assert isinstance(plain, int) and isinstance(sharper, int)
    with pytest.raises(ValueError, match="must be a boolean"):
        bound_evolving(cycle5, 0, 0.5, use_sharper="yes")


def test_bound_paths_holding_cycle(cycle5):
    bounds = bound_paths_holding(cycle5, 0, 0.5, build_bfs_paths(cycle5))
    assert bounds.bound1 == pytest.approx(32 * math.log(2 * math.sqrt(5)))
    assert bounds.bound2 == pytest.approx(6 + 32 * math.log(1 / (0.5 * math.sqrt(0.4))))
    assert bounds.params["rho_v"] == pytest.approx(2.0)
    assert bounds.params["rho_e"] == pytest.approx(4.0)
    assert bounds.params["P0"] == 0.5


def test_bound_paths_holding_triangle_with_loops():
    chain = generate_cycle_walk(3, 0.5)
    bounds = bound_paths_holding(chain, 0, 0.5, build_bfs_paths(chain))
    assert bounds.params["rho_v"] == pytest.approx(1.0)
    assert bounds.params["rho_e"] == pytest.approx(2.0)
    assert bounds.bound1 == pytest.approx(8 * math.log(2 * math.sqrt(3)))


def test_bound_paths_holding_large_eps(cycle5):
    bounds = bound_paths_holding(cycle5, 0, 1.5, build_bfs_paths(cycle5))
    assert isinstance(bounds.bound2, NotApplicable)
    assert not isinstance(bounds.bound1, NotApplicable)


def test_bound_paths_holding_without_holding():
    rotation = generate_cycle_walk(4, 0.0)
    bounds = bound_paths_holding(rotation, 0, 0.5, build_bfs_paths(rotation))
    assert isinstance(bounds.bound1, NotApplicable)
    assert isinstance(bounds.bound2, NotApplicable)


def test_bound_paths_noholding_derived_family(cycle5):
    family = derive_alternating_from_plain(cycle5, build_bfs_paths(cycle5))
    # rho_dot = 3, P0* = 1/2, delta0 = 1/5
    assert bound_paths_noholding(cycle5, 0, 0.5, family) == 683
    assert bound_paths_noholding(cycle5, 0, 0.5, family, delta=0.2) == 683


def test_bound_paths_noholding_rejects_large_eps(cycle5):
    family = derive_alternating_from_plain(cycle5, build_bfs_paths(cycle5))
    with pytest.raises(ValueError, match="needs eps <= 1"):
        bound_paths_noholding(cycle5, 0, 1.5, family)


def test_baseline_poincare():
    log_term = math.log(2 * math.sqrt(5))
    assert baseline_poincare(1, 4.0, 4, 0.5, 0.2, alpha=0.5) == pytest.approx(16 * log_term)
    assert baseline_poincare(2, 4.0, 5, 0.5, 0.2) == pytest.approx(40 * log_term)
    assert baseline_poincare(3, 4.0, 5, 0.5, 0.2) == pytest.approx(32 * log_term)
    assert baseline_poincare(1, 4.0, 4, 0.5, 0.2, alpha=0.0) == math.inf


def test_baseline_poincare_invalid():
    with pytest.raises(ValueError, match="needs the holding probability"):
        baseline_poincare(1, 4.0, 4, 0.5, 0.2)
    with pytest.raises(ValueError, match="must be 1, 2 or 3"):
        baseline_poincare(4, 4.0, 4, 0.5, 0.2)


def test_cayley_bounds():
    assert cayley_holding_bound(cyclic_group(5, ["id", "+1"], [0.5, 0.5]), 0.5) == 148
    assert cayley_noholding_bound(cyclic_group(5, ["+1", "+2"], [0.5, 0.5]), 0.5) == 683
    with pytest.raises(PathFamilyError):
        cayley_noholding_bound(cyclic_group(2, ["+1"]), 0.5)


def test_eulerian_display_bounds():
    assert eulerian_display_bounds(3, 2, 0.5) == {"holding": 13, "no_holding": 500, "envelope": 45}


@pytest.mark.parametrize("n", [8, 16])
def test_evolving_bound_dominates_complete_graph_mixing_time(n):
    chain = generate_complete_graph_walk(n)
    bound = bound_evolving(chain, 0, 0.5)
    assert math.isfinite(bound)
    assert bound >= empirical_mixing_time(chain, 0, 0.5)


def _lazy_random_chain(seed):
    rng = np.random.default_rng(seed)
    chain = generate_random_chain(rng, int(rng.integers(2, 7)))
    return MarkovChain.from_matrix((np.eye(chain.n) + chain.P) / 2.0, name=f"lazy-{chain.name}")


def _profile_bounds(chain, x, eps, profiles):
    return {
        "small-holding": bound_small_holding(chain, x, eps, 0.25, profile=profiles["r_conductance"]),
        "no-holding": bound_no_holding(chain, x, eps, 0.5, profile=profiles["modified_conductance"]),
        "evolving": bound_evolving(chain, x, eps, profile=profiles["root"]),
    }


def _profiles(chain):
    return {
        "r_conductance": build_profile(chain, "r_conductance", r=0.25),
        "modified_conductance": build_profile(chain, "modified_conductance", r=0.5),
        "root": build_profile(chain, "root"),
    }


@pytest.mark.parametrize("seed", [1, 6, 17, 33])
def test_bounds_non_increasing_in_eps(seed):
    chain = _lazy_random_chain(seed)
    profiles = _profiles(chain)
    family = build_bfs_paths(chain)
    eps_values = [0.05, 0.1, 0.25, 0.5, 1.0]
    for x in range(chain.n):
        rows = [_profile_bounds(chain, x, eps, profiles) for eps in eps_values]
        for name in rows[0]:
            values = [row[name] for row in rows]
            assert values == sorted(values, reverse=True), name
        paths = [bound_paths_holding(chain, x, eps, family).bound1 for eps in eps_values]
        assert paths == sorted(paths, reverse=True)


@pytest.mark.parametrize("seed", [1, 6, 17, 33])
def test_zero_bound_means_already_mixed(seed):
    chain = _lazy_random_chain(seed)
    profiles = _profiles(chain)
    for x in range(chain.n):
        start = 1.01 / math.sqrt(chain.pi[x])
        for eps in (0.25, 1.0, start, 2.0 * start):
            tau = empirical_mixing_time(chain, x, eps)
            for name, value in _profile_bounds(chain, x, eps, profiles).items():
                if value == 0:
                    assert tau == 0, name
        assert bound_evolving(chain, x, start, profile=profiles["root"]) == 0
        assert empirical_mixing_time(chain, x, start) == 0
