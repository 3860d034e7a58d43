"""Chain module: finite Markov chains, example generators, group presentations and file formats.

Example:
    from fbpyutils_mixing.chain import generate_cycle_walk, time_reversal, empirical_mixing_time

    chain = generate_cycle_walk(5, 0.5)
    reversal = time_reversal(chain)               # counter-clockwise lazy cycle
    empirical_mixing_time(chain, 0, 0.5)          # first t with chi-square distance <= 1/2
"""
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
    degree_matrix,
    generate_cayley_walk,
    generate_complete_graph_walk,
    generate_cycle_walk,
    generate_eulerian_walk,
    generate_random_chain,
    random_fleet,
)
from fbpyutils_mixing.chain.groups import (
    GroupPresentation,
    cyclic_group,
    parse_group_spec,
    symmetric_group,
)
from fbpyutils_mixing.chain.io import dump_chain, load_chain, load_multigraph
