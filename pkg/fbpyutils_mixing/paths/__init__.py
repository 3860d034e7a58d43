"""Paths module: canonical path families, congestion statistics, alternating paths and Cayley word paths.

Example:
    from fbpyutils_mixing.chain import generate_cycle_walk
    from fbpyutils_mixing.paths import build_bfs_paths, edge_congestion, vertex_congestion

    chain = generate_cycle_walk(7, 0.25)
    family = build_bfs_paths(chain)
    vertex_congestion(chain, family)   # (n - 1)/2 = 3
    edge_congestion(chain, family)     # (n - 1)/(2(1 - alpha)) = 4
"""
from fbpyutils_mixing.paths.family import (
    PathFamily,
    build_bfs_paths,
    dump_paths,
    load_paths,
    remove_cycles,
    validate_family,
)
from fbpyutils_mixing.paths.congestion import (
    PathStats,
    boundary_prob,
    directed_vertex_bound,
    edge_congestion,
    edge_loads,
    path_stats,
    undirected_vertex_congestion,
    vertex_congestion,
    vertex_loads,
)
from fbpyutils_mixing.paths.alternating import (
    AlternatingPathFamily,
    alt_vertex_congestion,
    build_alternating_paths,
    derive_alternating_from_plain,
    load_alternating_paths,
    validate_alternating,
)
from fbpyutils_mixing.paths.cayley import (
    CayleyAlternatingPaths,
    CayleyWordPaths,
    cayley_alternating_diameter,
    cayley_alternating_paths,
    cayley_word_paths,
    shortest_words,
)
