"""Congestion statistics of canonical path families.

    rho_e = max over used edges (a,b) of  sum_{gamma_xy uses (a,b)} pi(x)pi(y) / (pi(a)P(a,b))
    rho_v = max over v of  [ sum_{v in gamma_xy \\ gamma_yx} pi(x)pi(y)
                             + 1/2 sum_{v in gamma_xy & gamma_yx} pi(x)pi(y) ] / pi(v)

Sums run over ordered pairs; a vertex belongs to a path when it appears anywhere in it,
endpoints included.

Example:
    from fbpyutils_mixing.chain import generate_cycle_walk
    from fbpyutils_mixing.paths import build_bfs_paths, edge_congestion, vertex_congestion

    chain = generate_cycle_walk(5, 0.5)
    family = build_bfs_paths(chain)
    edge_congestion(chain, family)     # 4.0
    vertex_congestion(chain, family)   # 2.0
"""
from dataclasses import dataclass

import numpy as np
import pandas as pd

from fbpyutils_mixing import logger
from fbpyutils_mixing.chain.core import MarkovChain
from fbpyutils_mixing.errors import PathFamilyError
from fbpyutils_mixing.paths.family import PathFamily


@dataclass(frozen=True)
class PathStats:
    """
    Length statistics of a family.

    Attributes:
        ell: Maximum path length, in edges.
        ell_ave: pi-weighted average length over ordered pairs x != y.
        rho_v_ave: Average vertex congestion, sum over v of the directed vertex load.
    """

    ell: int
    ell_ave: float
    rho_v_ave: float


def edge_loads(chain: MarkovChain, family: PathFamily) -> pd.DataFrame:
    """
    Per-edge load table with columns a, b, load, capacity and congestion.

    Raises:
        PathFamilyError: A path uses an edge with P(a,b) = 0.
    """
    loads = {}
    for (x, y), path in family.items():
        weight = chain.pi[x] * chain.pi[y]
        for edge in zip(path[:-1], path[1:]):
            loads[edge] = loads.get(edge, 0.0) + weight
    bad = [edge for edge in loads if chain.P[edge] <= 0.0]
    if bad:
        logger.error(f"Family uses zero-probability edges {bad[:5]}")
        raise PathFamilyError(f"Family uses {len(bad)} zero-probability edges.", bad)
    edges = sorted(loads)
    frame = pd.DataFrame(
        {
            "a": [a for a, _ in edges],
            "b": [b for _, b in edges],
            "load": [loads[e] for e in edges],
            "capacity": [chain.pi[a] * chain.P[a, b] for a, b in edges],
        }
    )
    frame["congestion"] = frame["load"] / frame["capacity"]
    return frame


def edge_congestion(chain: MarkovChain, family: PathFamily) -> float:
    """
    Edge congestion rho_e over the edges used by the family.

    Example:
        >>> from fbpyutils_mixing.chain import generate_complete_graph_walk
        >>> chain = generate_complete_graph_walk(2)
        >>> edge_congestion(chain, build_bfs_paths(chain))
        2.0
    """
    return float(edge_loads(chain, family)["congestion"].max())


def vertex_loads(chain: MarkovChain, family: PathFamily) -> pd.DataFrame:
    """
    Per-vertex load table.

    Columns: ``vertex``, ``pi``, ``load`` (the bracketed sum of the vertex congestion, with
    half weight for vertices on both gamma_xy and gamma_yx), ``directed_load`` (sum of
    pi(x)pi(y) over paths through v with v != x) and the two ratios ``congestion`` and
    ``directed_congestion``.
    """
    n = chain.n
    load = np.zeros(n)
    directed = np.zeros(n)
    members = {pair: set(path) for pair, path in family.items()}
    for (x, y), path in family.items():
        weight = chain.pi[x] * chain.pi[y]
        back = members.get((y, x), set())
        for v in members[(x, y)]:
            load[v] += 0.5 * weight if v in back else weight
            if v != x:
                directed[v] += weight
    frame = pd.DataFrame({"vertex": np.arange(n), "pi": chain.pi, "load": load, "directed_load": directed})
    frame["congestion"] = frame["load"] / frame["pi"]
    frame["directed_congestion"] = frame["directed_load"] / frame["pi"]
    return frame


def vertex_congestion(chain: MarkovChain, family: PathFamily) -> float:
    """
    Vertex congestion rho_v.

    Example:
        >>> vertex_congestion(generate_cycle_walk(5, 0.5), build_bfs_paths(generate_cycle_walk(5, 0.5)))
        2.0
    """
    return float(vertex_loads(chain, family)["congestion"].max())


def directed_vertex_bound(chain: MarkovChain, family: PathFamily) -> float:
    """max_v (1/pi(v)) sum over paths through v != x of pi(x)pi(y); always >= rho_v."""
    return float(vertex_loads(chain, family)["directed_congestion"].max())


def undirected_vertex_congestion(chain: MarkovChain, family: PathFamily) -> float:
    """1/2 max_v (1/pi(v)) sum over paths containing v; equals rho_v for reversed-path families."""
    totals = np.zeros(chain.n)
    for (x, y), path in family.items():
        for v in set(path):
            totals[v] += chain.pi[x] * chain.pi[y]
    return float(0.5 * np.max(totals / chain.pi))


def path_stats(chain: MarkovChain, family: PathFamily) -> PathStats:
    """
    Maximum and average path length and the average vertex congestion.

    The average vertex congestion is summed from the per-vertex directed loads while the
    average length comes from the path lengths, so the identity
    rho_v_ave = ell_ave (1 - ||pi||^2) checks both computations against each other.

    Example:
        >>> chain = generate_complete_graph_walk(4)
        >>> path_stats(chain, build_bfs_paths(chain))
        PathStats(ell=1, ell_ave=1.0, rho_v_ave=0.75)
    """
    weights = []
    lengths = []
    for (x, y), path in family.items():
        weights.append(chain.pi[x] * chain.pi[y])
        lengths.append(len(path) - 1)
    weights = np.array(weights)
    lengths = np.array(lengths)
    ell_ave = float(np.sum(weights * lengths) / np.sum(weights))
    directed = vertex_loads(chain, family)["directed_load"]
    return PathStats(ell=int(lengths.max()), ell_ave=ell_ave, rho_v_ave=float(directed.sum()))


def boundary_prob(chain: MarkovChain, family: PathFamily) -> float:
    """
    Minimum boundary probability P0 = min P(a,b) over edges used by the family.

    Example:
        >>> boundary_prob(generate_cycle_walk(5, 0.5), build_bfs_paths(generate_cycle_walk(5, 0.5)))
        0.5
    """
    return float(min(chain.P[a, b] for a, b in family.used_edges()))
