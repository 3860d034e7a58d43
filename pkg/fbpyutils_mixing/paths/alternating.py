"""Odd alternating path families for chains without holding probability.

An alternating path x = x_0 -> x_1 -> ... -> x_{2k+1} = y takes its even-indexed steps along P
and its odd-indexed steps along the time-reversal P*, so it always has an odd number of edges.
Every ordered pair gets one, including x = y.

A P-step x_{2i} -> x_{2i+1} uses the P-edge (x_{2i}, x_{2i+1}); a P*-step x_{2i+1} -> x_{2i+2}
uses the P-edge (x_{2i+2}, x_{2i+1}). The vertices x_{2i+1} are the odd positions.

Example:
    from fbpyutils_mixing.chain import generate_cycle_walk
    from fbpyutils_mixing.paths import build_alternating_paths, alt_vertex_congestion

    chain = generate_cycle_walk(5, 0.5)
    family = build_alternating_paths(chain)
    alt_vertex_congestion(chain, family)   # (rho_dot_v, P0_star)
"""
import os
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, Iterator, List, Mapping, Optional, Tuple

import numpy as np

from fbpyutils_mixing import logger
from fbpyutils_mixing.chain.core import MarkovChain, time_reversal
from fbpyutils_mixing.errors import ChainParseError, PathFamilyError
from fbpyutils_mixing.paths.family import Pair, Path, PathFamily, parse_path_lines


@dataclass(frozen=True, eq=False)
class AlternatingPathFamily:
    """
    Odd alternating paths for all ordered pairs, the diagonal included.

    Attributes:
        n: Number of states.
        paths: Mapping (x, y) -> vertex sequence with an even number of vertices.
        source: How the family was obtained.
    """

    n: int
    paths: Mapping[Pair, Path]
    source: str = "custom"

    def __post_init__(self):
        object.__setattr__(
            self, "paths", {(int(x), int(y)): tuple(int(v) for v in p) for (x, y), p in self.paths.items()}
        )

    def path(self, x: int, y: int) -> Path:
        return self.paths[(x, y)]

    def items(self) -> Iterator[Tuple[Pair, Path]]:
        return iter(sorted(self.paths.items()))

    def odd_vertices(self, x: int, y: int) -> set:
        return set(self.paths[(x, y)][1::2])

    def p_edges(self, x: int, y: int) -> List[Pair]:
        """P-edges (a, b) used by the path, P*-steps read backwards."""
        p = self.paths[(x, y)]
        edges = []
        for i in range(len(p) - 1):
            edges.append((p[i], p[i + 1]) if i % 2 == 0 else (p[i + 1], p[i]))
        return edges


def validate_alternating(chain: MarkovChain, family: AlternatingPathFamily) -> AlternatingPathFamily:
    """
    Check parity, endpoints and the edge type of every step.

    Raises:
        PathFamilyError: Missing pairs or invalid paths; ``pairs`` lists them.
    """
    if family.n != chain.n:
        raise PathFamilyError(f"Family covers {family.n} states, chain has {chain.n}.")
    reversal = time_reversal(chain)
    bad = []
    for x in range(chain.n):
        for y in range(chain.n):
            p = family.paths.get((x, y))
            if p is None or len(p) < 2 or len(p) % 2 != 0 or p[0] != x or p[-1] != y:
                bad.append((x, y))
                continue
            if any(not 0 <= v < chain.n for v in p):
                bad.append((x, y))
                continue
            for i in range(len(p) - 1):
                kernel = chain.P if i % 2 == 0 else reversal.P
                if kernel[p[i], p[i + 1]] <= 0.0:
                    bad.append((x, y))
                    break
    if bad:
        logger.error(f"Invalid or missing alternating paths for pairs {bad[:5]}")
        raise PathFamilyError(f"{len(bad)} ordered pairs have no valid odd alternating path.", bad)
    return family


def _alternating_bfs(chain: MarkovChain, reversal: MarkovChain, x: int) -> Dict[Pair, Path]:
    # Product states (vertex, parity); parity 0 means the next step is along P.
    start = (x, 0)
    parent = {start: None}
    queue = deque([start])
    while queue:
        v, parity = queue.popleft()
        kernel = chain.P if parity == 0 else reversal.P
        for w in np.flatnonzero(kernel[v] > 0.0):
            state = (int(w), 1 - parity)
            if state not in parent:
                parent[state] = (v, parity)
                queue.append(state)
    paths = {}
    for y in range(chain.n):
        state = (y, 1)
        if state not in parent:
            continue
        route = []
        while state is not None:
            route.append(state[0])
            state = parent[state]
        paths[(x, y)] = tuple(reversed(route))
    return paths


def build_alternating_paths(
    chain: MarkovChain, parallel: bool = False, max_workers: Optional[int] = None
) -> AlternatingPathFamily:
    """
    Shortest odd alternating path for every ordered pair, by breadth-first search over
    (state, parity) with lowest-index tie-breaking.

    Raises:
        PathFamilyError: Some pair has no odd alternating path; all such pairs are listed.

    Example:
        >>> flip = MarkovChain.from_matrix([[0.0, 1.0], [1.0, 0.0]])
        >>> build_alternating_paths(flip)
        Traceback (most recent call last):
        ...
        fbpyutils_mixing.errors.PathFamilyError: 2 ordered pairs have no odd alternating path: [(0, 0), (1, 1)]
    """
    logger.info(f"Building alternating paths for chain '{chain.name}' (n={chain.n})")
    reversal = time_reversal(chain)
    if parallel:
        max_workers = max_workers or min(32, (os.cpu_count() or 1) + 4)
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            results = list(executor.map(lambda x: _alternating_bfs(chain, reversal, x), range(chain.n)))
    else:
        results = [_alternating_bfs(chain, reversal, x) for x in range(chain.n)]
    paths = {}
    for result in results:
        paths.update(result)
    missing = [(x, y) for x in range(chain.n) for y in range(chain.n) if (x, y) not in paths]
    if missing:
        logger.error(f"No odd alternating path for pairs {missing[:5]} of chain '{chain.name}'")
        raise PathFamilyError(
            f"{len(missing)} ordered pairs have no odd alternating path: {missing[:10]}", missing
        )
    return AlternatingPathFamily(n=chain.n, paths=paths, source="alt-auto")


def derive_alternating_from_plain(chain: MarkovChain, family: PathFamily) -> AlternatingPathFamily:
    """
    Alternating family whose P-steps are self-loops and whose P*-steps walk gamma_yx backwards.

    gamma_xx is empty, so the path from x to itself is the single loop x -> x.

    Raises:
        PathFamilyError: Some state has no self-loop (alpha = 0).

    Example:
        >>> chain = generate_cycle_walk(3, 0.5)
        >>> derive_alternating_from_plain(chain, build_bfs_paths(chain)).path(0, 1)
        (0, 0, 2, 2, 1, 1)
    """
    loopless = np.flatnonzero(np.diag(chain.P) <= 0.0).tolist()
    if loopless:
        logger.error(f"Chain '{chain.name}' has no holding at states {loopless}")
        raise PathFamilyError(
            f"Deriving alternating paths needs holding probability at every state; missing at {loopless}.",
            [(v, v) for v in loopless],
        )
    paths = {}
    for x in range(chain.n):
        for y in range(chain.n):
            back = tuple(reversed(family.path(y, x))) if x != y else (x,)
            route = []
            for v in back:
                route.extend((v, v))
            paths[(x, y)] = tuple(route)
    derived = AlternatingPathFamily(n=chain.n, paths=paths, source="alt-derive")
    return validate_alternating(chain, derived)


def alt_vertex_congestion(chain: MarkovChain, family: AlternatingPathFamily) -> Tuple[float, float]:
    """
    Alternating vertex congestion and minimum reversed boundary probability.

    rho_dot_v = max_v (1/pi(v)) sum over pairs with v at an odd position of pi(x)pi(y), and
    P0* = min P*(b,a) over the P-edges (a,b) used by the family.

    Returns:
        Tuple[float, float]: (rho_dot_v, P0_star).
    """
    reversal = time_reversal(chain)
    load = np.zeros(chain.n)
    used = set()
    for (x, y), _ in family.items():
        weight = chain.pi[x] * chain.pi[y]
        for v in family.odd_vertices(x, y):
            load[v] += weight
        used.update(family.p_edges(x, y))
    rho_dot = float(np.max(load / chain.pi))
    p0_star = float(min(reversal.P[b, a] for a, b in used))
    logger.debug(f"Alternating family: rho_dot_v={rho_dot}, P0*={p0_star}")
    return rho_dot, p0_star


def load_alternating_paths(text: str, chain: MarkovChain) -> AlternatingPathFamily:
    """
    Parse ``path <x> <y> <v0> ... <vk>`` lines into a validated alternating family.

    Raises:
        ChainParseError: Malformed or duplicate line.
        PathFamilyError: Missing pairs, even-length paths or steps of the wrong edge type.
    """
    paths = {}
    for number, pair, vertices in parse_path_lines(text):
        if pair in paths:
            raise ChainParseError(f"duplicate path for pair {pair}", number)
        paths[pair] = vertices
    logger.info(f"Loaded {len(paths)} alternating paths from file")
    return validate_alternating(chain, AlternatingPathFamily(n=chain.n, paths=paths, source="file"))
