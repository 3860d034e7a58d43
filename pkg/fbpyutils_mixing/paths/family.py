"""Canonical path families along the positive transitions of a chain.

A family stores one vertex sequence gamma_xy = (x, ..., y) for every ordered pair x != y. The
path from a state to itself is empty and is not stored.

Path file format (one line per ordered pair, '#' comments)::

    path <x> <y> <v0> <v1> ... <vk>

Example:
    from fbpyutils_mixing.chain import generate_cycle_walk
    from fbpyutils_mixing.paths.family import build_bfs_paths

    family = build_bfs_paths(generate_cycle_walk(5, 0.5))
    family.path(0, 3)      # (0, 1, 2, 3)
"""
import os
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from fbpyutils_mixing import logger
from fbpyutils_mixing.chain.core import MarkovChain
from fbpyutils_mixing.errors import ChainParseError, PathFamilyError

Pair = Tuple[int, int]
Path = Tuple[int, ...]


@dataclass(frozen=True, eq=False)
class PathFamily:
    """
    Canonical paths gamma_xy for all ordered pairs x != y.

    Attributes:
        n: Number of states.
        paths: Mapping (x, y) -> vertex sequence from x to y.
        source: How the family was obtained ('bfs', 'file', 'cayley', ...).
    """

    n: int
    paths: Mapping[Pair, Path]
    source: str = "custom"
    _cache: Dict[str, object] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        object.__setattr__(
            self, "paths", {(int(x), int(y)): tuple(int(v) for v in p) for (x, y), p in self.paths.items()}
        )

    def path(self, x: int, y: int) -> Path:
        """gamma_xy; the empty tuple when x == y."""
        if x == y:
            return ()
        return self.paths[(x, y)]

    def items(self) -> Iterator[Tuple[Pair, Path]]:
        return iter(sorted(self.paths.items()))

    def edges(self, x: int, y: int) -> List[Pair]:
        p = self.path(x, y)
        return list(zip(p[:-1], p[1:]))

    def used_edges(self) -> List[Pair]:
        """Distinct edges used by at least one path, sorted."""
        return sorted({e for (x, y) in self.paths for e in self.edges(x, y)})

    def is_cycle_free(self) -> bool:
        return all(len(set(p)) == len(p) for p in self.paths.values())

    def length(self, x: int, y: int) -> int:
        return max(len(self.path(x, y)) - 1, 0)


def validate_family(chain: MarkovChain, family: PathFamily) -> PathFamily:
    """
    Check that every ordered pair has a path from x to y along positive transitions.

    Raises:
        PathFamilyError: Missing pairs, wrong endpoints or zero-probability edges; ``pairs``
            lists every offending pair.
    """
    if family.n != chain.n:
        raise PathFamilyError(f"Family covers {family.n} states, chain has {chain.n}.")
    missing = [(x, y) for x in range(chain.n) for y in range(chain.n) if x != y and (x, y) not in family.paths]
    if missing:
        logger.error(f"Path family misses {len(missing)} pairs, e.g. {missing[:5]}")
        raise PathFamilyError(f"Path family misses {len(missing)} ordered pairs.", missing)
    broken = []
    for (x, y), p in family.items():
        if len(p) < 2 or p[0] != x or p[-1] != y or any(not 0 <= v < chain.n for v in p):
            broken.append((x, y))
            continue
        if any(chain.P[a, b] <= 0.0 for a, b in zip(p[:-1], p[1:])):
            broken.append((x, y))
    if broken:
        logger.error(f"Invalid paths for pairs {broken[:5]}")
        raise PathFamilyError(
            f"{len(broken)} paths have wrong endpoints or use zero-probability edges.", broken
        )
    return family


def _bfs_from(chain: MarkovChain, x: int) -> Dict[Pair, Path]:
    parent = {x: None}
    queue = deque([x])
    while queue:
        u = queue.popleft()
        for v in np.flatnonzero(chain.P[u] > 0.0):
            v = int(v)
            if v not in parent:
                parent[v] = u
                queue.append(v)
    paths = {}
    for y in parent:
        if y == x:
            continue
        route = [y]
        while route[-1] != x:
            route.append(parent[route[-1]])
        paths[(x, y)] = tuple(reversed(route))
    return paths


def build_bfs_paths(
    chain: MarkovChain, parallel: bool = False, max_workers: Optional[int] = None
) -> PathFamily:
    """
    Shortest paths over positive transitions, breaking ties by lowest state index.

    Args:
        chain: The chain.
        parallel: Run one breadth-first search per source in a thread pool. Defaults to False.
        max_workers: Pool size. Defaults to min(32, cpu_count + 4).

    Returns:
        PathFamily: A cycle-free family.

    Raises:
        PathFamilyError: Some pair is unreachable.

    Example:
        >>> build_bfs_paths(generate_cycle_walk(5, 0.0)).path(0, 3)
        (0, 1, 2, 3)
    """
    logger.info(f"Building BFS paths for chain '{chain.name}' (n={chain.n})")
    if parallel:
        max_workers = max_workers or min(32, (os.cpu_count() or 1) + 4)
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            results = list(executor.map(lambda x: _bfs_from(chain, x), range(chain.n)))
    else:
        results = [_bfs_from(chain, x) for x in range(chain.n)]
    paths = {}
    for result in results:
        paths.update(result)
    return validate_family(chain, PathFamily(n=chain.n, paths=paths, source="bfs"))


def _excise_loops(path: Sequence[int]) -> Path:
    route: List[int] = []
    position: Dict[int, int] = {}
    for v in path:
        if v in position:
            cut = position[v]
            for w in route[cut + 1:]:
                del position[w]
            del route[cut + 1:]
        else:
            position[v] = len(route)
            route.append(v)
    return tuple(route)


def remove_cycles(family: PathFamily) -> PathFamily:
    """
    Excise every loop from every path; endpoints are kept and congestion cannot grow.

    Example:
        >>> f = PathFamily(n=4, paths={(0, 3): (0, 1, 2, 1, 3)})
        >>> remove_cycles(f).path(0, 3)
        (0, 1, 3)
    """
    if family.is_cycle_free():
        return family
    paths = {pair: _excise_loops(p) for pair, p in family.paths.items()}
    changed = sum(1 for pair in paths if paths[pair] != family.paths[pair])
    logger.debug(f"Removed cycles from {changed} paths")
    return PathFamily(n=family.n, paths=paths, source=family.source)


def parse_path_lines(text: str) -> Iterator[Tuple[int, Pair, Path]]:
    """Yield (line number, pair, vertices) for each ``path`` line."""
    for number, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].split()
        if not body:
            continue
        if body[0] != "path" or len(body) < 4:
            raise ChainParseError("expected 'path <x> <y> <v0> ... <vk>'", number)
        try:
            values = [int(t) for t in body[1:]]
        except ValueError:
            logger.error(f"Line {number}: non-integer vertex in {body}")
            raise ChainParseError("vertices must be integers", number)
        yield number, (values[0], values[1]), tuple(values[2:])


def load_paths(text: str, chain: MarkovChain) -> PathFamily:
    """
    Parse and validate a path file against a chain; paths are never trusted blindly.

    Raises:
        ChainParseError: Malformed or duplicate line.
        PathFamilyError: The paths do not form a valid family for the chain.
    """
    paths = {}
    for number, pair, vertices in parse_path_lines(text):
        if pair[0] == pair[1]:
            raise ChainParseError(f"paths from a state to itself are empty and not listed: {pair}", number)
        if pair in paths:
            raise ChainParseError(f"duplicate path for pair {pair}", number)
        paths[pair] = vertices
    logger.info(f"Loaded {len(paths)} paths from file")
    return validate_family(chain, PathFamily(n=chain.n, paths=paths, source="file"))


def dump_paths(family: PathFamily) -> str:
    """Render a family in the path file format."""
    lines = [f"path {x} {y} " + " ".join(str(v) for v in p) for (x, y), p in family.items()]
    return "\n".join(lines) + "\n"
