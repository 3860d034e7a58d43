"""Example chain generators: cycle walks, complete-graph walks, Eulerian multigraph walks,
Cayley-graph walks and seeded random ergodic chains.

Example:
    from fbpyutils_mixing.chain.generators import generate_cycle_walk, generate_complete_graph_walk

    cycle = generate_cycle_walk(5, 0.5)        # lazy directed cycle
    complete = generate_complete_graph_walk(4) # diagonal 5/8, off-diagonal 1/8
"""
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from fbpyutils_mixing import logger
from fbpyutils_mixing.chain.core import MarkovChain
from fbpyutils_mixing.chain.groups import GroupPresentation
from fbpyutils_mixing.errors import ChainValidationError


def generate_cycle_walk(n: int, alpha: float) -> MarkovChain:
    """
    Walk on Z_n with P(i,i) = alpha and P(i,i+1) = 1 - alpha.

    Args:
        n: Number of states (>= 3).
        alpha: Holding probability in [0,1).

    Returns:
        MarkovChain: The cycle walk with uniform pi.

    Raises:
        ValueError: If n < 3 or alpha is outside [0,1).

    Example:
        >>> generate_cycle_walk(4, 0.25).P[0]
        array([0.25, 0.75, 0.  , 0.  ])
    """
    logger.debug(f"Generating cycle walk n={n}, alpha={alpha}")
    if not isinstance(n, (int, np.integer)) or n < 3:
        logger.error(f"Invalid cycle size: {n}")
        raise ValueError(f"Cycle walk needs n >= 3, got {n}.")
    if not 0.0 <= alpha < 1.0:
        logger.error(f"Invalid cycle holding probability: {alpha}")
        raise ValueError(f"Holding probability must lie in [0,1), got {alpha}.")
    P = np.zeros((n, n))
    for i in range(n):
        P[i, i] = alpha
        P[i, (i + 1) % n] += 1.0 - alpha
    return MarkovChain.from_matrix(P, pi=np.full(n, 1.0 / n), name=f"cycle(n={n},alpha={alpha:g})")


def generate_complete_graph_walk(n: int) -> MarkovChain:
    """
    Lazy simple random walk on K_n with loops: P(i,j) = 1/2n for i != j, P(i,i) = 1/2 + 1/2n.

    Example:
        >>> generate_complete_graph_walk(2).P
        array([[0.75, 0.25],
               [0.25, 0.75]])
    """
    logger.debug(f"Generating complete graph walk n={n}")
    if not isinstance(n, (int, np.integer)) or n < 2:
        logger.error(f"Invalid complete graph size: {n}")
        raise ValueError(f"Complete graph walk needs n >= 2, got {n}.")
    P = np.full((n, n), 1.0 / (2 * n))
    np.fill_diagonal(P, 0.5 + 1.0 / (2 * n))
    return MarkovChain.from_matrix(P, pi=np.full(n, 1.0 / n), name=f"complete(n={n})")


def degree_matrix(n: int, arcs: Iterable[Union[Tuple[int, int], Tuple[int, int, int]]]) -> np.ndarray:
    """
    Multiplicity matrix d(x,y) from arcs given as (x, y) or (x, y, count).

    Example:
        >>> degree_matrix(2, [(0, 1), (1, 0, 2)])
        array([[0, 1],
               [2, 0]])
    """
    d = np.zeros((n, n), dtype=int)
    for arc in arcs:
        if len(arc) == 2:
            x, y, count = arc[0], arc[1], 1
        else:
            x, y, count = arc
        if not (0 <= x < n and 0 <= y < n) or count < 1:
            logger.error(f"Invalid arc {arc} for {n} vertices")
            raise ValueError(f"Arc {tuple(arc)} is not valid for {n} vertices.")
        d[x, y] += count
    return d


def generate_eulerian_walk(d_matrix: Sequence[Sequence[int]], d: Optional[int] = None) -> MarkovChain:
    """
    Max-degree walk on an Eulerian multigraph: P(x,y) = d(x,y)/d for y != x and
    P(x,x) = 1 - (d(x) - d(x,x))/d.

    Args:
        d_matrix: Multiplicities d(x,y), self-loops on the diagonal.
        d: Max-degree normaliser. Defaults to the maximum out-degree.

    Returns:
        MarkovChain: A doubly stochastic chain with uniform pi.

    Raises:
        ChainValidationError: In-degree differs from out-degree somewhere, or d is below the
            maximum degree.
        ErgodicityError: The multigraph is not strongly connected.

    Example:
        >>> triangle = np.ones((3, 3), dtype=int)
        >>> generate_eulerian_walk(triangle, 3).P[0]
        array([0.33333333, 0.33333333, 0.33333333])
    """
    counts = np.asarray(d_matrix, dtype=int)
    n = counts.shape[0]
    if counts.ndim != 2 or counts.shape != (n, n) or np.any(counts < 0):
        logger.error(f"Invalid multiplicity matrix of shape {counts.shape}")
        raise ChainValidationError("Multiplicity matrix must be square with non-negative entries.")
    out_degree = counts.sum(axis=1)
    in_degree = counts.sum(axis=0)
    mismatched = np.flatnonzero(out_degree != in_degree)
    if mismatched.size:
        logger.error(f"Vertices {mismatched.tolist()} have in-degree != out-degree")
        raise ChainValidationError(
            f"Multigraph is not Eulerian: in/out degree mismatch at vertices {mismatched.tolist()}."
        )
    max_degree = int(out_degree.max())
    d = max_degree if d is None else int(d)
    if d < max_degree or d < 1:
        logger.error(f"Degree normaliser {d} below max degree {max_degree}")
        raise ChainValidationError(f"d={d} is smaller than the maximum degree {max_degree}.")

    P = counts / d
    np.fill_diagonal(P, 1.0 - (out_degree - np.diag(counts)) / d)
    logger.info(f"Eulerian walk on {n} vertices with d={d}")
    return MarkovChain.from_matrix(P, pi=np.full(n, 1.0 / n), name=f"eulerian(n={n},d={d})")


def generate_cayley_walk(group: GroupPresentation) -> MarkovChain:
    """
    Walk P(g, g*s) = p(s), summing probabilities of generators that give the same product.

    Example:
        >>> from fbpyutils_mixing.chain.groups import cyclic_group
        >>> generate_cayley_walk(cyclic_group(3, ["+1"])).P[0]
        array([0., 1., 0.])
    """
    order = group.order
    P = np.zeros((order, order))
    for s, p in zip(group.generators, group.gen_probs):
        P[np.arange(order), group.mul[:, s]] += p
    logger.info(f"Cayley walk on {group.name} with generators {group.generator_labels()}")
    return MarkovChain.from_matrix(
        P, pi=np.full(order, 1.0 / order), name=f"cayley({group.name})"
    )


def generate_random_chain(
    rng: np.random.Generator,
    n: int,
    density: float = 0.35,
    lazy_probability: float = 0.5,
) -> MarkovChain:
    """
    Random ergodic chain for verification fleets.

    A random Hamiltonian cycle guarantees strong connectivity; every other arc is added with
    probability ``density``. Row weights are normalized uniform draws. With probability
    ``lazy_probability`` a self-loop of random weight is injected at every state.

    Args:
        rng: numpy Generator (PCG64 via numpy.random.default_rng).
        n: Number of states (>= 2).
        density: Probability of each extra arc.
        lazy_probability: Probability of injecting holding at every state.

    Returns:
        MarkovChain: A strongly connected chain, possibly periodic.
    """
    if n < 2:
        raise ValueError(f"Random chains need n >= 2, got {n}.")
    order = rng.permutation(n)
    support = rng.random((n, n)) < density
    np.fill_diagonal(support, False)
    support[order, np.roll(order, -1)] = True
    if rng.random() < lazy_probability:
        np.fill_diagonal(support, True)
    weights = np.where(support, rng.random((n, n)) + 0.05, 0.0)
    P = weights / weights.sum(axis=1, keepdims=True)
    return MarkovChain.from_matrix(P, name=f"random(n={n})")


def random_fleet(seed: int, count: int, max_n: int, min_n: int = 2) -> List[MarkovChain]:
    """
    Deterministic list of random chains with n drawn uniformly from [min_n, max_n].

    Example:
        >>> [c.n for c in random_fleet(7, 3, 4)]  # doctest: +SKIP
        [3, 2, 4]
    """
    rng = np.random.default_rng(seed)
    fleet = []
    for index in range(count):
        n = int(rng.integers(min_n, max_n + 1))
        chain = generate_random_chain(rng, n)
        fleet.append(
            MarkovChain(P=chain.P, pi=chain.pi, name=f"random#{index}(n={n})")
        )
    logger.info(f"Generated random fleet of {count} chains (seed={seed}, n in [{min_n}, {max_n}])")
    return fleet
