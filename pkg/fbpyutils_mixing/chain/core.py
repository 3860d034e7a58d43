"""Finite Markov chains: validation, stationary distribution, time-reversal, flows and mixing.

A chain is a frozen value. Its transition matrix and stationary distribution are stored as
read-only numpy arrays, so chains can be shared freely between worker threads. The
time-reversal is built once, on first use.

Example:
    import numpy as np
    from fbpyutils_mixing.chain.core import MarkovChain, ergodic_flow

    chain = MarkovChain.from_matrix(np.array([[0.75, 0.25], [0.5, 0.5]]))
    chain.pi          # array([0.6667, 0.3333])
    ergodic_flow(chain, [0], [1])  # 1/6
"""
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

import numpy as np
from scipy import linalg
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from fbpyutils_mixing import logger
from fbpyutils_mixing import config
from fbpyutils_mixing.errors import (
    ChainValidationError,
    ErgodicityError,
    StationaryError,
)
from fbpyutils_mixing.utils.validators import (
    check_epsilon,
    check_state,
    max_row_deviation,
)


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=float, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class Distribution:
    """
    Probability vector over the states of a chain.

    Args:
        weights: Non-negative weights summing to 1 within 1e-12.

    Example:
        >>> Distribution.point_mass(3, 0).weights
        array([1., 0., 0.])
    """

    weights: np.ndarray

    def __post_init__(self):
        weights = np.asarray(self.weights, dtype=float)
        if weights.ndim != 1 or weights.size == 0:
            logger.error(f"Invalid distribution shape: {weights.shape}")
            raise ChainValidationError("Distribution must be a non-empty vector.")
        if np.any(weights < 0.0) or np.any(weights > 1.0) or not np.all(np.isfinite(weights)):
            logger.error(f"Distribution weights out of [0,1]: {weights}")
            raise ChainValidationError("Distribution weights must lie in [0,1].")
        if abs(weights.sum() - 1.0) > config.PI_SUM_TOL:
            logger.error(f"Distribution sums to {weights.sum()!r}")
            raise ChainValidationError(
                f"Distribution must sum to 1 within {config.PI_SUM_TOL}, got {weights.sum()!r}."
            )
        object.__setattr__(self, "weights", _frozen(weights))

    @classmethod
    def point_mass(cls, n: int, x: int) -> "Distribution":
        weights = np.zeros(n)
        weights[check_state(n, x)] = 1.0
        return cls(weights)

    def __len__(self) -> int:
        return self.weights.size


@dataclass(frozen=True, eq=False)
class MarkovChain:
    """
    Finite Markov kernel with its stationary distribution.

    Use ``MarkovChain.from_matrix`` to build one; it validates row sums, strong connectivity of
    the positive-transition digraph, and the stationary distribution.

    Attributes:
        P: Row-stochastic n x n transition matrix (read-only).
        pi: Stationary distribution (read-only, strictly positive).
        name: Free-form label used in reports.
    """

    P: np.ndarray
    pi: np.ndarray
    name: str = "chain"

    @property
    def n(self) -> int:
        return self.P.shape[0]

    @property
    def alpha(self) -> float:
        """Minimal holding probability, min_v P(v,v)."""
        return float(np.min(np.diag(self.P)))

    @property
    def pi_min(self) -> float:
        return float(np.min(self.pi))

    @property
    def flow_matrix(self) -> np.ndarray:
        """F(x,y) = pi(x)P(x,y); column sums equal pi."""
        return self.pi[:, None] * self.P

    @cached_property
    def reversal(self) -> "MarkovChain":
        """Time-reversal, built on first access; its own reversal is this chain."""
        reversed_matrix = self.P.T * self.pi[None, :] / self.pi[:, None]
        reversal = MarkovChain(P=_frozen(reversed_matrix), pi=self.pi, name=f"{self.name}*")
        reversal.__dict__["reversal"] = self
        return reversal

    @classmethod
    def from_matrix(
        cls,
        P: Sequence[Sequence[float]],
        pi: Optional[Sequence[float]] = None,
        name: str = "chain",
        max_states: Optional[int] = None,
    ) -> "MarkovChain":
        """
        Validate a transition matrix and build a chain.

        Args:
            P: Square matrix of transition probabilities.
            pi: Optional stationary distribution; computed when omitted, verified when given.
            name: Label for reports. Defaults to 'chain'.
            max_states: State cap. Defaults to config.MAX_STATES.

        Returns:
            MarkovChain: The validated chain.

        Raises:
            ChainValidationError: Bad shape, entries outside [0,1], row sums off by more than
                1e-9, or a supplied pi that is not stationary.
            ErgodicityError: The positive-transition digraph is not strongly connected.

        Example:
            >>> chain = MarkovChain.from_matrix([[0.5, 0.5], [0.5, 0.5]])
            >>> chain.pi
            array([0.5, 0.5])
        """
        max_states = max_states or config.MAX_STATES
        matrix = np.array(P, dtype=float)
        logger.debug(f"Building chain '{name}' from matrix of shape {matrix.shape}")

        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            logger.error(f"Transition matrix is not square: {matrix.shape}")
            raise ChainValidationError("Transition matrix must be square.")
        n = matrix.shape[0]
        if n < 2:
            logger.error(f"Chain with {n} states requested")
            raise ChainValidationError("A chain needs at least 2 states.")
        if n > max_states:
            logger.error(f"Chain with {n} states exceeds cap {max_states}")
            raise ChainValidationError(f"Chains are limited to {max_states} states, got {n}.")
        if not np.all(np.isfinite(matrix)) or np.any(matrix < 0.0) or np.any(matrix > 1.0):
            logger.error("Transition matrix has entries outside [0,1]")
            raise ChainValidationError("Transition probabilities must lie in [0,1].")
        deviation = max_row_deviation(matrix)
        if deviation > config.ROW_SUM_TOL:
            bad = int(np.argmax(np.abs(matrix.sum(axis=1) - 1.0)))
            logger.error(f"Row {bad} sums to {matrix[bad].sum()!r}")
            raise ChainValidationError(
                f"Row {bad} sums to {matrix[bad].sum()!r}; rows must sum to 1 within {config.ROW_SUM_TOL}."
            )
        # Rows within tolerance are renormalized.
        matrix = matrix / matrix.sum(axis=1, keepdims=True)
        check_strongly_connected(matrix)

        if pi is None:
            weights = stationary_distribution(matrix).weights
        else:
            weights = np.array(pi, dtype=float)
            if weights.shape != (n,):
                logger.error(f"Stationary vector has shape {weights.shape}, expected ({n},)")
                raise ChainValidationError(f"Stationary vector must have {n} entries.")
            if np.any(weights <= 0.0):
                logger.error("Supplied stationary vector is not strictly positive")
                raise ChainValidationError("Stationary distribution must be strictly positive.")
            if abs(weights.sum() - 1.0) > config.PI_SUM_TOL:
                logger.error(f"Supplied stationary vector sums to {weights.sum()!r}")
                raise ChainValidationError(
                    f"Stationary distribution must sum to 1 within {config.PI_SUM_TOL}."
                )
            residual = float(np.max(np.abs(weights @ matrix - weights)))
            if residual > config.STATIONARY_TOL:
                logger.error(f"Supplied stationary vector has residual {residual:.3e}")
                raise ChainValidationError(
                    f"Supplied pi is not stationary: max |pi P - pi| = {residual:.3e}."
                )

        chain = cls(P=_frozen(matrix), pi=_frozen(weights), name=name)
        logger.debug(f"Chain '{name}' built: n={n}, alpha={chain.alpha}")
        return chain


def check_strongly_connected(P: np.ndarray) -> None:
    """
    Raise ErgodicityError unless the digraph of positive transitions is strongly connected.

    Example:
        >>> check_strongly_connected(np.array([[0.0, 1.0], [1.0, 0.0]]))
    """
    graph = csr_matrix((np.asarray(P) > 0.0).astype(np.int8))
    count, labels = connected_components(graph, directed=True, connection="strong")
    if count != 1:
        logger.error(f"Positive-transition digraph has {count} strong components: {labels}")
        raise ErgodicityError(
            f"Chain is not ergodic: positive transitions form {count} strongly connected components."
        )


def stationary_distribution(P: Sequence[Sequence[float]]) -> Distribution:
    """
    Solve pi P = pi with sum(pi) = 1 by a direct linear solve.

    Power iteration is not used since periodic chains would not converge. Doubly stochastic
    inputs return the exact uniform vector.

    Args:
        P: Row-stochastic matrix with a strongly connected positive-transition digraph.

    Returns:
        Distribution: The stationary distribution.

    Raises:
        ErgodicityError: If P is not irreducible.
        StationaryError: If the solve residual exceeds 1e-10.

    Example:
        >>> stationary_distribution([[0.75, 0.25], [0.5, 0.5]]).weights
        array([0.66666667, 0.33333333])
    """
    matrix = np.asarray(P, dtype=float)
    n = matrix.shape[0]
    check_strongly_connected(matrix)

    if np.all(np.abs(matrix.sum(axis=0) - 1.0) <= config.IDENTITY_TOL):
        logger.debug("Doubly stochastic matrix: stationary distribution is uniform")
        return Distribution(np.full(n, 1.0 / n))

    system = (matrix - np.eye(n)).T
    system[-1, :] = 1.0
    rhs = np.zeros(n)
    rhs[-1] = 1.0
    try:
        weights = linalg.solve(system, rhs)
    except linalg.LinAlgError as e:
        logger.error(f"Stationary solve failed: {e}")
        raise StationaryError(f"Stationary system is singular: {e}", float("inf"))
    weights = weights / weights.sum()
    residual = float(np.max(np.abs(weights @ matrix - weights)))
    if residual > config.STATIONARY_TOL or np.any(weights <= 0.0):
        logger.error(f"Stationary solve did not converge, residual {residual:.3e}")
        raise StationaryError("Stationary distribution solve did not converge", residual)
    logger.debug(f"Stationary distribution solved with residual {residual:.3e}")
    return Distribution(weights)


def time_reversal(chain: MarkovChain) -> MarkovChain:
    """
    Time-reversal P*(x,y) = pi(y) P(y,x) / pi(x), sharing pi with the chain.

    The result is cached on the chain, and reversing the reversal returns the original object.

    Example:
        >>> from fbpyutils_mixing.chain.generators import generate_cycle_walk
        >>> rotation = generate_cycle_walk(3, 0.0)
        >>> time_reversal(rotation).P[0]
        array([0., 0., 1.])
    """
    return chain.reversal


def as_membership(n: int, states) -> np.ndarray:
    """
    Boolean membership vector for a state set.

    Accepts an iterable of state indices, a boolean vector, or any object with a ``members``
    attribute (such as SubsetMask).
    """
    if hasattr(states, "members"):
        members = np.asarray(states.members, dtype=bool)
    else:
        array = np.asarray(list(states) if not isinstance(states, np.ndarray) else states)
        if array.dtype == bool:
            members = array
        else:
            members = np.zeros(n, dtype=bool)
            if array.size:
                indices = array.astype(int)
                if np.any(indices < 0) or np.any(indices >= n):
                    logger.error(f"State set {indices} out of range for {n} states")
                    raise ValueError(f"State set contains indices outside [0, {n - 1}].")
                members[indices] = True
    if members.shape != (n,):
        logger.error(f"Membership vector of shape {members.shape} for {n} states")
        raise ValueError(f"State set must describe {n} states.")
    return members


def ergodic_flow(chain: MarkovChain, A, B) -> float:
    """
    Ergodic flow Q(A,B) = sum over x in A, y in B of pi(x) P(x,y).

    Example:
        >>> from fbpyutils_mixing.chain.generators import generate_cycle_walk
        >>> ergodic_flow(generate_cycle_walk(3, 0.5), [0], [1])
        0.16666666666666666
    """
    a = as_membership(chain.n, A)
    b = as_membership(chain.n, B)
    return float(chain.flow_matrix[np.ix_(a, b)].sum())


def chi_square_distance(sigma, chain: MarkovChain) -> float:
    """
    Chi-square distance ||sigma/pi - 1||_{2,pi} = sqrt(sum_v pi(v)(sigma(v)/pi(v) - 1)^2).

    Args:
        sigma: Distribution or probability vector.
        chain: Chain supplying pi.

    Example:
        >>> from fbpyutils_mixing.chain.generators import generate_complete_graph_walk
        >>> chi_square_distance([0.75, 0.25], generate_complete_graph_walk(2))
        0.5
    """
    weights = sigma.weights if isinstance(sigma, Distribution) else Distribution(sigma).weights
    if weights.size != chain.n:
        logger.error(f"Distribution of length {weights.size} for chain of {chain.n} states")
        raise ValueError(f"Distribution must have {chain.n} entries.")
    return _chi_square(weights, chain.pi)


def _chi_square(weights: np.ndarray, pi: np.ndarray) -> float:
    density = weights / pi - 1.0
    return float(np.sqrt(np.sum(pi * density * density)))


def distance_trajectory(chain: MarkovChain, x: int, steps: int) -> np.ndarray:
    """
    Chi-square distances of k_t^x for t = 0..steps, by iterated vector-matrix products.

    Example:
        >>> from fbpyutils_mixing.chain.generators import generate_complete_graph_walk
        >>> distance_trajectory(generate_complete_graph_walk(2), 0, 2)
        array([1.  , 0.5 , 0.25])
    """
    x = check_state(chain.n, x)
    if steps < 0:
        raise ValueError(f"Steps must be non-negative, got {steps}.")
    current = np.zeros(chain.n)
    current[x] = 1.0
    distances = np.empty(steps + 1)
    distances[0] = _chi_square(current, chain.pi)
    for t in range(1, steps + 1):
        current = current @ chain.P
        distances[t] = _chi_square(current, chain.pi)
    return distances


def empirical_mixing_time(
    chain: MarkovChain, x: int, eps: float, max_steps: Optional[int] = None
) -> Optional[int]:
    """
    L2 mixing time tau_x(eps) = min{t : ||k_t^x - 1||_{2,pi} <= eps} by direct iteration.

    The count starts at t = 0, so a start state that is already eps-mixed returns 0.

    Args:
        chain: The chain.
        x: Start state.
        eps: Target chi-square distance (> 0).
        max_steps: Iteration cap. Defaults to config.MAX_STEPS.

    Returns:
        Optional[int]: The mixing time, or None when max_steps is exceeded (e.g. periodic chains).

    Example:
        >>> from fbpyutils_mixing.chain.generators import generate_cycle_walk
        >>> empirical_mixing_time(generate_cycle_walk(3, 0.0), 0, 0.5, max_steps=100) is None
        True
    """
    x = check_state(chain.n, x)
    eps = check_epsilon(eps)
    max_steps = config.MAX_STEPS if max_steps is None else int(max_steps)
    if max_steps < 1:
        logger.error(f"Invalid max_steps: {max_steps}")
        raise ValueError(f"max_steps must be at least 1, got {max_steps}.")

    current = np.zeros(chain.n)
    current[x] = 1.0
    for t in range(max_steps + 1):
        if _chi_square(current, chain.pi) <= eps:
            logger.debug(f"Chain '{chain.name}' from {x} reached eps={eps} at t={t}")
            return t
        current = current @ chain.P
    logger.info(f"Chain '{chain.name}' from {x} did not reach eps={eps} in {max_steps} steps")
    return None
