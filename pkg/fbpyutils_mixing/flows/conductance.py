"""Capped ergodic flows and conductances of state subsets.

For a set A write Q(A,y) for the flow from A into the single state y. The r-ergodic flow caps
each target's inflow at r*pi(y)::

    Q_r(A,B) = sum_{y in B} min(Q(A,y), r*pi(y))
    Q_r(A)   = min(Q_r(A,A^c), Q_r(A^c,A))
    Phi_r(A) = Q_r(A) / (pi(A) pi(A^c))                      r-conductance
    Psi_r(A) = Q_r(A,V) - r*pi(A)                            r-modified flow
    phi^r(A) = max(Psi_r(A), Psi_r(A^c)) / (pi(A) pi(A^c))   r-modified conductance
    Phi(A)   = Q(A,A^c) / min(pi(A), pi(A^c))                classic conductance

Every quantity has a single-set function and a batch kernel over a membership matrix. The
kernels use Q(A^c,y) = pi(y) - Q(A,y), which holds because the columns of the flow matrix sum
to pi.

Example:
    from fbpyutils_mixing.chain import generate_cycle_walk
    from fbpyutils_mixing.flows.conductance import r_conductance

    r_conductance(generate_cycle_walk(3, 0.5), [0], 0.5)   # 0.75
"""
from typing import Tuple

import numpy as np

from fbpyutils_mixing import logger
from fbpyutils_mixing.chain.core import MarkovChain, as_membership
from fbpyutils_mixing.utils.validators import check_ratio


def _proper(chain: MarkovChain, A) -> np.ndarray:
    members = as_membership(chain.n, A)
    if not members.any() or members.all():
        logger.error(f"Degenerate set for chain '{chain.name}': {np.flatnonzero(members).tolist()}")
        raise ValueError("Set must be a proper nonempty subset of the states.")
    return members


def set_inflow(chain: MarkovChain, A) -> np.ndarray:
    """
    Vector of Q(A,y) over all states y.

    Example:
        >>> set_inflow(generate_cycle_walk(3, 0.5), [0])
        array([0.16666667, 0.16666667, 0.        ])
    """
    members = as_membership(chain.n, A)
    return chain.flow_matrix[members].sum(axis=0)


def inflow_matrix(chain: MarkovChain, members: np.ndarray) -> np.ndarray:
    """Row k holds Q(A_k, y) for the k-th row of a boolean membership matrix."""
    return members.astype(float) @ chain.flow_matrix


def r_ergodic_flow(chain: MarkovChain, A, B, r: float) -> float:
    """
    r-ergodic flow Q_r(A,B) = sum over y in B of pi(y) min(Q(A,y)/pi(y), r).

    Args:
        chain: The chain.
        A: Source set.
        B: Target set.
        r: Cap ratio in [0,1]; values above 1/2 are allowed.

    Returns:
        float: The capped flow, never above min(Q(A,B), r pi(B)).

    Raises:
        ValueError: If r lies outside [0,1].

    Example:
        >>> chain = generate_cycle_walk(3, 0.5)
        >>> r_ergodic_flow(chain, [0], [1, 2], 0.25)
        0.08333333333333333
    """
    r = check_ratio(r, allow_zero=True)
    target = as_membership(chain.n, B)
    capped = np.minimum(set_inflow(chain, A), r * chain.pi)
    return float(capped[target].sum())


def r_flow_min(chain: MarkovChain, A, r: float) -> float:
    """
    Q_r(A) = min(Q_r(A,A^c), Q_r(A^c,A)).

    Raises:
        ValueError: If A is empty or the whole space, or r lies outside [0,1].
    """
    members = _proper(chain, A)
    return min(
        r_ergodic_flow(chain, members, ~members, r),
        r_ergodic_flow(chain, ~members, members, r),
    )


def r_conductance(chain: MarkovChain, A, r: float) -> float:
    """
    r-conductance Phi_r(A) = Q_r(A) / (pi(A) pi(A^c)).

    Example:
        >>> r_conductance(generate_cycle_walk(3, 0.5), [0], 0.5)
        0.75
    """
    members = _proper(chain, A)
    measure = float(chain.pi[members].sum())
    return r_flow_min(chain, members, r) / (measure * (1.0 - measure))


def conductance_classic(chain: MarkovChain, A) -> float:
    """
    Classic conductance Phi(A) = Q(A,A^c) / min(pi(A), pi(A^c)).

    Example:
        >>> conductance_classic(generate_cycle_walk(3, 0.5), [0])
        0.5
    """
    members = _proper(chain, A)
    measure = float(chain.pi[members].sum())
    flow = float(set_inflow(chain, members)[~members].sum())
    return flow / min(measure, 1.0 - measure)


def r_modified_flow(chain: MarkovChain, A, r: float) -> float:
    """
    r-modified ergodic flow Psi_r(A) = Q_r(A,V) - r pi(A).

    Non-negative for every set, since min(q, r) >= r q for q, r in [0,1]; equal to Q_r(A,A^c)
    whenever r <= alpha.

    Raises:
        ValueError: If r lies outside (0,1].

    Example:
        >>> r_modified_flow(generate_cycle_walk(3, 0.5), [0], 0.25)
        0.08333333333333333
    """
    r = check_ratio(r)
    members = as_membership(chain.n, A)
    measure = float(chain.pi[members].sum())
    return r_ergodic_flow(chain, members, np.ones(chain.n, dtype=bool), r) - r * measure


def r_modified_conductance(chain: MarkovChain, A, r: float) -> float:
    """
    r-modified conductance phi^r(A) = max(Psi_r(A), Psi_r(A^c)) / (pi(A) pi(A^c)).

    Symmetric under complement.

    Example:
        >>> r_modified_conductance(generate_cycle_walk(3, 0.5), [0], 0.25)
        0.375
    """
    members = _proper(chain, A)
    measure = float(chain.pi[members].sum())
    best = max(r_modified_flow(chain, members, r), r_modified_flow(chain, ~members, r))
    return best / (measure * (1.0 - measure))


def _measures(chain: MarkovChain, members: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    mf = members.astype(float)
    return mf @ chain.pi, mf @ chain.flow_matrix


def r_conductance_batch(chain: MarkovChain, members: np.ndarray, r: float) -> np.ndarray:
    """Phi_r over every row of a membership matrix of proper subsets."""
    r = check_ratio(r)
    measure, inflow = _measures(chain, members)
    cap = r * chain.pi
    outward = np.where(members, 0.0, np.minimum(inflow, cap)).sum(axis=1)
    inward = np.where(members, np.minimum(chain.pi - inflow, cap), 0.0).sum(axis=1)
    return np.minimum(outward, inward) / (measure * (1.0 - measure))


def r_modified_conductance_batch(chain: MarkovChain, members: np.ndarray, r: float) -> np.ndarray:
    """phi^r over every row of a membership matrix of proper subsets."""
    r = check_ratio(r)
    measure, inflow = _measures(chain, members)
    cap = r * chain.pi
    psi = np.minimum(inflow, cap).sum(axis=1) - r * measure
    psi_complement = np.minimum(chain.pi - inflow, cap).sum(axis=1) - r * (1.0 - measure)
    return np.maximum(psi, psi_complement) / (measure * (1.0 - measure))


def conductance_classic_batch(chain: MarkovChain, members: np.ndarray) -> np.ndarray:
    """Phi over every row of a membership matrix of proper subsets."""
    measure, inflow = _measures(chain, members)
    flow = np.where(members, 0.0, inflow).sum(axis=1)
    return flow / np.minimum(measure, 1.0 - measure)
