"""Evolving-set threshold sets and the root profile.

For a set A and u in [0,1] the threshold set is A_u = {y : Q(A,y) >= u pi(y)}. Its measure is a
non-increasing step function of u that changes only at the ratios Q(A,y)/pi(y), so every
integral over u is a finite sum over those ratios:

    int_0^1 pi(A_u) du = pi(A)
    psi(A) = 1 - int_0^1 sqrt(pi(A_u)(1 - pi(A_u))) du / sqrt(pi(A)(1 - pi(A)))

Example:
    from fbpyutils_mixing.chain import generate_cycle_walk
    from fbpyutils_mixing.evolving.threshold import threshold_curve, root_profile_set

    chain = generate_cycle_walk(3, 0.5)
    threshold_curve(chain, [0]).integral()   # 1/3
    root_profile_set(chain, [0])             # 0.5
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np
import pandas as pd

from fbpyutils_mixing import logger
from fbpyutils_mixing.chain.core import MarkovChain, as_membership
from fbpyutils_mixing.flows.conductance import set_inflow
from fbpyutils_mixing.flows.profiles import StepProfile, build_profile
from fbpyutils_mixing.flows.subsets import SubsetMask
from fbpyutils_mixing.utils.validators import check_ratio


@dataclass(frozen=True, eq=False)
class ThresholdCurve:
    """
    u -> pi(A_u) as a step function on (0, 1].

    The measure is measures[i] on (u_hi[i-1], u_hi[i]] (u_hi[-1] read as 0) and 0 above the
    last breakpoint.

    Attributes:
        u_hi: Distinct positive ratios Q(A,y)/pi(y), ascending.
        measures: pi(A_u) on each step, non-increasing.
        set_measure: pi(A).
    """

    u_hi: np.ndarray
    measures: np.ndarray
    set_measure: float

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.u_hi, prepend=0.0)

    def measure_at(self, u: float) -> float:
        """pi(A_u) for u in (0, 1]."""
        index = int(np.searchsorted(self.u_hi, u, side="left"))
        return 0.0 if index >= self.u_hi.size else float(self.measures[index])

    def integral(self) -> float:
        """int_0^1 pi(A_u) du, which equals pi(A)."""
        return float(np.sum(self.widths * self.measures))

    def root_integral(self) -> float:
        """int_0^1 sqrt(pi(A_u)(1 - pi(A_u))) du."""
        m = np.clip(self.measures, 0.0, 1.0)
        return float(np.sum(self.widths * np.sqrt(m * (1.0 - m))))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"u_hi": self.u_hi, "measure": self.measures})

    def to_tsv(self) -> str:
        return self.to_frame().to_csv(sep="\t", index=False, float_format="%.17g")


def _ratios(chain: MarkovChain, A) -> np.ndarray:
    return np.clip(set_inflow(chain, A) / chain.pi, 0.0, 1.0)


def threshold_set(chain: MarkovChain, A, u: float) -> SubsetMask:
    """
    Threshold set A_u = {y : Q(A,y) >= u pi(y)}.

    Args:
        chain: The chain.
        A: The source set.
        u: Threshold in [0,1].

    Returns:
        SubsetMask: A_u; u = 0 always gives the whole space.

    Example:
        >>> threshold_set(generate_cycle_walk(3, 0.5), [0], 0.5).states
        (0, 1)
    """
    u = check_ratio(u, allow_zero=True, name="u")
    return SubsetMask.from_states(chain, _ratios(chain, A) >= u)


def threshold_curve(chain: MarkovChain, A) -> ThresholdCurve:
    """
    Exact step function u -> pi(A_u).

    Example:
        >>> curve = threshold_curve(generate_cycle_walk(3, 0.5), [0])
        >>> curve.u_hi, curve.measures
        (array([0.5]), array([0.66666667]))
    """
    members = as_membership(chain.n, A)
    ratios = _ratios(chain, members)
    u_hi = np.unique(ratios[ratios > 0.0])
    measures = np.array([chain.pi[ratios >= u].sum() for u in u_hi])
    return ThresholdCurve(
        u_hi=u_hi, measures=measures, set_measure=float(chain.pi[members].sum())
    )


def root_profile_batch(chain: MarkovChain, members: np.ndarray) -> np.ndarray:
    """
    psi(A) for every row of a membership matrix of proper subsets.

    Each row's ratios are sorted ascending; on the interval ending at the j-th smallest ratio the
    threshold set holds every state from position j on, so its measure is a suffix sum and the
    measure of its complement is the prefix sum before j.
    """
    mf = members.astype(float)
    measure = mf @ chain.pi
    ratios = np.clip((mf @ chain.flow_matrix) / chain.pi, 0.0, 1.0)
    order = np.argsort(ratios, axis=1, kind="stable")
    u = np.take_along_axis(ratios, order, axis=1)
    weights = chain.pi[order]
    kept = np.cumsum(weights[:, ::-1], axis=1)[:, ::-1]
    # Complement measures are summed directly, never taken as 1 - kept.
    dropped = np.zeros_like(kept)
    dropped[:, 1:] = np.cumsum(weights[:, :-1], axis=1)
    widths = np.diff(u, axis=1, prepend=0.0)
    spread = (widths * np.sqrt(kept * dropped)).sum(axis=1)
    return 1.0 - spread / np.sqrt(measure * ((1.0 - mf) @ chain.pi))


def root_profile_set(chain: MarkovChain, A) -> float:
    """
    Root profile psi(A) of a proper nonempty set, evaluated exactly over the threshold steps.

    Raises:
        ValueError: If A is empty or the whole space.

    Example:
        >>> root_profile_set(MarkovChain.from_matrix([[0.0, 1.0], [1.0, 0.0]]), [0])
        0.0
    """
    members = as_membership(chain.n, A)
    if not members.any() or members.all():
        logger.error(f"Root profile requested for degenerate set {np.flatnonzero(members).tolist()}")
        raise ValueError("Set must be a proper nonempty subset of the states.")
    return float(root_profile_batch(chain, members[None, :])[0])


def root_profile_curve(
    chain: MarkovChain,
    parallel: bool = False,
    max_workers: Optional[int] = None,
    cap: Optional[int] = None,
) -> StepProfile:
    """
    Tightest root profile: the running infimum of psi(A) over sets of measure at most s.

    Raises:
        EnumerationCapError: The chain exceeds the enumeration cap.
    """
    logger.info(f"Building root profile for chain '{chain.name}'")
    return build_profile(chain, "root", parallel=parallel, max_workers=max_workers, cap=cap)
