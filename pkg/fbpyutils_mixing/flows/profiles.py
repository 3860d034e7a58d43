"""Set-size profiles of conductance-like quantities and the minimal measure gap delta0.

A profile is the running infimum g(s) = min{g(A) : 0 < pi(A) <= s} of a set quantity over all
subsets of measure at most 1/2, extended as a constant above 1/2. It is stored as a StepProfile.

Example:
    from fbpyutils_mixing.chain import generate_cycle_walk
    from fbpyutils_mixing.flows.profiles import build_profile, delta0

    chain = generate_cycle_walk(5, 0.5)
    profile = build_profile(chain, "r_conductance", r=0.25)
    profile.value_at(0.4)
    profile.to_tsv()
    delta0(chain)    # 0.2
"""
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

import numpy as np
import pandas as pd

from fbpyutils_mixing import logger
from fbpyutils_mixing import config
from fbpyutils_mixing.chain.core import MarkovChain
from fbpyutils_mixing.flows import conductance
from fbpyutils_mixing.flows.subsets import (
    all_subset_measures,
    check_enumerable,
    membership_matrix,
    plan_enumeration,
)
from fbpyutils_mixing.utils.validators import check_ratio

QUANTITIES: Dict[str, str] = {
    "r_conductance": "Phi_r",
    "modified_conductance": "phi^r",
    "conductance": "Phi",
    "root": "psi",
}


@dataclass(frozen=True, eq=False)
class StepProfile:
    """
    Step function over set measure s in (0, infinity).

    The value is values[i] on (s_hi[i-1], s_hi[i]], values[0] on (0, s_hi[0]], and ``tail`` for
    every s above the last breakpoint. Breakpoints are strictly increasing and never exceed 1/2.

    Attributes:
        quantity: One of QUANTITIES.
        r: Cap ratio used, or None for ratio-free quantities.
        s_hi: Right end of each step.
        values: Value on each step.
        tail: Value above the last breakpoint, equal to the value at 1/2.
    """

    quantity: str
    r: Optional[float]
    s_hi: np.ndarray
    values: np.ndarray
    tail: float

    def __post_init__(self):
        s_hi = np.array(self.s_hi, dtype=float)
        values = np.array(self.values, dtype=float)
        if s_hi.shape != values.shape or s_hi.size == 0:
            raise ValueError("A profile needs one value per breakpoint and at least one step.")
        if np.any(np.diff(s_hi) <= 0.0) or s_hi[0] <= 0.0:
            logger.error(f"Profile breakpoints are not strictly increasing: {s_hi}")
            raise ValueError("Profile breakpoints must be positive and strictly increasing.")
        s_hi.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "s_hi", s_hi)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "tail", float(self.tail))

    @property
    def label(self) -> str:
        symbol = QUANTITIES.get(self.quantity, self.quantity)
        return symbol if self.r is None else f"{symbol}(r={self.r:g})"

    def __len__(self) -> int:
        return self.s_hi.size

    def value_at(self, s: float) -> float:
        """
        Profile value at measure s > 0.

        Example:
            >>> p = StepProfile("root", None, [0.25, 0.5], [0.8, 0.6], 0.6)
            >>> p.value_at(0.25), p.value_at(0.3), p.value_at(0.9)
            (0.8, 0.6, 0.6)
        """
        if s <= 0.0:
            raise ValueError(f"Profiles are defined for s > 0, got {s}.")
        index = int(np.searchsorted(self.s_hi, s, side="left"))
        if index >= self.s_hi.size:
            return self.tail
        return float(self.values[index])

    def is_non_increasing(self, tol: float = 0.0) -> bool:
        steps = np.append(self.values, self.tail)
        return bool(np.all(np.diff(steps) <= tol))

    def pieces(self, lo: float, hi: float) -> List[tuple]:
        """
        Constant pieces (a, b, value) covering (lo, hi].

        Example:
            >>> StepProfile("root", None, [0.25, 0.5], [0.8, 0.6], 0.6).pieces(0.1, 1.0)
            [(0.1, 0.25, 0.8), (0.25, 0.5, 0.6), (0.5, 1.0, 0.6)]
        """
        pieces = []
        left = lo
        for right, value in zip(self.s_hi, self.values):
            if right <= left:
                continue
            end = min(right, hi)
            if end > left:
                pieces.append((float(left), float(end), float(value)))
            left = end
            if left >= hi:
                return pieces
        if hi > left:
            pieces.append((float(left), float(hi), self.tail))
        return pieces

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"s_hi": self.s_hi, "value": self.values})

    def to_tsv(self) -> str:
        """
        TSV export: a comment header naming the quantity and r, then ``s_hi<TAB>value`` rows.
        """
        header = f"# quantity={self.quantity} r={'-' if self.r is None else format(self.r, 'g')}\n"
        return header + self.to_frame().to_csv(sep="\t", index=False, float_format="%.17g")


def _kernel(quantity: str, r: Optional[float]) -> Callable[[MarkovChain, np.ndarray], np.ndarray]:
    if quantity == "r_conductance":
        return lambda chain, members: conductance.r_conductance_batch(chain, members, r)
    if quantity == "modified_conductance":
        return lambda chain, members: conductance.r_modified_conductance_batch(chain, members, r)
    if quantity == "conductance":
        return conductance.conductance_classic_batch
    # Imported here because the evolving package builds its own profile through this module.
    from fbpyutils_mixing.evolving.threshold import root_profile_batch

    return root_profile_batch


def _reduce_steps(measures: np.ndarray, values: np.ndarray) -> pd.DataFrame:
    """Minimum value per measure, merging measures closer than config.MEASURE_TOL."""
    frame = pd.DataFrame({"measure": measures, "value": values}).sort_values(
        "measure", kind="mergesort"
    )
    cluster = (frame["measure"].diff() > config.MEASURE_TOL).cumsum()
    return frame.groupby(cluster.to_numpy()).agg(
        measure=("measure", "max"), value=("value", "min")
    )


def _evaluate_chunk(chain: MarkovChain, masks: np.ndarray, kernel: Callable) -> pd.DataFrame:
    members = membership_matrix(chain.n, masks)
    measures = members.astype(float) @ chain.pi
    keep = measures <= 0.5 + config.MEASURE_TOL
    if not keep.any():
        return pd.DataFrame({"measure": [], "value": []})
    return _reduce_steps(measures[keep], kernel(chain, members[keep]))


def build_profile(
    chain: MarkovChain,
    quantity: str,
    r: Optional[float] = None,
    parallel: bool = False,
    max_workers: Optional[int] = None,
    cap: Optional[int] = None,
    chunk_size: Optional[int] = None,
) -> StepProfile:
    """
    Running-infimum profile of a set quantity over all subsets of measure at most 1/2.

    Args:
        chain: The chain.
        quantity: 'r_conductance', 'modified_conductance', 'conductance' or 'root'.
        r: Cap ratio in (0,1], required by the two r-quantities.
        parallel: Spread mask chunks over a thread pool. Defaults to False.
        max_workers: Pool size. Defaults to min(32, cpu_count + 4).
        cap: Enumeration cap. Defaults to config.ENUMERATION_CAP.
        chunk_size: Masks per chunk. Defaults to config.CHUNK_SIZE.

    Returns:
        StepProfile: One breakpoint per distinct subset measure, non-increasing values.

    Raises:
        ValueError: Unknown quantity or missing/invalid r.
        EnumerationCapError: The chain exceeds the enumeration cap.

    Example:
        >>> flip = MarkovChain.from_matrix([[0.0, 1.0], [1.0, 0.0]])
        >>> p = build_profile(flip, "r_conductance", r=0.5)
        >>> p.s_hi, p.values
        (array([0.5]), array([1.]))
    """
    if quantity not in QUANTITIES:
        logger.error(f"Unknown profile quantity: {quantity}")
        raise ValueError(f"Unknown quantity '{quantity}'; expected one of {list(QUANTITIES)}.")
    if quantity in ("r_conductance", "modified_conductance"):
        if r is None:
            logger.error(f"Quantity {quantity} requested without r")
            raise ValueError(f"Quantity '{quantity}' needs a cap ratio r.")
        r = check_ratio(r)
    else:
        r = None
    if not type(parallel) == bool:
        logger.error(f"Invalid parallel type: {parallel}")
        raise ValueError("Parameter 'parallel' must be a boolean.")

    logger.info(f"Building {quantity} profile for chain '{chain.name}' (n={chain.n}, r={r})")
    kernel = _kernel(quantity, r)
    chunks = plan_enumeration(chain, cap, chunk_size)

    if parallel:
        max_workers = max_workers or min(32, (os.cpu_count() or 1) + 4)
        logger.debug(f"Evaluating subset chunks with {max_workers} workers")
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            futures = [executor.submit(_evaluate_chunk, chain, masks, kernel) for masks in chunks]
            partials = [future.result() for future in futures]
    else:
        partials = [_evaluate_chunk(chain, masks, kernel) for masks in chunks]

    partials = [p for p in partials if len(p)]
    steps = _reduce_steps(
        np.concatenate([p["measure"].to_numpy() for p in partials]),
        np.concatenate([p["value"].to_numpy() for p in partials]),
    )
    s_hi = np.minimum(steps["measure"].to_numpy(), 0.5)
    values = steps["value"].cummin().to_numpy()
    profile = StepProfile(quantity=quantity, r=r, s_hi=s_hi, values=values, tail=values[-1])
    logger.debug(f"Profile {profile.label}: {len(profile)} steps, value at 1/2 = {profile.tail}")
    return profile


def delta0(chain: MarkovChain, cap: Optional[int] = None) -> float:
    """
    Smallest positive gap between the measures of two subsets.

    Uniform stationary distributions return exactly 1/n. Gaps below config.MEASURE_TOL are
    treated as ties.

    Raises:
        EnumerationCapError: The chain exceeds the enumeration cap.
        ValueError: All subset measures coincide.

    Example:
        >>> round(delta0(MarkovChain.from_matrix([[0.75, 0.25], [0.5, 0.5]])), 12)
        0.333333333333
    """
    if np.ptp(chain.pi) <= config.IDENTITY_TOL:
        return 1.0 / chain.n
    check_enumerable(chain, cap)
    gaps = np.diff(np.sort(all_subset_measures(chain.pi)))
    gaps = gaps[gaps > config.MEASURE_TOL]
    if gaps.size == 0:
        logger.error(f"All subset measures of chain '{chain.name}' coincide")
        raise ValueError("All subset measures coincide; delta0 is undefined.")
    value = float(gaps.min())
    logger.debug(f"delta0 for chain '{chain.name}': {value}")
    return value
