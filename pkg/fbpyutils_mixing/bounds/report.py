"""Side-by-side comparison of every applicable bound with the empirical mixing time.

Example:
    from fbpyutils_mixing.chain import generate_cycle_walk
    from fbpyutils_mixing.bounds.report import build_bound_report

    report = build_bound_report(generate_cycle_walk(5, 0.5), x=0, eps=0.5)
    print(report.to_text())
"""
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from fbpyutils_mixing import logger
from fbpyutils_mixing.bounds.theorems import (
    Bound,
    NotApplicable,
    baseline_poincare,
    bound_evolving,
    bound_no_holding,
    bound_paths_holding,
    bound_paths_noholding,
    bound_small_holding,
    cayley_holding_bound,
    cayley_noholding_bound,
    ceiling,
)
from fbpyutils_mixing.chain.core import MarkovChain, empirical_mixing_time
from fbpyutils_mixing.chain.groups import GroupPresentation
from fbpyutils_mixing.errors import PathFamilyError
from fbpyutils_mixing.flows.profiles import StepProfile, build_profile, delta0
from fbpyutils_mixing.paths.alternating import (
    AlternatingPathFamily,
    alt_vertex_congestion,
    build_alternating_paths,
    derive_alternating_from_plain,
)
from fbpyutils_mixing.paths.cayley import cayley_alternating_paths, cayley_word_paths
from fbpyutils_mixing.paths.congestion import edge_congestion, path_stats
from fbpyutils_mixing.paths.family import PathFamily, build_bfs_paths, remove_cycles
from fbpyutils_mixing.utils.validators import check_epsilon, check_ratio, check_state
from fbpyutils_mixing.visualization.ascii_table import format_cell
from fbpyutils_mixing.visualization.display import frame_to_tsv, render_frame

NO_HOLDING_GRID = (0.25, 0.5, 0.75, 1.0)
ALTERNATING_SOURCES = ("auto", "derive", "cayley")


def small_holding_grid(alpha: float) -> List[float]:
    """
    Default r values {alpha, alpha/2, alpha/4} restricted to (0,1].

    Example:
        >>> small_holding_grid(0.5)
        [0.5, 0.25, 0.125]
        >>> small_holding_grid(0.0)
        []
    """
    return [r for r in (alpha, alpha / 2.0, alpha / 4.0) if 0.0 < r <= 1.0]


@dataclass
class BoundEntry:
    """
    One row of a bound report.

    Attributes:
        tag: Theorem tag, e.g. 'small-holding' or 'paths-holding-1'.
        params: Parameters fed to the formula.
        value: Integer ceiling, real closed form, math.inf or NotApplicable.
        best: Smallest finite bound within its r sweep.
    """

    tag: str
    params: Dict[str, float]
    value: Bound
    best: bool = False

    @property
    def applicable(self) -> bool:
        return not isinstance(self.value, NotApplicable)

    @property
    def bound(self) -> Optional[Union[int, float]]:
        """The ceiling compared against the mixing time; None when not applicable."""
        if not self.applicable:
            return None
        return ceiling(float(self.value))

    def slack(self, empirical: Optional[int]) -> Optional[float]:
        """bound / empirical, when both are finite and empirical is positive."""
        bound = self.bound
        if bound is None or empirical is None or empirical == 0 or math.isinf(bound):
            return None
        return bound / empirical


@dataclass
class BoundReport:
    """
    All bounds for one chain, start state and epsilon.

    Attributes:
        chain_name: Name of the chain.
        x: Start state.
        eps: Target distance.
        entries: One BoundEntry per theorem and parameter choice.
        empirical: tau_x(eps), or None when it was not reached.
    """

    chain_name: str
    x: int
    eps: float
    entries: List[BoundEntry] = field(default_factory=list)
    empirical: Optional[int] = None

    def entry(self, tag: str) -> BoundEntry:
        """First entry with the given tag."""
        for e in self.entries:
            if e.tag == tag:
                return e
        raise KeyError(tag)

    def unsound_entries(self) -> List[BoundEntry]:
        """Entries whose finite bound falls below the empirical mixing time."""
        if self.empirical is None:
            return []
        return [
            e
            for e in self.entries
            if e.bound is not None and not math.isinf(e.bound) and e.bound < self.empirical
        ]

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for e in self.entries:
            params = " ".join(f"{k}={format_cell(v)}" for k, v in e.params.items())
            rows.append(
                {
                    "tag": e.tag + (" *" if e.best else ""),
                    "params": params,
                    "bound": e.bound if e.applicable else str(e.value),
                    "empirical": "not reached" if self.empirical is None else self.empirical,
                    "slack": e.slack(self.empirical),
                }
            )
        return pd.DataFrame(rows, columns=["tag", "params", "bound", "empirical", "slack"])

    @property
    def title(self) -> str:
        tau = "not reached" if self.empirical is None else str(self.empirical)
        return f"chain={self.chain_name} x={self.x} eps={format_cell(self.eps)} tau={tau}"

    def to_text(self) -> str:
        return render_frame(self.to_frame(), title=self.title)

    def to_tsv(self) -> str:
        return frame_to_tsv(self.to_frame(), title=self.title)


def _mark_best(entries: List[BoundEntry]) -> None:
    finite = [e for e in entries if e.bound is not None and not math.isinf(e.bound)]
    if finite:
        min(finite, key=lambda e: e.bound).best = True


def _profile_sweep(
    chain: MarkovChain,
    x: int,
    eps: float,
    tag: str,
    quantity: str,
    rs: Sequence[float],
    theorem,
    parallel: bool,
    cap: Optional[int],
) -> List[BoundEntry]:
    entries = []
    for r in rs:
        r = check_ratio(r)
        profile: Optional[StepProfile] = None
        if quantity == "modified_conductance" or r <= chain.alpha:
            profile = build_profile(chain, quantity, r=r, parallel=parallel, cap=cap)
        value = theorem(chain, x, eps, r, profile=profile)
        entries.append(BoundEntry(tag=tag, params={"r": r, "alpha": chain.alpha}, value=value))
    _mark_best(entries)
    return entries


def _alternating_family(
    chain: MarkovChain,
    family: PathFamily,
    source: str,
    group: Optional[GroupPresentation],
) -> AlternatingPathFamily:
    if source == "derive":
        return derive_alternating_from_plain(chain, family)
    if source == "cayley":
        if group is None:
            raise ValueError("Alternating source 'cayley' needs a group presentation.")
        return cayley_alternating_paths(group, chain).family
    return build_alternating_paths(chain)


def build_bound_report(
    chain: MarkovChain,
    x: int,
    eps: float,
    r_small: Optional[Sequence[float]] = None,
    r_noholding: Optional[Sequence[float]] = None,
    family: Optional[PathFamily] = None,
    alternating: str = "auto",
    group: Optional[GroupPresentation] = None,
    use_sharper: bool = False,
    parallel: bool = False,
    max_steps: Optional[int] = None,
    cap: Optional[int] = None,
) -> BoundReport:
    """
    Evaluate every theorem for one chain and compare with the empirical mixing time.

    Args:
        chain: The chain.
        x: Start state.
        eps: Target chi-square distance.
        r_small: r sweep of the small-holding theorem. Defaults to {alpha, alpha/2, alpha/4}.
        r_noholding: r sweep of the no-holding theorem. Defaults to {1/4, 1/2, 3/4, 1}.
        family: Canonical paths. Defaults to BFS paths, or word paths when a group is given.
        alternating: Alternating family source: 'auto' (BFS over state and parity), 'derive'
            (from family and the self-loops) or 'cayley' (alternating words). Defaults to 'auto'.
        group: Group presentation when the chain is a Cayley walk; adds the word-length bounds.
        use_sharper: Also report the sharper evolving-set form. Defaults to False.
        parallel: Build profiles with a thread pool. Defaults to False.
        max_steps: Iteration cap of the empirical mixing time.
        cap: Enumeration cap.

    Returns:
        BoundReport: The populated report. Alternating family failures become NotApplicable
        entries carrying the error message.

    Raises:
        ValueError: Invalid x, eps, r values or alternating source.
        EnumerationCapError: The chain is too large for subset enumeration.
    """
    x = check_state(chain.n, x)
    eps = check_epsilon(eps)
    if alternating not in ALTERNATING_SOURCES:
        logger.error(f"Unknown alternating source: {alternating}")
        raise ValueError(f"Alternating source must be one of {ALTERNATING_SOURCES}, got '{alternating}'.")
    logger.info(f"Building bound report for chain '{chain.name}' x={x} eps={eps}")

    report = BoundReport(chain_name=chain.name, x=x, eps=eps)
    report.empirical = empirical_mixing_time(chain, x, eps, max_steps=max_steps)

    small = small_holding_grid(chain.alpha) if r_small is None else list(r_small)
    if small:
        report.entries.extend(
            _profile_sweep(chain, x, eps, "small-holding", "r_conductance", small, bound_small_holding, parallel, cap)
        )
    else:
        report.entries.append(
            BoundEntry(
                tag="small-holding",
                params={"alpha": chain.alpha},
                value=NotApplicable("alpha=0 leaves no r <= alpha"),
            )
        )

    noholding = NO_HOLDING_GRID if r_noholding is None else r_noholding
    report.entries.extend(
        _profile_sweep(
            chain, x, eps, "no-holding", "modified_conductance", noholding, bound_no_holding, parallel, cap
        )
    )

    root = build_profile(chain, "root", parallel=parallel, cap=cap)
    report.entries.append(BoundEntry("evolving", {}, bound_evolving(chain, x, eps, profile=root)))
    if use_sharper:
        report.entries.append(
            BoundEntry("evolving-sharper", {}, bound_evolving(chain, x, eps, use_sharper=True, profile=root))
        )

    if family is None:
        family = cayley_word_paths(group, chain).family if group is not None else build_bfs_paths(chain)
    family = remove_cycles(family)
    holding = bound_paths_holding(chain, x, eps, family)
    report.entries.append(BoundEntry("paths-holding-1", holding.params, holding.bound1))
    report.entries.append(BoundEntry("paths-holding-2", holding.params, holding.bound2))

    report.entries.append(_alternating_entry(chain, x, eps, family, alternating, group, cap))

    stats = path_stats(chain, family)
    rho_e = edge_congestion(chain, family)
    report.entries.append(
        BoundEntry(
            "baseline-eq1",
            {"alpha": chain.alpha, "rho_e": rho_e, "ell": stats.ell},
            baseline_poincare(1, rho_e, stats.ell, eps, float(chain.pi[x]), alpha=chain.alpha),
        )
    )

    if group is not None:
        report.entries.append(BoundEntry("cayley-holding", {"order": group.order}, cayley_holding_bound(group, eps)))
        try:
            value = cayley_noholding_bound(group, eps)
        except PathFamilyError as e:
            value = NotApplicable(str(e))
        report.entries.append(BoundEntry("cayley-noholding", {"order": group.order}, value))

    unsound = report.unsound_entries()
    if unsound:
        logger.error(f"Bounds below the empirical mixing time: {[e.tag for e in unsound]}")
    logger.info(f"Bound report for '{chain.name}' has {len(report.entries)} entries")
    return report


def _alternating_entry(
    chain: MarkovChain,
    x: int,
    eps: float,
    family: PathFamily,
    source: str,
    group: Optional[GroupPresentation],
    cap: Optional[int],
) -> BoundEntry:
    if eps > 1.0:
        return BoundEntry("paths-noholding", {}, NotApplicable(f"eps={eps} exceeds 1"))
    try:
        alternating = _alternating_family(chain, family, source, group)
    except PathFamilyError as e:
        logger.warning(f"No alternating family for chain '{chain.name}': {e}")
        return BoundEntry("paths-noholding", {}, NotApplicable(str(e)))
    rho_dot, p0_star = alt_vertex_congestion(chain, alternating)
    delta = delta0(chain, cap=cap)
    value = bound_paths_noholding(chain, x, eps, alternating, delta=delta)
    return BoundEntry("paths-noholding", {"rho_dot": rho_dot, "P0*": p0_star, "delta0": delta}, value)


@dataclass
class AnalysisReport:
    """
    Stationary data, empirical mixing time and profile summaries for one chain.

    Attributes:
        chain_name: Name of the chain.
        alpha: Minimal holding probability.
        x: Start state.
        eps: Target distance.
        empirical: tau_x(eps), or None when not reached.
        stationary: Frame with columns state and pi.
        profiles: The profiles that were built, in request order.
    """

    chain_name: str
    alpha: float
    x: int
    eps: float
    empirical: Optional[int]
    stationary: pd.DataFrame
    profiles: List[StepProfile]

    def summary_frame(self) -> pd.DataFrame:
        rows = []
        for p in self.profiles:
            rows.append(
                {
                    "profile": p.label,
                    "steps": len(p),
                    "smallest_s": float(p.s_hi[0]),
                    "value_first": float(p.values[0]),
                    "value_half": float(p.tail),
                }
            )
        return pd.DataFrame(rows, columns=["profile", "steps", "smallest_s", "value_first", "value_half"])

    @property
    def title(self) -> str:
        tau = "not reached" if self.empirical is None else str(self.empirical)
        return (
            f"chain={self.chain_name} alpha={format_cell(self.alpha)} x={self.x} "
            f"eps={format_cell(self.eps)} tau={tau}"
        )

    def to_text(self) -> str:
        return "\n\n".join(
            [
                render_frame(self.stationary, alignment="right", title=self.title),
                render_frame(self.summary_frame(), title="profiles"),
            ]
        )

    def to_tsv(self) -> str:
        parts = [frame_to_tsv(self.stationary, title=self.title)]
        parts.extend(p.to_tsv() for p in self.profiles)
        return "".join(parts)


def analyze_chain(
    chain: MarkovChain,
    x: int,
    eps: float,
    r_values: Optional[Sequence[float]] = None,
    parallel: bool = False,
    max_steps: Optional[int] = None,
    cap: Optional[int] = None,
) -> AnalysisReport:
    """
    Stationary distribution, empirical mixing time and the profiles at the requested r.

    For every r the r-conductance profile (when r <= alpha) and the modified profile are built;
    the root profile is always included. Without r values the grid {1/2} is used.

    Example:
        >>> analyze_chain(MarkovChain.from_matrix([[0.0, 1.0], [1.0, 0.0]]), 0, 0.5).empirical is None
        True
    """
    x = check_state(chain.n, x)
    eps = check_epsilon(eps)
    r_values = [0.5] if not r_values else [check_ratio(r) for r in r_values]
    logger.info(f"Analyzing chain '{chain.name}' x={x} eps={eps} r={r_values}")
    profiles = []
    for r in r_values:
        if r <= chain.alpha:
            profiles.append(build_profile(chain, "r_conductance", r=r, parallel=parallel, cap=cap))
        profiles.append(build_profile(chain, "modified_conductance", r=r, parallel=parallel, cap=cap))
    profiles.append(build_profile(chain, "root", parallel=parallel, cap=cap))
    stationary = pd.DataFrame({"state": np.arange(chain.n), "pi": chain.pi})
    return AnalysisReport(
        chain_name=chain.name,
        alpha=chain.alpha,
        x=x,
        eps=eps,
        empirical=empirical_mixing_time(chain, x, eps, max_steps=max_steps),
        stationary=stationary,
        profiles=profiles,
    )
