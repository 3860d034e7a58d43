"""Brute-force audit of the flow, evolving-set and path inequalities and of bound soundness.

Every proper subset of every audited chain is enumerated. Each check compares a left-hand side
with a right-hand side; a failure becomes a ``Violation`` naming the check, the chain, the
subset, r and both sides. Facts that may legitimately fail (such as rho_e <= rho_v/P0 for
directed families) are recorded as observations instead.

Example:
    from fbpyutils_mixing.bounds.audit import audit_fleet, builtin_examples
    from fbpyutils_mixing.chain import random_fleet

    result = audit_fleet([(c, None) for c in random_fleet(7, 20, 5)] + builtin_examples())
    result.ok
"""
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from fbpyutils_mixing import config, logger
from fbpyutils_mixing.bounds.report import NO_HOLDING_GRID, small_holding_grid
from fbpyutils_mixing.bounds.theorems import (
    Bound,
    NotApplicable,
    bound_evolving,
    bound_no_holding,
    bound_paths_holding,
    bound_paths_noholding,
    bound_small_holding,
    cayley_holding_bound,
    cayley_noholding_bound,
    ceiling,
)
from fbpyutils_mixing.chain.core import MarkovChain, empirical_mixing_time, time_reversal
from fbpyutils_mixing.chain.generators import (
    degree_matrix,
    generate_cayley_walk,
    generate_complete_graph_walk,
    generate_cycle_walk,
    generate_eulerian_walk,
)
from fbpyutils_mixing.chain.groups import GroupPresentation, cyclic_group, symmetric_group
from fbpyutils_mixing.errors import PathFamilyError
from fbpyutils_mixing.evolving.threshold import root_profile_batch, threshold_curve
from fbpyutils_mixing.flows.conductance import r_conductance_batch, r_modified_conductance_batch
from fbpyutils_mixing.flows.profiles import build_profile, delta0
from fbpyutils_mixing.flows.subsets import check_enumerable, iter_mask_chunks, membership_matrix
from fbpyutils_mixing.paths.alternating import (
    alt_vertex_congestion,
    build_alternating_paths,
    derive_alternating_from_plain,
)
from fbpyutils_mixing.paths.cayley import cayley_word_paths
from fbpyutils_mixing.paths.congestion import (
    boundary_prob,
    directed_vertex_bound,
    edge_congestion,
    path_stats,
    vertex_congestion,
)
from fbpyutils_mixing.paths.family import PathFamily, build_bfs_paths

MODIFIED_GRID = (0.1, 0.25, 0.5, 0.75, 1.0)
EPSILONS = (0.5, 0.25)
AUDIT_MAX_STEPS = 5000
FAULT_SHIFT = 1.125

Audited = Tuple[MarkovChain, Optional[GroupPresentation]]


@dataclass(frozen=True)
class Violation:
    """
    One failed check.

    Attributes:
        check: Name of the inequality or identity.
        chain: Chain name.
        subset: Subset, start state or family the check was evaluated on.
        r: Cap ratio, when the check has one.
        lhs: Left-hand side.
        rhs: Right-hand side it should not exceed (or equal, for identities).
    """

    check: str
    chain: str
    subset: str = "-"
    r: Optional[float] = None
    lhs: float = math.nan
    rhs: float = math.nan

    def __str__(self) -> str:
        r = "" if self.r is None else f" r={self.r:g}"
        return f"[{self.check}] {self.chain} {self.subset}{r}: lhs={self.lhs!r} rhs={self.rhs!r}"


@dataclass
class AuditResult:
    """Violations, observations and the number of individual comparisons made."""

    violations: List[Violation] = field(default_factory=list)
    observations: List[Violation] = field(default_factory=list)
    checks: int = 0
    chains: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def merge(self, other: "AuditResult") -> "AuditResult":
        self.violations.extend(other.violations)
        self.observations.extend(other.observations)
        self.checks += other.checks
        self.chains += other.chains
        return self

    def to_frame(self, observations: bool = False) -> pd.DataFrame:
        items = self.observations if observations else self.violations
        return pd.DataFrame(
            [vars(v) for v in items], columns=["check", "chain", "subset", "r", "lhs", "rhs"]
        )


def _label(mask: int, n: int) -> str:
    return "{" + ",".join(str(i) for i in range(n) if mask >> i & 1) + "}"


class _Recorder:
    """Vectorised comparisons lhs <= rhs + tol over all enumerated subsets of one chain."""

    def __init__(self, chain: MarkovChain, masks: np.ndarray, result: AuditResult):
        self.chain = chain
        self.masks = masks
        self.result = result

    def at_most(self, check: str, lhs, rhs, tol: float, r: Optional[float] = None, where=None):
        lhs = np.broadcast_to(np.asarray(lhs, dtype=float), self.masks.shape)
        rhs = np.broadcast_to(np.asarray(rhs, dtype=float), self.masks.shape)
        failed = lhs > rhs + tol
        if where is not None:
            failed &= where
        self.result.checks += int(self.masks.size if where is None else np.count_nonzero(where))
        for k in np.flatnonzero(failed):
            self.result.violations.append(
                Violation(check, self.chain.name, _label(int(self.masks[k]), self.chain.n), r, float(lhs[k]), float(rhs[k]))
            )

    def equal(self, check: str, lhs, rhs, tol: float, r: Optional[float] = None, where=None):
        lhs = np.broadcast_to(np.asarray(lhs, dtype=float), self.masks.shape)
        rhs = np.broadcast_to(np.asarray(rhs, dtype=float), self.masks.shape)
        self.at_most(check, np.abs(lhs - rhs), 0.0, tol, r=r, where=where)


def _scalar(result: AuditResult, check: str, chain: MarkovChain, subset: str, lhs: float, rhs: float,
            tol: float, observation: bool = False) -> None:
    """Record lhs <= rhs + tol for one pair of numbers."""
    result.checks += 1
    if lhs > rhs + tol:
        target = result.observations if observation else result.violations
        target.append(Violation(check, chain.name, subset, None, float(lhs), float(rhs)))


def inequality_lemma_grid(points: int = 101) -> List[Violation]:
    """
    sqrt(XY) + sqrt((1-X)(1-Y)) <= sqrt(1 - (X-Y)^2) on a points x points grid of [0,1]^2.

    Example:
        >>> inequality_lemma_grid()
        []
    """
    grid = np.linspace(0.0, 1.0, points)
    X, Y = np.meshgrid(grid, grid, indexing="ij")
    lhs = np.sqrt(X * Y) + np.sqrt((1.0 - X) * (1.0 - Y))
    rhs = np.sqrt(np.clip(1.0 - (X - Y) ** 2, 0.0, None))
    failed = np.argwhere(lhs > rhs + config.IDENTITY_TOL)
    return [
        Violation("inequality-lemma", "grid", f"X={grid[i]:g},Y={grid[j]:g}", None, float(lhs[i, j]), float(rhs[i, j]))
        for i, j in failed
    ]


def remark_checks(chain: MarkovChain, family: PathFamily) -> Tuple[List[Violation], List[Violation]]:
    """
    rho_v <= rho_e (1 - alpha) as a violation check, rho_e <= rho_v / P0 as an observation.

    Returns:
        Tuple of (violations, observations).
    """
    result = AuditResult()
    rho_v = vertex_congestion(chain, family)
    rho_e = edge_congestion(chain, family)
    p0 = boundary_prob(chain, family)
    tag = f"family={family.source}"
    _scalar(result, "vertex-below-edge-congestion", chain, tag, rho_v, rho_e * (1.0 - chain.alpha), config.IDENTITY_TOL)
    _scalar(result, "edge-below-vertex-over-P0", chain, tag, rho_e, rho_v / p0, config.IDENTITY_TOL, observation=True)
    return result.violations, result.observations


def builtin_examples() -> List[Audited]:
    """Small named chains covering holding, periodic, exchangeable, Eulerian and Cayley cases."""
    examples: List[Audited] = []
    for n in (3, 5, 7):
        for alpha in (0.25, 0.5):
            examples.append((generate_cycle_walk(n, alpha), None))
    examples.append((generate_cycle_walk(3, 0.0), None))
    examples.append((MarkovChain.from_matrix([[0.0, 1.0], [1.0, 0.0]], name="flip"), None))
    examples.append((generate_complete_graph_walk(2), None))
    examples.append((generate_complete_graph_walk(4), None))
    loops = degree_matrix(3, [(0, 0), (1, 1), (2, 2), (0, 1), (1, 2), (2, 0)])
    examples.append((generate_eulerian_walk(loops), None))
    examples.append(
        (MarkovChain.from_matrix([[0.5, 1 / 3, 1 / 6]] * 3, pi=[0.5, 1 / 3, 1 / 6], name="rows-equal-pi"), None)
    )
    examples.append((MarkovChain.from_matrix([[0.75, 0.25], [0.5, 0.5]], name="two-state"), None))
    for group in (
        cyclic_group(5, ["id", "+1"], [0.5, 0.5]),
        cyclic_group(7, ["id", "+1"], [0.5, 0.5]),
        cyclic_group(5, ["+1", "+2"], [0.5, 0.5]),
        symmetric_group(3, ["id", "(12)", "(123)"]),
    ):
        examples.append((generate_cayley_walk(group), group))
    return examples


def _set_checks(
    chain: MarkovChain,
    recorder: _Recorder,
    members: np.ndarray,
    r_grid: Sequence[float],
    inject_fault: bool,
) -> None:
    tol, lemma = config.IDENTITY_TOL, config.LEMMA_TOL
    measure = members.astype(float) @ chain.pi
    inflow = members.astype(float) @ chain.flow_matrix
    crossing = np.where(members, 0.0, inflow).sum(axis=1)

    recorder.equal("flow-out-of-set", inflow.sum(axis=1), measure, config.ROW_SUM_TOL)
    recorder.equal("flow-into-set", (chain.flow_matrix.sum(axis=0) * members).sum(axis=1), measure, config.STATIONARY_TOL)

    psi = root_profile_batch(chain, members)
    if inject_fault:
        psi = psi - FAULT_SHIFT
    recorder.at_most("root-profile-nonnegative", -psi, 0.0, tol)
    recorder.at_most("root-profile-at-most-one", psi, 1.0, tol)
    # Masks run 1 .. 2^n - 2, so reversing the order maps every set to its complement.
    recorder.equal("root-profile-complement", psi, psi[::-1], tol)

    holding_cap = min(chain.alpha, 0.5)
    for r in sorted(set(r_grid)):
        cap = r * chain.pi
        outward = np.where(members, 0.0, np.minimum(inflow, cap)).sum(axis=1)
        inward = np.where(members, np.minimum(chain.pi - inflow, cap), 0.0).sum(axis=1)
        psi_r = np.minimum(inflow, cap).sum(axis=1) - r * measure
        conductance = r_conductance_batch(chain, members, r)
        modified = r_modified_conductance_batch(chain, members, r)

        recorder.at_most("modified-flow-nonnegative", -psi_r, 0.0, tol, r=r)
        recorder.at_most("modified-flow-below-capped-flow", psi_r, outward, tol, r=r)
        recorder.at_most("r-conductance-at-most-2r", conductance, 2.0 * r, tol, r=r)
        if r <= chain.alpha:
            recorder.equal("modified-flow-equals-capped-flow", psi_r, outward, tol, r=r)
        if r >= 1.0 - chain.alpha:
            recorder.equal("capped-flow-equals-flow", np.minimum(outward, inward), crossing, config.STATIONARY_TOL, r=r)
        if r <= holding_cap:
            recorder.at_most("root-lemma", conductance**2 / (4.0 * r), psi, lemma, r=r)
            recorder.at_most("modified-dominates-conductance", conductance, modified, tol, r=r)
        bound = np.minimum(modified**2, r * modified) / (12.0 * r)
        recorder.at_most("modified-root-lemma", bound, psi, lemma, r=r)


def _threshold_checks(chain: MarkovChain, masks: np.ndarray, members: np.ndarray, result: AuditResult) -> None:
    for mask, row in zip(masks, members):
        curve = threshold_curve(chain, row)
        _scalar(result, "threshold-integral", chain, _label(int(mask), chain.n),
                abs(curve.integral() - curve.set_measure), 0.0, config.IDENTITY_TOL)


def _path_checks(chain: MarkovChain, family: PathFamily, recorder: _Recorder, members: np.ndarray, result: AuditResult):
    tag = f"family={family.source}"
    rho_v = vertex_congestion(chain, family)
    rho_e = edge_congestion(chain, family)
    violations, observations = remark_checks(chain, family)
    result.violations.extend(violations)
    result.observations.extend(observations)
    result.checks += 2

    stats = path_stats(chain, family)
    expected = stats.ell_ave * (1.0 - float(np.sum(chain.pi**2)))
    _scalar(result, "average-congestion-identity", chain, tag, abs(stats.rho_v_ave - expected), 0.0, config.IDENTITY_TOL)

    ratio = rho_v / rho_e
    if ratio <= 1.0 + config.IDENTITY_TOL:
        # Equal congestions (alpha = 0) may round just above one.
        ratio = min(ratio, 1.0)
        conductance = r_conductance_batch(chain, members, ratio)
        recorder.at_most("path-conductance-lemma", -conductance, -1.0 / rho_e, config.LEMMA_TOL, r=ratio)
    else:
        result.observations.append(Violation("path-ratio-above-one", chain.name, tag, None, ratio, 1.0))

    if chain.alpha > 0.0:
        derived = derive_alternating_from_plain(chain, family)
        rho_dot, p0_star = alt_vertex_congestion(chain, derived)
        _scalar(result, "derived-alternating-congestion", chain, tag,
                abs(rho_dot - (1.0 + directed_vertex_bound(chain, family))), 0.0, config.IDENTITY_TOL)
        if np.ptp(chain.pi) <= config.IDENTITY_TOL:
            _scalar(result, "derived-boundary-probability", chain, tag,
                    abs(p0_star - min(chain.alpha, boundary_prob(chain, family))), 0.0, config.IDENTITY_TOL)
        if p0_star > 0.0:
            modified = r_modified_conductance_batch(chain, members, p0_star)
            recorder.at_most("alternating-path-lemma", -modified, -p0_star / (2.0 * rho_dot), config.LEMMA_TOL, r=p0_star)


def _alternating_checks(chain: MarkovChain, recorder: _Recorder, members: np.ndarray, result: AuditResult):
    try:
        family = build_alternating_paths(chain)
    except PathFamilyError:
        return None
    rho_dot, p0_star = alt_vertex_congestion(chain, family)
    _scalar(result, "alternating-congestion-at-least-one", chain, "family=alt-auto", 1.0, rho_dot, config.IDENTITY_TOL)
    modified = r_modified_conductance_batch(chain, members, p0_star)
    recorder.at_most("alternating-path-lemma", -modified, -p0_star / (2.0 * rho_dot), config.LEMMA_TOL, r=p0_star)
    return family


def _cayley_checks(chain: MarkovChain, group: GroupPresentation, result: AuditResult) -> PathFamily:
    words = cayley_word_paths(group, chain)
    rho_v = vertex_congestion(chain, words.family)
    rho_e = edge_congestion(chain, words.family)
    # Strict inequalities: equality counts as a failure.
    _scalar(result, "cayley-vertex-bound", chain, group.name, rho_v, words.vertex_bound, -1e-12)
    _scalar(result, "cayley-edge-bound", chain, group.name, rho_e, words.edge_bound, -1e-12)
    return words.family


def _soundness(
    chain: MarkovChain,
    group: Optional[GroupPresentation],
    family: PathFamily,
    alternating,
    eps_values: Sequence[float],
    max_steps: int,
    result: AuditResult,
) -> None:
    small = {r: build_profile(chain, "r_conductance", r=r) for r in small_holding_grid(chain.alpha)}
    noholding = {r: build_profile(chain, "modified_conductance", r=r) for r in NO_HOLDING_GRID}
    root = build_profile(chain, "root")
    delta = delta0(chain) if alternating is not None else None

    for eps in eps_values:
        cayley: List[Tuple[str, Bound]] = []
        if group is not None:
            if chain.alpha > 0.0:
                cayley.append(("cayley-holding", cayley_holding_bound(group, eps)))
            try:
                cayley.append(("cayley-noholding", cayley_noholding_bound(group, eps)))
            except PathFamilyError:
                pass
        for x in range(chain.n):
            tau = empirical_mixing_time(chain, x, eps, max_steps=max_steps)
            bounds: List[Tuple[str, Bound]] = list(cayley)
            bounds += [(f"small-holding(r={r:g})", bound_small_holding(chain, x, eps, r, profile=p)) for r, p in small.items()]
            bounds += [(f"no-holding(r={r:g})", bound_no_holding(chain, x, eps, r, profile=p)) for r, p in noholding.items()]
            bounds.append(("evolving", bound_evolving(chain, x, eps, profile=root)))
            holding = bound_paths_holding(chain, x, eps, family)
            bounds += [("paths-holding-1", holding.bound1), ("paths-holding-2", holding.bound2)]
            if alternating is not None and eps <= 1.0:
                bounds.append(("paths-noholding", bound_paths_noholding(chain, x, eps, alternating, delta=delta)))
            subset = f"x={x},eps={eps:g}"
            for tag, value in bounds:
                if isinstance(value, NotApplicable):
                    continue
                bound = ceiling(float(value))
                if math.isinf(bound):
                    continue
                if tau is None:
                    # tau > max_steps, so any bound up to max_steps is contradicted.
                    _scalar(result, f"soundness:{tag}", chain, subset, max_steps + 1, bound, 0.0)
                else:
                    _scalar(result, f"soundness:{tag}", chain, subset, tau, bound, 0.0)
            if tau is None and alternating is not None:
                result.observations.append(
                    Violation("alternating-family-without-convergence", chain.name, subset, None, math.nan, math.nan)
                )


def audit_chain(
    chain: MarkovChain,
    r_grid: Optional[Sequence[float]] = None,
    families: bool = True,
    group: Optional[GroupPresentation] = None,
    eps_values: Sequence[float] = EPSILONS,
    max_steps: int = AUDIT_MAX_STEPS,
    soundness: bool = True,
    inject_fault: bool = False,
    cap: Optional[int] = None,
) -> AuditResult:
    """
    Exhaustive audit of one chain.

    Args:
        chain: The chain; its subsets must be enumerable.
        r_grid: r values for the modified-flow lemmas. Defaults to {0.1, 1/4, 1/2, 3/4, 1};
            the grid {m, m/2, m/4} with m = min(alpha, 1/2) is always added for the holding lemmas.
        families: Also check the canonical-path lemmas and remarks. Defaults to True.
        group: Group presentation of a Cayley walk; adds the word-path checks.
        eps_values: Targets of the soundness checks. Defaults to (1/2, 1/4).
        max_steps: Iteration cap of the empirical mixing times.
        soundness: Compare every applicable bound with the empirical mixing time. Defaults to True.
        inject_fault: Shift the root profile down so the audit must fail. Defaults to False.
        cap: Enumeration cap.

    Returns:
        AuditResult: Violations and observations of this chain.
    """
    logger.info(f"Auditing chain '{chain.name}' (n={chain.n})")
    check_enumerable(chain, cap)
    result = AuditResult(chains=1)
    masks = np.concatenate(list(iter_mask_chunks(chain.n)))
    members = membership_matrix(chain.n, masks)
    recorder = _Recorder(chain, masks, result)

    reversal = time_reversal(chain)
    _scalar(result, "reversal-flow-transpose", chain, "-",
            float(np.max(np.abs(reversal.flow_matrix - chain.flow_matrix.T))), 0.0, config.IDENTITY_TOL)

    grid = list(MODIFIED_GRID if r_grid is None else r_grid)
    holding_cap = min(chain.alpha, 0.5)
    if holding_cap > 0.0:
        grid += [holding_cap, holding_cap / 2.0, holding_cap / 4.0]
    _set_checks(chain, recorder, members, grid, inject_fault)
    _threshold_checks(chain, masks, members, result)

    bfs = build_bfs_paths(chain)
    family = cayley_word_paths(group, chain).family if group is not None else bfs
    alternating = None
    if families:
        _path_checks(chain, bfs, recorder, members, result)
        alternating = _alternating_checks(chain, recorder, members, result)
        if group is not None:
            _cayley_checks(chain, group, result)
    if soundness:
        _soundness(chain, group, family, alternating, eps_values, max_steps, result)

    for v in result.violations:
        logger.error(f"Audit violation: {v}")
    logger.debug(f"Chain '{chain.name}': {result.checks} checks, {len(result.violations)} violations")
    return result


def lemma_audit(
    chain: MarkovChain,
    r_grid: Optional[Sequence[float]] = None,
    families: bool = True,
    **kwargs,
) -> List[Violation]:
    """
    Violations of every inequality and identity checked by audit_chain.

    Example:
        >>> lemma_audit(generate_cycle_walk(5, 0.5))
        []
    """
    return audit_chain(chain, r_grid=r_grid, families=families, **kwargs).violations


def audit_fleet(
    chains: Iterable[Audited],
    parallel: bool = False,
    max_workers: Optional[int] = None,
    inject_fault: bool = False,
    max_steps: int = AUDIT_MAX_STEPS,
) -> AuditResult:
    """
    Audit many chains plus the inequality grid; results keep the input order.

    Args:
        chains: Pairs (chain, group or None).
        parallel: Audit chains in a thread pool. Defaults to False.
        max_workers: Pool size. Defaults to min(32, cpu_count + 4).
        inject_fault: Passed to every chain audit.
        max_steps: Iteration cap of the empirical mixing times.

    Returns:
        AuditResult: The merged result.
    """
    if not type(parallel) == bool:
        logger.error(f"Invalid parallel type: {parallel}")
        raise ValueError("Parameter 'parallel' must be a boolean.")
    chains = list(chains)
    logger.info(f"Auditing {len(chains)} chains (parallel={parallel})")

    def run(item: Audited) -> AuditResult:
        chain, group = item
        return audit_chain(chain, group=group, inject_fault=inject_fault, max_steps=max_steps)

    if parallel:
        max_workers = max_workers or min(32, (os.cpu_count() or 1) + 4)
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            partials = list(executor.map(run, chains))
    else:
        partials = [run(item) for item in chains]

    result = AuditResult()
    result.violations.extend(inequality_lemma_grid())
    result.checks += 101 * 101
    for partial in partials:
        result.merge(partial)
    logger.info(
        f"Audit finished: {result.chains} chains, {result.checks} checks, "
        f"{len(result.violations)} violations, {len(result.observations)} observations"
    )
    return result
