"""Mixing-time bounds from flow profiles, evolving sets and canonical paths.

Profile theorems integrate a step profile exactly; path theorems are closed forms in the
congestion statistics. Ceilings are applied once, on the final value, and an infinite integral
stays infinite. A theorem whose precondition fails returns ``NotApplicable`` instead of raising.

Example:
    from fbpyutils_mixing.chain import generate_cycle_walk
    from fbpyutils_mixing.bounds.theorems import bound_small_holding, bound_evolving

    chain = generate_cycle_walk(5, 0.5)
    bound_small_holding(chain, 0, 0.5, 0.25)
    bound_evolving(chain, 0, 0.5)
"""
import math
from dataclasses import dataclass
from typing import Dict, Optional, Union

from fbpyutils_mixing import logger
from fbpyutils_mixing.chain.core import MarkovChain
from fbpyutils_mixing.chain.groups import GroupPresentation
from fbpyutils_mixing.bounds.integrate import integrate_reciprocal
from fbpyutils_mixing.flows.profiles import StepProfile, build_profile, delta0
from fbpyutils_mixing.paths.alternating import AlternatingPathFamily, alt_vertex_congestion
from fbpyutils_mixing.paths.congestion import boundary_prob, edge_congestion, vertex_congestion
from fbpyutils_mixing.paths.family import PathFamily, remove_cycles
from fbpyutils_mixing.utils.validators import check_epsilon, check_ratio, check_state


@dataclass(frozen=True)
class NotApplicable:
    """A theorem whose precondition does not hold for the chain."""

    reason: str

    def __str__(self) -> str:
        return f"not applicable: {self.reason}"


Bound = Union[int, float, NotApplicable]


@dataclass(frozen=True)
class PathHoldingBounds:
    """
    Both closed forms of the canonical-path theorem for chains with holding.

    Attributes:
        bound1: 4 rho_v max{rho_v/alpha, rho_e} log(1/(eps sqrt(pi(x)))), as a real number.
        bound2: (rho_v^2 - 1)/min{alpha, P0} + 4 rho_v max{...} log(1/(eps sqrt(pi0 rho_v))),
            or NotApplicable when eps > sqrt(2).
        params: rho_v, rho_e, P0, pi0 and alpha used in the formulas.
    """

    bound1: Bound
    bound2: Bound
    params: Dict[str, float]


def ceiling(value: float) -> Union[int, float]:
    """Ceiling that keeps infinity; negative closed forms are clamped to 0."""
    if math.isinf(value):
        return math.inf
    return max(0, math.ceil(value))


def _check_query(chain: MarkovChain, x: int, eps: float):
    return check_state(chain.n, x), check_epsilon(eps)


def _profile(chain: MarkovChain, quantity: str, r: Optional[float], profile: Optional[StepProfile]):
    if profile is None:
        return build_profile(chain, quantity, r=r)
    if profile.quantity != quantity:
        logger.error(f"Profile {profile.label} passed where {quantity} is needed")
        raise ValueError(f"Expected a '{quantity}' profile, got '{profile.quantity}'.")
    return profile


def bound_small_holding(
    chain: MarkovChain, x: int, eps: float, r: float, profile: Optional[StepProfile] = None
) -> Bound:
    """
    Bound from the r-conductance profile, valid for r <= alpha.

    tau_x(eps) <= ceil( integral over [4 pi(x), 4/eps^2] of 4 min{r, 1-r} ds / (s Phi_r(s)^2) ).

    Args:
        chain: The chain.
        x: Start state.
        eps: Target chi-square distance.
        r: Cap ratio in (0,1].
        profile: Precomputed 'r_conductance' profile at this r.

    Returns:
        Bound: The ceiling, math.inf when the profile vanishes, or NotApplicable when r > alpha.

    Raises:
        ValueError: r outside (0,1], eps <= 0 or x out of range.

    Example:
        >>> flip = MarkovChain.from_matrix([[0.0, 1.0], [1.0, 0.0]])
        >>> bound_small_holding(flip, 0, 0.5, 0.5)
        NotApplicable(reason='r=0.5 exceeds the holding probability alpha=0.0')
    """
    x, eps = _check_query(chain, x, eps)
    r = check_ratio(r)
    if r > chain.alpha:
        return NotApplicable(f"r={r} exceeds the holding probability alpha={chain.alpha}")
    profile = _profile(chain, "r_conductance", r, profile)
    integral = integrate_reciprocal(profile, "square", 4.0 * chain.pi[x], 4.0 / eps**2)
    value = ceiling(4.0 * min(r, 1.0 - r) * integral)
    logger.debug(f"Small-holding bound for '{chain.name}' x={x} eps={eps} r={r}: {value}")
    return value


def bound_no_holding(
    chain: MarkovChain, x: int, eps: float, r: float, profile: Optional[StepProfile] = None
) -> Bound:
    """
    Bound from the modified r-conductance profile, valid for every r in (0,1].

    tau_x(eps) <= ceil( integral over [4 pi(x), 4/eps^2] of 12 r ds / (s min{phi^2, r phi}) ).

    Example:
        >>> flip = MarkovChain.from_matrix([[0.0, 1.0], [1.0, 0.0]])
        >>> bound_no_holding(flip, 0, 0.5, 0.5)
        inf
    """
    x, eps = _check_query(chain, x, eps)
    r = check_ratio(r)
    profile = _profile(chain, "modified_conductance", r, profile)
    integral = integrate_reciprocal(
        profile, "min_square_linear", 4.0 * chain.pi[x], 4.0 / eps**2, r=r
    )
    value = ceiling(12.0 * r * integral)
    logger.debug(f"No-holding bound for '{chain.name}' x={x} eps={eps} r={r}: {value}")
    return value


def bound_evolving(
    chain: MarkovChain,
    x: int,
    eps: float,
    use_sharper: bool = False,
    profile: Optional[StepProfile] = None,
) -> Bound:
    """
    Evolving-set bound over the root profile.

    The general form is ceil( integral over [4 pi(x), 4/eps^2] of ds/(s psi(s)) ). The sharper
    form, ceil( integral over [pi(x), 1/eps^2] of ds/(2 s psi(s)) ), assumes s psi(1/(1+s^2))
    is convex; that is not checked, so it is only used on request.

    Example:
        >>> flip = MarkovChain.from_matrix([[0.0, 1.0], [1.0, 0.0]])
        >>> bound_evolving(flip, 0, 0.5)
        inf
    """
    x, eps = _check_query(chain, x, eps)
    if not type(use_sharper) == bool:
        logger.error(f"Invalid use_sharper type: {use_sharper}")
        raise ValueError("Parameter 'use_sharper' must be a boolean.")
    profile = _profile(chain, "root", None, profile)
    if use_sharper:
        value = ceiling(0.5 * integrate_reciprocal(profile, "identity", chain.pi[x], 1.0 / eps**2))
    else:
        value = ceiling(integrate_reciprocal(profile, "identity", 4.0 * chain.pi[x], 4.0 / eps**2))
    logger.debug(f"Evolving-set bound for '{chain.name}' x={x} eps={eps} sharper={use_sharper}: {value}")
    return value


def bound_paths_holding(chain: MarkovChain, x: int, eps: float, family: PathFamily) -> PathHoldingBounds:
    """
    Canonical-path bounds for chains with holding probability alpha > 0.

    Cycles are excised from the family first. Both values are real; callers take the ceiling
    when comparing with a mixing time.

    Example:
        >>> from fbpyutils_mixing.paths import build_bfs_paths
        >>> chain = generate_cycle_walk(5, 0.5)
        >>> round(bound_paths_holding(chain, 0, 0.5, build_bfs_paths(chain)).bound1, 6)
        47.931716
    """
    x, eps = _check_query(chain, x, eps)
    alpha = chain.alpha
    if alpha <= 0.0:
        reason = NotApplicable(f"chain '{chain.name}' has no holding probability (alpha=0)")
        return PathHoldingBounds(bound1=reason, bound2=reason, params={"alpha": alpha})

    family = remove_cycles(family)
    rho_v = vertex_congestion(chain, family)
    rho_e = edge_congestion(chain, family)
    p0 = boundary_prob(chain, family)
    pi0 = chain.pi_min
    params = {"alpha": alpha, "rho_v": rho_v, "rho_e": rho_e, "P0": p0, "pi0": pi0}
    rate = 4.0 * rho_v * max(rho_v / alpha, rho_e)

    bound1 = rate * math.log(1.0 / (eps * math.sqrt(chain.pi[x])))
    if eps > math.sqrt(2.0):
        logger.warning(f"eps={eps} exceeds sqrt(2): second path bound is not valid")
        bound2 = NotApplicable(f"eps={eps} exceeds sqrt(2)")
    else:
        bound2 = (rho_v**2 - 1.0) / min(alpha, p0) + rate * math.log(
            1.0 / (eps * math.sqrt(pi0 * rho_v))
        )
    logger.debug(f"Path bounds for '{chain.name}' x={x} eps={eps}: {bound1}, {bound2} ({params})")
    return PathHoldingBounds(bound1=bound1, bound2=bound2, params=params)


def bound_paths_noholding(
    chain: MarkovChain,
    x: int,
    eps: float,
    family: AlternatingPathFamily,
    delta: Optional[float] = None,
) -> Bound:
    """
    Alternating-path bound, ceil( 40 rho_dot^2 / P0* log(1/(eps sqrt(delta0 rho_dot))) ).

    Args:
        chain: The chain.
        x: Start state (the bound does not depend on it).
        eps: Target distance, at most 1.
        family: A valid odd alternating family.
        delta: Precomputed delta0. Computed by subset enumeration when omitted.

    Raises:
        ValueError: eps > 1.
    """
    x, eps = _check_query(chain, x, eps)
    if eps > 1.0:
        logger.error(f"Alternating path bound requested with eps={eps}")
        raise ValueError(f"The alternating path bound needs eps <= 1, got {eps}.")
    rho_dot, p0_star = alt_vertex_congestion(chain, family)
    delta = delta0(chain) if delta is None else delta
    value = ceiling(40.0 * rho_dot**2 / p0_star * math.log(1.0 / (eps * math.sqrt(delta * rho_dot))))
    logger.debug(
        f"Alternating path bound for '{chain.name}' eps={eps}: {value} "
        f"(rho_dot={rho_dot}, P0*={p0_star}, delta0={delta})"
    )
    return value


def baseline_poincare(
    equation: int,
    rho_e: float,
    ell: float,
    eps: float,
    pi_x: float,
    alpha: Optional[float] = None,
) -> float:
    """
    Earlier canonical-path bounds, as plain arithmetic.

    - equation 1: (rho_e / 2 alpha) min{4 rho_e, ell} log(1/(eps sqrt(pi_x)))
    - equation 2: 2 rho_e ell log(...), for families of odd paths that include loops
    - equation 3: 2 rho_e min{rho_e, ell} log(...), with rho_e taken for the PP* chain

    Returns:
        float: The value; math.inf for equation 1 with alpha = 0.

    Example:
        >>> round(baseline_poincare(2, 4.0, 5, 0.5, 0.2), 6)
        59.914645
    """
    eps = check_epsilon(eps)
    log_term = math.log(1.0 / (eps * math.sqrt(pi_x)))
    if equation == 1:
        if alpha is None:
            raise ValueError("Equation 1 needs the holding probability alpha.")
        if alpha <= 0.0:
            return math.inf
        return rho_e / (2.0 * alpha) * min(4.0 * rho_e, ell) * log_term
    if equation == 2:
        return 2.0 * rho_e * ell * log_term
    if equation == 3:
        return 2.0 * rho_e * min(rho_e, ell) * log_term
    logger.error(f"Unknown baseline equation: {equation}")
    raise ValueError(f"Baseline equation must be 1, 2 or 3, got {equation}.")


def _min_generator_prob(group: GroupPresentation) -> float:
    return float(min(p for p in group.gen_probs if p > 0.0))


def cayley_holding_bound(group: GroupPresentation, eps: float, diameter: Optional[int] = None) -> int:
    """
    Word-length bound for a Cayley walk with holding,
    ceil( (4 Delta^2 / min p) (1/2 log(2|G|/Delta) + log 1/eps) ).

    Example:
        >>> from fbpyutils_mixing.chain import cyclic_group
        >>> cayley_holding_bound(cyclic_group(5, ["id", "+1"], [0.5, 0.5]), 0.5)
        148
    """
    eps = check_epsilon(eps)
    if diameter is None:
        from fbpyutils_mixing.paths.cayley import shortest_words

        diameter = max(len(w) for w in shortest_words(group).values())
    p_min = _min_generator_prob(group)
    value = 4.0 * diameter**2 / p_min * (0.5 * math.log(2.0 * group.order / diameter) + math.log(1.0 / eps))
    return ceiling(value)


def cayley_noholding_bound(group: GroupPresentation, eps: float, diameter: Optional[int] = None) -> int:
    """
    Alternating word-length bound,
    ceil( (10 (1 + Delta*)^2 / min p) (1/2 log(2|G|/(1 + Delta*)) + log 1/eps) ).

    Raises:
        PathFamilyError: Some element has no odd alternating word.
    """
    eps = check_epsilon(eps)
    if diameter is None:
        from fbpyutils_mixing.paths.cayley import cayley_alternating_diameter

        diameter = cayley_alternating_diameter(group)
    p_min = _min_generator_prob(group)
    spread = 1.0 + diameter
    value = 10.0 * spread**2 / p_min * (0.5 * math.log(2.0 * group.order / spread) + math.log(1.0 / eps))
    return ceiling(value)


def eulerian_display_bounds(n: int, d: int, eps: float) -> Dict[str, int]:
    """
    Displayed bounds for walks on d-regular Eulerian multigraphs on n vertices.

    Returns:
        Dict[str, int]: 'holding' = ceil(d n^2 log 1/eps), 'no_holding' = ceil(40 d n^2 log 1/eps)
        and 'envelope' = ceil(2 d n^2 log(sqrt(n)/eps)), the form that keeps the start-state term.

    Example:
        >>> eulerian_display_bounds(3, 2, 0.5)
        {'holding': 13, 'no_holding': 500, 'envelope': 45}
    """
    eps = check_epsilon(eps)
    scale = d * n * n
    return {
        "holding": ceiling(scale * math.log(1.0 / eps)),
        "no_holding": ceiling(40.0 * scale * math.log(1.0 / eps)),
        "envelope": ceiling(2.0 * scale * math.log(math.sqrt(n) / eps)),
    }
