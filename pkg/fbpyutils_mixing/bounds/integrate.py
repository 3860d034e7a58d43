"""Exact integration of 1/(s h(g(s))) over step profiles.

On a piece (a, b] where the profile is the constant v the integrand is 1/(s h(v)), so the piece
contributes log(b/a)/h(v). The sum over pieces is exact; no quadrature is involved.

Example:
    from fbpyutils_mixing.bounds.integrate import integrate_reciprocal
    from fbpyutils_mixing.flows.profiles import StepProfile

    constant = StepProfile("root", None, [0.5], [0.25], 0.25)
    integrate_reciprocal(constant, "identity", 0.1, 1.0)    # 4 log 10
"""
import math
from typing import Callable, Dict, Optional

from fbpyutils_mixing import logger
from fbpyutils_mixing.flows.profiles import StepProfile

WEIGHTS: Dict[str, Callable[[float, Optional[float]], float]] = {
    "identity": lambda v, r: v,
    "square": lambda v, r: v * v,
    "min_square_linear": lambda v, r: min(v * v, r * v),
}


def integrate_reciprocal(
    profile: StepProfile,
    weight: str,
    lo: float,
    hi: float,
    r: Optional[float] = None,
) -> float:
    """
    Integral of ds / (s h(g(s))) over (lo, hi] for a step profile g.

    Args:
        profile: The step profile; it is constant above its last breakpoint, so hi may exceed 1.
        weight: 'identity' (h(v) = v), 'square' (v^2) or 'min_square_linear' (min(v^2, r v)).
        lo: Lower limit, > 0.
        hi: Upper limit. When hi <= lo the integral is 0.
        r: Ratio used by 'min_square_linear'.

    Returns:
        float: The integral, or math.inf when h(g) vanishes on part of the range.

    Raises:
        ValueError: lo <= 0, unknown weight, or a missing r.

    Example:
        >>> p = StepProfile("root", None, [0.5], [0.5], 0.5)
        >>> round(integrate_reciprocal(p, "identity", 0.25, 1.0), 12)
        2.772588722240
    """
    if lo <= 0.0:
        logger.error(f"Invalid lower integration limit: {lo}")
        raise ValueError(f"Lower limit must be positive, got {lo}.")
    if weight not in WEIGHTS:
        logger.error(f"Unknown weight tag: {weight}")
        raise ValueError(f"Unknown weight '{weight}'; expected one of {list(WEIGHTS)}.")
    if weight == "min_square_linear" and r is None:
        raise ValueError("Weight 'min_square_linear' needs r.")
    if hi <= lo:
        return 0.0

    h = WEIGHTS[weight]
    total = 0.0
    for a, b, value in profile.pieces(lo, hi):
        denominator = h(value, r)
        if denominator <= 0.0:
            logger.debug(f"Profile {profile.label} vanishes on ({a}, {b}]: integral is infinite")
            return math.inf
        total += math.log(b / a) / denominator
    return total
