import math
from typing import Any

import numpy as np

from fbpyutils_mixing import logger


def check_ratio(r: Any, allow_zero: bool = False, name: str = "r") -> float:
    """
    Verify that a flow-capping ratio lies in (0,1], or in [0,1] when zero is allowed.

    Args:
        r: Candidate ratio.
        allow_zero: Accept r = 0. Defaults to False.
        name: Parameter name used in the error message. Defaults to 'r'.

    Returns:
        float: The ratio as a float.

    Raises:
        ValueError: If r is not a finite number in range.

    Example:
        >>> check_ratio(0.5)
        0.5
        >>> check_ratio(0.0, allow_zero=True)
        0.0
        >>> check_ratio(0.0)
        Traceback (most recent call last):
        ...
        ValueError: Parameter 'r' must lie in (0,1], got 0.0.
    """
    try:
        value = float(r)
    except (TypeError, ValueError):
        logger.error(f"Invalid {name} type provided: {r!r}")
        raise ValueError(f"Parameter '{name}' must be a number, got {r!r}.")
    low_ok = value >= 0.0 if allow_zero else value > 0.0
    if not (math.isfinite(value) and low_ok and value <= 1.0):
        interval = "[0,1]" if allow_zero else "(0,1]"
        logger.error(f"Invalid {name} value: {value}")
        raise ValueError(f"Parameter '{name}' must lie in {interval}, got {value}.")
    return value


def check_epsilon(eps: Any) -> float:
    """
    Verify that a target distance is a positive finite number.

    Args:
        eps: Candidate epsilon.

    Returns:
        float: Epsilon as a float.

    Raises:
        ValueError: If eps is not positive and finite.
    """
    try:
        value = float(eps)
    except (TypeError, ValueError):
        logger.error(f"Invalid epsilon type provided: {eps!r}")
        raise ValueError(f"Epsilon must be a number, got {eps!r}.")
    if not math.isfinite(value) or value <= 0.0:
        logger.error(f"Invalid epsilon value: {value}")
        raise ValueError(f"Epsilon must be positive, got {value}.")
    return value


def check_state(n: int, x: Any) -> int:
    """
    Verify that x indexes one of n states.

    Example:
        >>> check_state(5, 4)
        4
    """
    if isinstance(x, bool) or not isinstance(x, (int, np.integer)):
        logger.error(f"Invalid state type provided: {x!r}")
        raise ValueError(f"State must be an integer, got {x!r}.")
    if not 0 <= int(x) < n:
        logger.error(f"State {x} out of range for {n} states")
        raise ValueError(f"State {x} out of range [0, {n - 1}].")
    return int(x)


def max_row_deviation(matrix: np.ndarray) -> float:
    """
    Largest absolute deviation of a row sum from 1.

    Example:
        >>> max_row_deviation(np.array([[0.5, 0.5], [0.2, 0.7]]))
        0.10000000000000009
    """
    if matrix.size == 0:
        return 0.0
    return float(np.max(np.abs(matrix.sum(axis=1) - 1.0)))
