"""Utility helpers shared across the package: parameter validators.

Example:
    from fbpyutils_mixing.utils.validators import check_ratio

    check_ratio(0.25)  # returns 0.25
    check_ratio(1.5)   # raises ValueError
"""
