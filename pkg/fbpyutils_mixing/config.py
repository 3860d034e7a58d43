"""Runtime tunables and numeric tolerances.

Tunables may be overridden through environment variables, e.g.::

    export FBPYUTILS_MIXING_ENUMERATION_CAP=22
"""
import os


def _int_from_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"Environment variable {name} must be an integer, got '{raw}'.")
    if value < 1:
        raise ValueError(f"Environment variable {name} must be positive, got {value}.")
    return value


ENUMERATION_CAP = _int_from_env("FBPYUTILS_MIXING_ENUMERATION_CAP", 20)
MAX_STATES = _int_from_env("FBPYUTILS_MIXING_MAX_STATES", 256)
MAX_STEPS = _int_from_env("FBPYUTILS_MIXING_MAX_STEPS", 100_000)
CHUNK_SIZE = _int_from_env("FBPYUTILS_MIXING_CHUNK_SIZE", 65_536)

ROW_SUM_TOL = 1e-9
PI_SUM_TOL = 1e-12
STATIONARY_TOL = 1e-10
IDENTITY_TOL = 1e-12
MEASURE_TOL = 1e-12
LEMMA_TOL = 1e-10

# Probabilities are emitted with 17 significant digits so that they round-trip bit-exactly.
FLOAT_FORMAT = "{:.17g}"
