"""Evolving module: threshold sets A_u and the evolving-set root profile."""
from fbpyutils_mixing.evolving.threshold import (
    ThresholdCurve,
    root_profile_batch,
    root_profile_curve,
    root_profile_set,
    threshold_curve,
    threshold_set,
)
