"""Flows module: capped ergodic flows, conductances, subset enumeration and set-size profiles.

Example:
    from fbpyutils_mixing.chain import generate_cycle_walk
    from fbpyutils_mixing.flows import r_conductance, build_profile

    chain = generate_cycle_walk(3, 0.5)
    r_conductance(chain, [0], 0.5)                        # 0.75
    build_profile(chain, "modified_conductance", r=0.25)  # StepProfile
"""
from fbpyutils_mixing.flows.subsets import (
    SubsetMask,
    all_subset_measures,
    check_enumerable,
    exchangeable_representatives,
    is_exchangeable,
    iter_mask_chunks,
    membership_matrix,
)
from fbpyutils_mixing.flows.conductance import (
    conductance_classic,
    r_conductance,
    r_ergodic_flow,
    r_flow_min,
    r_modified_conductance,
    r_modified_flow,
    set_inflow,
)
from fbpyutils_mixing.flows.profiles import QUANTITIES, StepProfile, build_profile, delta0
