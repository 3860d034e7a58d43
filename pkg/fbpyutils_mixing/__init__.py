"""fbpyutils_mixing: Package providing exact desk-scale mixing-time analysis for finite Markov chains.

This package provides utilities for:
- Chain representation (stationary distribution, time-reversal, ergodic flow, chi-square distance)
- Example chain generators (cycles, complete graphs, Eulerian multigraphs, Cayley graphs)
- Flow and conductance profiles by exhaustive subset enumeration
- Evolving-set threshold sets and the root profile
- Canonical path families, alternating P/P* paths and congestion statistics
- Mixing-time bounds, baselines and lemma audits against brute-force ground truth

Example usage:
    import fbpyutils_mixing

    # Setup logger and environment
    env = fbpyutils_mixing.env
    logger = fbpyutils_mixing.logger

    # Build a chain and look at its mixing time
    from fbpyutils_mixing.chain import generate_cycle_walk, empirical_mixing_time
    chain = generate_cycle_walk(5, 0.5)
    empirical_mixing_time(chain, 0, 0.5)

    # Evaluate the theorem bounds
    from fbpyutils_mixing.bounds import build_bound_report
    report = build_bound_report(chain, x=0, eps=0.5)
"""
import os

import fbpyutils

# Setup logger and environment first
fbpyutils.setup(os.path.join(os.path.dirname(__file__), "app.json"))
env = fbpyutils.get_env()
logger = fbpyutils.get_logger()
