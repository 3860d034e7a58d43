"""Mixing-time bounds, comparison reports and the brute-force audit."""
from fbpyutils_mixing.bounds.audit import (
    AuditResult,
    Violation,
    audit_chain,
    audit_fleet,
    builtin_examples,
    inequality_lemma_grid,
    lemma_audit,
    remark_checks,
)
from fbpyutils_mixing.bounds.integrate import integrate_reciprocal
from fbpyutils_mixing.bounds.report import (
    AnalysisReport,
    BoundEntry,
    BoundReport,
    analyze_chain,
    build_bound_report,
    small_holding_grid,
)
from fbpyutils_mixing.bounds.theorems import (
    NotApplicable,
    PathHoldingBounds,
    baseline_poincare,
    bound_evolving,
    bound_no_holding,
    bound_paths_holding,
    bound_paths_noholding,
    bound_small_holding,
    cayley_holding_bound,
    cayley_noholding_bound,
    eulerian_display_bounds,
)
