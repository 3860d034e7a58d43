import pytest
from fbpyutils_mixing.bounds import audit
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
from fbpyutils_mixing.chain.core import MarkovChain
from fbpyutils_mixing.chain.generators import generate_cayley_walk, generate_cycle_walk
from fbpyutils_mixing.chain.groups import cyclic_group
from fbpyutils_mixing.errors import EnumerationCapError, PathFamilyError
from fbpyutils_mixing.paths.alternating import alt_vertex_congestion, derive_alternating_from_plain
from fbpyutils_mixing.paths.congestion import edge_congestion
from fbpyutils_mixing.paths.family import build_bfs_paths


def test_inequality_lemma_grid_holds():
    assert inequality_lemma_grid() == []
    assert inequality_lemma_grid(points=11) == []


def test_remark_checks_on_cycle():
    chain = generate_cycle_walk(5, 0.5)
    violations, observations = remark_checks(chain, build_bfs_paths(chain))
    assert violations == []
    assert observations == []


def test_violation_str():
    v = Violation("root-lemma", "cycle", "{0}", 0.25, 1.5, 1.0)
    assert str(v) == "[root-lemma] cycle {0} r=0.25: lhs=1.5 rhs=1.0"


def test_audit_result_merge_and_frame():
    first = AuditResult(violations=[Violation("a", "c", "{0}", None, 2.0, 1.0)], checks=3, chains=1)
    second = AuditResult(checks=2, chains=1)
    merged = first.merge(second)
    assert merged.checks == 5
    assert merged.chains == 2
    assert not merged.ok
    frame = merged.to_frame()
    assert frame.loc[0, "check"] == "a"
    assert merged.to_frame(observations=True).empty


def test_audit_chain_cycle():
    result = audit_chain(generate_cycle_walk(5, 0.5))
    assert result.ok, [str(v) for v in result.violations]
    assert result.chains == 1
    assert result.checks > 1000


def test_audit_chain_cayley_walk():
    group = cyclic_group(5, ["+1", "+2"], [0.5, 0.5])
    result = audit_chain(generate_cayley_walk(group), group=group)
    assert result.ok, [str(v) for v in result.violations]


def test_audit_chain_periodic_chain():
    flip = MarkovChain.from_matrix([[0.0, 1.0], [1.0, 0.0]], name="flip")
    result = audit_chain(flip, max_steps=200)
    assert result.ok, [str(v) for v in result.violations]


def test_audit_chain_detects_injected_fault():
    result = audit_chain(generate_cycle_walk(3, 0.5), inject_fault=True, soundness=False)
    assert not result.ok
    assert "root-profile-nonnegative" in {v.check for v in result.violations}


def test_audit_chain_enumeration_cap():
    with pytest.raises(EnumerationCapError):
        audit_chain(generate_cycle_walk(6, 0.5), cap=5)


def test_lemma_audit_without_families():
    assert lemma_audit(generate_cycle_walk(4, 0.25), families=False, soundness=False) == []


def test_builtin_examples():
    examples = builtin_examples()
    names = [chain.name for chain, _ in examples]
    assert len(examples) == 17
    assert "flip" in names and "rows-equal-pi" in names
    assert sum(1 for _, group in examples if group is not None) == 4


def test_audit_fleet_counts_grid_checks():
    chains = [(generate_cycle_walk(3, 0.5), None), (generate_cycle_walk(4, 0.25), None)]
    result = audit_fleet(chains, max_steps=500)
    assert result.ok
    assert result.chains == 2
    assert result.checks > 101 * 101


def test_audit_fleet_parallel_matches_serial():
    chains = [(generate_cycle_walk(3, 0.5), None), (generate_cycle_walk(5, 0.25), None)]
    serial = audit_fleet(chains, max_steps=500)
    parallel = audit_fleet(chains, parallel=True, max_workers=2, max_steps=500)
    assert serial.checks == parallel.checks
    assert len(serial.violations) == len(parallel.violations)


def test_audit_fleet_invalid_parallel():
    with pytest.raises(ValueError, match="must be a boolean"):
        audit_fleet([], parallel="yes")


def test_path_lemma_runs_when_congestion_ratio_rounds_above_one(mocker):
    flip = MarkovChain.from_matrix([[0.0, 1.0], [1.0, 0.0]], name="flip")
    mocker.patch(
        "fbpyutils_mixing.bounds.audit.vertex_congestion",
        side_effect=lambda chain, family: edge_congestion(chain, family) * (1.0 + 1e-14),
    )
    spy = mocker.spy(audit, "r_conductance_batch")
    result = audit_chain(flip, r_grid=(0.25,), soundness=False)
    assert result.ok, [str(v) for v in result.violations]
    assert "path-ratio-above-one" not in {v.check for v in result.observations}
    assert any(call.args[2] == 1.0 for call in spy.call_args_list)


def test_path_ratio_beyond_tolerance_is_observed(mocker):
    flip = MarkovChain.from_matrix([[0.0, 1.0], [1.0, 0.0]], name="flip")
    mocker.patch(
        "fbpyutils_mixing.bounds.audit.vertex_congestion",
        side_effect=lambda chain, family: edge_congestion(chain, family) * (1.0 + 1e-6),
    )
    result = audit_chain(flip, r_grid=(0.25,), soundness=False)
    assert "path-ratio-above-one" in {v.check for v in result.observations}


def test_alternating_lemma_checked_for_derived_family(mocker):
    chain = generate_cycle_walk(5, 0.5)
    mocker.patch(
        "fbpyutils_mixing.bounds.audit.build_alternating_paths",
        side_effect=PathFamilyError("no alternating family"),
    )
    spy = mocker.spy(audit, "r_modified_conductance_batch")
    result = audit_chain(chain, r_grid=(0.25,), soundness=False)
    assert result.ok, [str(v) for v in result.violations]
    _, p0_star = alt_vertex_congestion(chain, derive_alternating_from_plain(chain, build_bfs_paths(chain)))
    assert any(call.args[2] == pytest.approx(p0_star) for call in spy.call_args_list)


def test_alternating_lemma_violation_for_derived_family(mocker):
    mocker.patch(
        "fbpyutils_mixing.bounds.audit.build_alternating_paths",
        side_effect=PathFamilyError("no alternating family"),
    )
    mocker.patch("fbpyutils_mixing.bounds.audit.alt_vertex_congestion", return_value=(0.01, 0.5))
    result = audit_chain(generate_cycle_walk(5, 0.5), r_grid=(0.25,), soundness=False)
    assert "alternating-path-lemma" in {v.check for v in result.violations}
