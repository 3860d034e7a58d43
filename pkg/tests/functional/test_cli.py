from unittest.mock import patch

import pytest
from fbpyutils_mixing.cli import EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_VIOLATIONS, main


@pytest.fixture
def cycle_file(tmp_path):
    path = tmp_path / "cycle5.chain"
    assert main(["gen", "cycle", "5", "0.5", "--out", str(path)]) == EXIT_OK
    return path


def test_gen_prints_chain_file(capsys):
    assert main(["gen", "complete", "2"]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith("# complete(n=2)\nstates 2\n")
    assert "edge 0 1 0.25" in out


def test_gen_writes_file(cycle_file):
    text = cycle_file.read_text(encoding="utf-8")
    assert "states 5" in text
    assert text.count("edge ") == 10


def test_gen_cayley(capsys):
    assert main(["gen", "cayley", "z5", "--gens", "id,+1", "--probs", "0.5,0.5"]) == EXIT_OK
    assert "states 5" in capsys.readouterr().out


def test_analyze_from_file(cycle_file, capsys):
    assert main(["analyze", "--chain", str(cycle_file), "--r", "0.25", "--r", "0.5"]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith("chain=cycle5 alpha=0.5 x=0 eps=0.5 tau=")
    assert "Phi_r(r=0.25)" in out
    assert "psi" in out


def test_analyze_tsv(capsys):
    assert main(["analyze", "--generate", "cycle 3 0.5", "--tsv"]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith("# chain=")
    assert "state\tpi" in out


def test_bounds_with_derived_alternating_paths(capsys):
    argv = ["bounds", "--generate", "cycle 5 0.5", "--epsilon", "0.5", "--paths", "alt-derive"]
    assert main(argv) == EXIT_OK
    out = capsys.readouterr().out
    assert "paths-holding-1" in out
    assert "paths-noholding" in out
    assert "evolving" in out


def test_bounds_tsv_to_file(tmp_path):
    out = tmp_path / "bounds.tsv"
    assert main(["bounds", "--generate", "cycle 3 0.5", "--tsv", "--out", str(out)]) == EXIT_OK
    lines = out.read_text(encoding="utf-8").split("\n")
    assert lines[0].startswith("# chain=")
    assert lines[1] == "tag\tparams\tbound\tempirical\tslack"


def test_bounds_r_sweep_applies_to_both_theorems(mocker, capsys):
    from fbpyutils_mixing import cli

    spy = mocker.spy(cli, "build_bound_report")
    assert main(["bounds", "--generate", "cycle 4 0.5", "--r", "0.1", "--r", "0.3"]) == EXIT_OK
    kwargs = spy.call_args.kwargs
    assert kwargs["r_small"] == [0.1, 0.3]
    assert kwargs["r_noholding"] == [0.1, 0.3]
    assert "no-holding" in capsys.readouterr().out


def test_paths_cayley_family(capsys):
    argv = ["paths", "--generate", "cayley z5 id,+1 0.5,0.5", "--paths", "cayley"]
    assert main(argv) == EXIT_OK
    out = capsys.readouterr().out
    assert "rho_v" in out
    assert "rho_dot_v" in out
    assert "edge loads" in out


def test_paths_reports_alternating_failure(tmp_path, capsys):
    flip = tmp_path / "flip.chain"
    flip.write_text("states 2\nedge 0 1 1\nedge 1 0 1\n", encoding="utf-8")
    assert main(["paths", "--chain", str(flip), "--paths", "alt-auto"]) == EXIT_OK
    assert "alternating family:" in capsys.readouterr().out


def test_verify_single_chain(capsys):
    assert main(["verify", "--generate", "cycle 3 0.5"]) == EXIT_OK
    assert "chains=1" in capsys.readouterr().out


def test_verify_small_fleet(capsys):
    assert main(["verify", "--seed", "3", "--count", "5", "--max-n", "4", "--parallel"]) == EXIT_OK
    assert "violations=0" in capsys.readouterr().out


def test_verify_injected_fault(capsys):
    assert main(["verify", "--generate", "cycle 3 0.5", "--inject-fault"]) == EXIT_VIOLATIONS
    out = capsys.readouterr().out
    assert "violations" in out
    assert "root-profile-nonnegative" in out


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["explode"],
        ["gen", "cycle", "x", "0.5"],
        ["gen", "cycle", "2", "0.5"],
        ["gen", "cycle", "5"],
        ["analyze"],
        ["analyze", "--generate", "cycle 3 0.5", "--epsilon", "0"],
        ["analyze", "--generate", "cycle 3 0.5", "--chain", "x.chain"],
        ["bounds", "--generate", "cycle 3 0.5", "--paths", "cayley"],
        ["bounds", "--generate", "cycle 3 0.5", "--paths", "dfs"],
    ],
)
def test_usage_errors(argv, capsys):
    assert main(argv) == EXIT_USAGE
    assert "usage error:" in capsys.readouterr().err


def test_validation_errors(tmp_path, capsys):
    bad = tmp_path / "bad.chain"
    bad.write_text("states 2\nedge 0 1 0.5\n", encoding="utf-8")
    assert main(["analyze", "--chain", str(bad)]) == EXIT_VALIDATION
    assert "error:" in capsys.readouterr().err
    assert main(["analyze", "--chain", str(tmp_path / "missing.chain")]) == EXIT_VALIDATION
    assert main(["analyze", "--generate", "cycle 3 0.5", "--start", "7"]) == EXIT_VALIDATION


def test_verify_routes_fleet_to_audit(mocker, capsys):
    from fbpyutils_mixing.bounds.audit import AuditResult

    audit = mocker.patch("fbpyutils_mixing.cli.audit_fleet", return_value=AuditResult(checks=4, chains=20))
    assert main(["verify", "--seed", "1", "--count", "3", "--max-n", "3"]) == EXIT_OK
    chains = audit.call_args.args[0]
    assert len(chains) == 17 + 3
    assert audit.call_args.kwargs == {"parallel": False, "inject_fault": False}
    assert capsys.readouterr().out.startswith("chains=20 checks=4 violations=0")


def test_usage_error_is_logged(capsys):
    with patch("fbpyutils_mixing.cli.logger") as logger:
        assert main(["gen", "cycle", "5"]) == EXIT_USAGE
    logger.error.assert_called_once()
    assert "Wrong arguments" in logger.error.call_args.args[0]
