from __future__ import annotations

import json

import pytest

from ad2smv.cli import main
from ad2smv.smv import normalized_text, parse_smv_subset

from conftest import fixture_dir, golden_text

CL = str(fixture_dir() / "controlledLoop.ad")
HE = str(fixture_dir() / "hireEmployeeSimplified.ad")
GAP = str(fixture_dir() / "controlledLoopGuardGap.ad")


def test_validate_ok(capsys):
    assert main(["validate", CL]) == 0
    assert "ok" in capsys.readouterr().out


def test_validate_missing_file(capsys):
    assert main(["validate", "/nonexistent/thing.ad"]) == 2


def test_validate_malformed_file(tmp_path, capsys):
    bad = tmp_path / "bad.ad"
    bad.write_text('activity x {\n  edge a -> b\n}\n', encoding="utf-8")
    assert main(["validate", str(bad)]) == 1
    err = capsys.readouterr().err
    assert ":3:1:" in err  # line:column span of the offending token


def test_validate_structural_problem(tmp_path, capsys):
    bad = tmp_path / "bad.ad"
    bad.write_text(
        'activity x { initial s ; action a "a" ; final f ; '
        "edge s -> a ; edge a -> f ; edge f -> a ; }",
        encoding="utf-8",
    )
    assert main(["validate", str(bad)]) == 1
    assert "final-degree" in capsys.readouterr().err


def test_emit_matches_golden_after_normalization(tmp_path):
    out = tmp_path / "cl.smv"
    assert main(["emit", CL, "-o", str(out), "--normalized"]) == 0
    golden = normalized_text(parse_smv_subset(golden_text("controlledLoop")))
    assert out.read_text(encoding="utf-8") == golden


def test_emit_to_stdout(capsys):
    assert main(["emit", HE]) == 0
    out = capsys.readouterr().out
    assert out.startswith("VAR")
    assert "eJn3Jn4n5_taken" in out


def test_emit_invalid_diagram(tmp_path, capsys):
    bad = tmp_path / "bad.ad"
    bad.write_text(
        'activity x { initial s ; initial t ; action a "a" ; final f ; '
        "edge s -> a ; edge t -> a ; edge a -> f ; }",
        encoding="utf-8",
    )
    assert main(["emit", str(bad)]) == 1


def test_traces_hire_employee(capsys):
    assert main(["traces", HE, "--depth", "6"]) == 0
    lines = [l for l in capsys.readouterr().out.splitlines() if l]
    assert len(lines) == 2
    assert all(l.endswith("|terminated") for l in lines)


def test_traces_controlled_loop_counts_by_input(capsys):
    assert main(["traces", CL, "--depth", "12"]) == 0
    out = capsys.readouterr().out
    trace_lines = [l for l in out.splitlines() if "|" in l]
    group_lines = [l for l in out.splitlines() if l.startswith("--")]
    assert len(trace_lines) == 4
    assert len(group_lines) == 2


def test_traces_depth_one_is_single_cut_prefix(capsys):
    assert main(["traces", CL, "--depth", "1"]) == 0
    trace_lines = [l for l in capsys.readouterr().out.splitlines() if "|" in l]
    assert trace_lines == ["receive_project|cut", "receive_project|cut"]


def test_traces_ad_semantics_agree(capsys):
    assert main(["traces", HE, "--depth", "6", "--semantics", "ad"]) == 0
    ad_out = capsys.readouterr().out
    assert main(["traces", HE, "--depth", "6", "--semantics", "fsm"]) == 0
    fsm_out = capsys.readouterr().out
    assert ad_out == fsm_out


def test_traces_structured_format(capsys):
    assert main(["traces", HE, "--depth", "6", "--format", "structured"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["depth"] == 6
    traces = payload["groups"][0]["traces"]
    assert len(traces) == 2
    assert all(t["terminated"] and t["length"] == 4 for t in traces)


def test_check_fixtures_pass(capsys):
    assert main(["check", CL, "--depth", "12"]) == 0
    assert "equal" in capsys.readouterr().out
    assert main(["check", HE, "--depth", "8"]) == 0


def test_check_structured(capsys):
    assert main(["check", HE, "--depth", "8", "--format", "structured"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["verdict"] == "equal"
    assert payload["stats"]["fsm_terminated"] == 2


def test_deadlocks_clean_fixture(capsys):
    assert main(["deadlocks", CL, "--depth", "15"]) == 0
    assert "no deadlocks" in capsys.readouterr().out


def test_deadlocks_guard_gap(capsys):
    assert main(["deadlocks", GAP, "--depth", "15"]) == 1
    out = capsys.readouterr().out
    assert "deadlock after" in out
    assert out.count("deadlock after") == 1


def test_depth_zero_rejected():
    assert main(["deadlocks", CL, "--depth", "0"]) == 2
    assert main(["traces", CL, "--depth", "0"]) == 2


def test_resource_bound_exit_code():
    assert main(["check", CL, "--depth", "12", "--max-states", "5"]) == 3


def test_usage_error():
    assert main([]) == 2
    assert main(["frobnicate"]) == 2
