import json
import subprocess
import sys

import pytest

from nccapelli.cli import EXIT_FAIL, EXIT_PASS, EXIT_USAGE, default_tasks, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_capelli(capsys):
    code, out, _ = run(capsys, "verify", "capelli", "--n", "2")
    assert code == EXIT_PASS
    assert "pass" in out


def test_path_count(capsys):
    code, out, _ = run(capsys, "paths", "--len", "3", "--count")
    assert code == EXIT_PASS and out.strip() == "5"


def test_path_table(capsys):
    code, out, _ = run(capsys, "paths", "--len", "4", "--table")
    assert code == EXIT_PASS
    assert out.strip().splitlines()[-1] == "total weight: 24"
    code, out, _ = run(capsys, "paths", "--len", "3", "--table", "--format", "json")
    assert [row["weight"] for row in json.loads(out)["paths"]] == [2, 1, 1, 1, 1]


def test_grassmann_json(capsys):
    code, out, _ = run(capsys, "verify", "grassmann", "--n", "2", "--m", "3", "--s-dim", "1",
                       "--format", "json", "--no-timestamp")
    report = json.loads(out)
    assert code == EXIT_PASS
    assert set(report) == {"version", "timestamp", "config", "results", "overall"}
    assert report["timestamp"] is None and report["overall"] == "pass"
    assert {r["status"] for r in report["results"]} == {"pass"}
    assert set(report["results"][0]) == {"identity", "params", "status", "lhs_terms", "rhs_terms",
                                         "first_discrepancy", "elapsed_ms"}


def test_json_is_deterministic(capsys):
    argv = ["verify", "oscillator", "--n", "2", "--m", "3", "--s-dim", "2", "--format", "json",
            "--no-timestamp"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second


def test_timestamp_present_by_default(capsys):
    _, out, _ = run(capsys, "verify", "capelli", "--n", "1", "--format", "json")
    assert json.loads(out)["timestamp"]


def test_failure_exit_code(capsys):
    code, out, _ = run(capsys, "verify", "oscillator", "--realization", "free", "--n", "2",
                       "--format", "json", "--no-timestamp")
    assert code == EXIT_FAIL
    report = json.loads(out)
    assert report["overall"] == "fail"
    assert report["results"][0]["first_discrepancy"].startswith("precondition")


@pytest.mark.parametrize("argv", [
    ["verify", "capelli", "--n", "9"],
    ["verify", "nonsense"],
    ["verify", "oscillator", "--n", "3", "--m", "2"],
    ["paths", "--len", "3", "--count", "--table"],
    ["paths", "--len", "99"],
    ["cbh", "--f", "1,x"],
    ["suite", "--order", "0"],
    [],
])
def test_usage_errors(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == EXIT_USAGE


def test_cbh_command(capsys):
    code, out, _ = run(capsys, "cbh", "--order", "4", "--f", "0,1", "--c", "1")
    assert code == EXIT_PASS
    assert out.splitlines()[0] == "corrected exponent in x = a: 1/2 + x"


def test_substitution_kinds(capsys):
    assert run(capsys, "verify", "substitution", "--kind", "lem_faf", "--h", "2", "--m", "1")[0] == EXIT_PASS
    assert run(capsys, "verify", "substitution", "--kind", "multilin", "--n", "2", "--k", "2",
               "--s", "symbolic", "--f", "1,-1,1/2")[0] == EXIT_PASS
    assert run(capsys, "verify", "substitution", "--kind", "multilin", "--f", "0,1")[0] == EXIT_USAGE


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("format = json\nno_timestamp = true\nn = 2\n")
    code, out, _ = run(capsys, "--config", str(cfg), "verify", "capelli")
    report = json.loads(out)
    assert code == EXIT_PASS
    assert report["timestamp"] is None
    assert report["results"][0]["params"]["n"] == 2


def test_missing_config_file(capsys, tmp_path):
    assert run(capsys, "--config", str(tmp_path / "absent"), "verify", "capelli")[0] == EXIT_USAGE


def test_output_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out, _ = run(capsys, "verify", "cbh", "--order", "3", "--format", "json", "--output", str(target))
    assert code == EXIT_PASS and out == ""
    assert json.loads(target.read_text())["overall"] == "pass"


def test_suite_subset(capsys):
    code, out, _ = run(capsys, "suite", "--only", "capelli", "--only", "cbh", "--order", "3",
                       "--format", "json", "--no-timestamp")
    report = json.loads(out)
    assert code == EXIT_PASS
    assert {r["identity"] for r in report["results"]} == {"cauchy_binet", "cbh"}


def test_default_grid_covers_every_identity():
    names = {name for name, _ in default_tasks()}
    assert {"capelli", "oscillator", "grassmann", "holomorphic", "direct_grassmann", "substitution",
            "cbh", "lukasiewicz", "berezin", "oracles", "support", "coherence"} <= names


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "nccapelli", "paths", "--len", "2", "--count"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.strip() == "2"
