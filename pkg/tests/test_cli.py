from __future__ import annotations

import json
import shutil
import subprocess
import sys

import pytest

from azdelta.cli import exit_code, main
from azdelta.scenarios.schema import DATA


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def report(capsys, *argv):
    code, out, _ = run(capsys, "--format", "json", "--no-timestamp", *argv)
    return code, json.loads(out)


def test_verify_one_fixture(capsys):
    code, rep = report(capsys, "verify-paper", "--filter", "lemma3.8")
    assert code == 0
    assert [e["fixture"] for e in rep["fixtures"]] == ["dp2-lemma3.8"]
    s = rep["summary"]
    assert s["failed"] == 0 and s["passed"] == s["expectations"] > 0


def test_verify_filter_is_case_insensitive(capsys):
    code, rep = report(capsys, "verify-paper", "--filter", "LEMMA3.8")
    assert code == 0 and len(rep["fixtures"]) == 1


def test_verify_everything(capsys):
    code, rep = report(capsys, "verify-paper")
    s = rep["summary"]
    assert code == 0
    assert s["fixtures"] == 16 and s["validation_failures"] == 0 and s["failed"] == 0


def test_verify_filter_without_match(capsys):
    code, _, err = run(capsys, "verify-paper", "--filter", "nothing-like-this")
    assert code == 1 and "no bundled fixture" in err


def test_validate_bundled(capsys):
    code, rep = report(capsys, "validate", "dp5-2a1-resolution")
    assert code == 0
    assert rep["fixtures"][0]["validation"] and all(c["ok"] for c in rep["fixtures"][0]["validation"])


def test_sinv_on_a_copied_scenario(capsys, tmp_path):
    path = tmp_path / "section4.json"
    shutil.copy(DATA / "dp5-a1-section4.json", path)
    code, rep = report(capsys, "sinv", str(path), "--op", "s_w_point")
    assert code == 0
    (rec,) = rep["fixtures"][0]["records"]
    assert rec["result"]["f_p"] == "71/288"


def test_zariski_ad_hoc(capsys):
    code, rep = report(capsys, "zariski", "graph-a1")
    assert code == 0
    (rec,) = rep["fixtures"][0]["records"]
    assert rec["status"] == "ok" and rec["result"]["volume"] == "5"


def test_chambers(capsys):
    code, rep = report(capsys, "chambers", "dp4-lemma3.9")
    assert code == 0
    assert rep["fixtures"][0]["records"][0]["op"] == "chambers"


def test_delta_pulls_in_dependencies(capsys):
    code, rep = report(capsys, "delta", "dp5-smooth-lemma3.4")
    assert code == 0
    ids = {r["id"] for r in rep["fixtures"][0]["records"]}
    assert {"smooth", "s-x"} <= ids


def test_text_output(capsys):
    code, out, _ = run(capsys, "verify-paper", "--filter", "lemma3.9")
    assert code == 0
    assert "PASS" in out and "FAIL" not in out
    assert out.strip().splitlines()[-1].startswith("1 fixtures")


def test_json_is_deterministic(capsys):
    _, a, _ = run(capsys, "--format", "json", "--no-timestamp", "verify-paper", "--filter", "section4")
    _, b, _ = run(capsys, "--format", "json", "--no-timestamp", "verify-paper", "--filter", "section4")
    assert a == b


def test_timestamp_present_by_default(capsys):
    _, out, _ = run(capsys, "--format", "json", "verify-paper", "--filter", "graph-a2")
    assert "timestamp" in json.loads(out)


def test_flags_after_the_subcommand(capsys):
    code, out, _ = run(capsys, "verify-paper", "--filter", "graph-a2", "--format", "json", "--no-timestamp")
    assert code == 0 and "timestamp" not in json.loads(out)


def test_failed_computation_exits_2(capsys, tmp_path):
    # the ledger drops E2, and no log canonical threshold is given for it
    obj = json.loads((DATA / "dp5-smooth-lemma3.4.json").read_text())
    path = tmp_path / "s.json"
    obj["compute"] = [{"id": "nemuro", "op": "nemuro", "args": {"setup": "S"}}]
    obj["expect"] = []
    path.write_text(json.dumps(obj))
    code, rep = report(capsys, "sinv", str(path), "--op", "nemuro")
    assert code == 2
    assert rep["summary"]["computation_errors"] == 1


def test_failed_expectation_exits_1(capsys, tmp_path):
    obj = json.loads((DATA / "dp4-lemma3.9.json").read_text())
    for e in obj["expect"]:
        if e["field"] == "value" and e["compute"] == "curve":
            e["value"] = "8/9"
    path = tmp_path / "s.json"
    path.write_text(json.dumps(obj))
    code, rep = report(capsys, "sinv", str(path), "--op", "s_w_curve")
    assert code == 1 and rep["summary"]["failed"] == 1


def test_float_in_scenario_exits_1(capsys, tmp_path):
    obj = json.loads((DATA / "dp5-a1-resolution.json").read_text())
    obj["lattice"]["gram"][0][0] = 1.0
    path = tmp_path / "s.json"
    path.write_text(json.dumps(obj))
    code, rep = report(capsys, "validate", str(path))
    assert code == 1 and rep["fixtures"][0]["error"]


@pytest.mark.parametrize(
    "argv",
    [
        ["validate", "no-such-fixture"],
        ["frobnicate"],
        ["--eps", "0.1", "verify-paper"],
        ["--eps", "-1/2", "verify-paper"],
        ["sinv", "dp4-lemma3.9"],
    ],
)
def test_bad_invocations_exit_1(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 1


def test_exit_code_precedence():
    zero = dict.fromkeys(
        ["load_errors", "validation_failures", "computation_errors", "invalid_computations", "failed"], 0
    )
    assert exit_code(zero) == 0
    assert exit_code({**zero, "failed": 3}) == 1
    assert exit_code({**zero, "failed": 3, "computation_errors": 1}) == 2


def test_list(capsys):
    code, out, _ = run(capsys, "list")
    assert code == 0 and len(out.split()) == 16


def test_console_module_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "azdelta.cli", "verify-paper", "--filter", "graph-smooth"],
        capture_output=True,
        text=True,
        timeout=60,
    )
    assert proc.returncode == 0, proc.stderr
