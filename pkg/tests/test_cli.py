import json
import subprocess
import sys

import pytest

from objspec.cli import EXIT_CAPABILITY, EXIT_CHECK, EXIT_INPUT, EXIT_OK, main
from objspec.io import environment_to_json
from objspec.separations import get_fixture


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_eval_fixture_objective(capsys):
    code, out, _ = run(capsys, "eval", "--fixture", "ex_xor", "--policy", "pi_AB", "--objective", "onmr_abs")
    assert code == EXIT_OK and out.strip() == "10"


def test_eval_all_policies_json(capsys):
    code, out, _ = run(capsys, "eval", "--fixture", "ex_xor", "--objective", "rm_xor", "--format", "json")
    doc = json.loads(out)
    assert code == EXIT_OK and doc["formalism"] == "RM"
    assert abs(doc["values"]["pi_AA"]) <= 1e-12 and abs(doc["values"]["pi_AB"] - 9.0) <= 1e-9


def test_eval_files(capsys, tmp_path):
    env = get_fixture("ex_two_paths").env
    (tmp_path / "env.json").write_text(json.dumps(environment_to_json(env)))
    (tmp_path / "obj.json").write_text(json.dumps({"kind": "MR", "reward": {"*,*,*": 1.0}, "gamma": 0.5}))
    (tmp_path / "pol.json").write_text(json.dumps(get_fixture("ex_two_paths").policy("pi_u").to_mapping(env)))
    code, out, _ = run(capsys, "eval", "--env", str(tmp_path / "env.json"), "--policy", str(tmp_path / "pol.json"),
                       "--objective", str(tmp_path / "obj.json"))
    assert code == EXIT_OK and out.strip() == "2"
    code, out, _ = run(capsys, "eval", "--env", str(tmp_path / "env.json"), "--policy", str(tmp_path / "pol.json"),
                       "--objective", str(tmp_path / "obj.json"), "--gamma", "0")
    assert out.strip() == "1"


def test_eval_preorder_comparisons(capsys):
    code, out, _ = run(capsys, "eval", "--fixture", "ex_lex", "--objective", "gomorl_lex")
    assert code == EXIT_OK
    assert all(any(sym in line for sym in (" < ", " ~ ", " > ")) for line in out.strip().splitlines())


def test_check_pass_and_text(capsys):
    code, out, _ = run(capsys, "check", "ex_threshold")
    assert code == EXIT_OK and json.loads(out)["pass"] is True
    code, out, _ = run(capsys, "check", "--fixture", "ex_xor", "--format", "text")
    assert code == EXIT_OK and out.strip().endswith("ex_xor: pass")


def test_check_failure_exit_code(capsys, tmp_path, monkeypatch):
    env = environment_to_json(get_fixture("ex_xor").env)
    # Same names, but both actions now lead to sA: the XOR target no longer holds.
    for key in env["transition"]:
        env["transition"][key] = [{"to": "sA", "p": 1.0}]
    (tmp_path / "ex_xor.json").write_text(json.dumps({"environment": env}))
    monkeypatch.setenv("OBJSPEC_FIXTURE_DIR", str(tmp_path))
    code, out, _ = run(capsys, "check", "ex_xor")
    assert code == EXIT_CHECK and json.loads(out)["pass"] is False


def test_input_errors(capsys, tmp_path):
    assert run(capsys, "check", "nope")[0] == EXIT_INPUT
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "eval", "--env", str(bad), "--objective", str(bad), "--policy", str(bad))
    assert code == EXIT_INPUT and err.startswith("error:")
    assert run(capsys, "eval", "--fixture", "ex_xor", "--objective", "missing")[0] == EXIT_INPUT
    assert run(capsys, "eval", "--objective", "x")[0] == EXIT_INPUT
    assert run(capsys, "list-fixtures", "--format", "dot")[0] == EXIT_INPUT


def test_capability_errors(capsys, tmp_path):
    obj = tmp_path / "nested.json"
    obj.write_text(json.dumps({"kind": "LTL", "formula": "(always (eventually (state sA)))"}))
    code, _, err = run(capsys, "eval", "--fixture", "ex_loop", "--policy", "pi_A", "--objective", str(obj))
    assert code == EXIT_CAPABILITY and "hint:" in err
    ftr = tmp_path / "ftr.json"
    ftr.write_text(json.dumps({"kind": "FTR", "embed": {"kind": "MR", "reward": {"*,*,*": 1.0}, "gamma": 0.9}}))
    code, _, err = run(capsys, "eval", "--fixture", "ex_loop", "--policy", "pi_alpha=0.5", "--objective", str(ftr))
    assert code == EXIT_CAPABILITY and "--samples" in err


def test_monte_carlo_flag(capsys, tmp_path):
    ftr = tmp_path / "ftr.json"
    ftr.write_text(json.dumps({"kind": "FTR", "embed": {"kind": "MR", "reward": {"*,*,*": 1.0}, "gamma": 0.5}}))
    code, out, _ = run(capsys, "eval", "--fixture", "ex_loop", "--policy", "pi_alpha=0.5", "--objective", str(ftr),
                       "--samples", "2000", "--horizon", "40")
    assert code == EXIT_OK and abs(float(out) - 2.0) <= 1e-6


def test_hasse_dot_is_byte_stable(capsys):
    code, first, _ = run(capsys, "hasse")
    assert code == EXIT_OK and first.startswith("digraph expressivity {")
    assert run(capsys, "hasse")[1] == first


def test_list_fixtures(capsys):
    code, out, _ = run(capsys, "list-fixtures", "--format", "json")
    assert code == EXIT_OK and len(json.loads(out)) == 12


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "objspec.cli", "list-fixtures"], capture_output=True, text=True)
    assert proc.returncode == 0 and "ex_xor" in proc.stdout


def test_usage_error_exits_with_argparse_code():
    with pytest.raises(SystemExit) as exc:
        main(["eval", "--bogus"])
    assert exc.value.code == 2
