import io
import json
import subprocess
import sys
from contextlib import redirect_stderr, redirect_stdout

import pytest

from toricflips.cli import EXIT_INTERNAL, EXIT_OK, EXIT_PRECONDITION, _jsonable, main


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(list(argv))
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, err = run("--format", "json", *argv)
    assert code == EXIT_OK, err
    return json.loads(out)


def test_cobordism_small_flip():
    data = run_json("cobordism", "--q-neg", "2,1", "--zeros", "0", "--q-pos", "1")
    assert data["classification"]["kind"] == "NonEqualized"
    assert data["delta_plus_maximal"] == ["<e1,e2>"]
    assert data["delta_minus_maximal"] == ["<e2,e3>", "<e1,e3>"]
    assert data["projection"] == [[1, 0, 2], [0, 1, 1]]
    assert data["multiplicities"]["e1"]["index"] == 2
    assert data["sigma_tilde"]["valid"] is True
    assert data["inner_fixed_dimension"] == 0


def test_cobordism_atiyah_and_precondition():
    data = run_json("cobordism", "--q-neg", "1,1", "--q-pos", "1,1")
    assert data["classification"]["kind"] == "Atiyah"
    code, _, err = run("cobordism", "--q-neg", "1", "--q-pos", "1")
    assert code == EXIT_PRECONDITION and "1 < d1" in err
    code, out, _ = run("--format", "json", "cobordism", "--q-neg", "1", "--q-pos", "1", "--unchecked")
    assert code == EXIT_OK and "warning" in json.loads(out)["setup"]


def test_bordism():
    data = run_json("bordism", "--q-neg", "1,1", "--zeros", "1", "--q-pos", "1")
    assert data["sigma_tilde"]["valid"] and data["inner_fixed_dimension"] == 1
    assert all(data["pieces"].values())


def test_blowup_commands():
    data = run_json("blowup", "--d", "2", "--omega", "1,2")
    assert data["exceptional_fiber"]["weights"] == [1, 2]
    assert sorted(c["index"] for c in data["maximal_cones"]) == [1, 2]
    assert not data["all_charts_smooth"]
    data = run_json("blowup", "--d", "0", "--omega", "1,1", "--legacy", "--v=-2,1")
    assert data["all_charts_smooth"]
    assert [cw["weights"] for cw in data["chart_weights"]] == [[3, -2], [-3, 1]]
    assert run("blowup", "--d", "2", "--omega", "0,1")[0] == EXIT_PRECONDITION
    assert run("blowup", "--d", "0", "--omega", "1,1")[0] == EXIT_PRECONDITION
    assert run("blowup", "--d", "0", "--omega", "1,1", "--legacy", "--v=1")[0] == EXIT_PRECONDITION


def test_examples():
    q = run_json("example-quadric", "--n", "3", "--k", "2")
    assert q["verdict"]["verdict"] == "AtiyahLocal" and q["report"]["bandwidth"] == 2
    og = run_json("example-og", "--n", "3")
    assert og["verdict"]["verdict"] == "NonEqualizedLocal" and og["report"]["bandwidth"] == 4
    inner = [c for c in og["report"]["components"] if c["role"] == "inner"]
    assert inner and all(c["normal_weights_pos"] == [1, 2] and c["normal_weights_neg"] == [-1, -2] for c in inner)
    assert run("example-og", "--n", "2")[0] == EXIT_PRECONDITION
    assert run("example-quadric", "--n", "2", "--k", "3")[0] == EXIT_PRECONDITION


def test_format_after_subcommand_and_text_mode():
    a = run("--format", "json", "example-og", "--n", "3")[1]
    b = run("example-og", "--n", "3", "--format", "json")[1]
    assert a == b
    code, text, _ = run("example-quadric", "--n", "2", "--k", "2")
    assert code == EXIT_OK and "verdict" in text and not text.lstrip().startswith("{")


def test_analyze_file(tmp_path):
    f = tmp_path / "act.json"
    f.write_text(json.dumps({"variety": "quadric", "weights": [1, 1, 0, 0, -1, -1, 0],
                             "quadric": {"pairs": [[0, 4], [1, 5], [2, 6]], "squares": [3]}}))
    data = run_json("analyze", str(f), "--picard-rank-one")
    assert data["verdict"]["verdict"] == "AtiyahLocal"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"variety": "quadric", "weights": [1, 0, 0],
                               "quadric": {"pairs": [[0, 2]], "squares": [1]}}))
    assert run("analyze", str(bad))[0] == EXIT_PRECONDITION
    assert run("analyze", str(tmp_path / "missing.json"))[0] == EXIT_PRECONDITION
    assert run("--format", "json", "analyze", str(f))[0] == EXIT_OK


def test_internal_failures_map_to_exit_3(monkeypatch):
    import toricflips.cli as cli

    def boom(args):
        raise AssertionError("synthetic")

    monkeypatch.setattr(cli, "run_example_og", boom)
    assert run("example-og", "--n", "3")[0] == EXIT_INTERNAL


def test_jsonable():
    from fractions import Fraction

    assert _jsonable({"a": Fraction(1, 2), "b": 2 ** 70, "c": (1, Fraction(4, 2))}) == \
        {"a": "1/2", "b": str(2 ** 70), "c": [1, 2]}
    with pytest.raises(TypeError):
        _jsonable(object())


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "toricflips", "--format", "json", "example-og", "--n", "3"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert json.loads(res.stdout)["verdict"]["verdict"] == "NonEqualizedLocal"
    res = subprocess.run([sys.executable, "-m", "toricflips", "cobordism", "--q-neg", "1", "--q-pos", "1"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 2
