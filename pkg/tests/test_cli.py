import json

import numpy as np
import pytest

from latreg.cli import COMMANDS, run


def write_cfg(tmp_path, cfg, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return str(path)


def run_json(tmp_path, command, cfg, *extra):
    out = tmp_path / f"{command}.json"
    code = run([command, "--config", write_cfg(tmp_path, cfg), "--out", str(out), *extra])
    return code, (json.loads(out.read_text()) if out.exists() else None)


TENSOR = {"kind": "doubly-commuting-tensor", "n": 3, "d": 2, "seed": 7}
JORDAN = {"kind": "jordan-counterexample", "n": 2, "d": 2}


def test_check_brehmer_tensor_passes(tmp_path):
    code, rep = run_json(tmp_path, "check-brehmer", {"representation": TENSOR})
    assert code == 0 and rep["verdict"] is True
    assert rep["seed"] == 0 and rep["tolerances"]


def test_check_brehmer_jordan_fails_with_witness(tmp_path, capsys):
    code, rep = run_json(tmp_path, "check-brehmer", {"representation": JORDAN})
    assert code == 1
    assert rep["witness"] == [1, 2] and rep["lambda_min"] == -1.0
    assert "witness" in capsys.readouterr().err


def test_law_suite_zn3(tmp_path):
    code, rep = run_json(tmp_path, "law-suite", {"group": {"kind": "zn", "n": 3},
                                                 "params": {"trials": 1000}})
    assert code == 0 and rep["verdict"]


def test_demo_command_counterexample(tmp_path):
    code, rep = run_json(tmp_path, "paper-demo", {}, "--demo", "counterexample")
    assert code == 0
    assert rep["details"]["conclusion"] == "not regular"
    assert np.array_equal(np.array(rep["details"]["Z_12"]), np.diag([1, -1]))


def test_demo_command_zero_scalars(tmp_path):
    code, rep = run_json(tmp_path, "paper-demo", {"params": {"name": "brehmer-factorization-n2",
                                                             "a": 0, "b": 0}})
    assert code == 0 and rep["verdict"]


@pytest.mark.parametrize("command,cfg,expected", [
    ("check-regular", {"representation": {"kind": "diagonal-unitary", "n": 2, "d": 2}}, 0),
    ("check-regular", {"representation": JORDAN}, 1),
    ("certify", {"representation": TENSOR, "tuple": [[1, 0, 2], [0, 1, 0]]}, 0),
    ("certify", {"representation": JORDAN, "tuple": [[1, 0], [0, 1], [0, 0]]}, 1),
    ("factorize", {"representation": {"kind": "doubly-commuting-tensor", "n": 2, "d": 2}}, 0),
    ("factorize", {"representation": JORDAN}, 1),
    ("window-dilate", {"representation": TENSOR, "tuple": [[1, 1, 0], [0, 0, 1]]}, 0),
    ("window-dilate", {"representation": JORDAN, "tuple": [[0, 0], [0, 1], [1, 0], [1, 1]]}, 1),
    ("nica", {"representation": TENSOR}, 0),
    ("nica", {"representation": JORDAN}, 1),
    ("row-column", {"representation": {"kind": "column-contraction", "n": 3, "d": 3}}, 0),
    ("row-column", {"representation": JORDAN}, 1),
])
def test_exit_codes(tmp_path, command, cfg, expected):
    code, rep = run_json(tmp_path, command, cfg)
    assert code == expected
    assert rep["verdict"] is (expected == 0)
    if expected == 1:
        assert rep["witness"] is not None


def test_every_command_is_exercised():
    assert set(COMMANDS) == {"check-brehmer", "check-regular", "certify", "factorize",
                             "window-dilate", "nica", "row-column", "law-suite", "paper-demo"}


def test_inline_generators(tmp_path):
    gens = [[[[0, 0], [1, 0]], [[0, 0], [0, 0]]]] * 2
    code, rep = run_json(tmp_path, "check-brehmer", {"representation": {"n": 2, "d": 2, "gens": gens}})
    assert code == 1 and rep["witness"] == [1, 2]


@pytest.mark.parametrize("cfg,field", [
    ({"representation": {"kind": "nope"}}, "representation.kind"),
    ({"representation": {"kind": "diagonal-unitary", "n": "3"}}, "representation.n"),
    ({"representation": {"kind": "diagonal-unitary", "n": 13}}, "representation.n"),
    ({}, "representation"),
    ({"representation": TENSOR, "tol": -1}, "tol"),
    ({"representation": TENSOR, "params": []}, "params"),
])
def test_malformed_config_names_field(tmp_path, capsys, cfg, field):
    code = run(["check-brehmer", "--config", write_cfg(tmp_path, cfg)])
    assert code == 2
    assert f"'{field}'" in capsys.readouterr().err


def test_bad_tuple_field(tmp_path, capsys):
    code = run(["certify", "--config", write_cfg(tmp_path, {"representation": JORDAN,
                                                            "tuple": [[1, 0], [1]]})])
    assert code == 2 and "'tuple[1]'" in capsys.readouterr().err


def test_usage_errors(tmp_path):
    assert run(["no-such-command"]) == 2
    assert run(["check-brehmer", "--config", str(tmp_path / "missing.json")]) == 2
    (tmp_path / "bad.json").write_text("{not json")
    assert run(["check-brehmer", "--config", str(tmp_path / "bad.json")]) == 2
    assert run(["check-brehmer", "--config", write_cfg(tmp_path, {"representation": TENSOR}),
                "--tol", "0"]) == 2


def test_tol_and_seed_overrides(tmp_path):
    cfg = {"representation": {"kind": "column-contraction", "n": 2, "d": 2}}
    code, rep = run_json(tmp_path, "check-brehmer", cfg, "--seed", "5", "--tol", "1e-6")
    assert code == 0 and rep["seed"] == 5 and 1e-6 in rep["tolerances"].values()


def test_stdout_report(tmp_path, capsys):
    assert run(["nica", "--config", write_cfg(tmp_path, {"representation": TENSOR})]) == 0
    assert json.loads(capsys.readouterr().out)["check"] == "nica"


@pytest.mark.parametrize("command,cfg", [
    ("check-regular", {"representation": {"kind": "commuting-polynomial", "n": 2, "d": 2}, "seed": 3}),
    ("certify", {"representation": TENSOR, "tuple": [[2, 0, 1], [0, 1, 1], [1, 1, 0]]}),
    ("law-suite", {"group": {"kind": "pl"}, "params": {"trials": 20}}),
    ("paper-demo", {"params": {"name": "condition-star-tour"}}),
])
def test_reports_are_deterministic(tmp_path, command, cfg):
    texts = []
    for k in range(2):
        out = tmp_path / f"r{k}.json"
        run([command, "--config", write_cfg(tmp_path, cfg), "--out", str(out)])
        obj = json.loads(out.read_text())
        obj.pop("runtime_ms", None)
        texts.append(json.dumps(obj, sort_keys=True))
    assert texts[0] == texts[1]
