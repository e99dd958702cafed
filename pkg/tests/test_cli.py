import json

import pytest

from cli import create_parser, main, parse_degrees, parse_subset
from conftest import data_path
from utils import InputError


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def machine(capsys, *argv):
    code, out = run(capsys, *argv, "--format", "machine")
    assert code == 0
    return json.loads(out)


def test_gldim(capsys):
    code, out = run(capsys, "gldim", data_path("a2.alg"))
    assert code == 0
    assert "gl.dim = 1" in out


def test_domdim_of_selfinjective_algebra(capsys):
    code, out = run(capsys, "domdim", data_path("kx2.alg"), "--cutoff", "10")
    assert code == 0
    assert "dom.dim >= 10" in out


def test_options_before_subcommand(capsys):
    record = json.loads(run(capsys, "--cutoff", "5", "--format", "machine", "gldim", data_path("kx2.alg"))[1])
    assert record["cutoff"] == 5
    assert record["kind"] == "at-least"


def test_machine_output_header_and_determinism(capsys):
    first = machine(capsys, "ext", "--i", "1", data_path("a2.alg"), data_path("a2_s1.mod"), data_path("a2_s2.mod"))
    second = machine(capsys, "ext", "--i", "1", data_path("a2.alg"), data_path("a2_s1.mod"), data_path("a2_s2.mod"))
    assert first == second
    assert first["command"] == "ext"
    assert first["dim"] == 1
    assert {"prime", "cutoff", "seed"} <= set(first)
    assert first["prime"] == 101


def test_resolve(capsys):
    record = machine(capsys, "resolve", data_path("a2.alg"), data_path("a2_s1.mod"))
    assert record["term_dims"] == [2, 1]
    assert record["truncated"] is False
    record = machine(capsys, "resolve", "--direction", "inj", data_path("a2.alg"), data_path("a2_s2.mod"))
    assert record["term_dims"] == [2, 1]


def test_decompose(capsys):
    record = machine(capsys, "decompose", data_path("a3rad2.alg"), data_path("a3rad2_ct.mod"))
    assert sum(s["multiplicity"] for s in record["summands"]) == 4


def test_check_ct_modes(capsys):
    record = machine(capsys, "check-ct", "--d", "2", data_path("a3rad2.alg"), data_path("a3rad2_ct.mod"))
    assert record["verdict"] == "true"
    record = machine(capsys, "check-ct", "--d", "2", "--indecomposables", data_path("a3rad2_indec"),
                     data_path("a3rad2.alg"), data_path("a3rad2_ct_plus_s2.mod"))
    assert record["mode"] == "enumerated"
    assert record["verdict"] == "false"
    assert record["evidence"]


def test_endo_then_check_auslander(capsys, tmp_path):
    out_path = str(tmp_path / "gamma.balg")
    record = machine(capsys, "endo", data_path("a3rad2.alg"), data_path("a3rad2_ct.mod"), "--out", out_path)
    assert record["dim"] == 7
    record = machine(capsys, "check-auslander", "--d", "2", out_path)
    assert record["verdict"] == "true"
    assert record["gl_dim"] == {"kind": "exact", "value": 3}
    record = machine(capsys, "check-auslander", "--d", "1", out_path)
    assert record["verdict"] == "false"


def test_recover_ct_writes_files(capsys, tmp_path):
    record = machine(capsys, "recover-ct", "--d", "1", data_path("a3rad2.alg"), "--out-dir", str(tmp_path))
    assert record["e"] == [2, 3]
    assert record["corner_dim"] == 3
    assert (tmp_path / "corner.balg").exists()
    assert len(list(tmp_path.glob("*.mod"))) == 3
    code, out = run(capsys, "check-ct", "--d", "1", str(tmp_path / "corner.balg"), str(tmp_path / "Xp2.mod"))
    assert code == 0


def test_roundtrip(capsys):
    code, out = run(capsys, "roundtrip", "--d", "2", data_path("a3rad2.alg"), data_path("a3rad2_ct.mod"))
    assert code == 0
    assert "PASS (Γ dim 7, fingerprint match)" in out


def test_c_resolve(capsys):
    record = machine(capsys, "c-resolve", "--d", "2", data_path("a3rad2.alg"),
                     data_path("a3rad2_ct.mod"), data_path("a3rad2_s2.mod"))
    assert record["resolved"] is True
    assert record["term_dims"] == [2, 1]
    assert [len(idx) for idx in record["term_indices"]] == [1, 1]
    record = machine(capsys, "c-resolve", "--d", "2", "--direction", "left", data_path("a3rad2.alg"),
                     data_path("a3rad2_ct.mod"), data_path("a3rad2_s2.mod"))
    assert record["direction"] == "left"
    assert record["term_dims"] == [2, 1]


def test_verify_apt_and_sweep(capsys):
    record = machine(capsys, "verify-apt", "--d", "2", "--e", "1", data_path("a2.alg"), data_path("a2_s1.mod"))
    assert record["projective_condition"] is False
    assert record["ext_condition"] is False
    assert record["agree"] is True
    record = machine(capsys, "sweep-apt", "--d", "1,2", data_path("a3rad2.alg"))
    assert record["instances"] == 7 * 3 * 2
    assert record["disagreements"] == 0


def test_verify_extiso(capsys):
    record = machine(capsys, "verify-extiso", "--d", "2", "--e", "1,2", data_path("a3rad2.alg"),
                     data_path("a3rad2_s2.mod"))
    assert record["outcome"] == "hypothesis not met"


def test_fingerprint(capsys):
    record = machine(capsys, "fingerprint", data_path("semisimple2.alg"))
    assert record["cartan"] == [[1, 0], [0, 1]]


def test_input_errors(capsys, tmp_path):
    code, _ = run(capsys, "gldim", str(tmp_path / "missing.alg"))
    assert code == 1
    code, _ = run(capsys, "gldim", data_path("a2.alg"), "--prime", "8")
    assert code == 1
    code, _ = run(capsys, "verify-apt", "--d", "1", "--e", "5", data_path("a2.alg"), data_path("a2_s1.mod"))
    assert code == 1


def test_roundtrip_on_non_auslander_endo_is_reported(capsys):
    record = machine(capsys, "roundtrip", "--d", "1", data_path("a3rad2.alg"), data_path("a3rad2_ct.mod"))
    assert record["passed"] is False


def test_parse_helpers():
    assert parse_subset("2, 3", 3) == [1, 2]
    with pytest.raises(InputError):
        parse_subset("0", 3)
    with pytest.raises(InputError):
        parse_subset("a", 3)
    assert parse_degrees("1,2,3") == [1, 2, 3]
    with pytest.raises(InputError):
        parse_degrees("0")


def test_parser_accepts_every_command():
    parser = create_parser()
    args = parser.parse_args(["sweep-apt", "x.alg"])
    assert args.d == "1,2,3"
    args = parser.parse_args(["c-resolve", "--d", "2", "--direction", "left", "a.alg", "x.mod", "m.mod"])
    assert (args.module, args.target, args.direction) == ("x.mod", "m.mod", "left")


def test_config_file_sets_defaults(capsys, tmp_path):
    config = tmp_path / "run.yaml"
    config.write_text("field:\n  prime: 7\nhomology:\n  cutoff: 3\n", encoding="utf-8")
    record = machine(capsys, "gldim", "--config", str(config), data_path("kx2.alg"))
    assert record["prime"] == 7
    assert record["cutoff"] == 3
    assert record["value"] == 3
    record = machine(capsys, "gldim", "--config", str(config), "--cutoff", "4", data_path("kx2.alg"))
    assert record["cutoff"] == 4


def test_missing_config_file_is_an_input_error(capsys, tmp_path):
    code, _ = run(capsys, "gldim", "--config", str(tmp_path / "none.yaml"), data_path("a2.alg"))
    assert code == 1
