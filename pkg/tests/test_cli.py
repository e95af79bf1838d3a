import json

import numpy as np
import pytest

from isorep.cli import main
from isorep.linalg import matrix_to_json


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


def test_index_reflection(capsys):
    code, report = run_cli(
        ["index", "--family", "reflection", "--a", "0.5,0.5,0.5,0.5"], capsys
    )
    assert code == 0
    assert report["results"]["index"] == {"finite": 3}
    assert report["results"]["stable"] is True
    assert report["tool"]["name"] == "isorep"


def test_equivalent_identical_configs(capsys):
    code, report = run_cli(
        ["equivalent", "--a", "0.5,0.5,0.5,0.5", "--b", "0.5,0.5,0.5,0.5"], capsys
    )
    assert code == 0
    assert report["results"]["status"] == "equivalent"


def test_equivalent_moduli_mismatch(capsys):
    code, report = run_cli(
        ["equivalent", "--a", "0.5,0.5,0.5,0.5", "--b", "0.8,0.1,0.1,0.1"], capsys
    )
    assert code == 0
    assert report["results"]["status"] == "inequivalent"


def test_irreducible_command(capsys):
    code, report = run_cli(
        ["irreducible", "--family", "reflection", "--a", "0.5,0.5,0.5,0.5",
         "--L", "8", "--guard", "3"],
        capsys,
    )
    assert code == 0
    results = report["results"]
    assert results["irreducible"] is True
    assert results["structured_commutant_dim"] == 1
    assert results["oracle_commutant_dim"] == 1


def test_build_command_reports_validation(capsys):
    code, report = run_cli(
        ["build", "--family", "reflection", "--a", "0.5,0.5,0.5,0.5",
         "--L", "8", "--guard", "3"],
        capsys,
    )
    assert code == 0
    assert report["results"]["validation"]["ok"] is True
    assert report["results"]["trunc"] == {"n": 4, "L": 8, "guard": 3}


def test_induce_command(capsys):
    code, report = run_cli(
        ["induce", "--family", "reflection",
         "--a", "0.70710678118654752,0.70710678118654752",
         "--L", "8", "--guard", "2", "--grid", "2"],
        capsys,
    )
    assert code == 0
    assert report["results"]["passed"] is True
    names = {c["check"] for c in report["results"]["checks"]}
    assert "adjoint_region_formula_2d" in names
    assert "grid_commutant_is_ampliated" in names


def test_verify_suite_exit_zero(capsys):
    code, report = run_cli(["verify-suite", "--preset", "example2"], capsys)
    assert code == 0
    assert report["results"]["passed"] is True


def test_unknown_family_is_input_error(capsys):
    code = main(["index", "--family", "bogus"])
    capsys.readouterr()
    assert code == 1


def test_missing_family_is_input_error(capsys):
    code = main(["index"])
    err = capsys.readouterr().err
    assert code == 1
    assert "family" in err


def test_malformed_config_file(tmp_path, capsys):
    cfg = tmp_path / "rep.json"
    cfg.write_text("{not json")
    code = main(["index", "--config", str(cfg)])
    capsys.readouterr()
    assert code == 1


def test_config_file_roundtrip(tmp_path, capsys):
    cfg = tmp_path / "rep.json"
    cfg.write_text(
        json.dumps(
            {
                "family": "projection",
                "unitary": matrix_to_json(np.eye(2)),
                "projections": "standard_basis",
                "n": 2,
                "L": 8,
                "guard": 2,
            }
        )
    )
    code, report = run_cli(["index", "--config", str(cfg)], capsys)
    assert code == 0
    assert report["results"]["index"] == {"finite": 2}


def test_report_written_to_file_and_csv(tmp_path, capsys):
    out = tmp_path / "report.json"
    csv_path = tmp_path / "resid.csv"
    code = main(
        ["verify-suite", "--preset", "example2", "--out", str(out), "--csv", str(csv_path)]
    )
    capsys.readouterr()
    assert code == 0
    report = json.loads(out.read_text())
    assert report["results"]["passed"] is True
    header = csv_path.read_text().splitlines()[0]
    assert header == "check,residual,tolerance,passed"


def _invalid_custom_config(tmp_path):
    from isorep.repmodel import TruncationParams, truncated_shift
    from isorep.linalg import kron

    n, L = 1, 6
    w = kron(np.eye(n), truncated_shift(L))
    cfg = tmp_path / "bad.json"
    cfg.write_text(
        json.dumps(
            {
                "family": "custom",
                "n": n,
                "L": L,
                "guard": 2,
                "W1": matrix_to_json(2.0 * w),  # not an isometry
                "W2": matrix_to_json(np.eye(n * L)),
            }
        )
    )
    return cfg


def test_build_invalid_rep_exits_two(tmp_path, capsys):
    cfg = _invalid_custom_config(tmp_path)
    code, report = run_cli(["build", "--config", str(cfg)], capsys)
    assert code == 2
    assert report["results"]["validation"]["ok"] is False


def test_induce_invalid_rep_exits_two(tmp_path, capsys):
    cfg = _invalid_custom_config(tmp_path)
    code, report = run_cli(["induce", "--config", str(cfg), "--grid", "2"], capsys)
    assert code == 2
    assert report["results"]["passed"] is False
    assert report["results"]["checks"][0]["check"] == "pair_validates"


def test_repeated_runs_identical_modulo_meta(tmp_path, capsys):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        code = main(["verify-suite", "--preset", "example2", "--seed", "3", "--out", str(p)])
        assert code == 0
    capsys.readouterr()
    reports = []
    for p in paths:
        obj = json.loads(p.read_text())
        obj.pop("meta")
        reports.append(json.dumps(obj, sort_keys=True))
    assert reports[0] == reports[1]
