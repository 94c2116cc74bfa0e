#!/usr/bin/env python3
"""
End-to-end tests for the edcert command line.
"""

import json

import pandas as pd
import pytest

from edcert.main import main


def write_instance(directory, name, variety, isogeny):
    path = directory / f"{name}.json"
    path.write_text(json.dumps({"name": name, "variety": variety, "isogeny": isogeny}), encoding="utf-8")
    return str(path)


def elliptic_square(directory):
    return write_instance(
        directory,
        "E1xE2",
        {"kind": "product", "factors": [{"label": "E1", "dim": 1}, {"label": "E2", "dim": 1}]},
        {"kind": "mult", "m": 2},
    )


def simple_threefold(directory, complete=True):
    entries = [[5 if i == j == 0 else int(i == j) for j in range(6)] for i in range(6)]
    return write_instance(
        directory,
        "simple3" if complete else "partial3",
        {"kind": "custom", "ambient_rank": 6, "subvarieties": [], "complete": complete},
        {"kind": "matrix", "entries": entries},
    )


def run_cli(capsys, *argv):
    with pytest.raises(SystemExit) as exit_info:
        main(list(argv))
    captured = capsys.readouterr()
    return exit_info.value.code, captured.out, captured.err


def test_kernel(tmp_path, capsys):
    code, out, _ = run_cli(capsys, "kernel", elliptic_square(tmp_path))
    assert code == 0
    assert "Z/2 + Z/2 + Z/2 + Z/2" in out
    assert "degree: 16" in out


def test_subvarieties(tmp_path, capsys):
    code, out, _ = run_cli(capsys, "subvarieties", "--json", elliptic_square(tmp_path))
    data = json.loads(out)
    assert code == 0
    assert [s["label"] for s in data["subvarieties"]] == ["0", "E1", "E2", "A"]
    assert data["enumeration_complete"] is True


def test_bounds_incompressible(tmp_path, capsys):
    code, out, _ = run_cli(capsys, "bounds", elliptic_square(tmp_path))
    assert code == 0
    assert out.splitlines()[0] == "lower = upper = 2 (incompressible)"


def test_bounds_exact_on_simple_threefold(tmp_path, capsys):
    code, out, _ = run_cli(capsys, "bounds", simple_threefold(tmp_path))
    assert code == 0
    assert out.startswith("exact = 1")


def test_bounds_json_round_trips(tmp_path, capsys):
    code, out, _ = run_cli(capsys, "bounds", "--json", elliptic_square(tmp_path))
    data = json.loads(out)
    assert code == 0
    assert json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n" == out
    assert data["lower"] == data["upper"] == 2
    assert data["kernel"]["invariant_factors"] == [2, 2, 2, 2]
    assert data["lower_witness"][0] == {"dim": 0, "prime": 2, "rank_p": 0, "subvariety": "0", "value": "2"}


def test_text_and_json_agree(tmp_path, capsys):
    path = simple_threefold(tmp_path)
    _, text, _ = run_cli(capsys, "bounds", path)
    _, raw, _ = run_cli(capsys, "bounds", "--json", path)
    data = json.loads(raw)
    assert f"upper: {data['upper']}" in text
    assert f"exact: {data['exact']}" in text


def test_require_lower_refuses_incomplete_instance(tmp_path, capsys):
    path = simple_threefold(tmp_path, complete=False)
    code, out, err = run_cli(capsys, "bounds", "--require-lower", path)
    assert code == 3
    assert out == ""
    assert "error:" in err

    code, out, _ = run_cli(capsys, "bounds", "--json", path)
    data = json.loads(out)
    assert code == 0
    assert data["lower"] is None
    assert data["upper"] == 1


def test_exact_refuses_non_coprime_degree(tmp_path, capsys):
    code, out, err = run_cli(capsys, "exact", elliptic_square(tmp_path))
    assert code == 3
    assert "lower = upper = 2" in out
    assert "error:" in err


def test_exact(tmp_path, capsys):
    code, out, _ = run_cli(capsys, "exact", "--json", simple_threefold(tmp_path))
    assert code == 0
    assert json.loads(out)["exact"] == 1


def test_singular_matrix_exits_two(tmp_path, capsys):
    path = write_instance(
        tmp_path, "flat", {"kind": "custom", "ambient_rank": 2, "subvarieties": [], "complete": True},
        {"kind": "matrix", "entries": [[1, 2], [2, 4]]},
    )
    code, out, err = run_cli(capsys, "bounds", path)
    assert code == 2
    assert out == ""
    assert "determinant 0" in err


def test_missing_file_exits_two(tmp_path, capsys):
    code, _, _ = run_cli(capsys, "kernel", str(tmp_path / "nowhere.json"))
    assert code == 2


def test_table_out(tmp_path, capsys):
    table = tmp_path / "witness.csv"
    code, _, _ = run_cli(capsys, "bounds", "--table-out", str(table), elliptic_square(tmp_path))
    df = pd.read_csv(table)
    assert code == 0
    assert list(df.columns) == ["subvariety", "dim", "prime", "rank_p", "value"]
    assert len(df) == 4


@pytest.mark.parametrize("argv, key, expected", [
    (["--kind", "rc", "--n", "2", "--p", "2"], "integral", 4),
    (["--kind", "symalt", "--n", "1"], "max_symmetric", 5),
    (["--kind", "symalt", "--n", "1"], "max_alternating", 7),
    (["--kind", "local", "--n", "2", "--p", "2"], "rank_cap", 3),
    (["--kind", "cy", "--n", "2", "--p", "2", "--chi", "2"], "integral", 5),
    (["--kind", "abelian", "--n", "3", "--p", "2", "--chi", "2"], "raw", "7"),
    (["--kind", "orbit", "--n", "3", "--p", "5", "--chi", "1"], "raw", "3/4"),
    (["--kind", "todd", "--n", "4", "--p", "5"], "exponent", 1),
])
def test_groupbound(capsys, argv, key, expected):
    code, out, _ = run_cli(capsys, "groupbound", "--json", *argv)
    assert code == 0
    assert json.loads(out)[key] == expected


@pytest.mark.parametrize("argv", [
    ["--kind", "cy", "--n", "3", "--p", "2", "--chi", "0"],
    ["--kind", "cy", "--n", "2", "--p", "2", "--chi", "3"],
    ["--kind", "abelian", "--n", "2", "--p", "2"],
    ["--kind", "rc", "--n", "2", "--p", "4"],
    ["--kind", "rc", "--n", "2"],
    ["--kind", "rc", "--n", "-1", "--p", "2"],
    ["--kind", "symalt", "--n", "0"],
    ["--kind", "local", "--n", "0", "--p", "2"],
    ["--kind", "todd", "--n", "-3", "--p", "3"],
    ["--kind", "abelian", "--n", "-2", "--p", "3", "--chi", "1"],
])
def test_groupbound_invalid_input(capsys, argv):
    code, _, _ = run_cli(capsys, "groupbound", *argv)
    assert code == 2


def test_verify_paper_is_deterministic(capsys):
    code, first, _ = run_cli(capsys, "verify-paper")
    _, second, _ = run_cli(capsys, "verify-paper")
    assert code == 0
    assert first == second
    assert "blown-up-quadric" in first


def test_oracle_is_deterministic(capsys):
    code, first, _ = run_cli(capsys, "oracle", "--trials", "10", "--seed", "3", "--json")
    _, second, _ = run_cli(capsys, "oracle", "--trials", "10", "--seed", "3", "--json")
    assert code == 0
    assert first == second
    assert all(suite["failures"] == 0 for suite in json.loads(first)["suites"])


def test_oracle_rejects_zero_trials(capsys):
    code, _, _ = run_cli(capsys, "oracle", "--trials", "0")
    assert code == 2


def test_log_level_does_not_change_report(tmp_path, capsys):
    path = elliptic_square(tmp_path)
    _, quiet, _ = run_cli(capsys, "bounds", path)
    _, verbose, _ = run_cli(capsys, "--log-level", "DEBUG", "bounds", path)
    run_cli(capsys, "--log-level", "WARNING", "kernel", path)
    assert quiet == verbose


def test_batch(tmp_path, capsys):
    good = elliptic_square(tmp_path)
    exact = simple_threefold(tmp_path)
    listing = tmp_path / "instances.csv"
    pd.DataFrame({"instance": [good, str(tmp_path / "missing.json"), exact]}).to_csv(listing, index=False)
    results = tmp_path / "results.csv"

    code, out, _ = run_cli(capsys, "--workers", "2", "batch", "--input", str(listing), "--output", str(results))
    df = pd.read_csv(results, dtype=str, keep_default_na=False)
    assert code == 0
    assert "3 instances (1 failed)" in out
    assert df["instance"].tolist() == [good, str(tmp_path / "missing.json"), exact]
    assert df["status"].tolist()[0] == "ok"
    assert df["status"].tolist()[1].startswith("error:")
    assert df.loc[2, "exact"] == "1"
    assert df.loc[0, "lower"] == "2"


def test_batch_requires_instance_column(tmp_path, capsys):
    listing = tmp_path / "bad.csv"
    listing.write_text("path\nx.json\n", encoding="utf-8")
    code, _, _ = run_cli(capsys, "batch", "--input", str(listing), "--output", str(tmp_path / "out.csv"))
    assert code == 2


def test_non_utf8_instance_exits_two(tmp_path, capsys):
    path = tmp_path / "binary.json"
    path.write_bytes(b"\xff\xfe\x00")
    code, out, err = run_cli(capsys, "kernel", str(path))
    assert code == 2
    assert out == ""
    assert "UTF-8" in err


def test_batch_keeps_going_past_undecodable_file(tmp_path, capsys):
    binary = tmp_path / "binary.json"
    binary.write_bytes(b"\xff")
    good = elliptic_square(tmp_path)
    listing = tmp_path / "instances.csv"
    pd.DataFrame({"instance": [str(binary), good]}).to_csv(listing, index=False)
    results = tmp_path / "results.csv"

    code, out, _ = run_cli(capsys, "batch", "--input", str(listing), "--output", str(results))
    df = pd.read_csv(results, dtype=str, keep_default_na=False)
    assert code == 0
    assert "2 instances (1 failed)" in out
    assert df["status"].tolist()[0].startswith("error:")
    assert df["status"].tolist()[1] == "ok"


def test_batch_row_crash_is_contained(tmp_path, capsys, monkeypatch):
    def explode(path):
        raise RuntimeError("boom")

    monkeypatch.setattr("edcert.services.batch_service.load_instance", explode)
    listing = tmp_path / "instances.csv"
    pd.DataFrame({"instance": [elliptic_square(tmp_path)]}).to_csv(listing, index=False)
    results = tmp_path / "results.csv"

    code, _, _ = run_cli(capsys, "batch", "--input", str(listing), "--output", str(results))
    df = pd.read_csv(results, dtype=str, keep_default_na=False)
    assert code == 0
    assert df["status"].tolist() == ["error: internal RuntimeError: boom"]
