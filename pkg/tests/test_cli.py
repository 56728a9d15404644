import json
import shutil
import subprocess
import sys

import pytest

from lmax.cli import main

DIST_3 = ["dist", "--p", "0.5", "--n-max", "3"]


def _run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def _csv_rows(out):
    lines = out.strip().split("\n")
    return lines[0].split(","), [line.split(",") for line in lines[1:]]


def test_dist_csv_small_table(capsys):
    code, out = _run(capsys, DIST_3)
    assert code == 0
    header, rows = _csv_rows(out)
    assert header == ["n", "pmf", "log_pmf", "cumulative"]
    assert [r[0] for r in rows] == ["1", "2", "3"]
    pmf = [float(r[1]) for r in rows]
    assert pmf == pytest.approx([0.5, 1 / 6, 1 / 12], rel=1e-14)
    assert float(rows[2][3]) == pytest.approx(0.75, rel=1e-14)


def test_dist_perturbed_first_bin(capsys):
    argv = ["dist", "--family", "perturbed", "--sign", "plus", "--K", "1", "--B", "2",
            "--n-max", "1"]
    code, out = _run(capsys, argv)
    assert code == 0
    _, rows = _csv_rows(out)
    # The drift is frozen below its admissibility point, so q_1 = 1/4.
    assert float(rows[0][1]) == 0.25


def test_dist_family_inferred_from_flags(capsys):
    code, out = _run(capsys, ["dist", "--sign", "minus", "--K", "1", "--B", "1", "--n-max", "2"])
    assert code == 0
    _, rows = _csv_rows(out)
    assert float(rows[1][1]) == pytest.approx(1 / 4 - 1 / 9, rel=1e-12)


def test_csv_and_json_carry_identical_numbers(capsys):
    _, csv_out = _run(capsys, DIST_3)
    _, json_out = _run(capsys, DIST_3 + ["--format", "json"])
    _, csv_rows = _csv_rows(csv_out)
    doc = json.loads(json_out)
    assert doc["columns"] == ["n", "pmf", "log_pmf", "cumulative"]
    for csv_row, json_row in zip(csv_rows, doc["rows"]):
        assert int(csv_row[0]) == json_row[0]
        for cell, value in zip(csv_row[1:], json_row[1:]):
            assert float(cell) == value
            assert cell == repr(float(value))


def test_bad_probability_exits_two(capsys):
    code = main(["dist", "--p", "1.5", "--n-max", "5"])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_incomplete_perturbed_exits_two(capsys):
    code, _ = _run(capsys, ["dist", "--family", "perturbed", "--sign", "plus", "--n-max", "5"])
    assert code == 2


def test_missing_walk_exits_two(capsys):
    code, _ = _run(capsys, ["classify"])
    assert code == 2


def test_no_subcommand_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_version_flag():
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0


def test_table_cap_exits_one(capsys, monkeypatch):
    monkeypatch.setenv("LMAX_MAX_TABLE", "100")
    code = main(["dist", "--p", "0.5", "--n-max", "200"])
    assert code == 1
    assert "error:" in capsys.readouterr().err


def test_classify_output(capsys):
    code, out = _run(capsys, ["classify", "--p", "0.5", "--n-max", "1000", "--format", "json"])
    assert code == 0
    doc = json.loads(out)
    assert doc["rows"] == [["null-recurrent", "criterion", "apparently divergent"]]
    assert doc["meta"]["growth_exponent"] == pytest.approx(1.0, abs=0.05)


def test_hit_output(capsys):
    code, out = _run(capsys, ["hit", "--p", "0.5", "--a", "0", "--k", "3", "--b", "9"])
    assert code == 0
    _, rows = _csv_rows(out)
    assert rows[0][:3] == ["0", "3", "9"]
    assert float(rows[0][3]) == pytest.approx(2 / 3, rel=1e-12)


def test_hit_bad_levels_exits_two(capsys):
    code, _ = _run(capsys, ["hit", "--p", "0.5", "--a", "3", "--k", "2", "--b", "9"])
    assert code == 2


def test_return_output(capsys):
    code, out = _run(capsys, ["return", "--p", str(2 / 3)])
    assert code == 0
    header, rows = _csv_rows(out)
    assert header == ["value", "lower", "upper", "n_terms", "method", "tolerance_met"]
    assert float(rows[0][0]) == pytest.approx(0.5, abs=1e-9)
    assert rows[0][5] == "true"


def test_asympt_output(capsys):
    code, out = _run(capsys, ["asympt", "--p", "0.5", "--n-hi", "1000", "--format", "json"])
    assert code == 0
    doc = json.loads(out)
    assert doc["meta"]["branch"] == "constant rho=1"
    assert doc["meta"]["drift"] < 1e-12
    assert doc["columns"] == ["n", "exact", "shape", "c_hat"]
    for row in doc["rows"]:
        assert row[3] == pytest.approx(1.0, abs=1e-12)


def test_compare_output(capsys):
    argv = ["compare", "--p", "0.5", "--excursions", "20000", "--seed", "4",
            "--cap-steps", "100000", "--cap-height", "32", "--format", "json"]
    code, out = _run(capsys, argv)
    assert code == 0
    doc = json.loads(out)
    assert doc["meta"]["n_flagged"] == 0
    assert doc["meta"]["flagged_bins"] == []
    assert doc["meta"]["chi_square_dof"] >= 1
    assert 0.0 <= doc["meta"]["chi_square_pvalue"] <= 1.0


SIM_ARGS = ["simulate", "--p", "0.5", "--excursions", "2000", "--seed", "31",
            "--cap-steps", "500", "--cap-height", "16", "--format", "json"]


def test_simulate_rerun_from_meta_is_byte_identical(capsys):
    code, first = _run(capsys, SIM_ARGS)
    assert code == 0
    meta = json.loads(first)["meta"]
    argv = [
        "simulate",
        "--p", str(meta["p"]),
        "--excursions", str(meta["excursions"]),
        "--seed", str(meta["seed"]),
        "--cap-steps", str(meta["cap_steps"]),
        "--cap-height", str(meta["cap_height"]),
        "--format", "json",
    ]
    _, again = _run(capsys, argv)
    assert again == first


def test_simulate_workers_absent_from_output(capsys):
    _, first = _run(capsys, SIM_ARGS)
    _, again = _run(capsys, SIM_ARGS[:-2] + ["--workers", "4", "--format", "json"])
    assert again == first
    assert "workers" not in json.loads(first)["meta"]


def test_simulate_auto_seed_is_reported_and_reproducible(capsys):
    argv = ["simulate", "--p", "0.5", "--excursions", "500", "--cap-steps", "200",
            "--cap-height", "8", "--format", "json"]
    _, first = _run(capsys, argv)
    meta = json.loads(first)["meta"]
    assert 0 <= meta["seed"] < 2**64
    _, again = _run(capsys, argv + ["--seed", str(meta["seed"])])
    assert json.loads(again)["rows"] == json.loads(first)["rows"]


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "lmax", "dist", "--p", "0.5", "--n-max", "2"],
        capture_output=True,
        text=True,
    )
    assert out.returncode == 0
    assert out.stdout.splitlines()[1].startswith("1,0.5,")


def test_console_script_installed():
    exe = shutil.which("lmax")
    assert exe is not None
    out = subprocess.run([exe, "--version"], capture_output=True, text=True)
    assert out.returncode == 0
    assert out.stdout.strip().startswith("lmax ")
