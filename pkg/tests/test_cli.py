import json

import pytest

from main import run


def _json(capsys, argv):
    code = run(argv + ["--format", "json"])
    return code, json.loads(capsys.readouterr().out)


def test_mean_check_holds_probably(capsys):
    code, record = _json(capsys, ["check", "--fn", "mean(x1,x2)", "--domain", "R^2", "--samples", "500"])
    assert code == 0
    assert record["status"] == "holds_probably"
    assert record["seed"] == 42
    assert record["containment"]["consistent"] is True


def test_successor_fails_with_witness(capsys):
    code, record = _json(capsys, ["check", "--fn", "x1+1", "--domain", "R"])
    assert code == 1
    assert record["status"] == "fails"
    assert record["witness"]["defect"] == pytest.approx(1.0, abs=1e-6)


def test_doubling_is_undefined(capsys):
    code, record = _json(capsys, ["check", "--fn", "2*x1", "--domain", "real[0,1]"])
    assert code == 2
    assert record["witness"]["escaped"] == ["real[0,1]"]
    assert record["witness"]["fx"] > 1


def test_catalog_name_and_exhaustive_domain(capsys):
    code, record = _json(capsys, ["check", "--name", "identity", "--domain", "int[-50..50]"])
    assert code == 0
    assert record["status"] == "holds"
    assert record["points_checked"] == 101


@pytest.mark.parametrize(
    "argv",
    [
        ["check", "--fn", "x1 +", "--domain", "R"],
        ["check", "--fn", "x3", "--domain", "R"],
        ["check", "--fn", "x1", "--domain", "real[2,1]"],
        ["check", "--fn", "x1"],
        ["check", "--name", "nope"],
        ["check", "--fn", "x1", "--domain", "R", "--mode", "exhaustive"],
        ["slln", "--dist", "cauchy(0,1)"],
        ["slln", "--n-max", "10", "--checkpoints", "5,20"],
        ["sweep", "--arities", "2,x"],
        ["bogus"],
    ],
)
def test_usage_errors_exit_3(capsys, argv):
    assert run(argv) == 3
    err = capsys.readouterr().err
    assert err.startswith("error:")
    assert "exit codes" in err


def test_json_output_is_byte_identical(capsys):
    argv = ["check", "--fn", "median(x1, x2, x3)", "--domain", "R^3", "--samples", "300", "--seed", "9", "--format", "json"]
    run(argv)
    first = capsys.readouterr().out
    run(argv)
    assert capsys.readouterr().out == first


def test_image_command(capsys):
    code, record = _json(capsys, ["image", "--fn", "clamp(x1, 2, 4)", "--domain", "int[0..9]"])
    assert code == 0
    assert record["image"]["values"] == [2, 3, 4]
    assert record["fix_equals_image"] is True


def test_slln_csv_to_file(tmp_path, capsys):
    out = tmp_path / "trace.csv"
    code = run(["slln", "--dist", "bernoulli(1)", "--n-max", "1000", "--checkpoints", "10,1000", "--format", "csv", "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "n,running_mean,analytic_mean,abs_error"
    assert lines[-1] == "1000,1.0,1.0,0.0"
    assert "seed=42" in capsys.readouterr().err


def test_sweep_over_arities(capsys):
    code, record = _json(capsys, ["sweep", "--arities", "2,4,8", "--samples", "200"])
    assert code == 0
    assert [r["n"] for r in record["results"]] == [2, 4, 8]
    assert {r["status"] for r in record["results"]} == {"holds_probably"}


def test_sweep_on_integers_reports_undefined(capsys):
    code = run(["sweep", "--arities", "1,2", "--domain", "int[0..5]", "--format", "csv"])
    assert code == 2
    rows = capsys.readouterr().out.splitlines()
    assert rows[0] == "n,status,points_checked,max_defect"
    assert rows[1].startswith("1,holds,") and rows[2].startswith("2,undefined,")


def test_sweep_with_distribution(capsys):
    code, record = _json(capsys, ["sweep", "--dist", "uniform(0,1)", "--arities", "2,16", "--samples", "200"])
    assert code == 0
    assert record["distribution"] == "uniform(0,1)"


def test_config_file_sets_defaults(tmp_path, capsys):
    cfg = tmp_path / "cfg.yaml"
    cfg.write_text("check:\n  seed: 5\n  sample_count: 50\n")
    code, record = _json(capsys, ["--config", str(cfg), "check", "--name", "mean_2"])
    assert code == 0
    assert record["seed"] == 5
    assert record["points_checked"] == 50
    code, record = _json(capsys, ["--config", str(cfg), "check", "--name", "mean_2", "--seed", "6"])
    assert record["seed"] == 6


def test_catalog_listing(capsys):
    code, record = _json(capsys, ["catalog"])
    assert code == 0
    names = [row["function"] for row in record["functions"]]
    assert "succ" in names and "mean_16" in names


def test_help_exits_cleanly(capsys):
    assert run(["--help"]) == 0
    assert "function grammar" in capsys.readouterr().out


def test_declared_codomain_is_reported(capsys):
    code, record = _json(capsys, ["check", "--name", "identity", "--codomain", "set{7}", "--samples", "50", "--log-level", "INFO"])
    assert code == 0
    assert record["codomain"] == "set{7}"
    assert record["containment"]["codomain_consistent"] is False


def test_flags_after_the_subcommand(tmp_path, capsys):
    cfg = tmp_path / "cfg.yaml"
    cfg.write_text("check:\n  seed: 5\n  sample_count: 50\n")
    code, record = _json(capsys, ["check", "--name", "mean_2", "--config", str(cfg), "--log-level", "DEBUG"])
    assert code == 0
    assert (record["seed"], record["points_checked"]) == (5, 50)


def test_integer_range_wider_than_int64(capsys):
    code, record = _json(capsys, ["check", "--fn", "x1", "--domain", "int[0..100000000000000000000]", "--samples", "100"])
    assert code == 0
    assert record["status"] == "holds_probably"


def test_unwritable_report_exits_4(tmp_path, capsys):
    code = run(["check", "--fn", "x1", "--domain", "R", "--samples", "10", "--out", str(tmp_path)])
    assert code == 4
    assert capsys.readouterr().err.startswith("error: check failed")


def test_slln_json_echoes_its_config(capsys):
    code, record = _json(capsys, ["slln", "--dist", "uniform(0,1)", "--n-max", "1000", "--checkpoints", "10,1000", "--seed", "3"])
    assert code == 0
    assert record["config"]["dist"] == "uniform(0,1)"
    assert record["config"]["n_max"] == 1000
    assert record["config"]["checkpoints"] == [10, 1000]
    assert record["config"]["check"]["seed"] == 3
