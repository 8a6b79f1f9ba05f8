import json

import pytest

from gagam.cli import EXIT_DATA, EXIT_OK, EXIT_USAGE, build_parser, main
from gagam.experiment import REFERENCE_SEEDS


def banner(err):
    line = next(x for x in err.splitlines() if x.startswith("config "))
    return json.loads(line[len("config "):])


def test_default_banner(capsys, tmp_path):
    code = main(["evolve", "--data", str(tmp_path / "missing.csv"), "--seed", "3", "--out", str(tmp_path)])
    assert code == EXIT_DATA
    cfg = banner(capsys.readouterr().err)
    assert (cfg["population_size"], cfg["generations"], cfg["k_folds"]) == (80, 50, 5)
    assert cfg["crossover_prob"] == 0.3 and cfg["seed"] == 3 and cfg["test_fraction"] == 0.2


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["evolve", "--data", "x.csv"],
        ["evolve", "--data", "x.csv", "--seed", "1", "--pop", "3"],
        ["evolve", "--data", "x.csv", "--seed", "1", "--pop", "0"],
        ["evolve", "--data", "x.csv", "--seed", "1", "--test-frac", "1.5"],
        ["nonsense"],
    ],
)
def test_usage_errors(argv, capsys):
    assert main(argv) == EXIT_USAGE


def test_reproduce_default_seeds():
    args = build_parser().parse_args(["reproduce", "--data", "x.csv"])
    assert args.seeds == list(REFERENCE_SEEDS) == [42, 7, 123, 225, 729]


def test_bad_csv_is_data_error(tmp_path, capsys):
    p = tmp_path / "bad.csv"
    p.write_text("a,b,MedHouseVal\n1,2,3\n4,NA,6\n")
    assert main(["baseline", "--data", str(p), "--seed", "1", "--out", str(tmp_path)]) == EXIT_DATA
    assert "row 2, column 'b'" in capsys.readouterr().err


def test_out_env_default(monkeypatch, tmp_path, toy_csv):
    monkeypatch.setenv("GAGGAM_OUT", str(tmp_path / "envout"))
    assert main(["-q", "baseline", "--data", str(toy_csv), "--seed", "2"]) == EXIT_OK
    summary = json.loads((tmp_path / "envout" / "2" / "baseline.json").read_text())
    assert summary["cart_test_rmse"] > 0 and 0 < summary["baseline_gam_penalty"] <= 1


def test_evolve_report_inspect(tmp_path, toy_csv, capsys):
    out = str(tmp_path / "o")
    common = ["--data", str(toy_csv), "--pop", "6", "--gens", "2", "--kfolds", "3", "--out", out]
    assert main(["-q", "evolve", *common, "--seed", "1"]) == EXIT_OK
    assert main(["-q", "evolve", *common, "--seed", "2", "--trace", str(tmp_path / "t.jsonl")]) == EXIT_OK
    assert len((tmp_path / "t.jsonl").read_text().splitlines()) == 3
    capsys.readouterr()
    assert main(["report", "--out", out]) == EXIT_OK
    text = capsys.readouterr().out
    assert "| 1 |" in text and "| 2 |" in text
    assert (tmp_path / "o" / "rmse_table.csv").read_text().count("\n") == 3

    assert main(["inspect", str(tmp_path / "o" / "1" / "results.json")]) == EXIT_OK
    assert "best_by_rmse" in capsys.readouterr().out
    assert main(["inspect", str(tmp_path / "o" / "1" / "models.json")]) == EXIT_OK
    assert "baseline_gam" in capsys.readouterr().out
    rec = json.loads((tmp_path / "o" / "1" / "results.json").read_text())
    chrom = tmp_path / "c.json"
    chrom.write_text(json.dumps(rec["selection"]["knee"]["chromosome"]))
    assert main(["inspect", str(chrom)]) == EXIT_OK
    assert capsys.readouterr().out.startswith("chromosome")


def test_report_without_results(tmp_path):
    assert main(["report", "--out", str(tmp_path)]) == EXIT_DATA


def test_inspect_errors(tmp_path):
    assert main(["inspect", str(tmp_path / "none.json")]) == EXIT_DATA
    p = tmp_path / "x.json"
    p.write_text("{not json")
    assert main(["inspect", str(p)]) == EXIT_DATA
