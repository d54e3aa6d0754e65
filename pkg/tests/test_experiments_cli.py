"""The benchmark harness and its command-line front end."""

import csv
import io

import pytest

from curvequad.cli import main, write_csv, write_markdown
from curvequad.experiments import (
    ExperimentSpec,
    check_golden,
    load_golden_manifest,
    run_experiment,
)


def test_spec_validation():
    with pytest.raises(ValueError):
        ExperimentSpec("area", n_values=(8, 4))
    with pytest.raises(ValueError):
        ExperimentSpec("area", n_values=())
    with pytest.raises(ValueError):
        run_experiment(ExperimentSpec("nonsense"))


def test_area_rows_and_golden(tmp_path):
    rows = run_experiment(ExperimentSpec("area", n_values=(8, 16)))
    assert {r.pair for r in rows} == {"square", "circle", "puzzle"}
    assert all(r.metric == "area" for r in rows)
    assert all(r.ref_provenance == "exact" for r in rows)
    assert check_golden(rows) == []
    # errors are monotone in n for the smooth rows starting at n=8
    for pair in ("square", "circle"):
        errs = [r.abs_error for r in rows if r.pair == pair]
        assert errs[0] > errs[1]


def test_reruns_are_bit_reproducible():
    spec = ExperimentSpec("area", n_values=(8,))
    a = [r.computed for r in run_experiment(spec)]
    b = [r.computed for r in run_experiment(spec)]
    assert a == b


def test_puzzle_successive_differences():
    rows = run_experiment(ExperimentSpec("puzzle", n_values=(8, 16)))
    first = [r for r in rows if r.n == 8]
    second = [r for r in rows if r.n == 16]
    assert all(r.reference is None and r.abs_error is None for r in first)
    assert all(r.abs_error is not None for r in second)
    assert all(r.ref_provenance == "none" for r in rows)


def test_golden_manifest_loads():
    manifest = load_golden_manifest()
    assert ("area", "circle", "area", 32) in manifest.budgets
    assert manifest.budgets[("area", "circle", "area", 32)] == pytest.approx(8.9906e-11)
    assert ("puzzle", "u0,u1", "L2", 64) in manifest.values


def test_check_golden_reports_regressions():
    rows = run_experiment(ExperimentSpec("area", n_values=(8,)))
    manifest = load_golden_manifest()
    manifest.budgets = {("area", "square", "area", 8): 1e-30}
    failures = check_golden(rows, manifest)
    assert len(failures) == 1 and "exceeds budget" in failures[0]


def test_csv_and_markdown_writers():
    rows = run_experiment(ExperimentSpec("area", n_values=(8,)))
    buf = io.StringIO()
    write_csv(rows, buf)
    parsed = list(csv.DictReader(io.StringIO(buf.getvalue())))
    assert len(parsed) == len(rows)
    assert parsed[0]["experiment"] == "area"
    assert float(parsed[0]["computed"]) == pytest.approx(rows[0].computed)
    md = io.StringIO()
    write_markdown(rows, md)
    assert "## area" in md.getvalue()


def test_cli_runs_and_checks(tmp_path):
    out = tmp_path / "rows.csv"
    rc = main(["--experiment", "area", "--n", "8,16", "--out", str(out), "--check"])
    assert rc == 0
    text = out.read_text()
    assert text.startswith("experiment,pair,metric,n,sigma")
    assert "square" in text


def test_cli_markdown_stdout(capsys):
    rc = main(["--experiment", "area", "--n", "8", "--format", "md"])
    assert rc == 0
    assert "## area" in capsys.readouterr().out


def test_cli_custom_cell(tmp_path):
    cell = tmp_path / "square.cell"
    cell.write_text(
        "line 0 0 1 0\nline 1 0 1 1\nline 1 1 0 1\nline 0 1 0 0\n"
    )
    out = tmp_path / "rows.csv"
    rc = main([
        "--experiment", "area", "--n", "8,16",
        "--cell-file", str(cell), "--out", str(out),
    ])
    assert rc == 0
    parsed = list(csv.DictReader(open(out)))
    assert all(row["ref_provenance"] == "none" for row in parsed)
    assert parsed[-1]["abs_error"] != ""  # successive difference at n=16


def test_cli_golden_regression_exit_code(tmp_path):
    manifest = tmp_path / "golden.txt"
    manifest.write_text("E area square area 8 1e-30\n")
    rc = main([
        "--experiment", "area", "--n", "8",
        "--out", str(tmp_path / "r.csv"),
        "--check", "--golden-manifest", str(manifest),
    ])
    assert rc == 3


def test_cli_solver_failure_exit_code(tmp_path, capsys):
    rc = main([
        "--experiment", "puzzle", "--n", "8",
        "--gmres-maxit", "2",
        "--out", str(tmp_path / "r.csv"),
    ])
    assert rc == 2
    assert "solver failure" in capsys.readouterr().err


def test_cell_file_restricted_to_area(tmp_path):
    cell = tmp_path / "square.cell"
    cell.write_text("line 0 0 1 0\nline 1 0 1 1\nline 1 1 0 1\nline 0 1 0 0\n")
    with pytest.raises(ValueError):
        run_experiment(ExperimentSpec("puzzle", n_values=(8,), cell_file=str(cell)))
