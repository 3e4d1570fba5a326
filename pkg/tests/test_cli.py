import json

import pytest

from weylmod.cli import main
from weylmod.formulas import double_point_table


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def test_dims_two_methods_match(capsys):
    code, data = run_json(capsys, "dims", "--d", "2", "--r", "2", "--n", "4", "--method", "formula,enumerate")
    assert code == 0
    assert [m["dim"] for m in data["results"]] == ["42", "42"]
    assert data["verdict"] == "match"


def test_weights_multinomial_row(capsys):
    code, out, _ = run(capsys, "weights", "--d", "1", "--r", "2", "--n", "3", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["k1,k2,formula", "3,0,1", "2,1,3", "1,2,3", "0,3,1"]


def test_d3_conjecture_confirmed(capsys):
    code, out, _ = run(capsys, "dims", "--d", "3", "--r", "2", "--n", "2", "--method", "formula,oracle")
    assert code == 0
    assert "conjecture confirmed at (r=2,n=2)" in out
    assert out.count(" 6") == 2


def test_all_methods_agree_on_general_xi(capsys):
    code, data = run_json(capsys, "weights", "--d", "2", "--r", "3", "--xi", "3,1", "--method", "enumerate,recurrence")
    assert code == 0 and data["verdict"] == "match"


def test_big_integers_are_strings(capsys):
    _, data = run_json(capsys, "dims", "--d", "2", "--r", "4", "--n", "40")
    dim = data["results"][0]["dim"]
    assert isinstance(dim, str) and int(dim) > 2**64


@pytest.mark.parametrize("argv,degree,poly", [
    (["--d", "2", "--k", "1", "--range", "1..8"], 2, "(1/2)*n^2 + (1/2)*n"),
    (["--d", "1", "--k", "2", "--range", "1..8"], 2, "(1/2)*n^2 + (-1/2)*n"),
    (["--d", "0", "--k", "2", "--range", "2..7"], 0, "1"),
])
def test_polyfit_examples(capsys, argv, degree, poly):
    code, data = run_json(capsys, "polyfit", *argv)
    assert code == 0
    assert data["degrees"] == [degree]
    assert data["polynomial"] == poly
    assert data["verdict"] == "consistent"


def test_polyfit_two_gaps(capsys):
    code, data = run_json(capsys, "polyfit", "--d", "2", "--r", "3", "--mu", "1,1", "--range", "1..6")
    assert code == 0
    assert data["degrees"] == [2, 2]


def test_polyfit_truncated(capsys):
    code, data = run_json(capsys, "polyfit", "--l", "2", "--mu", "1", "--range", "5..11")
    assert code == 0 and data["degrees"] == [1]


def test_polyfit_grid_too_small(capsys):
    code, _, err = run(capsys, "polyfit", "--d", "2", "--k", "1", "--range", "1..4")
    assert code == 2 and "grid too small" in err


def test_polyfit_nonvanishing_is_a_finding(capsys):
    code, data = run_json(capsys, "polyfit", "--d", "2", "--k", "3", "--range", "1..3")
    assert code == 1
    assert data["verdict"] == "not polynomial on this grid"


def test_parking_count_and_list(capsys):
    code, data = run_json(capsys, "parking", "--m", "1,1,1", "--method", "enumerate,formula")
    assert code == 0 and [c["count"] for c in data["results"]] == ["16", "16"]
    code, out, _ = run(capsys, "parking", "--m", "1,1", "--list")
    assert code == 0 and out.splitlines() == ["1,1", "1,2", "2,1"]


def test_parking_subsets(capsys):
    code, data = run_json(capsys, "parking", "--m", "1,1", "--r", "2", "--k", "1,1")
    assert code == 0 and data["subsets"] == "3"


def test_parking_truncated(capsys):
    _, data = run_json(capsys, "parking", "--m", "1,1,1", "--l", "1")
    assert data["results"][0]["count"] == "6"


def test_char_parking_and_oracle(capsys):
    code, data = run_json(capsys, "char", "--m", "1,1", "--sign-twist")
    assert code == 0
    assert {tuple(t["cycle_type"]): t["trace"] for t in data["traces"]} == {(2,): "-1", (1, 1): "3"}
    code, data = run_json(capsys, "char", "--d", "2", "--n", "2")
    assert code == 0
    assert {tuple(t["cycle_type"]): t["trace"] for t in data["traces"]} == {(2,): "-1", (1, 1): "3"}


def test_char_d3_reports_candidate(capsys):
    code, data = run_json(capsys, "char", "--d", "3", "--n", "2")
    assert code == 0
    assert all(row["status"] == "unverified interpretation" for row in data["trace_formula_candidate"])


def test_oracle_output(capsys):
    code, data = run_json(capsys, "oracle", "--d", "2", "--n", "3", "--r", "2")
    assert code == 0
    assert data["total"] == "16" and data["converged"]
    assert "wall_time_s" not in data
    code, data = run_json(capsys, "oracle", "--d", "2", "--n", "2", "--timing")
    assert "wall_time_s" in data


def test_oracle_direct_engine(capsys):
    _, data = run_json(capsys, "oracle", "--d", "2", "--n", "3", "--method", "direct")
    assert data["total"] == "16"


def test_oracle_singular_algebras(capsys):
    _, data = run_json(capsys, "oracle", "--algebra", "double", "--n", "3")
    assert data["total"] == str(double_point_table(3, 3)[(1, 1, 1)])
    _, data = run_json(capsys, "oracle", "--algebra", "xl", "--l", "2", "--n", "3")
    assert data["converged"]


def test_budget_errors_exit_3(capsys):
    code, _, err = run(capsys, "oracle", "--d", "3", "--n", "4")
    assert code == 3 and "--budget" in err
    code, _, _ = run(capsys, "parking", "--m", "1,1,1,1,1,1,1,1", "--budget", "100")
    assert code == 3


@pytest.mark.parametrize("argv", [
    ["dims", "--r", "2"],
    ["dims", "--d", "2", "--r", "2", "--n", "2", "--xi", "2"],
    ["dims", "--d", "2", "--r", "2", "--n", "2", "--method", "magic"],
    ["dims", "--d", "2", "--r", "2", "--xi", "1,2"],
    ["weights", "--d", "3", "--r", "2", "--n", "2", "--method", "enumerate"],
    ["dims", "--d", "2", "--r", "2", "--n", "2", "--jobs", "0"],
    ["polyfit", "--d", "2", "--r", "3", "--mu", "1", "--range", "1..6"],
    ["frobnicate"],
    ["dims", "--range", "5..1"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_output_is_reproducible_and_cache_transparent(capsys, tmp_path):
    argv = ["weights", "--d", "2", "--r", "3", "--n", "4", "--method", "formula,enumerate", "--format", "json"]
    _, plain, _ = run(capsys, *argv)
    _, first, _ = run(capsys, *argv, "--cache-dir", str(tmp_path))
    _, second, _ = run(capsys, *argv, "--cache-dir", str(tmp_path))
    assert plain == first == second
    assert list(tmp_path.glob("*.json"))


def test_corrupt_cache_recomputed(capsys, tmp_path):
    argv = ["dims", "--d", "2", "--r", "2", "--n", "5", "--format", "json", "--cache-dir", str(tmp_path)]
    _, good, _ = run(capsys, *argv)
    for path in tmp_path.glob("*.json"):
        path.write_text(path.read_text().replace('"42"', '"43"'))
    _, again, _ = run(capsys, *argv)
    assert again == good


def test_results_independent_of_jobs(capsys):
    outs = [run(capsys, "parking", "--m", "1,1,1,1,1", "--jobs", j)[1] for j in ("1", "4")]
    assert outs[0] == outs[1]


def test_verify_identity_suite(capsys):
    code, data = run_json(capsys, "verify", "--suite", "identity")
    assert code == 0 and data["passed"]
    assert data["checks"][-1]["name"] == "weyl-symmetry"


def test_version(capsys):
    code, out, _ = run(capsys, "--version")
    assert code == 0 and out.startswith("weylmod")
