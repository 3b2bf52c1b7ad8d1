import csv
import json

import pytest

from mirimanoff.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def csv_rows(text):
    lines = text.splitlines()
    assert lines[0].startswith("# ")
    return list(csv.DictReader(lines[1:]))


def test_verify_json(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "thm5", "--p", "5", "--d", "3", "--n", "1")
    doc = json.loads(out)
    assert code == 0 and doc["status"] == "pass"
    assert doc["provenance"]["p"] == [5] and doc["records"]
    assert all(r["status"] == "pass" for r in doc["records"])


def test_verify_csv(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "lemma2", "--p", "5", "--n", "2", "--format", "csv")
    rows = csv_rows(out)
    assert code == 0 and rows and {r["status"] for r in rows} == {"pass"}
    assert "seed=0" in out.splitlines()[0]


def test_lambda_table(capsys):
    code, out, _ = run(capsys, "lambda-table", "--p", "37", "--n", "1")
    rows = csv_rows(out)
    assert code == 0
    assert {"p": "37", "j": "32", "mu": "0", "lambda": "1", "fprime_nonzero": "true"} in rows
    assert all(r["mu"] == "0" for r in rows)


def test_lambda_table_theta_filter(capsys):
    code, out, _ = run(capsys, "lambda-table", "--p", "5", "--theta", "2", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and [(r["p"], r["j"], r["lambda"]) for r in doc["rows"]] == [(5, 2, 0)]


def test_trace(capsys):
    code, out, _ = run(capsys, "trace", "--p", "5")
    rows = csv_rows(out)
    assert code == 0
    assert {"p": "5", "ell": "31", "exact": "-10", "closed": "-10", "matches": "true", "square_flag": "true"} in rows


def test_fseries_and_mirimanoff(capsys):
    code, out, _ = run(capsys, "fseries", "--p", "5", "--n", "1")
    assert code == 0 and [s["j"] for s in json.loads(out)["series"]] == [0, 2]
    code, out, _ = run(capsys, "mirimanoff", "--p", "5", "--n", "1", "--a", "2", "--theta", "2")
    doc = json.loads(out)
    assert code == 0 and doc["a"] == 2 and len(doc["series"]) == 1


@pytest.mark.parametrize("argv", [
    ["verify", "--suite", "thm5", "--p", "4"],
    ["verify", "--suite", "thm5", "--p", "5", "--n", "9"],
    ["verify", "--suite", "nosuch", "--p", "5"],
    ["mirimanoff", "--p", "5"],
    [],
])
def test_config_errors_exit_2(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_console_script_entry_point():
    from importlib.metadata import entry_points
    eps = entry_points(group="console_scripts")
    assert any(ep.name == "mirimanoff" and ep.value == "mirimanoff.cli:main" for ep in eps)
