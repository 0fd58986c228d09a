import csv
import io
import json
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path

import jsonschema
import pytest

from slopebound import cli

ROOT = Path(__file__).resolve().parent.parent
SCHEMA = json.loads((ROOT / "schema" / "output.json").read_text())


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = cli.main(list(argv))
    return code, out.getvalue(), err.getvalue()


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_ngd():
    code, out, _ = run("ngd", "--g", "1", "--d", "1")
    assert code == 0
    assert rows(out)[0]["value"] == "24"
    assert rows(run("ngd", "--g", "2")[1])[0]["value"] == "92"


def test_ngd_published_d_variant():
    assert rows(run("ngd", "--g", "4", "--d", "1.15094")[1])[0]["value"] == "263"


def test_ngd_constant_six():
    assert rows(run("ngd", "--g", "1", "--d", "1", "--radius-constant", "6")[1])[0]["value"] == "22"


def test_table_matches_golden_file():
    code, out, _ = run("table", "--g-max", "10", "--d", "1")
    assert code == 0
    assert out == (ROOT / "tests" / "golden" / "table_2pi_d1.csv").read_text()
    assert rows(out)[-1]["N"] == "2186"


def test_table_single_row():
    table = rows(run("table", "--g-max", "1", "--d", "1")[1])
    assert [(r["g"], r["N"]) for r in table] == [("1", "24")]


def test_table_constant_six_last_row():
    table = rows(run("table", "--g-max", "10", "--d", "1", "--radius-constant", "6")[1])
    assert table[-1]["N"] == "1994"


def test_slopes():
    assert len(rows(run("slopes", "--basis", "1,0;0,1.7320508", "--g", "1")[1])) == 24
    assert len(rows(run("slopes", "--basis", "1,0;0.5,1.7320508", "--g", "1")[1])) == 24
    one = rows(run("slopes", "--basis", "1,0;0,1.7320508", "--max-length", "1.0")[1])
    assert [(r["p"], r["q"], r["length"]) for r in one] == [("1", "0", "1")]


def test_slopes_sorted_by_length():
    found = rows(run("slopes", "--basis", "1,0;0.5,sqrt3", "--g", "2")[1])
    lengths = [float(r["length"]) for r in found]
    assert lengths == sorted(lengths)


def test_slopes_degenerate_basis():
    code, _, err = run("slopes", "--basis", "1,2;2,4", "--g", "1")
    assert code == 1 and "dependent" in err


def test_bounds_commands():
    r = rows(run("bounds", "intersect", "--g1", "1", "--g2", "1", "--area", "3.35")[1])[0]
    assert float(r["value"]) <= 11.8
    r = rows(run("bounds", "length", "--g", "1", "--n", "2")[1])[0]
    assert r["exact"] == "2*pi" and r["value"].startswith("6.2831")
    r = rows(run("bounds", "count", "--g", "2", "--k", "2")[1])[0]
    assert (r["bound"], r["exceptions"]) == ("2", "92")
    r = rows(run("bounds", "slope-count", "--g", "2", "--d", "1")[1])[0]
    assert r["value"] == "93"


def test_bounds_invalid_topology():
    assert run("bounds", "length", "--g", "0", "--n", "2")[0] == 1


def test_seifert_commands():
    r = rows(run("seifert", "verify", "--fibers", "2/1,3/1,6/1", "--u", "6", "--curves", "6,-36")[1])[0]
    assert (r["eq21"], r["eq22"]) == ("pass", "pass")
    r = rows(run("seifert", "solve", "--fibers", "2/1,3/1,6/1", "--u", "6", "--n", "1")[1])[0]
    assert r["slope"] == "1,-6"
    r = rows(run("seifert", "verify", "--fibers", "2/1", "--u", "2", "--curves", "2,1")[1])[0]
    assert (r["eq22"], r["eq22_value"], r["failed"]) == ("fail", "3/2", "slope sum")


def test_seifert_two_tori():
    r = rows(run("seifert", "verify", "--u", "1", "--curves", "1,0|1,5")[1])[0]
    assert r["eq21"] == "pass;pass"


def test_seifert_parse_errors():
    assert run("seifert", "verify", "--fibers", "2-1", "--u", "2", "--curves", "2,1")[0] == 1
    assert run("seifert", "verify", "--u", "2", "--curves", "2")[0] == 1
    assert run("seifert", "verify", "--u", "2", "--curves", "0,1")[0] == 1


def test_density():
    assert rows(run("density", "--radius", "2")[1])[0]["value"] == "2/3"
    assert rows(run("density", "--radius", "1")[1])[0]["value"] == "1"


def test_density_large_radius():
    r = rows(run("density", "--radius", "1000")[1])[0]
    assert abs(float(r["decimal"]) - 0.607927) < 0.003


@pytest.mark.parametrize("argv", [
    ["ngd", "--g", "2"],
    ["table", "--g-max", "3", "--radius-constant", "6"],
    ["slopes", "--basis", "1,0;0.5,sqrt3", "--g", "1"],
    ["bounds", "length", "--g", "2", "--n", "3"],
    ["bounds", "intersect", "--g1", "1", "--g2", "2", "--area", "3.35", "--null-homologous", "one"],
    ["bounds", "count", "--g", "3", "--k", "2"],
    ["bounds", "slope-count", "--g", "1"],
    ["seifert", "verify", "--fibers", "2/1", "--u", "2", "--curves", "2,1"],
    ["seifert", "solve", "--fibers", "2/1,3/1,6/1", "--u", "6", "--n", "1"],
    ["density", "--radius", "3"],
])
def test_json_matches_schema_and_csv(argv):
    code, out, _ = run(*argv, "--emit", "json")
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    assert doc["format_version"] == 1
    code, text, _ = run(*argv)
    assert code == 0 and "\r" not in text
    assert len(rows(text)) == len(doc["records"])


def test_usage_errors_exit_1():
    assert run()[0] == 1
    assert run("ngd")[0] == 1
    assert run("ngd", "--g", "abc")[0] == 1
    assert run("ngd", "--g", "1", "--radius-constant", "7")[0] == 1
    assert run("ngd", "--g", "1", "--d", "0.5")[0] == 1
    assert run("ngd", "--g", "1", "--precision", "1")[0] == 1


def test_require_certified_exit_2():
    args = ["ngd", "--g", "2", "--radius-constant", "6", "--precision", "2", "--max-precision", "2"]
    code, out, _ = run(*args)
    assert code == 0 and rows(out)[0]["certified"] == "false"
    assert run(*args, "--require-certified")[0] == 2
    assert run("ngd", "--g", "5", "--precision", "2", "--max-precision", "4")[0] == 2
    assert run("ngd", "--g", "2", "--require-certified")[0] == 0


def test_precision_environment(monkeypatch):
    monkeypatch.setenv("SLOPEBOUND_PRECISION", "128")
    assert rows(run("ngd", "--g", "1")[1])[0]["value"] == "24"
    monkeypatch.setenv("SLOPEBOUND_PRECISION", "lots")
    assert run("ngd", "--g", "1")[0] == 1
