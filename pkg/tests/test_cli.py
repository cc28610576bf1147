import csv
import json
import math

import pytest

from attenuant.cli import RunConfig, figure_csv, fmt, main
from attenuant.entropy import g


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_fmt_has_twelve_significant_digits():
    assert fmt(1 / 3) == "0.333333333333"
    assert fmt(12345.678901234) == "12345.6789012"


def test_figure_csv_header_and_line_endings():
    text = figure_csv([("n=2", 0.25, 1e-3)])
    assert text.startswith("curve,x,y\r\n")
    assert list(csv.reader(text.splitlines()))[1] == ["n=2", "0.25", "0.001"]


def test_figures_are_byte_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["--threads", "1", "figures", "--id", "icoh_main", "--n", "2,5,10,20", "--points", "31", "--out", str(a)]) == 0
    assert main(["--threads", "4", "figures", "--id", "icoh_main", "--n", "2,5,10,20", "--points", "31", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    rows = list(csv.DictReader(a.read_text().splitlines()))
    assert {r["curve"] for r in rows} == {"n=2", "n=5", "n=10", "n=20"}


def test_figure_xi_contains_reference_point(tmp_path):
    out = tmp_path / "xi.csv"
    assert main(["figures", "--id", "icoh_xi", "--points", "11", "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.read_text().splitlines()))
    hit = [r for r in rows if abs(float(r["x"]) - 1 / 3) < 1e-11]
    assert hit and abs(float(hit[0]["y"]) - 0.07392) < 5e-5


def test_floor_single_pure_loss_point(capsys):
    assert main(["floor", "--lambda", "0.75"]) == 0
    rep = _json(capsys)
    pt = rep["points"][0]
    assert pt["branch"] == "vacuum"
    assert math.isclose(pt["value"], g(0.375) - g(0.125), rel_tol=1e-11)
    assert rep["config"]["lam"] == 0.75


def test_floor_sweep_positive(capsys):
    assert main(["floor", "--lambda-min", "0.005", "--eps", "0.05", "--points", "101"]) == 0
    rep = _json(capsys)
    assert rep["global_min"]["value"] > 0
    assert abs(rep["asymptotic_small_lambda"]["limit"] - 0.0244) < 1e-3


def test_verify_single_suite(capsys):
    assert main(["verify", "--suite", "unitarity"]) == 0
    rep = _json(capsys)
    assert rep["suites"]["unitarity"]["worst"] <= 1e-12


def test_verify_majorization_small(capsys):
    assert main(["verify", "--suite", "majorization", "--nmax", "20"]) == 0
    details = _json(capsys)["suites"]["majorization"]["details"]
    assert details["majorization"]["violations"] == 0
    assert "worst_margin" in details["majorization"]


@pytest.mark.parametrize(
    "argv",
    [
        ["floor", "--eps", "0.3"],
        ["floor", "--points", "1"],
        ["verify", "--nmax", "1"],
        ["figures", "--id", "bogus"],
        ["nonsense"],
    ],
)
def test_operational_errors_exit_two(argv):
    assert main(argv) == 2


def test_unwritable_output_exits_two(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert main(["floor", "--lambda", "0.8", "--out", str(blocker / "sub" / "r.json")]) == 2


def test_json_is_sorted_and_embeds_config(tmp_path):
    out = tmp_path / "r.json"
    assert main(["floor", "--lambda", "0.6", "--out", str(out)]) == 0
    text = out.read_text()
    rep = json.loads(text)
    assert list(rep) == sorted(rep)
    assert RunConfig(**{k: v for k, v in rep["config"].items()}).command == "floor"
