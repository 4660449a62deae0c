import io
from importlib import resources

import pytest

from geoling.cli import EXIT_CLARIFY, EXIT_IO, EXIT_OK, EXIT_USAGE, main
from geoling.fcl import parse_fcl, pretty_print
from geoling.linguistic import loads_partition

SENTENCE = "I want to receive an alert when the vehicle gets very close to the warehouse"


def data(name):
    return str(resources.files("geoling.data").joinpath(name))


def run(*argv, stdin=""):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), io.StringIO(stdin), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture(autouse=True)
def no_config(monkeypatch):
    monkeypatch.delenv("GEOLING_CONFIG", raising=False)


# --- parse-fcl ------------------------------------------------------------------

def test_parse_fcl_pretty_prints(tmp_path):
    code, out, _ = run("parse-fcl", data("alert1.fcl"))
    assert code == EXIT_OK
    assert out.startswith("FUNCTION_BLOCK Alert1")
    assert parse_fcl(out) == parse_fcl(open(data("alert1.fcl")).read())
    target = tmp_path / "out.fcl"
    assert run("parse-fcl", data("alert1.fcl"), "-o", str(target))[:2] == (EXIT_OK, "")
    assert target.read_text() == out


def test_parse_fcl_error_position(tmp_path):
    bad = tmp_path / "bad.fcl"
    bad.write_text("FUNCTION_BLOCK X\nVAR_INPUT a LING;\nEND_VAR\n")
    code, out, err = run("parse-fcl", str(bad))
    assert code == EXIT_USAGE
    assert out == ""
    assert err.startswith(f"{bad}:2:")


def test_parse_fcl_missing_file(tmp_path):
    code, _, err = run("parse-fcl", str(tmp_path / "nope.fcl"))
    assert code == EXIT_IO
    assert "nope.fcl" in err


def test_parse_fcl_empty_file(tmp_path):
    empty = tmp_path / "empty.fcl"
    empty.write_text("")
    assert run("parse-fcl", str(empty))[0] == EXIT_USAGE


def test_parse_fcl_semantic_error(tmp_path):
    text = pretty_print(parse_fcl(open(data("alert1.fcl")).read()))
    bad = tmp_path / "bad.fcl"
    bad.write_text(text.replace("Distance IS Far", "Distance IS Faraway", 1))
    code, _, err = run("parse-fcl", str(bad))
    assert code == EXIT_USAGE
    assert "Faraway" in err


# --- build-partition ------------------------------------------------------------

def test_build_partition():
    code, out, _ = run("build-partition", "--bags", data("distance_bags.txt"),
                       "--lo", "0", "--hi", "1200", "--anchors", "InTheCenter,OutOfRoute")
    assert code == EXIT_OK
    p = loads_partition(out)
    assert p.labels == ("InTheCenter", "VeryCloseTo", "Near", "Far", "OutOfRoute")
    assert p.apexes == pytest.approx((0, 200, 400, 700, 1200))


@pytest.mark.parametrize("argv", [
    ("--anchors", "InTheCenter,Nowhere"),
    ("--anchors", "InTheCenter"),
    (),
])
def test_build_partition_usage_errors(argv):
    code, _, _ = run("build-partition", "--bags", data("distance_bags.txt"),
                     "--lo", "0", "--hi", "1200", *argv)
    assert code == EXIT_USAGE


def test_build_partition_missing_bags(tmp_path):
    code = run("build-partition", "--bags", str(tmp_path / "x.txt"), "--anchors", "a,b")[0]
    assert code == EXIT_IO


# --- nlu ------------------------------------------------------------------------

def test_nlu_complete_sentence():
    code, out, _ = run("nlu", SENTENCE)
    assert code == EXIT_OK
    fields = dict(line.split(": ", 1) for line in out.splitlines())
    assert fields["type"] == "ZONE_ENTRY"
    assert fields["place_name"] == "warehouse"
    assert float(fields["distance_value"]) == 300.0


def test_nlu_uniform_mode_uses_uniform_partition():
    code, out, _ = run("nlu", SENTENCE, "--mode", "uniform")
    fields = dict(line.split(": ", 1) for line in out.splitlines())
    assert code == EXIT_OK
    assert float(fields["distance_value"]) == 450.0


def test_nlu_needs_clarification():
    code, out, _ = run("nlu", "I want to receive an alert when the vehicle gets very close")
    assert code == EXIT_CLARIFY
    assert out == "missing: PLACE\n"


def test_nlu_interactive():
    code, out, err = run("nlu", "I want to receive an alert when the vehicle gets very close",
                         "--interactive", stdin="the warehouse\n")
    assert code == EXIT_OK
    assert "place" in err
    assert "place_name: warehouse" in out


def test_nlu_interactive_gives_up_on_blank_answer():
    code, out, _ = run("nlu", "the vehicle gets very close", "--interactive", stdin="\n\n\n")
    assert code == EXIT_CLARIFY
    assert out.startswith("missing:")


def test_nlu_empty_sentence():
    assert run("nlu", "   ")[0] == EXIT_USAGE


def test_nlu_custom_lexicon(tmp_path):
    lex = tmp_path / "lex.tsv"
    lex.write_text("alert\tnoun\tALERT\ncar\tnoun\tMOBILE\nenters\tverb\tZONE_ENTRY\n"
                   "depot\tnoun\tPOI\nthe\tdeterminer\tNONE\n")
    code, out, _ = run("nlu", "alert the car enters the depot", "--lexicon", str(lex))
    assert code == EXIT_OK
    assert "mobile: the car" in out


# --- simulate -------------------------------------------------------------------

def test_simulate_distance_telemetry(tmp_path):
    tel = tmp_path / "t.csv"
    tel.write_text("timestamp,distance_m,battery\n0,0,100\n10,600,100\n20,700,100\n")
    code, out, _ = run("simulate", "--telemetry", str(tel), "--tolerance", "0")
    assert code == EXIT_OK
    rows = [line.split(",") for line in out.splitlines()]
    assert [r[0] for r in rows] == ["0", "10", "20"]
    assert [r[2] for r in rows] == ["false", "true", "true"]
    assert float(rows[2][1]) == pytest.approx(2 / 3, abs=0.01)


def test_simulate_uniform_mode(tmp_path):
    tel = tmp_path / "t.csv"
    tel.write_text("timestamp,distance_m,battery\n0,700,100\n")
    code, out, _ = run("simulate", "--telemetry", str(tel), "--mode", "uniform")
    assert code == EXIT_OK
    assert out.strip().endswith(",false")


def test_simulate_coordinates(tmp_path):
    tel = tmp_path / "t.csv"
    tel.write_text("timestamp,lat,lon,battery\n0,45.0,5.0,100\n")
    assert run("simulate", "--telemetry", str(tel))[0] == EXIT_USAGE
    code, out, _ = run("simulate", "--telemetry", str(tel), "--dest", "45.0,5.0")
    assert code == EXIT_OK
    assert out.strip().endswith(",false")


def test_simulate_bad_dest(tmp_path):
    tel = tmp_path / "t.csv"
    tel.write_text("timestamp,lat,lon,battery\n0,45.0,5.0,100\n")
    assert run("simulate", "--telemetry", str(tel), "--dest", "north")[0] == EXIT_USAGE


def test_simulate_bad_telemetry(tmp_path):
    tel = tmp_path / "t.csv"
    tel.write_text("timestamp,distance_m,battery\n0,100,150\n")
    assert run("simulate", "--telemetry", str(tel))[0] == EXIT_USAGE
    assert run("simulate", "--telemetry", str(tmp_path / "none.csv"))[0] == EXIT_IO


# --- compare --------------------------------------------------------------------

def test_compare_to_stdout():
    code, out, err = run("compare", "--grid-distance-step", "600", "--grid-battery-step", "100",
                         "--grid-tolerance-step", "120")
    assert code == EXIT_OK
    assert out.splitlines()[0].startswith("battery,distance,tolerance")
    assert len(out.splitlines()) == 1 + 2 * 3 * 2
    assert "points: 12" in err


def test_compare_to_file(tmp_path):
    target = tmp_path / "cmp.csv"
    code, out, _ = run("compare", "--grid-distance-step", "100", "--grid-battery-step", "50",
                       "-o", str(target))
    assert code == EXIT_OK
    assert out.startswith("grid: distance step 100")
    assert target.read_text().startswith("battery,")


def test_compare_bad_step():
    assert run("compare", "--grid-distance-step", "0")[0] == EXIT_USAGE


def test_unknown_command():
    assert run("frobnicate")[0] == EXIT_USAGE


# --- configuration file ---------------------------------------------------------

def test_config_file_sets_defaults(tmp_path, monkeypatch):
    cfg = tmp_path / "geoling.conf"
    cfg.write_text("# coarse grid\ngrid-distance-step = 600\ngrid-battery-step=100\n"
                   "grid-tolerance-step=120\n")
    monkeypatch.setenv("GEOLING_CONFIG", str(cfg))
    code, _, err = run("compare")
    assert code == EXIT_OK
    assert "points: 12" in err
    # flags still win over the file
    code, _, err = run("compare", "--grid-distance-step", "1200")
    assert "points: 8" in err


def test_config_mode(tmp_path, monkeypatch):
    cfg = tmp_path / "geoling.conf"
    cfg.write_text("mode=uniform\n")
    monkeypatch.setenv("GEOLING_CONFIG", str(cfg))
    tel = tmp_path / "t.csv"
    tel.write_text("timestamp,distance_m,battery\n0,700,100\n")
    code, out, _ = run("simulate", "--telemetry", str(tel))
    assert code == EXIT_OK
    assert out.strip().endswith(",false")


def test_bad_config(tmp_path, monkeypatch):
    cfg = tmp_path / "geoling.conf"
    cfg.write_text("no equals sign\n")
    monkeypatch.setenv("GEOLING_CONFIG", str(cfg))
    code, _, err = run("compare")
    assert code == EXIT_USAGE
    assert "key=value" in err
    monkeypatch.setenv("GEOLING_CONFIG", str(tmp_path / "missing.conf"))
    assert run("compare")[0] == EXIT_IO
