import csv
import io
import json
import math
import subprocess
import sys
from pathlib import Path

import pytest

from resolvability import Channel, FiniteDistribution, ParseError, ValidationError, parse_model_file
from resolvability.cli import fmt, parse_int_list, run
from resolvability.modelfile import VERSION, model_to_dict

from conftest import LOG2, h2

U2 = FiniteDistribution.uniform(("0", "1"))
ID2 = Channel.identity(("0", "1"))


def write_model(tmp_path, name="m.json", **kw):
    data = model_to_dict(**kw)
    path = tmp_path / name
    path.write_text(json.dumps(data, indent=2))
    return str(path)


@pytest.fixture
def bsc_model(tmp_path):
    return write_model(tmp_path, sources=[U2], channels=[Channel.bsc(0.11)], target=U2)


@pytest.fixture
def id_model(tmp_path):
    return write_model(tmp_path, "id.json", sources=[U2], channels=[ID2], target=U2)


@pytest.fixture
def alt_model(tmp_path):
    return write_model(
        tmp_path, "alt.json", sources=[U2, U2], channels=[ID2, Channel.constant("01", U2)], mode="alternating"
    )


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestModelFile:
    def test_valid_bsc(self, bsc_model):
        m = parse_model_file(bsc_model)
        assert m.mode == "iid" and m.channels[0].matrix[0, 1] == 0.11

    def test_row_sum(self, tmp_path):
        data = model_to_dict([U2], [ID2])
        data["channels"][0]["matrix"][1] = [0.4, 0.5]
        p = tmp_path / "bad.json"
        p.write_text(json.dumps(data))
        with pytest.raises(ValidationError, match=r"channel 0: row 1 .* 0\.9"):
            parse_model_file(p)

    def test_negative_pmf(self, tmp_path):
        data = model_to_dict([U2], [ID2])
        data["sources"][0]["pmf"] = [1.2, -0.2]
        p = tmp_path / "bad.json"
        p.write_text(json.dumps(data))
        with pytest.raises(ValidationError, match="negative"):
            parse_model_file(p)

    def test_syntax_error_line(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text('{\n  "version": "%s",\n  "mode": ,\n}' % VERSION)
        with pytest.raises(ParseError) as info:
            parse_model_file(p)
        assert info.value.line == 3

    def test_version_tag(self, tmp_path):
        data = model_to_dict([U2], [ID2])
        data["version"] = "resolvability-model/9"
        p = tmp_path / "v.json"
        p.write_text(json.dumps(data))
        with pytest.raises(ValidationError, match="version"):
            parse_model_file(p)

    def test_alternating_needs_two(self, tmp_path):
        p = write_model(tmp_path, sources=[U2], channels=[ID2], mode="alternating")
        with pytest.raises(ValidationError):
            parse_model_file(p)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ParseError):
            parse_model_file(tmp_path / "nope.json")


class TestCommands:
    def test_optimize_bsc_in_bits(self, bsc_model):
        code, out, _ = invoke("optimize", "--model", bsc_model, "--units", "bits")
        assert code == 0
        opt = [r for r in rows(out) if r["kind"] == "optimum"][0]
        assert float(opt["mutual_information_bits"]) == pytest.approx((LOG2 - h2(0.11)) / LOG2, abs=1e-11)
        assert float(opt["mutual_information_bits"]) == pytest.approx(0.500, abs=1e-3)

    def test_code_search_identity(self, id_model):
        code, out, _ = invoke("code-search", "--model", id_model, "--M", "2")
        r = rows(out)[0]
        assert code == 0 and float(r["distance"]) == 0.0 and r["codewords"] == "0;1"

    def test_bounds_filters_converse(self, id_model):
        code, out, _ = invoke("bounds", "--model", id_model, "--n", "1,2", "--M", "1:4")
        assert code == 0
        conv = [r for r in rows(out) if r["bound"] == "converse"]
        assert conv
        for r in conv:
            n, M, c = int(r["n"]), int(r["M"]), float(r["c_nats"])
            assert math.log(M) <= n * c + 1e-9
            assert float(r["raw"]) <= float(r["code_distance"]) + 1e-12

    def test_bounds_achievability_nonnegative_c(self, id_model):
        _, out, _ = invoke("bounds", "--model", id_model, "--M", "2")
        assert all(float(r["c_nats"]) >= 0 for r in rows(out) if r["bound"] == "achievability")

    def test_bounds_single_optimum_per_block(self, bsc_model):
        _, out, _ = invoke("bounds", "--model", bsc_model, "--n", "2", "--M", "1,2,3")
        flags = {}
        for r in rows(out):
            key = (r["bound"], r["M"])
            flags[key] = flags.get(key, 0) + int(r["optimal"])
        assert set(flags.values()) == {1}

    def test_distance_with_code(self, id_model, tmp_path):
        cp = tmp_path / "code.json"
        cp.write_text(json.dumps({"n": 1, "M": 1, "seed": None, "codewords": ["0"]}))
        code, out, _ = invoke("distance", "--model", id_model, "--code", str(cp))
        assert code == 0 and rows(out)[0]["distance"] == "0.5"

    def test_distance_needs_code(self, id_model):
        assert invoke("distance", "--model", id_model)[0] == 2

    def test_spectrum(self, bsc_model):
        _, out, _ = invoke("spectrum", "--model", bsc_model, "--n", "2")
        r = rows(out)
        assert [float(x["probability"]) for x in r] == pytest.approx([0.0121, 0.1958, 0.7921])

    def test_alt(self, alt_model):
        _, out, _ = invoke("alt", "--model", alt_model)
        r = rows(out)[0]
        assert float(r["S_nats"]) == pytest.approx(LOG2, abs=1e-11) and float(r["S_star_nats"]) == 0.0

    def test_second_order(self, tmp_path):
        P = FiniteDistribution.bernoulli(0.3)
        m = write_model(tmp_path, sources=[P], channels=[ID2])
        _, out, _ = invoke("second-order", "--model", m, "--n", "10000", "--delta", "0.158655")
        r = rows(out)[0]
        assert float(r["second_order_nats"]) == pytest.approx(float(r["gaussian_nats"]), abs=0.05)

    def test_code_random(self, bsc_model):
        code, out, _ = invoke("code-random", "--model", bsc_model, "--n", "2", "--M", "3", "--trials", "4", "--seed", "5")
        r = rows(out)[0]
        assert code == 0 and r["seed"] == "5" and len(r["codewords"].split(";")) == 3

    def test_units_header(self, bsc_model):
        for units in ("nats", "bits"):
            for cmd in ("optimize", "alt", "spectrum", "bounds", "code-search", "code-random", "second-order"):
                _, out, _ = invoke(cmd, "--model", bsc_model, "--units", units)
                assert f"_{units}" in out.splitlines()[0], cmd

    def test_bits_conversion(self, bsc_model):
        _, nats, _ = invoke("alt", "--model", bsc_model)
        _, bits, _ = invoke("alt", "--model", bsc_model, "--units", "bits")
        assert float(rows(bits)[0]["S_bits"]) == pytest.approx(float(rows(nats)[0]["S_nats"]) / LOG2, rel=1e-11)

    def test_out_file(self, bsc_model, tmp_path):
        target = tmp_path / "o.csv"
        code, out, _ = invoke("alt", "--model", bsc_model, "--out", str(target))
        assert code == 0 and out == "" and target.read_text().startswith("S_nats")


class TestExitCodes:
    def test_validation(self, tmp_path):
        data = model_to_dict([U2], [ID2])
        data["channels"][0]["matrix"][0] = [0.5, 0.4]
        p = tmp_path / "bad.json"
        p.write_text(json.dumps(data))
        code, out, err = invoke("alt", "--model", str(p))
        assert code == 2 and out == "" and "row 0" in err

    def test_resource(self, id_model):
        code, _, err = invoke("code-search", "--model", id_model, "--n", "3", "--M", "12", "--budget", "50")
        assert code == 3 and "budget" in err

    def test_bad_subcommand(self):
        assert invoke("frobnicate")[0] == 2

    def test_bad_list(self, id_model):
        assert invoke("code-search", "--model", id_model, "--M", "two")[0] == 2


class TestDeterminism:
    @pytest.mark.parametrize(
        "argv",
        [
            ("bounds", "--n", "1,2,3", "--M", "1:6", "--seed", "3"),
            ("code-random", "--n", "1:3", "--M", "1:5", "--trials", "3", "--seed", "11"),
            ("code-search", "--n", "1,2", "--M", "1:4"),
            ("spectrum", "--n", "1:12"),
            ("second-order", "--n", "1:200:7", "--delta", "0.2"),
        ],
    )
    def test_threads_byte_identical(self, bsc_model, argv):
        outs = {invoke(*argv, "--model", bsc_model, "--threads", t)[1] for t in ("1", "4", "1", "4")}
        assert len(outs) == 1


def test_int_lists():
    assert parse_int_list("1,3:7:2,10") == [1, 3, 5, 7, 10]
    with pytest.raises(ValidationError):
        parse_int_list("1:")


def test_fmt():
    assert fmt(1 / 3) == "0.333333333333"
    assert fmt(-0.0) == "0" and fmt(math.inf) == "inf" and fmt(None) == ""


def test_console_entry_points(bsc_model):
    a = subprocess.run([sys.executable, "-m", "resolvability", "alt", "--model", bsc_model], capture_output=True, text=True)
    assert a.returncode == 0 and a.stdout.startswith("S_nats")
    h = subprocess.run([sys.executable, "-m", "resolvability", "bounds", "--help"], capture_output=True, text=True)
    assert "CSV columns" in h.stdout


def test_example_models_load():
    root = Path(__file__).resolve().parents[1] / "models"
    for p in sorted(root.glob("*.json")):
        assert invoke("alt", "--model", str(p))[0] == 0
