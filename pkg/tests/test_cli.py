import json

import pytest

from folnerlab.cli import (
    EXIT_BUDGET,
    EXIT_CERTIFICATE,
    EXIT_INVALID,
    EXIT_OK,
    json_ready,
    main,
    parse_int_range,
    parse_set,
)
from folnerlab.groups import Z
from fractions import Fraction


def run(tmp_path, *argv):
    out = tmp_path / "report.json"
    code = main([*argv, "--out", str(out)])
    text = out.read_text() if out.exists() else ""
    return code, text


class TestParsers:
    def test_range_plain(self):
        assert parse_int_range("2:5") == [2, 3, 4, 5]

    def test_range_step(self):
        assert parse_int_range("0:10:s5") == [0, 5, 10]

    def test_range_geometric(self):
        assert parse_int_range("10:1000:x10") == [10, 100, 1000]

    def test_range_negative(self):
        assert parse_int_range("-2:2") == [-2, -1, 0, 1, 2]

    def test_set_specs(self):
        assert parse_set("2z", Z).member(4)
        assert parse_set("2z+1", Z).member(5)
        assert parse_set("full", Z).member(123)
        assert not parse_set("empty", Z).member(0)
        assert parse_set("straus:eps=0.5", Z).member(5)

    def test_unknown_set(self):
        with pytest.raises(Exception):
            parse_set("mystery", Z)

    def test_json_ready_fractions(self):
        data = json_ready({"r": Fraction(2, 6)})
        assert data == {"r": {"num": 1, "den": 3}}


class TestDensityCommand:
    def test_csv_output(self, tmp_path):
        code, text = run(
            tmp_path,
            "density", "--group", "z", "--set", "2z",
            "--phi", "interval", "--range", "10:1000:x10",
        )
        assert code == EXIT_OK
        lines = text.strip().splitlines()
        assert lines[0] == "N,count,size,ratio"
        assert lines[1] == "10,5,10,1/2"
        assert lines[-1] == "1000,500,1000,1/2"


class TestFolnerCommand:
    def test_defect_csv(self, tmp_path):
        code, text = run(
            tmp_path,
            "folner", "defect", "--group", "z", "--phi", "interval",
            "--n", "4", "--g", "1",
        )
        assert code == EXIT_OK
        lines = text.strip().splitlines()
        assert lines[0] == "N,g,left_defect,right_defect"
        assert lines[-1] == "4,1,1/2,1/2"


class TestDetectCommand:
    def test_fs_trivial_witness(self, tmp_path):
        code, text = run(
            tmp_path, "detect", "fs", "--set", "z", "--m", "2", "--bounds", "4:4"
        )
        assert code == EXIT_OK
        results = json.loads(text)["results"]
        assert results["found"]
        assert results["witness"]["t"] == 0
        assert results["witness"]["x"] == [1, 1]

    def test_fs_negative_certificate(self, tmp_path):
        code, text = run(
            tmp_path, "detect", "fs", "--set", "1000z+999", "--m", "3",
            "--bounds", "3:3",
        )
        assert code == EXIT_OK
        results = json.loads(text)["results"]
        assert not results["found"]
        assert results["searched"]["exhaustive"]

    def test_fs_budget_exit(self, tmp_path):
        code, _ = run(
            tmp_path, "detect", "fs", "--set", "empty", "--m", "4",
            "--bounds", "64:8", "--budget", "0",
        )
        assert code == EXIT_BUDGET

    def test_pws_with_negative_k(self, tmp_path):
        code, text = run(
            tmp_path, "detect", "pws", "--set", "2z", "--K", "-1:1",
            "--Kprime", "-4:4", "--window", "0:100",
        )
        assert code == EXIT_OK
        assert json.loads(text)["results"]["found"]

    def test_syndetic(self, tmp_path):
        code, text = run(
            tmp_path, "detect", "syndetic", "--set", "2z", "--K", "0:1",
            "--window", "0:200",
        )
        assert code == EXIT_OK
        assert json.loads(text)["results"]["syndetic"]


class TestSymbolicCommand:
    def test_measure(self, tmp_path):
        code, text = run(
            tmp_path, "symbolic", "measure", "--set", "2z", "--psi", "interval",
            "--n", "1000", "--cylinder", "0:1",
        )
        assert code == EXIT_OK
        results = json.loads(text)["results"]
        assert results["frequency_num"] == 1
        assert results["frequency_den"] == 2

    def test_multi_cell_cylinder(self, tmp_path):
        code, text = run(
            tmp_path, "symbolic", "measure", "--set", "2z", "--psi", "interval",
            "--n", "100", "--cylinder", "0:1,1:0,2:1",
        )
        assert code == EXIT_OK
        results = json.loads(text)["results"]
        assert results["frequency_num"] == 1
        assert results["frequency_den"] == 2


class TestConstructCommand:
    def test_straus_report(self, tmp_path):
        code, text = run(
            tmp_path, "construct", "straus", "--eps", "0.5",
            "--emit-window", "1:100",
        )
        assert code == EXIT_OK
        results = json.loads(text)["results"]
        ratio = results["certificates"]["ratio"]
        assert Fraction(ratio["num"], ratio["den"]) >= Fraction(1, 2)
        # RLE members must skip the removed progression value 9
        from folnerlab.subsets import rle_decode

        members = set(rle_decode(results["members_rle"]))
        assert 9 not in members and 5 in members

    def test_double_report(self, tmp_path):
        code, text = run(
            tmp_path, "construct", "double", "--set", "empty",
            "--emit-window", "-5:20",
        )
        assert code == EXIT_OK
        results = json.loads(text)["results"]
        assert results["members_rle"] == [[1, 1]]
        assert results["certificates"]["unique_isolated_member"]


class TestErrorPaths:
    def test_unknown_set_is_invalid_config(self, tmp_path):
        code, _ = run(tmp_path, "density", "--set", "mystery", "--range", "1:10")
        assert code == EXIT_INVALID

    def test_bad_range_is_invalid_config(self, tmp_path):
        code, _ = run(tmp_path, "density", "--set", "2z", "--range", "nope")
        assert code == EXIT_INVALID


class TestSuite:
    def test_fast_deterministic(self, tmp_path):
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        assert main(["suite", "fast", "--seed", "7", "--out", str(a)]) == EXIT_OK
        assert main(["suite", "fast", "--seed", "7", "--out", str(b)]) == EXIT_OK
        assert a.read_bytes() == b.read_bytes()

    def test_fast_passes(self, tmp_path):
        out = tmp_path / "r.json"
        assert main(["suite", "fast", "--out", str(out)]) == EXIT_OK
        report = json.loads(out.read_text())
        assert report["results"]["failed"] == []

    def test_negative_control_names_greedy(self, tmp_path, capsys):
        out = tmp_path / "r.json"
        code = main(["suite", "fast", "--break-greedy", "--out", str(out)])
        assert code == EXIT_CERTIFICATE
        report = json.loads(out.read_text())
        assert report["results"]["failed"] == ["greedy-postconditions"]
