import csv
import io
import json
import math
import subprocess
import sys

import pytest

from frio.cli import COMPARE_HEADER, CURVE_HEADER, REGIONS_HEADER, SIMULATE_HEADER, main
from frio.qdcore import FrioError


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.reader(io.StringIO(text)))


class TestCurves:
    def test_trine_curve(self, capsys):
        code, out, _ = run(capsys, "curve-trine", "--theta", "0.314159265", "--steps", "101")
        assert code == 0
        table = rows(out)
        assert tuple(table[0]) == CURVE_HEADER
        assert len(table) == 102
        first_tail = next(float(r[0]) for r in table[1:] if r[3] == "linear-tail")
        last_inner = max(float(r[0]) for r in table[1:] if r[3] != "linear-tail")
        assert last_inner < math.cos(math.pi / 5) < first_tail
        # Conditional error is flat at 1/3 on the tail, including at q = 1.
        for r in table[1:]:
            if r[3] == "linear-tail":
                assert float(r[2]) == pytest.approx(1 / 3, abs=1e-11)

    def test_two_pure_curve(self, capsys):
        code, out, _ = run(capsys, "curve-two-pure", "--eta1", "0.5", "--cos-theta", "0.5", "--steps", "5")
        assert code == 0
        table = rows(out)
        assert [r[0] for r in table[1:]] == ["0", "0.25", "0.5", "0.75", "1"]
        assert table[1][1] == "%.12g" % ((1 - math.sqrt(3) / 2) / 2)
        assert table[-1][1:] == ["0", "0", "linear-tail"]

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "c.csv"
        code, out, _ = run(capsys, "curve-trine", "--theta", "0.3", "--steps", "3", "--output", str(target))
        assert code == 0 and out == ""
        assert target.read_text().startswith(",".join(CURVE_HEADER))

    def test_deterministic(self, capsys):
        a = run(capsys, "curve-two-pure", "--eta1", "0.2", "--cos-theta", "0.7")[1]
        b = run(capsys, "curve-two-pure", "--eta1", "0.2", "--cos-theta", "0.7")[1]
        assert a == b


class TestRegions:
    def test_intersections(self, capsys):
        code, out, _ = run(capsys, "regions", "--cos-theta", "0.5", "--steps", "201")
        assert code == 0
        table = rows(out)
        assert tuple(table[0]) == REGIONS_HEADER
        data = {float(r[0]): r for r in table[1:]}
        assert len(data) == 199
        for eta in (0.2, 0.8):
            r = data[eta]
            assert float(r[1]) == pytest.approx(float(r[2]), abs=1e-12)
            assert r[3] == "II"
        assert data[0.1][3] == "I" and data[0.9][3] == "III"


class TestCompare:
    def test_two_pure_small(self, capsys):
        code, out, _ = run(capsys, "compare", "--eta1", "0.5", "--cos-theta", "0.5", "--steps", "5",
                           "--grid-size", "120")
        assert code == 0
        table = rows(out)
        assert tuple(table[0]) == COMPARE_HEADER
        assert all(r[4] == "ok" for r in table[1:])
        assert max(abs(float(r[3])) for r in table[1:]) < 1e-3

    def test_json_summary(self, capsys):
        code, out, _ = run(capsys, "compare", "--eta1", "0.1", "--cos-theta", "0.5", "--q-max", "0.3",
                           "--steps", "3", "--grid-size", "120", "--json")
        assert code == 0
        summary = json.loads(out)
        assert summary["mismatches"] == 0
        assert summary["max_abs_delta"] < 1e-3
        assert len(summary["rows"]) == 3

    def test_family_conflict(self, capsys):
        code, _, err = run(capsys, "compare", "--theta", "0.3", "--eta1", "0.5", "--cos-theta", "0.5")
        assert code == 2 and "error" in err


class TestSimulate:
    def test_csv(self, capsys):
        code, out, _ = run(capsys, "simulate", "--eta1", "0.5", "--cos-theta", "0.5", "--q", "0.3",
                           "--trials", "200000", "--seed", "5")
        assert code == 0
        table = rows(out)
        assert tuple(table[0]) == SIMULATE_HEADER
        assert [r[0] for r in table[1:]] == ["p_success", "p_error", "q_inconclusive"]
        assert all(abs(float(r[4])) < 5 for r in table[1:])

    def test_trine_tail_json(self, capsys):
        code, out, _ = run(capsys, "simulate", "--theta", "0.3", "--q", "0.95", "--trials", "100000", "--json")
        assert code == 0
        summary = json.loads(out)
        assert summary["rows"][2]["reference"] == pytest.approx(0.95)
        assert summary["max_abs_z"] < 5


class TestErrors:
    @pytest.mark.parametrize(
        "argv",
        [
            ["curve-trine", "--theta", "1.0"],
            ["curve-two-pure", "--eta1", "1.5", "--cos-theta", "0.5"],
            ["curve-two-pure", "--eta1", "0.5", "--cos-theta", "0.5", "--steps", "1"],
            ["curve-trine", "--theta", "0.3", "--q-min", "0.8", "--q-max", "0.2"],
            ["regions"],
            ["simulate", "--eta1", "0.5", "--cos-theta", "0.5", "--q", "2"],
            ["compare", "--eta1", "0.5", "--cos-theta", "0.5", "--grid-size", "3"],
            ["no-such-command"],
        ],
    )
    def test_usage_errors(self, capsys, argv):
        code, out, err = run(capsys, *argv)
        assert code == 2
        assert out == ""
        assert err

    def test_numerical_failure_exit_code(self, capsys, monkeypatch):
        import frio.cli

        def broken(*args):
            raise FrioError("solver diverged")

        monkeypatch.setattr(frio.cli, "two_pure_pe_min", broken)
        code, out, err = run(capsys, "curve-two-pure", "--eta1", "0.5", "--cos-theta", "0.5")
        assert code == 3
        assert out == "" and "solver diverged" in err

    def test_help_exits_zero(self, capsys):
        assert run(capsys, "--help")[0] == 0


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "frio", "curve-trine", "--theta", "0.5", "--steps", "2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == ",".join(CURVE_HEADER)
