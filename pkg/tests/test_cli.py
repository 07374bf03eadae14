"""End-to-end command line behavior: outputs, determinism, exit codes."""

import json
import subprocess
import sys

import pytest

from lisa_kit.cli import main

EQUILATERAL = "id,a,b,c\na,0,1,1\nb,1,0,1\nc,1,1,0\n"
TRIANGLE_VALUES = "id,v\na,1\nb,2\nc,4\n"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestComputeText:
    def test_reference_2000_table(self, capsys):
        code, out, _ = run(capsys, "compute", "--demo", "bth2000")
        assert code == 0
        assert "n=13" in out
        assert "V0=0.6671" in out
        assert "I=-0.1191" in out and "C=1.1377" in out
        beijing = next(line for line in out.splitlines() if line.startswith("Beijing"))
        for cell in ("-2686.4966", "-0.7067", "-0.0612", "3801.3644", "43916.8725",
                     "41036.8054", "10.7953", "0.4313", "95153.2237"):
            assert cell in beijing
        sum_row = next(line for line in out.splitlines() if line.startswith("Sum"))
        for cell in ("-5229.3702", "-1.4299", "-0.1191", "570919.3421",
                     "108253.8824", "30.4883", "1.1377", "1236991.9079"):
            assert cell in sum_row
        expected_row = next(line for line in out.splitlines() if line.startswith("Expected"))
        for cell in ("-5229.3702", "-1.5480", "-0.1191", "108253.8824", "32.0446", "1.1377"):
            assert cell in expected_row

    def test_reference_2010_globals(self, capsys):
        code, out, _ = run(capsys, "compute", "--demo", "bth2010")
        assert code == 0
        assert "I=-0.1124" in out and "C=1.1329" in out
        assert "gamma=123312.1000" in out

    def test_precision_env(self, capsys, monkeypatch):
        monkeypatch.setenv("LISA_KIT_PRECISION", "6")
        code, out, _ = run(capsys, "compute", "--demo", "bth2000")
        assert code == 0
        assert "sigma2=65835.597356" in out
        assert "I=-0.119074" in out

    def test_bad_precision_env(self, capsys, monkeypatch):
        monkeypatch.setenv("LISA_KIT_PRECISION", "many")
        code, _, err = run(capsys, "compute", "--demo", "bth2000")
        assert code == 2
        assert "LISA_KIT_PRECISION" in err

    def test_random_input(self, capsys):
        code, out, _ = run(capsys, "compute", "--random", "n=6", "seed=3")
        assert code == 0
        assert "u1" in out


class TestVariants:
    def test_single_set(self, capsys):
        _, out, _ = run(capsys, "compute", "--demo", "bth2000", "--variants", "set2",
                        "--format", "csv")
        assert out.splitlines()[0] == "label,MI2,GC2"

    def test_ratio_needs_both_sets(self, capsys):
        _, out, _ = run(capsys, "compute", "--demo", "bth2000", "--variants", "set1,set3",
                        "--format", "csv")
        assert out.splitlines()[0] == "label,MI1,MI3,MI1/MI3,GC1,GC3,GC1/GC3"

    def test_bad_variant(self, capsys):
        code, _, err = run(capsys, "compute", "--demo", "bth2000", "--variants", "set4")
        assert code == 2
        assert "set4" in err


class TestComputeCsvAndJson:
    def test_csv_full_precision(self, capsys, analysis2000):
        _, out, _ = run(capsys, "compute", "--demo", "bth2000", "--format", "csv")
        lines = out.splitlines()
        header = lines[0].split(",")
        beijing = lines[1].split(",")
        assert beijing[0] == "Beijing"
        assert float(beijing[header.index("MI1")]) == float(analysis2000.table.mi1[0])
        assert float(beijing[header.index("GC3")]) == float(analysis2000.table.gc3[0])
        assert float(beijing[header.index("MI1/MI3")]) == analysis2000.table.ratio13

    def test_json_shape(self, capsys):
        _, out, _ = run(capsys, "compute", "--demo", "bth2000", "--format", "json")
        doc = json.loads(out)
        assert list(doc) == ["config", "globals", "lisa", "checks"]
        assert list(doc["globals"]) == [
            "n", "V0", "sigma2", "s2", "gamma", "gamma_c", "I", "C", "I0", "C0",
        ]
        assert doc["config"]["demo"] == "bth2000"
        assert doc["config"]["kernel"] == "inverse"
        assert len(doc["lisa"]) == 13
        assert list(doc["lisa"][0]) == [
            "label", "mi1", "mi2", "mi3", "ratio_mi1_mi2", "ratio_mi1_mi3",
            "gc1", "gc2", "gc3", "ratio_gc1_gc2", "ratio_gc1_gc3",
        ]
        assert doc["checks"] == []

    def test_byte_identical_reruns(self, capsys):
        _, first, _ = run(capsys, "compute", "--demo", "bth2010", "--format", "json")
        _, second, _ = run(capsys, "compute", "--demo", "bth2010", "--format", "json")
        assert first == second

    def test_out_file(self, capsys, tmp_path):
        target = tmp_path / "table.csv"
        code, out, _ = run(capsys, "compute", "--demo", "bth2000", "--format", "csv",
                           "--out", str(target))
        assert code == 0
        assert out == ""
        assert target.read_text().startswith("label,MI1")


class TestDemoRoundTrip:
    def test_exported_files_reproduce_demo_output(self, capsys, tmp_path):
        code, out, _ = run(capsys, "demo", "--out", str(tmp_path))
        assert code == 0
        dist_path, pop_path = out.splitlines()
        _, direct, _ = run(capsys, "compute", "--demo", "bth2000", "--format", "csv")
        _, from_files, _ = run(capsys, "compute", "--distances", dist_path,
                               "--values", pop_path, "--column", "2000",
                               "--format", "csv")
        assert from_files == direct

    def test_2010_column(self, capsys, tmp_path):
        run(capsys, "demo", "--out", str(tmp_path))
        _, direct, _ = run(capsys, "compute", "--demo", "bth2010", "--format", "csv")
        _, from_files, _ = run(
            capsys, "compute",
            "--distances", str(tmp_path / "bth_distances.csv"),
            "--values", str(tmp_path / "bth_population.csv"),
            "--column", "2010", "--format", "csv",
        )
        assert from_files == direct


class TestVerifyCommand:
    def test_demo_passes(self, capsys):
        code, out, _ = run(capsys, "verify", "--demo", "bth2000")
        assert code == 0
        assert "identity suite:" in out
        assert "refutation audit:" in out
        assert "result: all checks as expected" in out
        assert out.count("Identity-Holds") == 12
        assert out.count("Claim-Refuted-As-Expected") == 2

    def test_random_passes(self, capsys):
        code, _, _ = run(capsys, "verify", "--random", "n=6", "seed=9")
        assert code == 0

    def test_csv_lists_all_checks(self, capsys):
        code, out, _ = run(capsys, "verify", "--demo", "bth2000", "--format", "csv")
        assert code == 0
        lines = out.splitlines()
        assert lines[0].startswith("check_id,relation,")
        assert len(lines) == 15  # header + 10 identities + 4 audit rows

    def test_json_carries_checks(self, capsys):
        code, out, _ = run(capsys, "verify", "--demo", "bth2010", "--format", "json")
        assert code == 0
        doc = json.loads(out)
        assert len(doc["checks"]) == 14
        verdicts = {c["verdict"] for c in doc["checks"]}
        assert verdicts == {"Identity-Holds", "Claim-Refuted-As-Expected"}

    def test_degenerate_symmetry_flagged(self, capsys, tmp_path):
        """Equidistant units make the false claims true, which is reported."""
        dist = tmp_path / "d.csv"
        vals = tmp_path / "v.csv"
        dist.write_text(EQUILATERAL)
        vals.write_text(TRIANGLE_VALUES)
        code, out, _ = run(capsys, "verify", "--distances", str(dist),
                           "--values", str(vals))
        assert code == 4
        assert "Unexpected" in out
        assert "UNEXPECTED OUTCOMES PRESENT" in out


class TestPlotCommand:
    def test_text_reports_slopes(self, capsys):
        code, out, _ = run(capsys, "plot", "--demo", "bth2000")
        assert code == 0
        assert "MI1 vs MI3" in out and "MI1 vs MI2" in out
        assert "slope=2.2770291775e-05" in out  # 1/gamma for the 2000 data

    def test_json_slope_equals_inverse_gamma(self, capsys, analysis2000):
        _, out, _ = run(capsys, "plot", "--demo", "bth2000", "--format", "json")
        doc = json.loads(out)
        assert doc["fit_mi1_mi3"]["slope"] == pytest.approx(1.0 / analysis2000.gamma, rel=1e-12)
        assert doc["fit_mi1_mi2"]["max_abs_residual"] > 1e-3
        assert len(doc["points"]) == 13

    def test_csv_columns(self, capsys):
        _, out, _ = run(capsys, "plot", "--demo", "bth2000", "--format", "csv")
        assert out.splitlines()[0] == "label,mi1,mi2,mi3,mi2_fit,mi2_residual,mi3_fit"
        assert len(out.splitlines()) == 14

    def test_svg_written(self, capsys, tmp_path):
        target = tmp_path / "fig.svg"
        code, _, _ = run(capsys, "plot", "--demo", "bth2000", "--out",
                         str(tmp_path / "data.csv"), "--format", "csv",
                         "--plot", str(target))
        assert code == 0
        assert target.exists()
        assert b"<svg" in target.read_bytes()[:500] or b"<?xml" in target.read_bytes()[:500]


class TestExitCodes:
    def test_no_input(self, capsys):
        code, _, err = run(capsys, "compute")
        assert code == 2
        assert "no input" in err

    def test_two_sources(self, capsys):
        code, _, _ = run(capsys, "compute", "--demo", "bth2000", "--random", "n=5", "seed=1")
        assert code == 2

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "compute", "--distances", str(tmp_path / "no.csv"),
                           "--values", str(tmp_path / "no2.csv"))
        assert code == 2
        assert "no.csv" in err

    def test_bad_kernel(self, capsys):
        code, _, _ = run(capsys, "compute", "--demo", "bth2000", "--kernel", "gaussian")
        assert code == 2

    def test_nonpositive_kernel_param(self, capsys):
        code, _, _ = run(capsys, "compute", "--demo", "bth2000", "--kernel", "power:-1")
        assert code == 2

    def test_bad_random_spec(self, capsys):
        code, _, _ = run(capsys, "compute", "--random", "n=2", "seed=1")
        assert code == 2
        code, _, _ = run(capsys, "compute", "--random", "n=x", "seed=1")
        assert code == 2

    def test_column_with_demo(self, capsys):
        code, _, _ = run(capsys, "compute", "--demo", "bth2000", "--column", "2000")
        assert code == 2

    def test_unknown_column(self, capsys, tmp_path):
        dist = tmp_path / "d.csv"
        vals = tmp_path / "v.csv"
        dist.write_text(EQUILATERAL)
        vals.write_text(TRIANGLE_VALUES)
        code, _, err = run(capsys, "compute", "--distances", str(dist),
                           "--values", str(vals), "--column", "w")
        assert code == 2
        assert "v" in err

    def test_asymmetric_distances(self, capsys, tmp_path):
        dist = tmp_path / "d.csv"
        vals = tmp_path / "v.csv"
        dist.write_text("id,a,b,c\na,0,1,1\nb,2,0,1\nc,1,1,0\n")
        vals.write_text(TRIANGLE_VALUES)
        code, _, err = run(capsys, "compute", "--distances", str(dist),
                           "--values", str(vals))
        assert code == 3
        assert "error:" in err

    def test_constant_values(self, capsys, tmp_path):
        dist = tmp_path / "d.csv"
        vals = tmp_path / "v.csv"
        dist.write_text(EQUILATERAL)
        vals.write_text("id,v\na,5\nb,5\nc,5\n")
        code, _, _ = run(capsys, "compute", "--distances", str(dist), "--values", str(vals))
        assert code == 3

    def test_label_mismatch_between_files(self, capsys, tmp_path):
        dist = tmp_path / "d.csv"
        vals = tmp_path / "v.csv"
        dist.write_text(EQUILATERAL)
        vals.write_text("id,v\na,1\nb,2\nd,4\n")
        code, _, _ = run(capsys, "compute", "--distances", str(dist), "--values", str(vals))
        assert code == 3

    def test_isolated_unit_under_threshold(self, capsys, tmp_path):
        dist = tmp_path / "d.csv"
        vals = tmp_path / "v.csv"
        dist.write_text("id,a,b,c\na,0,1,9\nb,1,0,9\nc,9,9,0\n")
        vals.write_text(TRIANGLE_VALUES)
        code, _, err = run(capsys, "compute", "--distances", str(dist),
                           "--values", str(vals), "--kernel", "threshold:2")
        assert code == 3
        assert "c" in err


class TestInstalledEntryPoint:
    def test_console_script(self):
        proc = subprocess.run(
            [sys.executable, "-m", "lisa_kit.cli"],
            capture_output=True, text=True,
        )
        assert proc.returncode == 2
        proc = subprocess.run(
            ["lisa-kit", "compute", "--demo", "bth2000"],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0
        assert "Beijing" in proc.stdout
