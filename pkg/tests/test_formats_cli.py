import subprocess
import sys

import numpy as np
import pytest

from heilbronn.cli import main
from heilbronn.configurations import generate_vertical
from heilbronn.formats import (
    FormatError,
    read_config,
    read_points,
    read_tubes,
    validate_config_file,
    validate_file,
    write_config,
    write_points,
    write_tubes,
)
from heilbronn.tubes import Tube2D

from conftest import random_config


class TestFormats:
    def test_points_roundtrip(self, tmp_path, rng):
        P = rng.uniform(0, 1, (37, 3))
        path = str(tmp_path / "a.pts")
        write_points(path, P)
        Q = read_points(path)
        assert np.array_equal(P, Q)

    def test_config_roundtrip(self, tmp_path):
        X = generate_vertical(1 / 8, 3)
        path = str(tmp_path / "a.plc")
        write_config(path, X)
        Y = read_config(path)
        assert len(Y) == len(X)
        assert np.array_equal(X.points(), Y.points())

    def test_tubes_roundtrip(self, tmp_path, rng):
        tubes = [Tube2D(rng.uniform(0, 1, 2), rng.normal(size=2), 0.01, 1.0)
                 for _ in range(9)]
        path = str(tmp_path / "a.tubes")
        write_tubes(path, tubes)
        back = read_tubes(path)
        assert back == tubes

    def test_wellformed_has_no_violations(self, tmp_path):
        X = generate_vertical(1 / 8, 2)
        path = str(tmp_path / "ok.plc")
        write_config(path, X)
        assert validate_config_file(path) == []

    def test_offline_point_flagged_with_line_number(self, tmp_path):
        path = str(tmp_path / "bad.plc")
        with open(path, "w") as fh:
            fh.write("plc v1 dim=2 n=2\n")
            fh.write("p 0 0 q 0 0 v 0 1\n")
            fh.write("p 0.501 0.5 q 0.5 0 v 0 1\n")  # 1e-3 off its line
        out = validate_config_file(path)
        assert len(out) == 1 and ":3:" in out[0] and "off its line" in out[0]

    def test_non_unit_direction_flagged(self, tmp_path):
        path = str(tmp_path / "bad2.plc")
        with open(path, "w") as fh:
            fh.write("plc v1 dim=2 n=1\n")
            fh.write("p 0 0 q 0 0 v 0 1.01\n")
        out = validate_config_file(path)
        assert len(out) == 1 and "not unit" in out[0]

    def test_count_mismatch_flagged(self, tmp_path):
        path = str(tmp_path / "bad3.plc")
        with open(path, "w") as fh:
            fh.write("plc v1 dim=2 n=5\n")
            fh.write("p 0 0 q 0 0 v 0 1\n")
        out = validate_config_file(path)
        assert any("declares n=5" in v for v in out)

    def test_unknown_tag(self, tmp_path):
        path = str(tmp_path / "huh.txt")
        with open(path, "w") as fh:
            fh.write("nope v1 dim=2 n=0\n")
        assert validate_file(path)

    def test_read_rejects_bad_file(self, tmp_path):
        path = str(tmp_path / "bad4.plc")
        with open(path, "w") as fh:
            fh.write("plc v1 dim=2 n=1\n")
            fh.write("p 0 0 q 0 0 v 0 1.5\n")
        with pytest.raises(FormatError):
            read_config(path)


class TestCli:
    def run(self, *argv):
        return main(list(argv))

    def test_gen_vertical_count(self, tmp_path):
        out = str(tmp_path / "x.plc")
        assert self.run("gen", "vertical", "--delta", "0.0625", "--dim", "3",
                        "-o", out) == 0
        cfg = read_config(out)
        assert len(cfg) == int(np.floor(1 / (2 * 0.0625))) ** 2

    def test_validate_exit_codes(self, tmp_path):
        out = str(tmp_path / "x.plc")
        self.run("gen", "vertical", "--delta", "0.125", "--dim", "2", "-o", out)
        assert self.run("validate", out) == 0
        bad = str(tmp_path / "bad.plc")
        with open(bad, "w") as fh:
            fh.write("plc v1 dim=2 n=1\np 0 0 q 0 0 v 0 1.5\n")
        assert self.run("validate", bad) == 3

    def test_usage_error_exit_two(self):
        with pytest.raises(SystemExit) as exc:
            self.run("no-such-command")
        assert exc.value.code == 2

    def test_missing_file_exit_three(self, tmp_path):
        assert self.run("dx", "-p", str(tmp_path / "none.plc"),
                        "-o", str(tmp_path / "o.csv")) == 3

    def test_dx_and_log(self, tmp_path):
        plc = str(tmp_path / "x.plc")
        out = str(tmp_path / "dx.csv")
        self.run("gen", "vertical", "--delta", "0.125", "--dim", "2", "-o", plc)
        assert self.run("dx", "-p", plc, "-o", out) == 0
        text = open(out).read()
        assert "0.25" in text
        log = open(out + ".log").read()
        assert "manifest_hash" in log and "wall_time_s" in log

    def test_scan_b_rows(self, tmp_path, rng):
        pts = str(tmp_path / "p.pts")
        plc = str(tmp_path / "l.plc")
        write_points(pts, rng.uniform(0, 1, (50, 3)))
        write_config(plc, random_config(50, 3, 1))
        out = str(tmp_path / "scan.csv")
        assert self.run("scan-b", "-p", pts, "-l", plc,
                        "--wmax", "0.25", "--wmin", "0.004", "-o", out) == 0
        rows = [l for l in open(out) if not l.startswith("#")]
        assert len(rows) == 7  # header + 6 dyadic rows

    def test_replay_byte_identical(self, tmp_path, rng):
        pts = str(tmp_path / "p.pts")
        plc = str(tmp_path / "l.plc")
        write_points(pts, rng.uniform(0, 1, (40, 3)))
        write_config(plc, random_config(40, 3, 2))
        out1 = str(tmp_path / "a.csv")
        out2 = str(tmp_path / "b.csv")
        self.run("scan-b", "-p", pts, "-l", plc, "--wmax", "0.25",
                 "--wmin", "0.03", "-o", out1)
        self.run("scan-b", "-p", pts, "-l", plc, "--wmax", "0.25",
                 "--wmin", "0.03", "-o", out2)
        assert open(out1, "rb").read() == open(out2, "rb").read()

    def test_two_ends_replay(self, tmp_path, rng):
        tub = str(tmp_path / "t.tubes")
        tubes = [Tube2D(rng.uniform(0.1, 0.9, 2), rng.normal(size=2), 2**-8, 1.0)
                 for _ in range(50)]
        write_tubes(tub, tubes)
        out1 = str(tmp_path / "te1.csv")
        out2 = str(tmp_path / "te2.csv")
        assert self.run("two-ends", "-t", tub, "--delta", str(2**-8),
                        "--span", "0.125", "-o", out1) == 0
        self.run("two-ends", "-t", tub, "--delta", str(2**-8),
                 "--span", "0.125", "-o", out2)
        assert open(out1, "rb").read() == open(out2, "rb").read()

    def test_anneal_ledger_resume(self, tmp_path):
        out = str(tmp_path / "ann.plc")
        ledger = str(tmp_path / "ledger.csv")
        args = ["anneal", "--objective", "distance", "--n", "4", "--dim", "2",
                "--moves", "50", "--epochs", "3", "--seed", "5",
                "--ledger", ledger, "-o", out]
        assert self.run(*args) == 0
        rows = open(ledger).read().splitlines()
        assert len(rows) == 2
        assert self.run(*args) == 0  # replay hits the ledger and skips
        assert len(open(ledger).read().splitlines()) == 2

    def test_min_triangle_and_pipeline(self, tmp_path, rng):
        pts = str(tmp_path / "p.pts")
        write_points(pts, rng.uniform(0, 1, (64, 3)))
        out = str(tmp_path / "tri.csv")
        assert self.run("min-triangle", "-p", pts, "--method", "brute",
                        "-o", out) == 0
        out2 = str(tmp_path / "pipe.csv")
        assert self.run("pair-pipeline", "-p", pts, "-o", out2) == 0

    def test_exponent_command(self, tmp_path):
        out = str(tmp_path / "exp.csv")
        assert self.run("exponent", "--family", "vertical_count",
                        "--rungs", "0.125,0.0625,0.03125", "--dim", "3",
                        "-o", out) == 0
        text = open(out).read()
        assert "slope" in text

    def test_highlow_and_conc(self, tmp_path, rng):
        pts = str(tmp_path / "p.pts")
        plc = str(tmp_path / "l.plc")
        write_points(pts, rng.uniform(0, 1, (60, 3)))
        write_config(plc, random_config(60, 3, 5))
        out = str(tmp_path / "hl.csv")
        assert self.run("highlow-check", "-p", pts, "-l", plc,
                        "--delta", "0.0625", "--variant", "basic", "-o", out) == 0
        out2 = str(tmp_path / "conc.csv")
        assert self.run("conc", "-p", plc, "--mode", "config", "--u", "0.3",
                        "--v", "0.5", "--w", "0.5", "-o", out2) == 0

    def test_console_script_installed(self):
        res = subprocess.run([sys.executable, "-m", "heilbronn.cli", "--help"],
                             capture_output=True, text=True)
        assert res.returncode == 0
        assert "two-ends" in res.stdout
