import math
import subprocess
import sys

import numpy as np
import pytest

from fracburgers.cli import main, read_profile
from fracburgers.norms import convergence_study, error_norms, observed_orders


class TestErrorNorms:
    def test_identical(self):
        u = np.linspace(0, 1, 11)
        rep = error_norms(u, u, 0.1)
        assert (rep.l_inf, rep.l2) == (0.0, 0.0)

    def test_unit_difference(self):
        rep = error_norms(np.ones(11), np.zeros(11), 0.1)
        assert rep.l_inf == 1.0
        assert rep.l2 == pytest.approx(math.sqrt(0.9), rel=1e-15)
        assert rep.l2 == pytest.approx(0.9486833, abs=1e-7)

    def test_norm_inequality(self):
        rng = np.random.default_rng(1)
        for M in (4, 10, 100):
            h = 2.0 / M
            for _ in range(20):
                d = rng.normal(size=M + 1)
                rep = error_norms(d, np.zeros(M + 1), h)
                assert 0 <= rep.l2 <= math.sqrt(M * h) * rep.l_inf

    def test_length_checks(self):
        with pytest.raises(ValueError):
            error_norms(np.zeros(4), np.zeros(5), 0.1)
        with pytest.raises(ValueError):
            error_norms(np.zeros(2), np.zeros(2), 0.1)

    def test_observed_orders(self):
        assert observed_orders([1.0, 0.25, 0.0625])[1:] == [2.0, 2.0]
        assert observed_orders([1.0])[0] is None


def test_convergence_study_requires_exact():
    with pytest.raises(ValueError):
        convergence_study("example2", "time", 0.5, 0.1, 0.1, 1.0, 4)
    with pytest.raises(ValueError):
        convergence_study("mms", "diagonal", 0.5, 0.1, 0.1, 1.0, 4)


class TestSolveCommand:
    def test_example1_profile(self, tmp_path, capsys):
        out = tmp_path / "ex1.csv"
        code = main(["solve", "--problem", "example1", "--gamma", "1", "--h", "0.01",
                     "--tau", "0.01", "--T", "1", "--out", str(out)])
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "x,u_numeric,u_exact,abs_error"
        assert len(lines) == 602

        cols = read_profile(out)
        summary = read_profile(tmp_path / "ex1_errors.csv")
        rep = error_norms(cols["u_numeric"], cols["u_exact"], 0.01)
        assert rep.l_inf == summary["l_inf"][0]
        assert rep.l2 == summary["l2"][0]
        assert f"l_inf={rep.l_inf:.6e}" in capsys.readouterr().out

    def test_no_exact_solution(self, tmp_path):
        out = tmp_path / "ex2.csv"
        assert main(["solve", "--problem", "example2", "--gamma", "0.5", "--h", "0.1",
                     "--tau", "0.1", "--out", str(out)]) == 0
        assert out.read_text().splitlines()[0] == "x,u_numeric"
        assert not (tmp_path / "ex2_errors.csv").exists()

    def test_gate(self, tmp_path):
        args = ["solve", "--problem", "example1", "--h", "0.05", "--tau", "0.05",
                "--out", str(tmp_path / "g.csv")]
        assert main(args + ["--max-linf", "1e-1"]) == 0
        assert main(args + ["--max-linf", "1e-9"]) == 1


class TestConverge:
    def test_time_table(self, tmp_path):
        out = tmp_path / "rates.csv"
        code = main(["converge-time", "--problem", "mms", "--gamma", "0.5", "--h", "0.0625",
                     "--tau", "0.1", "--T", "0.4", "--levels", "4", "--out", str(out)])
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "level,h,tau,l_inf,l2,order_inf,order_l2"
        assert len(lines) == 5
        rows = [ln.split(",") for ln in lines[1:]]
        assert rows[0][5] == "" and rows[0][6] == ""
        taus = [float(r[2]) for r in rows]
        assert taus == [0.1, 0.05, 0.025, 0.0125]
        errs = [float(r[3]) for r in rows]
        orders = [float(r[5]) for r in rows[1:]]
        np.testing.assert_allclose(orders, np.log2(np.array(errs[:-1]) / errs[1:]))

    def test_space_table(self, tmp_path):
        out = tmp_path / "space.csv"
        assert main(["converge-space", "--problem", "mms", "--gamma", "0.5", "--h", "0.25",
                     "--tau", "0.001", "--T", "0.05", "--levels", "4", "--out", str(out)]) == 0
        hs = [float(ln.split(",")[1]) for ln in out.read_text().splitlines()[1:]]
        assert hs == [0.25, 0.125, 0.0625, 0.03125]

    def test_order_gate_and_levels(self, tmp_path):
        base = ["converge-time", "--problem", "mms", "--gamma", "0.5", "--h", "0.125",
                "--tau", "0.1", "--T", "0.4", "--out", str(tmp_path / "r.csv")]
        assert main(base + ["--levels", "4", "--min-order", "5"]) == 1
        assert main(base + ["--levels", "3"]) == 2

    def test_problem_without_exact(self, tmp_path):
        assert main(["converge-time", "--problem", "example2", "--gamma", "0.5", "--h", "0.1",
                     "--tau", "0.1", "--out", str(tmp_path / "x.csv")]) == 2


def test_sweep_gamma(tmp_path):
    outdir = tmp_path / "profiles"
    assert main(["sweep-gamma", "--problem", "example2", "--h", "0.02", "--tau", "0.02",
                 "--T", "1", "--out", str(outdir)]) == 0
    files = sorted(p.name for p in outdir.iterdir())
    assert files == ["profile_gamma_0.2.csv", "profile_gamma_0.5.csv", "profile_gamma_0.8.csv"]
    u02 = np.array(read_profile(outdir / "profile_gamma_0.2.csv")["u_numeric"])
    u08 = np.array(read_profile(outdir / "profile_gamma_0.8.csv")["u_numeric"])
    assert np.abs(u02 - u08).max() > 1e-3


class TestConfig:
    def test_file_with_flag_override(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# example run\nproblem = example1\nh = 0.05\ntau = 0.05\nT = 0.5\n"
                       f"out = {tmp_path / 'from_file.csv'}\n")
        assert main(["solve", "--config", str(cfg)]) == 0
        assert (tmp_path / "from_file.csv").exists()
        assert main(["solve", "--config", str(cfg), "--out", str(tmp_path / "flag.csv")]) == 0
        assert len((tmp_path / "flag.csv").read_text().splitlines()) == 122

    def test_errors_report_line_and_key(self, tmp_path, caplog):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("problem = example1\nh = abc\n")
        assert main(["solve", "--config", str(cfg), "--out", "x.csv"]) == 2
        assert "bad.cfg:2" in caplog.text and "'h'" in caplog.text

        cfg.write_text("problem = example1\nwidth = 3\n")
        assert main(["solve", "--config", str(cfg), "--out", "x.csv"]) == 2
        assert "unknown key 'width'" in caplog.text

        cfg.write_text("problem example1\n")
        assert main(["solve", "--config", str(cfg), "--out", "x.csv"]) == 2

    def test_missing_and_invalid_values(self, tmp_path):
        assert main(["solve", "--problem", "example1"]) == 2
        assert main(["solve", "--problem", "example1", "--h", "-1", "--out", "x.csv"]) == 2
        # spacing that does not divide the domain
        assert main(["solve", "--problem", "example1", "--h", "0.07",
                     "--out", str(tmp_path / "x.csv")]) == 2


def test_module_entry_point(tmp_path):
    out = tmp_path / "m.csv"
    proc = subprocess.run(
        [sys.executable, "-m", "fracburgers", "solve", "--problem", "example1", "--h", "0.1",
         "--tau", "0.1", "--out", str(out)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert out.exists()
