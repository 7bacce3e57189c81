import math

import pytest

from mfelab.cli import main, parse_config
from mfelab.errors import ConfigError

BASE_CONFIG = """\
# baseline configuration
n = 2
lambda = 0.0
nonlinearity = power
p = 2
alpha_mode = free
grid_nodes = 256
tol = 1e-12
modes = 0,1,2,3
eigen_count = 3
seed = 7
"""

PINNED_CONFIG = """\
n = 2
lambda = 0.0
nonlinearity = power
p = 2
alpha_mode = pinned
alpha_value = 0
grid = graded
grid_nodes = 513
tol = 1e-10
modes = 0
eigen_count = 1
"""


@pytest.fixture()
def base_cfg(tmp_path):
    path = tmp_path / "base.cfg"
    path.write_text(BASE_CONFIG)
    return path


def _read_csv(path):
    lines = path.read_text().splitlines()
    header = lines[0].split(",")
    return header, [line.split(",") for line in lines[1:]]


class TestConfigParsing:
    def test_roundtrip(self, base_cfg):
        config = parse_config(base_cfg)
        assert config.problem.n == 2
        assert config.problem.lam == 0.0
        assert config.grid_nodes == 256
        assert config.modes == [0, 1, 2, 3]

    def test_missing_key_named(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("n = 2\nnonlinearity = power\n")
        with pytest.raises(ConfigError, match="lambda"):
            parse_config(path)

    def test_small_grid_rejected(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text(BASE_CONFIG.replace("grid_nodes = 256", "grid_nodes = 32"))
        with pytest.raises(ConfigError):
            parse_config(path)


class TestSolveCommand:
    def test_artifacts_and_meta(self, base_cfg, tmp_path):
        out = tmp_path / "run"
        assert main(["solve", "--config", str(base_cfg), "--out", str(out)]) == 0
        header, rows = _read_csv(out / "solution.csv")
        assert header == ["r", "psi", "V"]
        assert len(rows) == 256
        meta = dict(
            line.split("=", 1) for line in (out / "solution.meta").read_text().splitlines()
        )
        assert float(meta["alpha"]) == pytest.approx(math.pi**-0.5, abs=1e-8)
        assert meta["boundary_class"] == "Positive"

    def test_pinned_meta_reports_vanishing(self, tmp_path):
        cfg = tmp_path / "pinned.cfg"
        cfg.write_text(PINNED_CONFIG)
        out = tmp_path / "run"
        assert main(["solve", "--config", str(cfg), "--out", str(out)]) == 0
        meta = dict(
            line.split("=", 1) for line in (out / "solution.meta").read_text().splitlines()
        )
        assert meta["boundary_class"] == "Vanishing"
        assert float(meta["beta"]) == pytest.approx(1.0)
        assert float(meta["v0"]) > 0

    def test_missing_key_exits_one(self, tmp_path, capsys):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("n = 2\nnonlinearity = power\n")
        assert main(["solve", "--config", str(cfg)]) == 1
        assert "lambda" in capsys.readouterr().err


class TestSpectrumCommand:
    def test_rows_and_verdicts(self, base_cfg, tmp_path):
        out = tmp_path / "run"
        assert main(["spectrum", "--config", str(base_cfg), "--out", str(out)]) == 0
        header, rows = _read_csv(out / "spectrum.csv")
        eigen_rows = [r for r in rows if r[0].lstrip("-").isdigit()]
        lam = 0.0
        for row in eigen_rows:
            assert lam + float(row[2]) > 0
            if int(row[0]) >= 2:
                assert float(row[2]) > 0
        mode0 = [r for r in eigen_rows if r[0] == "0"]
        h = 1.0 / 255
        for row in mode0:
            assert abs(float(row[4])) <= 10 * h
        special = {r[0]: r[2] for r in rows if not r[0].lstrip("-").isdigit()}
        assert float(special["sigma1_minus_nu1"]) > 0
        assert special["radial_ok"] == "1"
        assert (out / "eigenfunction_m0_1.csv").is_file()

    def test_deterministic_output(self, base_cfg, tmp_path):
        out1, out2 = tmp_path / "a", tmp_path / "b"
        main(["spectrum", "--config", str(base_cfg), "--out", str(out1)])
        main(["spectrum", "--config", str(base_cfg), "--out", str(out2)])
        assert (out1 / "spectrum.csv").read_bytes() == (out2 / "spectrum.csv").read_bytes()


class TestNodalCommand:
    def test_bounds_and_alternation(self, base_cfg, tmp_path):
        out = tmp_path / "run"
        assert main(["nodal", "--config", str(base_cfg), "--out", str(out)]) == 0
        header, rows = _read_csv(out / "nodal.csv")
        assert header == ["mode", "index", "domain_count", "bound", "m_values", "verdict"]
        for row in rows:
            k = int(row[1])
            count = int(row[2])
            assert count <= 2 * k
            assert row[5] == "ok"
            values = [float(s) for s in row[4].split(";")]
            signs = [math.copysign(1, v) for v in values]
            assert signs == [(-1.0) ** j for j in range(len(values))]
        first = [r for r in rows if r[1] == "1"][0]
        assert int(first[2]) <= 2


class TestInertiaCommand:
    def test_golden_print(self, tmp_path, capsys):
        assert main(["inertia", "--m", "5,-3,5,-3", "--out", str(tmp_path)]) == 0
        out = capsys.readouterr().out
        assert "60.000000000 12.000000000 0.000000000 -20.000000000" in out

    def test_five_domain_print(self, tmp_path, capsys):
        assert main(["inertia", "--m", "5,-3,5,-3,5", "--out", str(tmp_path)]) == 0
        out = capsys.readouterr().out
        assert "75.000000000 27.000000000 0.000000000 -45.000000000 -45.000000000" in out

    def test_random_sweep(self, tmp_path, capsys):
        assert main(
            ["inertia", "--random", "4", "100", "42", "--out", str(tmp_path)]
        ) == 0
        out = capsys.readouterr().out
        assert "100/100 certificates found" in out
        assert "100/100 interlacing checks passed" in out
        assert (tmp_path / "inertia.csv").is_file()

    def test_illegal_m_exits_one(self, tmp_path, capsys):
        assert main(["inertia", "--m", "5,3", "--out", str(tmp_path)]) == 1
        assert "alternate" in capsys.readouterr().err
