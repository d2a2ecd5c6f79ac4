import json

import pytest

from entrogeo.cli import main
from entrogeo.fileio import read_curve_csv


def write_config(tmp_path, text, name="exp.ini"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


QUAD_SOLVE = """
[backend]
kind = quadratic
dim = 1
center = 0
strength = 1

[endpoints]
x = 1
y = 2

[run]
command = solve
eps = 0.1
seed = 0

[output]
directory = out
"""

QUAD_SWEEP = """
[backend]
kind = quadratic
dim = 1
center = 0
strength = 1

[endpoints]
x = 1
y = 2

[run]
command = sweep
eps_list = 0, 0.05, 0.1, 0.15
seed = 0

[output]
directory = out
"""

DENSITY_SOLVE = """
[backend]
kind = density
entropy = boltzmann
n = 128
dx = 0.171875
x0 = -10

[endpoints]
x = gaussian(0, 1)
y = gaussian(2, 1)

[run]
command = solve
eps = 0.1
n_time = 31
seed = 0

[output]
directory = out
"""


class TestSolveCommand:
    def test_quadratic_happy_path(self, tmp_path):
        cfg = write_config(tmp_path, QUAD_SOLVE)
        assert main([cfg]) == 0
        result = json.loads((tmp_path / "out" / "result.json").read_text())
        assert result["converged"] is True
        assert result["cost"] == pytest.approx(result["kinetic"] + 0.01 * result["fisher"])
        curve = read_curve_csv(tmp_path / "out" / "curve.csv")
        assert curve.points[0][0] == 1.0 and curve.points[-1][0] == 2.0

    def test_density_happy_path(self, tmp_path):
        cfg = write_config(tmp_path, DENSITY_SOLVE)
        assert main([cfg]) == 0
        curve = read_curve_csv(tmp_path / "out" / "curve.csv")
        assert curve.times.size == 33

    def test_negative_eps_exits_1(self, tmp_path, capsys):
        cfg = write_config(tmp_path, QUAD_SOLVE.replace("eps = 0.1", "eps = -1"))
        assert main([cfg]) == 1
        assert "eps" in capsys.readouterr().err

    def test_unknown_key_exits_1(self, tmp_path, capsys):
        cfg = write_config(tmp_path, QUAD_SOLVE.replace("strength = 1", "strength = 1\nbogus = 2"))
        assert main([cfg]) == 1
        assert "bogus" in capsys.readouterr().err

    def test_forced_non_convergence_exits_2(self, tmp_path):
        cfg = write_config(
            tmp_path,
            QUAD_SOLVE.replace("eps = 0.1", "eps = 0.3\nmax_iter = 1\ngrad_tol = 1e-14"),
        )
        assert main([cfg]) == 2
        result = json.loads((tmp_path / "out" / "result.json").read_text())
        assert result["converged"] is False

    def test_missing_config_exits_1(self, tmp_path):
        assert main([str(tmp_path / "nope.ini")]) == 1


class TestSweepCommand:
    def test_quadratic_sweep_outputs(self, tmp_path):
        cfg = write_config(tmp_path, QUAD_SWEEP)
        assert main([cfg]) == 0
        profile = (tmp_path / "out" / "profile.csv").read_text().splitlines()
        assert profile[0] == "eps,cost,kinetic,fisher,converged"
        assert len(profile) == 5
        diag = json.loads((tmp_path / "out" / "diagnostics.json").read_text())
        assert diag["taylor"]["pass"] is True
        assert diag["gamma"]["pass"] is True
        assert diag["fisher_monotonicity_violation"] <= 1e-6

    def test_taylor_requires_zero_row(self, tmp_path, capsys):
        cfg = write_config(tmp_path, QUAD_SWEEP.replace("eps_list = 0, ", "eps_list = "))
        assert main([cfg]) == 1
        assert "eps = 0" in capsys.readouterr().err

    def test_taylor_can_be_disabled(self, tmp_path):
        cfg = write_config(
            tmp_path,
            QUAD_SWEEP.replace("eps_list = 0, ", "eps_list = ").replace(
                "seed = 0", "seed = 0\ntaylor = false"
            ),
        )
        assert main([cfg]) == 0

    def test_byte_identical_reruns(self, tmp_path):
        cfg = write_config(tmp_path, QUAD_SWEEP)
        assert main([cfg, "--output", str(tmp_path / "a")]) == 0
        assert main([cfg, "--output", str(tmp_path / "b")]) == 0
        for name in ("profile.csv", "diagnostics.json"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


class TestVerifyCommand:
    def test_quadratic_suite_passes(self, tmp_path, capsys):
        cfg = write_config(tmp_path, """
[backend]
kind = quadratic
dim = 2

[run]
command = verify
seed = 0
""")
        assert main([cfg, "--output", str(tmp_path / "out")]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 10
        assert all("pass" in ln for ln in lines)
        records = json.loads((tmp_path / "out" / "diagnostics.json").read_text())
        assert all(set(r) == {"property", "worst_residual", "samples", "pass"} for r in records)

    def test_zero_tolerance_fails(self, tmp_path):
        cfg = write_config(tmp_path, """
[backend]
kind = quadratic
dim = 2

[run]
command = verify
seed = 0
properties = discrete_estimate
tolerance_discrete_estimate = 0
""")
        assert main([cfg, "--output", str(tmp_path / "out")]) == 2

    def test_unknown_property_exits_1(self, tmp_path, capsys):
        cfg = write_config(tmp_path, """
[backend]
kind = quadratic
dim = 2

[run]
command = verify
properties = wibble
""")
        assert main([cfg]) == 1
        assert "wibble" in capsys.readouterr().err

    def test_property_subset(self, tmp_path, capsys):
        cfg = write_config(tmp_path, """
[backend]
kind = quadratic
dim = 1

[run]
command = verify
seed = 1
properties = contraction, ede
""")
        assert main([cfg, "--output", str(tmp_path / "out")]) == 0
        records = json.loads((tmp_path / "out" / "diagnostics.json").read_text())
        assert [r["property"] for r in records] == ["contraction", "ede"]


class TestCsvEndpoints:
    def test_density_endpoint_from_csv(self, tmp_path):
        from entrogeo import GridDensity
        from entrogeo.density1d import density_to_csv

        n, dx, x0 = 128, 0.171875, -10.0
        density_to_csv(GridDensity.gaussian(0.1, 1.1, n, dx, x0),
                       tmp_path / "start.csv")
        cfg = write_config(tmp_path, DENSITY_SOLVE.replace(
            "x = gaussian(0, 1)", "x = csv:start.csv"))
        assert main([cfg]) == 0


class TestCurveRoundTrip:
    def test_density_curve_round_trips_exactly(self, tmp_path):
        cfg = write_config(tmp_path, DENSITY_SOLVE)
        assert main([cfg]) == 0
        path = tmp_path / "out" / "curve.csv"
        curve = read_curve_csv(path)
        from entrogeo.fileio import write_curve_csv

        again = tmp_path / "again.csv"
        write_curve_csv(curve, again)
        assert path.read_bytes() == again.read_bytes()
