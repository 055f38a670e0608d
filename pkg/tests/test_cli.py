import json
import math
import os
import stat

import pytest
from click.testing import CliRunner

from optionforge.cli import main

FLAGSHIP_ARGS = [
    "--type", "call", "--spot", "100", "--strike", "120",
    "--rate", "0.02", "--sigma", "0.5", "--maturity", "0.24383561643835616",
]


@pytest.fixture
def runner():
    return CliRunner()


class TestPrice:
    def test_flagship_call(self, runner):
        result = runner.invoke(main, ["price", *FLAGSHIP_ARGS])
        assert result.exit_code == 0
        payload = json.loads(result.output)
        assert payload["price"] == pytest.approx(3.718200814328840, rel=1e-10)
        assert payload["price_display"] == "3.72"
        assert payload["method"] == "analytic"
        assert payload["inputs"]["time_days"] == 89

    def test_put_at_zero_spot(self, runner):
        result = runner.invoke(
            main,
            ["price", "--type", "put", "--spot", "0", "--strike", "120",
             "--rate", "0.02", "--sigma", "0.5", "--maturity", "0.24383561643835616"],
        )
        assert result.exit_code == 0
        payload = json.loads(result.output)
        assert payload["price"] == pytest.approx(119.41621914317047, abs=1e-8)

    def test_zero_sigma_exits_2_naming_sigma(self, runner):
        args = list(FLAGSHIP_ARGS)
        args[args.index("0.5")] = "0"
        result = runner.invoke(main, ["price", *args])
        assert result.exit_code == 2
        assert "sigma" in result.output

    @pytest.mark.parametrize("method", ["cn", "heat", "mc"])
    def test_alternate_methods(self, runner, method):
        result = runner.invoke(main, ["price", *FLAGSHIP_ARGS, "--method", method, "--paths", "50000"])
        assert result.exit_code == 0
        payload = json.loads(result.output)
        assert payload["price"] == pytest.approx(3.7182, rel=0.05)

    def test_unknown_method_exits_2(self, runner):
        result = runner.invoke(main, ["price", *FLAGSHIP_ARGS, "--method", "tree"])
        assert result.exit_code == 2

    def test_grid_override(self, runner):
        result = runner.invoke(
            main, ["price", *FLAGSHIP_ARGS, "--method", "cn", "--grid", "100x80", "--smax", "500"]
        )
        assert result.exit_code == 0
        payload = json.loads(result.output)
        assert payload["diagnostics"]["n_space"] == 100
        assert payload["diagnostics"]["n_time"] == 80
        assert payload["diagnostics"]["s_max"] == 500.0


class TestConverge:
    def test_default_run_shows_second_order(self, runner):
        result = runner.invoke(main, ["converge", *FLAGSHIP_ARGS, "--levels", "4"])
        assert result.exit_code == 0
        last = result.output.strip().splitlines()[-1]
        order = float(last.split()[-1])
        assert 1.8 <= order <= 2.2

    def test_too_few_levels_exits_2(self, runner):
        result = runner.invoke(main, ["converge", *FLAGSHIP_ARGS, "--levels", "2"])
        assert result.exit_code == 2

    def test_report_files(self, runner, tmp_path):
        out = tmp_path / "report"
        result = runner.invoke(
            main, ["converge", *FLAGSHIP_ARGS, "--levels", "3", "--out", str(out)]
        )
        assert result.exit_code == 0
        assert (out / "convergence.csv").exists()
        assert (out / "convergence.png").exists()
        header = (out / "convergence.csv").read_text().splitlines()[0]
        assert header == "n_space,n_time,h,error,observed_order"


class TestSurface:
    def test_explicit_sigmas_write_two_files(self, runner, tmp_path):
        result = runner.invoke(
            main,
            ["surface", *FLAGSHIP_ARGS, "--sigmas", "0.2,0.4", "--outdir", str(tmp_path)],
        )
        assert result.exit_code == 0
        manifest = json.loads(result.output.strip().splitlines()[-1])
        assert len(manifest["written"]) == 2
        assert (tmp_path / "surface_sigma=0.2.csv").exists()
        assert (tmp_path / "surface_sigma=0.4.csv").exists()

    def test_seeded_runs_are_bit_identical(self, runner, tmp_path):
        dirs = [tmp_path / "a", tmp_path / "b"]
        for d in dirs:
            result = runner.invoke(
                main,
                ["surface", *FLAGSHIP_ARGS, "--seed", "42", "--count", "5",
                 "--outdir", str(d)],
            )
            assert result.exit_code == 0
        files_a = sorted(p.name for p in dirs[0].iterdir())
        files_b = sorted(p.name for p in dirs[1].iterdir())
        assert files_a == files_b and len(files_a) == 5
        for name in files_a:
            assert (dirs[0] / name).read_text() == (dirs[1] / name).read_text()

    def test_unwritable_outdir_exits_3(self, runner, tmp_path):
        locked = tmp_path / "locked"
        locked.mkdir()
        os.chmod(locked, stat.S_IRUSR | stat.S_IXUSR)
        if os.access(locked / "probe", os.W_OK) or os.geteuid() == 0:
            pytest.skip("permissions not enforceable (running as root)")
        result = runner.invoke(
            main,
            ["surface", *FLAGSHIP_ARGS, "--sigmas", "0.2", "--outdir", str(locked / "sub")],
        )
        assert result.exit_code == 3

    def test_plot_flag_renders_profiles(self, runner, tmp_path):
        result = runner.invoke(
            main,
            ["surface", *FLAGSHIP_ARGS, "--sigmas", "0.2,0.4", "--outdir", str(tmp_path), "--plot"],
        )
        assert result.exit_code == 0
        assert (tmp_path / "surfaces.png").exists()

    def test_worker_count_does_not_change_files(self, runner, tmp_path):
        dirs = {1: tmp_path / "w1", 4: tmp_path / "w4"}
        for workers, outdir in dirs.items():
            result = runner.invoke(
                main,
                ["surface", *FLAGSHIP_ARGS, "--seed", "42", "--count", "4",
                 "--workers", str(workers), "--outdir", str(outdir)],
            )
            assert result.exit_code == 0
        names = sorted(p.name for p in dirs[1].iterdir())
        assert names == sorted(p.name for p in dirs[4].iterdir())
        for name in names:
            assert (dirs[1] / name).read_bytes() == (dirs[4] / name).read_bytes()


class TestSimulate:
    def test_shape(self, runner, tmp_path):
        out = tmp_path / "paths.csv"
        result = runner.invoke(
            main,
            ["simulate", "--s0", "100", "--mu", "0.05", "--sigma", "0.3",
             "--horizon", "1", "--steps", "5", "--paths", "3", "--seed", "1",
             "--out", str(out)],
        )
        assert result.exit_code == 0
        lines = out.read_text().strip().splitlines()
        assert len(lines) == 4  # header + 3 paths
        assert all(len(line.split(",")) == 7 for line in lines)

    def test_same_seed_same_file(self, runner, tmp_path):
        outs = [tmp_path / "a.csv", tmp_path / "b.csv"]
        for out in outs:
            result = runner.invoke(
                main,
                ["simulate", "--s0", "100", "--mu", "0.05", "--sigma", "0.3",
                 "--horizon", "1", "--steps", "8", "--paths", "64", "--seed", "9",
                 "--out", str(out)],
            )
            assert result.exit_code == 0
        assert outs[0].read_text() == outs[1].read_text()

    def test_vanishing_volatility_terminal(self, runner, tmp_path):
        out = tmp_path / "flat.csv"
        result = runner.invoke(
            main,
            ["simulate", "--s0", "100", "--mu", "0.05", "--sigma", "1e-12",
             "--horizon", "1", "--steps", "4", "--paths", "2", "--seed", "1",
             "--out", str(out)],
        )
        assert result.exit_code == 0
        last = float(out.read_text().strip().splitlines()[1].split(",")[-1])
        assert last == pytest.approx(100.0 * math.exp(0.05), rel=1e-9)

    def test_capacity_exits_3(self, runner, tmp_path):
        result = runner.invoke(
            main,
            ["simulate", "--s0", "100", "--mu", "0.0", "--sigma", "0.3",
             "--horizon", "1", "--steps", "1000", "--paths", "10000000", "--seed", "1",
             "--out", str(tmp_path / "big.csv")],
        )
        assert result.exit_code == 3

    def test_plot_flag(self, runner, tmp_path):
        out = tmp_path / "paths.csv"
        result = runner.invoke(
            main,
            ["simulate", "--s0", "100", "--mu", "0.05", "--sigma", "0.3",
             "--horizon", "1", "--steps", "5", "--paths", "3", "--seed", "1",
             "--out", str(out), "--plot"],
        )
        assert result.exit_code == 0
        assert (tmp_path / "paths.png").exists()


class TestServe:
    def test_port_env_fallback(self, runner, monkeypatch):
        captured = {}

        def fake_run(app, host, port):
            captured["host"] = host
            captured["port"] = port

        import uvicorn

        monkeypatch.setattr(uvicorn, "run", fake_run)
        monkeypatch.setenv("OPTIONFORGE_PORT", "9123")
        result = runner.invoke(main, ["serve"])
        assert result.exit_code == 0
        assert captured == {"host": "127.0.0.1", "port": 9123}

    def test_port_flag_wins(self, runner, monkeypatch):
        captured = {}
        import uvicorn

        monkeypatch.setattr(uvicorn, "run", lambda app, host, port: captured.update(port=port))
        monkeypatch.setenv("OPTIONFORGE_PORT", "9123")
        result = runner.invoke(main, ["serve", "--port", "7000"])
        assert result.exit_code == 0
        assert captured["port"] == 7000


class TestHelp:
    @pytest.mark.parametrize("command", ["price", "converge", "surface", "simulate", "serve"])
    def test_subcommand_help(self, runner, command):
        result = runner.invoke(main, [command, "--help"])
        assert result.exit_code == 0
        assert "--help" in result.output
