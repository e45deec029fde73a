import json
import subprocess
import sys

import pytest

from qesquartic import cache, cli


class TestParseComplex:
    @pytest.mark.parametrize("text,value", [
        ("3", 3 + 0j),
        ("-2.5", -2.5 + 0j),
        ("0.5-0.5i", 0.5 - 0.5j),
        ("1+1i", 1 + 1j),
        ("-2i", -2j),
        ("i", 1j),
        ("0.8-0.666666i", 0.8 - 0.666666j),
        ("1+1j", 1 + 1j),
    ])
    def test_values(self, text, value):
        assert cli.parse_complex(text) == value

    def test_rejects_garbage(self):
        with pytest.raises(ValueError):
            cli.parse_complex("not a number")


class TestFigureCommands:
    def test_figTau_small(self, tmp_path, tmp_cache):
        out = cli.cmd_figure("figTau", out_dir=tmp_path / "ft",
                             cache_dir=tmp_cache, overrides={"k_max": 24})
        files = sorted(p.name for p in out.iterdir())
        assert "manifest.json" in files
        assert sum(f.endswith(".csv") for f in files) == 3
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["figure"] == "figTau"
        assert manifest["config"]["k_max"] == 24

    def test_fig1_small(self, tmp_path, tmp_cache):
        out = cli.cmd_figure("fig1", out_dir=tmp_path / "f1",
                             cache_dir=tmp_cache, overrides={"n": 24})
        body = (out / "scaled_spectrum.csv").read_text().splitlines()
        assert body[0] == "re,im"
        assert len(body) == 1 + 25

    def test_triangle10_small(self, tmp_path, tmp_cache):
        out = cli.cmd_figure("triangle10", out_dir=tmp_path / "t10",
                             cache_dir=tmp_cache, overrides={"n": 4})
        grid = json.loads((out / "grid_index.json").read_text())
        assert len(grid["points"]) == 10

    def test_triangle_small(self, tmp_path, tmp_cache):
        out = cli.cmd_figure("triangle", out_dir=tmp_path / "tri",
                             cache_dir=tmp_cache, overrides={"n": 6})
        rep = json.loads((out / "comparison.json").read_text())
        assert rep["card_a"] == rep["card_b"] == 21

    def test_figslopes(self, tmp_path, tmp_cache):
        out = cli.cmd_figure("figslopes", out_dir=tmp_path / "fs",
                             cache_dir=tmp_cache)
        rep = json.loads((out / "deviation_phi0.json").read_text())
        assert rep["max_deviation"] < 5e-3

    def test_figAtau_curve(self, tmp_path, tmp_cache):
        out = cli.cmd_figure("figAtau", out_dir=tmp_path / "at",
                             cache_dir=tmp_cache, overrides={"samples": 50})
        rows = (out / "threshold_curve.csv").read_text().splitlines()
        assert rows[0] == "tau,a"
        assert len(rows) == 52
        # the curve tops out at the real threshold value
        tops = max(float(r.split(",")[1]) for r in rows[1:])
        assert tops == pytest.approx(3 / 4 ** (1 / 3), rel=1e-3)

    def test_figA3_interval(self, tmp_path, tmp_cache):
        out = cli.cmd_figure("figA3", out_dir=tmp_path / "a3",
                             cache_dir=tmp_cache, overrides={"tau_count": 6})
        rep = json.loads((out / "interval.json").read_text())
        lo, hi = rep["interval"]
        assert lo == pytest.approx(-1.63859, abs=1e-4)
        assert hi == pytest.approx(1.80861, abs=1e-4)

    def test_figA1_small(self, tmp_path, tmp_cache):
        out = cli.cmd_figure("figA1", out_dir=tmp_path / "a1",
                             cache_dir=tmp_cache,
                             overrides={"n": 20, "tau_count": 5})
        sup = json.loads((out / "support_a0.json").read_text())
        assert set(sup) == {"a", "tau_grid", "legs", "endpoints"}

    def test_figA_small(self, tmp_path, tmp_cache):
        out = cli.cmd_figure("figA", out_dir=tmp_path / "fa",
                             cache_dir=tmp_cache, overrides={"n": 20})
        eps = json.loads((out / "endpoints_a1.json").read_text())
        assert len(eps["endpoints"]) == 3

    def test_lattice_small(self, tmp_path, tmp_cache):
        out = cli.cmd_figure("lattice", out_dir=tmp_path / "lat",
                             cache_dir=tmp_cache,
                             overrides={"n": 4, "window": (-3, 3, -3, 3)})
        rep = json.loads((out / "drift.json").read_text())
        assert rep["count_a"] > 0
        assert rep["mean_drift"] < rep["local_spacing"]

    def test_unknown_name(self):
        with pytest.raises(ValueError):
            cli.cmd_figure("nope")


class TestDeterminism:
    def test_byte_identical_rerun(self, tmp_path, tmp_cache):
        o1 = cli.cmd_figure("figTau", out_dir=tmp_path / "r1",
                            cache_dir=tmp_cache, overrides={"k_max": 30})
        o2 = cli.cmd_figure("figTau", out_dir=tmp_path / "r2",
                            cache_dir=tmp_cache, overrides={"k_max": 30})
        for name in sorted(p.name for p in o1.iterdir()):
            assert (o1 / name).read_bytes() == (o2 / name).read_bytes()

    def test_cached_figure_rerun(self, tmp_path, tmp_cache):
        ov = {"n": 10}
        o1 = cli.cmd_figure("triangle10", out_dir=tmp_path / "c1",
                            cache_dir=tmp_cache, overrides=ov)
        o2 = cli.cmd_figure("triangle10", out_dir=tmp_path / "c2",
                            cache_dir=tmp_cache, overrides=ov)
        for name in sorted(p.name for p in o1.iterdir()):
            assert (o1 / name).read_bytes() == (o2 / name).read_bytes()


class TestSweepAndCache:
    def test_sweep_serial(self, tmp_path, tmp_cache):
        out = cli.cmd_sweep("eigenvalues", [3, 5], a="1+1i",
                            out_dir=tmp_path / "sw", cache_dir=tmp_cache)
        names = sorted(p.name for p in out.iterdir())
        assert names == ["eigenvalues_n3.csv", "eigenvalues_n5.csv",
                         "manifest.json"]

    def test_sweep_parallel_matches_serial(self, tmp_path, tmp_cache):
        o1 = cli.cmd_sweep("yv-zeros", [4, 6], out_dir=tmp_path / "s1",
                           cache_dir=tmp_cache, jobs=1)
        o2 = cli.cmd_sweep("yv-zeros", [4, 6], out_dir=tmp_path / "s2",
                           cache_dir=tmp_cache, jobs=2)
        for name in ("yv_zeros_n4.csv", "yv_zeros_n6.csv"):
            assert (o1 / name).read_bytes() == (o2 / name).read_bytes()

    def test_cache_ls_and_clear(self, tmp_cache):
        from qesquartic.branching import sigma_polynomial

        sigma_polynomial(4, cache_dir=tmp_cache)
        entries = cache.list_entries(tmp_cache)
        assert any(e.startswith("sigma-poly-4") for e in entries)
        removed = cache.clear(tmp_cache)
        assert removed >= 1
        assert cache.list_entries(tmp_cache) == []


class TestMainEntry:
    def test_help_runs(self):
        proc = subprocess.run(
            [sys.executable, "-m", "qesquartic.cli", "--help"],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0
        assert "figure" in proc.stdout

    def test_figure_via_main(self, tmp_path, tmp_cache):
        rc = cli.main(["figure", "figTau", "--grid", "18",
                       "--out", str(tmp_path / "m1"),
                       "--cache-dir", tmp_cache])
        assert rc == 0
        assert (tmp_path / "m1" / "manifest.json").exists()

    def test_config_precedence(self, tmp_path, tmp_cache):
        conf = tmp_path / "conf.json"
        conf.write_text(json.dumps({"out": str(tmp_path / "from-config")}))
        rc = cli.main(["figure", "figTau", "--grid", "18",
                       "--config", str(conf), "--cache-dir", tmp_cache])
        assert rc == 0
        assert (tmp_path / "from-config" / "manifest.json").exists()

    def test_cache_cli(self, tmp_path):
        rc = cli.main(["cache", "ls", "--cache-dir", str(tmp_path / "cc")])
        assert rc == 0
