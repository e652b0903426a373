import csv

import numpy as np
import pytest

from ecmkit.cli import main
from ecmkit.errors import (ConfigError, DuplicateYearError, MissingDataError, ParseError, SchemaError,
                           StageError)
from ecmkit.pipeline import RunConfig, ingest, load_config, run_pipeline, write_series_csv
from ecmkit.simulate import as_series, lending_growth_pair


def write(path, text):
    path.write_text(text, encoding="utf-8")
    return path


def annual_csv(path, seed=3):
    rng = np.random.default_rng(seed)
    years = np.arange(1994, 2011)
    gdp = 5e4 + np.cumsum(rng.normal(6e3, 9e3, 17))
    imf = np.abs(rng.normal(800, 500, 17))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("year,GDPcurrentUSD,IMF_Loans_currUSD\n")
        for y, g, i in zip(years, gdp, imf):
            fh.write(f"{y},{g:.1f},{i:.1f}\n")
    return path


def constructed_csv(path, n=200, seed=7):
    x, y = lending_growth_pair(n, np.random.default_rng(seed))
    write_series_csv(path, as_series(np.column_stack([x, y]), ["x", "y"], 1800))
    return path


class TestIngest:
    def test_seventeen_years(self, tmp_path):
        rows = "\n".join(f"{y},{100 + y}" for y in range(1994, 2011))
        (s,) = ingest(write(tmp_path / "d.csv", f"year,gdp\n{rows}\n"))
        assert len(s) == 17
        assert (s.start_year, s.end_year) == (1994, 2010)

    def test_rows_sorted(self, tmp_path):
        (s,) = ingest(write(tmp_path / "d.csv", "year,v\n2001,3\n1999,1\n2000,2\n"))
        assert s.start_year == 1999
        assert list(s.values) == [1.0, 2.0, 3.0]

    def test_empty_file(self, tmp_path):
        with pytest.raises(SchemaError):
            ingest(write(tmp_path / "d.csv", ""))

    def test_header_only(self, tmp_path):
        with pytest.raises(SchemaError):
            ingest(write(tmp_path / "d.csv", "year,gdp\n"))

    def test_first_column_must_be_year(self, tmp_path):
        with pytest.raises(SchemaError, match="year"):
            ingest(write(tmp_path / "d.csv", "date,gdp\n1,2\n"))

    def test_duplicate_year(self, tmp_path):
        text = "year,gdp\n2004,1\n2005,2\n2005,3\n2006,4\n"
        with pytest.raises(DuplicateYearError) as err:
            ingest(write(tmp_path / "d.csv", text))
        assert err.value.row == 4
        assert "2005" in str(err.value)

    def test_missing_column_lists_available(self, tmp_path):
        with pytest.raises(SchemaError, match=r"\['gdp', 'imf'\]"):
            ingest(write(tmp_path / "d.csv", "year,gdp,imf\n2000,1,2\n"), {"x": "loans"})

    def test_non_numeric_cell(self, tmp_path):
        with pytest.raises(ParseError) as err:
            ingest(write(tmp_path / "d.csv", "year,gdp\n2000,1\n2001,abc\n"))
        assert err.value.row == 3

    def test_gap(self, tmp_path):
        with pytest.raises(MissingDataError, match="2001"):
            ingest(write(tmp_path / "d.csv", "year,gdp\n2000,1\n2002,3\n"))

    def test_blank_cell(self, tmp_path):
        with pytest.raises(MissingDataError):
            ingest(write(tmp_path / "d.csv", "year,gdp\n2000,1\n2001,\n"))

    def test_mapping(self, tmp_path):
        out = ingest(write(tmp_path / "d.csv", "year,A,B\n2000,1,2\n2001,3,4\n"), ["b=B", "a=A"])
        assert [s.name for s in out] == ["b", "a"]
        assert list(out[0].values) == [2.0, 4.0]

    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(0)
        series = as_series(rng.standard_normal((30, 2)) * 1e6, ["a", "b"], 1990)
        write_series_csv(tmp_path / "rt.csv", series)
        assert ingest(tmp_path / "rt.csv") == series


class TestConfig:
    def test_load(self, tmp_path):
        cfg = load_config(write(tmp_path / "run.cfg", """
            # comment
            input = a.csv, b.csv
            columns = imf=IMF_Loans_currUSD, gdp=GDPcurrentUSD
            start_year = 1994
            end_year = 2010
            deterministic.gdp = constant_and_trend
            significance = 10%
            irf_orthogonalized = no
        """.replace("            ", "")))
        assert cfg.inputs == ["a.csv", "b.csv"]
        assert cfg.columns == {"imf": "IMF_Loans_currUSD", "gdp": "GDPcurrentUSD"}
        assert cfg.det_for("gdp").value == "constant_and_trend"
        assert cfg.det_for("imf").value == "constant"
        assert cfg.significance == 0.10
        assert cfg.irf_orthogonalized is False
        assert cfg.resolve("a.csv") == tmp_path / "a.csv"

    @pytest.mark.parametrize("extra,match", [
        ("columns = gdp", "two variables"),
        ("significance = 0.2", "significance"),
        ("start_year = 2010\nend_year = 1994", "empty"),
        ("lag_criterion = bic", "lag_criterion"),
        ("frobnicate = 1", "unknown"),
        ("max_lag = four", "integer"),
        ("deterministic.zzz = constant", "unknown series"),
    ])
    def test_invalid(self, tmp_path, extra, match):
        base = {"input": "a.csv", "columns": "a, b"}
        lines = [f"{k} = {v}" for k, v in base.items() if not extra.startswith(k)]
        with pytest.raises(ConfigError, match=match):
            load_config(write(tmp_path / "bad.cfg", "\n".join(lines + [extra]) + "\n"))

    def test_single_variable_rejected(self):
        with pytest.raises(ConfigError):
            RunConfig(inputs=["d.csv"], columns={"x": "x"})


@pytest.fixture
def constructed_config(tmp_path):
    constructed_csv(tmp_path / "data.csv")
    return RunConfig(inputs=["data.csv"], columns={"x": "x", "y": "y"}, base_dir=str(tmp_path),
                     output_dir="out", keep_intermediates=True)


class TestRunPipeline:
    def test_constructed_data(self, constructed_config):
        rep = run_pipeline(constructed_config)
        assert rep.integration_order("x").label == "I(0)"
        assert rep.integration_order("y").label == "I(1)"
        assert rep.gate.decision == "skip"
        assert rep.granger("x", "y").rejects(0.10)
        assert not rep.granger("y", "x").rejects(0.10)
        eq = rep.vecm.equations[rep.vecm.index("y")]
        assert eq.coef("L1.D.x") > 0
        assert rep.vecm.rank == 0

    def test_outputs(self, constructed_config):
        rep = run_pipeline(constructed_config)
        root = constructed_config.out_path
        for rel in ("report.txt", "meta.txt", "tables/unit_root.csv", "tables/granger_levels.csv",
                    "tables/granger_corrected.csv", "tables/vecm.csv", "plots/series.csv", "plots/acf.csv",
                    "plots/ccf.csv", "plots/irf_levels.csv", "plots/irf_differences.csv"):
            assert (root / rel).exists(), rel
            assert rel in rep.files
        with open(root / "plots/irf_levels.csv") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["impulse", "response", "horizon", "value"]
        assert len(rows) == 1 + 4 * (constructed_config.irf_horizon + 1)
        assert (root / "report.txt").read_text() == rep.text

    def test_report_cites_statistics(self, constructed_config):
        text = run_pipeline(constructed_config).text
        assert "stat " in text and "critical" in text and "10%" in text
        assert "WARNING: levels include non-stationary series" in text
        assert "decision: skip" in text

    def test_intermediates_round_trip(self, constructed_config):
        rep = run_pipeline(constructed_config)
        root = constructed_config.out_path
        back = ingest(root / "intermediates/corrected_series.csv")
        assert back == rep.corrected
        dy = ingest(root / "intermediates/D.y.csv")[0]
        np.testing.assert_array_equal(dy.values, np.diff(rep.series[1].values))
        res = ingest(root / "intermediates/residuals_vecm.csv")
        np.testing.assert_array_equal(res[0].values, rep.vecm.residuals[:, 0])

    def test_seventeen_year_run(self, tmp_path):
        annual_csv(tmp_path / "ukraine.csv")
        cfg = RunConfig(inputs=["ukraine.csv"], columns={"imf": "IMF_Loans_currUSD", "gdp": "GDPcurrentUSD"},
                        start_year=1994, end_year=2010, deterministic="constant",
                        deterministic_by_series={"gdp": "constant_and_trend"}, base_dir=str(tmp_path))
        rep = run_pipeline(cfg)
        assert len(rep.series[0]) == 17
        for heading in ("AR order", "stat (level)", "stat (1st diff)", "initially stationary",
                        "stationary after 1st diff", "Critical values at 10%"):
            assert heading in rep.text

    def test_stage_error(self, tmp_path):
        write(tmp_path / "d.csv", "year,a,b\n2000,1,2\n2001,1,3\n2002,1,5\n2003,1,4\n2004,1,9\n")
        cfg = RunConfig(inputs=["d.csv"], columns={"a": "a", "b": "b"}, base_dir=str(tmp_path))
        with pytest.raises(StageError) as err:
            run_pipeline(cfg, write=False)
        assert err.value.stage == "stationarity"

    def test_missing_input_is_ingest_error(self, tmp_path):
        cfg = RunConfig(inputs=["nope.csv"], columns={"a": "a", "b": "b"}, base_dir=str(tmp_path))
        with pytest.raises(StageError) as err:
            run_pipeline(cfg, write=False)
        assert err.value.stage == "ingest"

    def test_year_window_and_multiple_files(self, tmp_path):
        write(tmp_path / "a.csv", "year,a\n" + "".join(f"{y},{np.sin(y) + y % 3}\n" for y in range(1985, 2011)))
        write(tmp_path / "b.csv", "year,b\n" + "".join(f"{y},{np.cos(y) * 5 + y}\n" for y in range(1991, 2015)))
        cfg = RunConfig(inputs=["a.csv", "b.csv"], columns={"a": "a", "b": "b"}, start_year=1994,
                        max_lag=2, base_dir=str(tmp_path))
        rep = run_pipeline(cfg, write=False)
        assert (rep.series[0].start_year, rep.series[0].end_year) == (1994, 2010)


class TestCli:
    def test_analyze(self, tmp_path, capsys):
        constructed_csv(tmp_path / "data.csv")
        write(tmp_path / "run.cfg", "input = data.csv\ncolumns = x, y\noutput_dir = out\n")
        assert main(["analyze", "--config", str(tmp_path / "run.cfg")]) == 0
        assert "Cointegration precheck" in capsys.readouterr().out
        assert (tmp_path / "out/report.txt").exists()

    def test_analyze_output_dir_override(self, tmp_path):
        constructed_csv(tmp_path / "data.csv")
        write(tmp_path / "run.cfg", "input = data.csv\ncolumns = x, y\n")
        assert main(["analyze", "--config", str(tmp_path / "run.cfg"), "--output-dir", str(tmp_path / "o2"),
                     "--keep-intermediates"]) == 0
        assert (tmp_path / "o2/intermediates/corrected_series.csv").exists()

    def test_analyze_failure_exit_code(self, tmp_path, capsys):
        write(tmp_path / "run.cfg", "input = missing.csv\ncolumns = x, y\n")
        assert main(["analyze", "--config", str(tmp_path / "run.cfg")]) == 1
        assert "ingest" in capsys.readouterr().err

    def test_config_error_exit_code(self, tmp_path, capsys):
        write(tmp_path / "run.cfg", "input = d.csv\ncolumns = x\n")
        assert main(["analyze", "--config", str(tmp_path / "run.cfg")]) == 1
        assert "two variables" in capsys.readouterr().err

    @pytest.mark.parametrize("argv,expect", [
        (["adf", "--column", "y", "--deterministic", "constant", "--lags", "1"], "ADF y"),
        (["adf", "--column", "y"], "ADF y"),
        (["pp", "--column", "x", "--bandwidth", "3"], "PP x"),
        (["varsoc", "--columns", "x,y", "--max-lag", "3"], "Lag-order selection"),
        (["granger", "--columns", "x,y", "--lags", "2", "--test", "f"], "F test"),
        (["vecm", "--columns", "x,y", "--lags", "2"], "VECM"),
        (["vecm", "--columns", "y,x", "--lags", "2", "--rank", "1"], "long-run relation"),
        (["irf", "--columns", "x,y", "--lags", "1", "--horizon", "4"], "x->y"),
        (["irf", "--columns", "x,y", "--lags", "2", "--vecm", "--order", "y,x"], "level responses"),
        (["granger", "--columns", "x,y", "--lags", "1", "--difference", "1"], "D1.x"),
    ])
    def test_single_stage(self, tmp_path, capsys, argv, expect):
        data = constructed_csv(tmp_path / "data.csv")
        out = tmp_path / "cli_out"
        assert main(argv + ["--input", str(data), "--output-dir", str(out)]) == 0
        assert expect in capsys.readouterr().out
        assert any(out.glob("*.csv"))

    def test_simulate(self, tmp_path):
        path = tmp_path / "sim.csv"
        assert main(["simulate", "--seed", "18446744073709551615", "--nobs", "50", "--output", str(path)]) == 0
        x, y = ingest(path)
        assert len(x) == 50 and x.start_year == 1800

    def test_simulate_deterministic(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        main(["simulate", "--seed", "5", "--output", str(a)])
        main(["simulate", "--seed", "5", "--output", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_seed_range(self, tmp_path):
        assert main(["simulate", "--seed", "-1", "--output", str(tmp_path / "x.csv")]) == 2

    def test_unknown_column(self, tmp_path, capsys):
        data = constructed_csv(tmp_path / "data.csv")
        assert main(["adf", "--input", str(data), "--column", "zz"]) == 1
        assert "not found" in capsys.readouterr().err
