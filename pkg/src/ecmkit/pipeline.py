"""End-to-end workflow: ingest, stationarity, lag selection, Granger, VECM, IRF.

``run_pipeline`` executes the stages in order and writes

    report.txt        human-readable report (deterministic)
    meta.txt          versions, timestamp, config echo
    tables/*.csv      one machine-readable file per report section
    plots/*.csv       long-format data for series, ACF, CCF and IRF figures
    intermediates/    differenced series and residuals (``keep_intermediates``)
"""

from __future__ import annotations

import csv
import datetime as _dt
import math
import platform
import warnings
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from . import __version__
from . import report as rp
from .errors import (ConfigError, DuplicateYearError, EcmkitError, MissingDataError, ParseError,
                     SchemaError, StageError)
from .irf import IrfResult, compute_irf
from .lagselect import CRITERIA, LagSelectionTable, select_lag_order
from .series import TimeSeries, acf, align_all, ccf, difference
from .unitroot import (LEVELS, Deterministic, IntegrationOrder, UnitRootResult, classify_integration,
                       level_label, pp_test)
from .var import (GateDecision, GrangerResult, VarModel, VecmModel, cointegration_precheck, fit_var,
                  fit_vecm, granger_matrix)


# -- ingestion ------------------------------------------------------------------------

def _read_rows(path: Path) -> tuple[list[str], list[tuple[int, list[str]]]]:
    try:
        fh = open(path, newline="", encoding="utf-8-sig")
    except FileNotFoundError:
        raise SchemaError(f"{path}: file not found") from None
    with fh:
        reader = csv.reader(fh)
        header = None
        rows = []
        for lineno, row in enumerate(reader, start=1):
            if not row or all(not c.strip() for c in row):
                continue
            if header is None:
                header = [c.strip() for c in row]
                continue
            rows.append((lineno, row))
    if header is None:
        raise SchemaError(f"{path}: empty file, expected a header row starting with 'year'")
    return header, rows


def _parse_mapping(columns) -> dict[str, str] | None:
    if columns is None:
        return None
    if isinstance(columns, Mapping):
        return dict(columns)
    out = {}
    for item in columns:
        name, _, col = str(item).partition("=")
        out[name.strip()] = (col or name).strip()
    return out


def ingest(path, columns=None) -> list[TimeSeries]:
    """Read a ``year,col1,col2,...`` CSV into one series per mapped column.

    ``columns`` maps series names to CSV columns (a sequence of names means
    identity mapping; ``None`` takes every column after ``year``). Rows may
    appear in any order; duplicate years, blank cells and gaps are errors.
    """
    path = Path(path)
    header, rows = _read_rows(path)
    if header[0].lower() != "year":
        raise SchemaError(f"{path}: first column must be 'year', found {header[0]!r}")
    available = header[1:]
    mapping = _parse_mapping(columns) or {c: c for c in available}
    if not mapping:
        raise SchemaError(f"{path}: no data columns")
    missing = [c for c in mapping.values() if c not in available]
    if missing:
        raise SchemaError(f"{path}: column(s) {missing} not found; available columns: {available}")
    if not rows:
        raise SchemaError(f"{path}: header present but no data rows")
    idx = {name: header.index(col) for name, col in mapping.items()}

    seen: dict[int, int] = {}
    data: dict[str, dict[int, float]] = {name: {} for name in mapping}
    for lineno, row in rows:
        if len(row) != len(header):
            raise ParseError(f"{path}, row {lineno}: expected {len(header)} fields, got {len(row)}", lineno)
        try:
            year = int(row[0].strip())
        except ValueError:
            raise ParseError(f"{path}, row {lineno}: year {row[0]!r} is not an integer", lineno) from None
        if year in seen:
            raise DuplicateYearError(
                f"{path}, row {lineno}: year {year} already appeared at row {seen[year]}", lineno)
        seen[year] = lineno
        for name, j in idx.items():
            cell = row[j].strip()
            if not cell:
                raise MissingDataError(f"{path}, row {lineno}: no value for {mapping[name]!r} in {year}")
            try:
                value = float(cell)
            except ValueError:
                raise ParseError(
                    f"{path}, row {lineno}: {mapping[name]!r} value {cell!r} is not a number", lineno
                ) from None
            if not math.isfinite(value):
                raise MissingDataError(f"{path}, row {lineno}: {mapping[name]!r} is {cell!r} in {year}")
            data[name][year] = value

    years = sorted(seen)
    gaps = sorted(set(range(years[0], years[-1] + 1)) - set(years))
    if gaps:
        raise MissingDataError(f"{path}: missing years {gaps} (gaps are not interpolated)")
    return [TimeSeries(name, years[0], [data[name][y] for y in years]) for name in mapping]


def write_series_csv(path, series: Sequence[TimeSeries]) -> None:
    """Write aligned series in the ingestion format (exact round trip)."""
    series = align_all(series)
    years = series[0].years
    rp.write_csv(Path(path), ["year", *(s.name for s in series)],
                 ([int(y), *(float(s.values[i]) for s in series)] for i, y in enumerate(years)))


# -- configuration -----------------------------------------------------------------------

def _parse_bool(key: str, value: str) -> bool:
    v = value.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{key}: expected a boolean, got {value!r}")


def _parse_level(value) -> float:
    v = str(value).strip()
    try:
        x = float(v[:-1]) / 100 if v.endswith("%") else float(v)
    except ValueError:
        raise ConfigError(f"significance: cannot parse {value!r}") from None
    for lvl in LEVELS:
        if abs(x - lvl) < 1e-12:
            return lvl
    raise ConfigError(f"significance must be one of 1%, 5%, 10%; got {value!r}")


def _split(value: str) -> list[str]:
    return [v.strip() for v in value.split(",") if v.strip()]


@dataclass
class RunConfig:
    """Settings for :func:`run_pipeline`.

    Config files are flat ``key = value`` text; ``#`` starts a comment. Keys
    match the field names below, plus ``deterministic.<series>`` overrides.
    List values are comma-separated; ``columns`` entries are ``name`` or
    ``name=csv_column``. Relative paths resolve against the config file.
    """

    inputs: list[str]
    columns: dict[str, str]
    start_year: int | None = None
    end_year: int | None = None
    deterministic: str = "constant"
    deterministic_by_series: dict[str, str] = field(default_factory=dict)
    max_lag: int = 4
    lag_criterion: str = "hqic"
    significance: float = 0.10
    max_order: int = 1
    var_lags: int | None = None
    granger_test: str = "wald"
    irf_horizon: int = 8
    irf_order: list[str] | None = None
    irf_orthogonalized: bool = True
    acf_lags: int = 8
    output_dir: str = "output"
    keep_intermediates: bool = False
    base_dir: str = "."

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if not self.inputs:
            raise ConfigError("input: at least one CSV file is required")
        if len(self.columns) < 2:
            raise ConfigError(f"columns: at least two variables are required, got {list(self.columns)}")
        if self.start_year is not None and self.end_year is not None and self.start_year > self.end_year:
            raise ConfigError(f"year range {self.start_year}-{self.end_year} is empty")
        for spec in [self.deterministic, *self.deterministic_by_series.values()]:
            try:
                Deterministic.parse(spec)
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
        unknown = set(self.deterministic_by_series) - set(self.columns)
        if unknown:
            raise ConfigError(f"deterministic override for unknown series {sorted(unknown)}")
        if self.lag_criterion not in CRITERIA:
            raise ConfigError(f"lag_criterion must be one of {CRITERIA}, got {self.lag_criterion!r}")
        self.significance = _parse_level(self.significance)
        if self.max_order not in (1, 2):
            raise ConfigError(f"max_order must be 1 or 2, got {self.max_order}")
        if self.max_lag < 1:
            raise ConfigError(f"max_lag must be at least 1, got {self.max_lag}")
        if self.var_lags is not None and self.var_lags < 1:
            raise ConfigError(f"var_lags must be at least 1, got {self.var_lags}")
        if self.granger_test not in ("wald", "f"):
            raise ConfigError(f"granger_test must be 'wald' or 'f', got {self.granger_test!r}")
        if self.irf_horizon < 1:
            raise ConfigError(f"irf_horizon must be positive, got {self.irf_horizon}")
        if self.irf_order is not None and sorted(self.irf_order) != sorted(self.columns):
            raise ConfigError(f"irf_order {self.irf_order} must list each of {list(self.columns)} once")
        if self.acf_lags < 1:
            raise ConfigError(f"acf_lags must be positive, got {self.acf_lags}")

    def det_for(self, name: str) -> Deterministic:
        return Deterministic.parse(self.deterministic_by_series.get(name, self.deterministic))

    def resolve(self, p: str) -> Path:
        path = Path(p)
        return path if path.is_absolute() else Path(self.base_dir) / path

    @property
    def out_path(self) -> Path:
        return self.resolve(self.output_dir)

    _INT = ("start_year", "end_year", "max_lag", "max_order", "var_lags", "irf_horizon", "acf_lags")

    @classmethod
    def from_mapping(cls, raw: Mapping[str, str], base_dir=".") -> RunConfig:
        raw = dict(raw)
        kw: dict = {"base_dir": str(base_dir)}
        det_over = {}
        known = {f.name for f in fields(cls)} | {"input"}
        for key, value in raw.items():
            if key.startswith("deterministic."):
                det_over[key.split(".", 1)[1]] = value
                continue
            if key not in known or key in ("inputs", "deterministic_by_series", "base_dir"):
                raise ConfigError(f"unknown config key {key!r}")
            if key == "input":
                kw["inputs"] = _split(value)
            elif key == "columns":
                kw["columns"] = _parse_mapping(_split(value))
            elif key in cls._INT:
                try:
                    kw[key] = int(value)
                except ValueError:
                    raise ConfigError(f"{key}: expected an integer, got {value!r}") from None
            elif key in ("irf_orthogonalized", "keep_intermediates"):
                kw[key] = _parse_bool(key, value)
            elif key == "irf_order":
                kw[key] = _split(value)
            elif key == "lag_criterion" or key == "granger_test":
                kw[key] = value.strip().lower()
            else:
                kw[key] = value.strip()
        if "inputs" not in kw:
            raise ConfigError("missing required key 'input'")
        if "columns" not in kw:
            raise ConfigError("missing required key 'columns'")
        kw["deterministic_by_series"] = det_over
        return cls(**kw)

    def echo(self) -> list[tuple[str, str]]:
        """Key/value pairs in config-file syntax (excluding output location)."""
        out = [("input", ", ".join(self.inputs)),
               ("columns", ", ".join(n if n == c else f"{n}={c}" for n, c in self.columns.items()))]
        if self.start_year is not None:
            out.append(("start_year", str(self.start_year)))
        if self.end_year is not None:
            out.append(("end_year", str(self.end_year)))
        out.append(("deterministic", self.deterministic))
        out += [(f"deterministic.{k}", v) for k, v in sorted(self.deterministic_by_series.items())]
        out += [("max_lag", str(self.max_lag)), ("lag_criterion", self.lag_criterion),
                ("significance", level_label(self.significance)), ("max_order", str(self.max_order))]
        if self.var_lags is not None:
            out.append(("var_lags", str(self.var_lags)))
        out += [("granger_test", self.granger_test), ("irf_horizon", str(self.irf_horizon)),
                ("irf_order", ", ".join(self.irf_order or self.columns)),
                ("irf_orthogonalized", str(self.irf_orthogonalized).lower()),
                ("acf_lags", str(self.acf_lags))]
        return out


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ConfigError(f"config file {path} not found") from None
    raw = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{path}, line {lineno}: expected 'key = value'")
        key = key.strip()
        if key in raw:
            raise ConfigError(f"{path}, line {lineno}: duplicate key {key!r}")
        raw[key] = value.strip()
    return RunConfig.from_mapping(raw, base_dir=path.parent)


# -- report ------------------------------------------------------------------------------

@dataclass
class VariableEvidence:
    name: str
    deterministic: Deterministic
    integration: IntegrationOrder
    pp: tuple[UnitRootResult, ...]
    lag_table: LagSelectionTable | None
    ar_order: int | None


@dataclass
class AnalysisReport:
    config: RunConfig
    series: list[TimeSeries]
    evidence: list[VariableEvidence]
    gate: GateDecision
    lag_levels: LagSelectionTable
    var_levels: VarModel
    granger_levels: list[GrangerResult]
    corrected: list[TimeSeries]
    lag_corrected: LagSelectionTable
    var_corrected: VarModel
    granger_corrected: list[GrangerResult]
    vecm: VecmModel
    irf: IrfResult
    warnings: list[str]
    text: str = ""
    files: list[str] = field(default_factory=list)

    def integration_order(self, name: str) -> IntegrationOrder:
        return next(e.integration for e in self.evidence if e.name == name)

    def granger(self, cause: str, effect: str, corrected: bool = True) -> GrangerResult:
        """Look up a Granger result by base series names (difference prefixes ignored)."""
        results = self.granger_corrected if corrected else self.granger_levels
        for g in results:
            if _base_name(g.cause) == cause and _base_name(g.effect) == effect:
                return g
        raise KeyError(f"no Granger result for {cause} -> {effect}")


def _base_name(label: str) -> str:
    head, sep, rest = label.partition(".")
    return rest if sep and head in ("D", "D2") else label


def _cap_lag(n: int, k: int, wanted: int) -> int:
    """Largest lag <= wanted for which a K-variable VAR table still fits."""
    m = wanted
    while m >= 1 and n - m <= k * m + 1:
        m -= 1
    return m


def _collect(stage: str, fn, log: list[str]):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            out = fn()
        except (EcmkitError, ValueError, np.linalg.LinAlgError) as exc:
            raise StageError(stage, exc) from exc
    for w in caught:
        msg = f"{stage}: {w.message}"
        if msg not in log:
            log.append(msg)
    return out


def _corrected_name(name: str, order: int) -> str:
    return name if order == 0 else ("D." if order == 1 else f"D{order}.") + name


def run_pipeline(config: RunConfig, write: bool = True) -> AnalysisReport:
    """Run every stage; on failure raise :class:`StageError` naming the stage."""
    log: list[str] = []
    lvl = config.significance

    def _ingest():
        found: dict[str, TimeSeries] = {}
        for p in config.inputs:
            path = config.resolve(p)
            header, _ = _read_rows(path)
            wanted = {n: c for n, c in config.columns.items() if c in header[1:] and n not in found}
            if wanted:
                for s in ingest(path, wanted):
                    found[s.name] = s
        missing = [n for n in config.columns if n not in found]
        if missing:
            raise SchemaError(f"column(s) {[config.columns[n] for n in missing]} not found in {config.inputs}")
        series = [found[n] for n in config.columns]
        lo = config.start_year if config.start_year is not None else -10**9
        hi = config.end_year if config.end_year is not None else 10**9
        series = [s.window(lo, hi) for s in series]
        return align_all(series)

    series = _collect("ingest", _ingest, log)
    names = [s.name for s in series]
    n = len(series[0])

    def _stationarity():
        out = []
        for s in series:
            det = config.det_for(s.name)
            lag_cap = _cap_lag(n, 1, config.max_lag)
            io = classify_integration(s, det, config.max_order, lvl, max_lag=lag_cap,
                                      criterion=config.lag_criterion)
            table = select_lag_order([s], lag_cap) if lag_cap >= 1 else None
            ar = table.chosen[config.lag_criterion] if table else None
            pps = []
            for d in range(len(io.evidence)):
                target = s if d == 0 else difference(s, d).as_series()
                pps.append(pp_test(target, None, det))
            out.append(VariableEvidence(s.name, det, io, tuple(pps), table, ar))
        return out

    evidence = _collect("stationarity", _stationarity, log)
    for e in evidence:
        io = e.integration
        if e.ar_order is not None and io.selected_lags and io.selected_lags[0] != max(e.ar_order - 1, 0):
            log.append(f"stationarity: {e.name} ADF lags {io.selected_lags[0]} differ from "
                       f"selected AR order {e.ar_order} minus one")
        for d, (adf, pp) in enumerate(zip(io.evidence, e.pp)):
            if adf.reject_at[lvl] != pp.reject_at[lvl]:
                log.append(f"stationarity: ADF and PP disagree for {e.name} at difference order {d} "
                           f"({level_label(lvl)} level)")

    gate = _collect("cointegration precheck", lambda: cointegration_precheck([e.integration for e in evidence]), log)

    def _granger_levels():
        cap = _cap_lag(n, len(series), config.max_lag)
        table = select_lag_order(series, cap)
        p = config.var_lags or max(table.chosen[config.lag_criterion], 1)
        model = fit_var(series, p)
        return table, model, granger_matrix(model, config.granger_test)

    lag_levels, var_levels, granger_levels = _collect("granger (levels)", _granger_levels, log)
    if any(e.integration.order > 0 for e in evidence):
        bad = ", ".join(f"{e.name} {e.integration.label}" for e in evidence if e.integration.order > 0)
        log.append(f"granger (levels): levels include non-stationary series ({bad}); "
                   "these tests ignore the non-constant variance and are shown for comparison only")

    def _correct():
        out = []
        for s, e in zip(series, evidence):
            d = e.integration.order
            out.append(s if d == 0 else difference(s, d).as_series(_corrected_name(s.name, d)))
        return align_all(out)

    corrected = _collect("differencing", _correct, log)

    def _granger_corrected():
        m = len(corrected[0])
        cap = _cap_lag(m, len(corrected), config.max_lag)
        table = select_lag_order(corrected, cap)
        p = config.var_lags or max(table.chosen[config.lag_criterion], 1)
        model = fit_var(corrected, p)
        return table, model, granger_matrix(model, config.granger_test)

    lag_corrected, var_corrected, granger_corrected = _collect(
        "granger (corrected)", _granger_corrected, log)

    rank = 1 if gate.required else 0
    vecm = _collect("vecm", lambda: fit_vecm(series, var_corrected.p + 1, rank), log)
    irf = _collect("irf", lambda: compute_irf(vecm, config.irf_horizon, config.irf_orthogonalized,
                                              config.irf_order), log)

    rep = AnalysisReport(config, series, evidence, gate, lag_levels, var_levels, granger_levels, corrected,
                         lag_corrected, var_corrected, granger_corrected, vecm, irf, log)
    rep.text = render_report(rep)
    if write:
        _collect("write", lambda: write_outputs(rep), log)
    return rep


# -- rendering -------------------------------------------------------------------------

def _stationarity_rows(rep: AnalysisReport, which: str) -> list[list]:
    lvl = rep.config.significance
    rows = []
    for e in rep.evidence:
        tests = e.integration.evidence if which == "ADF" else e.pp
        level = tests[0]
        diff = tests[1] if len(tests) > 1 else None
        init = level.reject_at[lvl]
        if init:
            after = "n/a"
        elif diff is not None:
            after = "yes" if diff.reject_at[lvl] else "no"
        else:
            after = "n/a"
        lags = level.lags_or_bandwidth
        rows.append([e.name, e.ar_order if e.ar_order is not None else ".", lags, level.statistic,
                     diff.statistic if diff is not None else "n/a", "yes" if init else "no", after,
                     e.integration.label if which == "ADF" else ""])
    return rows


def _critical_line(rep: AnalysisReport, which: str) -> str:
    lvl = rep.config.significance
    parts = []
    for e in rep.evidence:
        tests = e.integration.evidence if which == "ADF" else e.pp
        cvs = ", ".join(f"{'level' if d == 0 else f'D{d}'} {t.critical_values[lvl]:.3f} (nobs {t.nobs_effective})"
                        for d, t in enumerate(tests))
        parts.append(f"{e.name}: {cvs}")
    return f"Critical values at {level_label(lvl)}: " + "; ".join(parts)


def render_report(rep: AnalysisReport) -> str:
    cfg = rep.config
    lvl = cfg.significance
    s0 = rep.series[0]
    out = [f"ecmkit analysis report (version {__version__})", "=" * 60, "",
           "Configuration", "-------------"]
    out += [f"{k} = {v}" for k, v in cfg.echo()]
    out += ["", f"Sample: {s0.start_year}-{s0.end_year} ({len(s0)} annual observations), "
            f"variables: {', '.join(s.name for s in rep.series)}", ""]

    out += ["1. Unit-root tests", "------------------"]
    header = ["variable", "AR order", "lags/bw", "stat (level)", "stat (1st diff)", "initially stationary",
              "stationary after 1st diff", "order"]
    for which, title in (("ADF", "Augmented Dickey-Fuller"), ("PP", "Phillips-Perron")):
        dets = ", ".join(f"{e.name}: {e.deterministic.value}" for e in rep.evidence)
        out.append(rp.text_table(header if which == "ADF" else header[:-1],
                                 [r if which == "ADF" else r[:-1] for r in _stationarity_rows(rep, which)],
                                 f"{title} ({dets})"))
        out.append(_critical_line(rep, which))
        out.append("")
    out.append("Decisions:")
    for e in rep.evidence:
        for t in (*e.integration.evidence, *e.pp):
            out.append(f"  {t.describe(lvl)}")
        out.append(f"  => {e.name} classified {e.integration.label} (ADF at {level_label(lvl)})")
    out.append("")
    for e in rep.evidence:
        if e.lag_table is not None:
            out.append(rp.lag_table_text(e.lag_table))
            out.append("")

    out += ["2. Cointegration precheck", "-------------------------",
            f"decision: {rep.gate.decision}", f"reason: {rep.gate.reason}", ""]

    out += ["3. Granger causality", "--------------------",
            "3a. Levels (before differencing)",
            "WARNING: levels include non-stationary series; results ignore non-constant variance."
            if any(e.integration.order > 0 for e in rep.evidence) else "(all series stationary in levels)",
            rp.lag_table_text(rep.lag_levels),
            f"VAR lag order used: {rep.var_levels.p}",
            rp.granger_text(rep.granger_levels, lvl), "",
            "3b. Stationarity-corrected system (" + ", ".join(s.name for s in rep.corrected) + ")",
            rp.lag_table_text(rep.lag_corrected),
            f"VAR lag order used: {rep.var_corrected.p}",
            rp.granger_text(rep.granger_corrected, lvl), ""]

    out += ["4. Vector error-correction model", "--------------------------------",
            rp.model_text(rep.vecm), "", "Cross-variable short-run effects:"]
    for effect, reg, sign, b, p in rp.cross_effects(rep.vecm):
        verdict = "significant" if p < lvl else "not significant"
        out.append(f"  D.{effect} <- {reg}: {sign} ({b:.6g}), p = {p:.4f}, {verdict} at {level_label(lvl)}")
    out.append("")

    irf = rep.irf
    kind = "orthogonalized (Cholesky)" if irf.orthogonalized else "unit-shock"
    out += ["5. Impulse responses", "--------------------",
            f"{kind} responses, horizon {irf.horizon}, ordering {', '.join(irf.variables)}",
            "level responses (cumulated differences):", rp.irf_text(irf, levels=True),
            "files: plots/irf_levels.csv, plots/irf_differences.csv", ""]
    peak = np.abs(irf.level_responses).max(axis=(0, 1))
    j = int(np.argmax(peak))
    out.append(f"largest absolute level response comes from a shock to {irf.variables[j]} ({peak[j]:.6g})")
    out.append("")

    out += ["6. Warnings", "-----------"]
    out += [f"- {w}" for w in rep.warnings] or ["(none)"]
    return "\n".join(out) + "\n"


def write_outputs(rep: AnalysisReport) -> None:
    cfg = rep.config
    root = cfg.out_path
    (root / "tables").mkdir(parents=True, exist_ok=True)
    (root / "plots").mkdir(parents=True, exist_ok=True)
    files = []

    def _w(rel, header, rows):
        rp.write_csv(root / rel, header, rows)
        files.append(rel)

    ur_rows = []
    for e in rep.evidence:
        for d, (adf, pp) in enumerate(zip(e.integration.evidence, e.pp)):
            for t in (adf, pp):
                ur_rows.append([e.name, t.test_name, d, t.deterministic.value, t.lags_or_bandwidth,
                                t.nobs_effective, t.statistic, *(t.critical_values[l] for l in LEVELS),
                                int(t.reject_at[cfg.significance])])
    _w("tables/unit_root.csv", ["series", "test", "diff_order", "deterministic", "lags_or_bandwidth", "nobs",
                                "statistic", "cv_1pct", "cv_5pct", "cv_10pct", "reject"], ur_rows)
    _w("tables/integration.csv", ["series", "order", "level", "adf_lags"],
       [[e.name, e.integration.label, cfg.significance, " ".join(map(str, e.integration.selected_lags))]
        for e in rep.evidence])
    for e in rep.evidence:
        if e.lag_table is not None:
            _w(f"tables/lag_selection_{e.name}.csv", rp.LAG_CSV_HEADER, rp.lag_csv_rows(e.lag_table))
    _w("tables/lag_selection_levels.csv", rp.LAG_CSV_HEADER, rp.lag_csv_rows(rep.lag_levels))
    _w("tables/lag_selection_corrected.csv", rp.LAG_CSV_HEADER, rp.lag_csv_rows(rep.lag_corrected))
    _w("tables/cointegration_precheck.csv", ["decision", "reason"], [[rep.gate.decision, rep.gate.reason]])
    gh = ["cause", "effect", "test", "statistic", "df", "df_denom", "p_value", "reject"]
    for tag, res in (("levels", rep.granger_levels), ("corrected", rep.granger_corrected)):
        _w(f"tables/granger_{tag}.csv", gh,
           [[g.cause, g.effect, g.test, g.statistic, g.df, g.df_denom if g.df_denom is not None else "",
             g.p_value, int(g.rejects(cfg.significance))] for g in res])
    _w("tables/vecm.csv", ["equation", "regressor", "coef", "std_err", "t", "p_value"],
       [r[:6] for r in rp.model_coef_rows(rep.vecm)])

    _w("plots/series.csv", ["variable", "year", "value"],
       [[s.name, int(y), float(v)] for s in rep.series for y, v in zip(s.years, s.values)])
    acf_rows = []
    for s in rep.series:
        a = acf(s, min(cfg.acf_lags, len(s) - 1))
        acf_rows += [[s.name, int(k), float(v), a.band] for k, v in zip(a.lags, a.values)]
    _w("plots/acf.csv", ["variable", "lag", "value", "band"], acf_rows)
    ccf_rows = []
    for i, x in enumerate(rep.series):
        for y in rep.series[i + 1:]:
            c = ccf(x, y, min(cfg.acf_lags, len(x) - 1))
            ccf_rows += [[x.name, y.name, int(k), float(v), c.band] for k, v in zip(c.lags, c.values)]
    _w("plots/ccf.csv", ["x", "y", "lag", "value", "band"], ccf_rows)
    ih = ["impulse", "response", "horizon", "value"]
    _w("plots/irf_differences.csv", ih, rep.irf.long_rows())
    _w("plots/irf_levels.csv", ih, rep.irf.long_rows(levels=True))

    if cfg.keep_intermediates:
        for s, e in zip(rep.series, rep.evidence):
            for d in range(1, len(e.integration.evidence)):
                ds = difference(s, d).as_series(_corrected_name(s.name, d))
                write_series_csv(root / f"intermediates/{ds.name}.csv", [ds])
                files.append(f"intermediates/{ds.name}.csv")
        write_series_csv(root / "intermediates/corrected_series.csv", rep.corrected)
        files.append("intermediates/corrected_series.csv")
        for tag, model in (("var_levels", rep.var_levels), ("var_corrected", rep.var_corrected),
                           ("vecm", rep.vecm)):
            res = [TimeSeries(v, model.sample_start, model.residuals[:, i]) for i, v in enumerate(model.variables)]
            write_series_csv(root / f"intermediates/residuals_{tag}.csv", res)
            files.append(f"intermediates/residuals_{tag}.csv")

    (root / "report.txt").write_text(rep.text, encoding="utf-8")
    files.append("report.txt")
    meta = [f"ecmkit {__version__}", f"python {platform.python_version()}", f"numpy {np.__version__}"]
    import scipy

    meta += [f"scipy {scipy.__version__}",
             f"timestamp {_dt.datetime.now(_dt.timezone.utc).isoformat(timespec='seconds')}",
             f"output_dir {root}", "", "# config"]
    meta += [f"{k} = {v}" for k, v in cfg.echo()]
    (root / "meta.txt").write_text("\n".join(meta) + "\n", encoding="utf-8")
    files.append("meta.txt")
    rep.files = files
