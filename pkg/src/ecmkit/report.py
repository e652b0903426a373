"""Plain-text and CSV rendering for results."""

from __future__ import annotations

import csv
import io
import math
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .irf import IrfResult
from .lagselect import LagSelectionTable
from .ols import RegressionResult
from .unitroot import LEVELS, UnitRootResult, level_label
from .var import GrangerResult, VarModel, VecmModel


def fmt(x, digits: int = 4) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "yes" if x else "no"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "."
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x != 0 and (abs(x) >= 1e7 or abs(x) < 10 ** -digits):
        return f"{x:.{digits}e}"
    return f"{x:.{digits}f}"


def text_table(header: Sequence[str], rows: Iterable[Sequence], title: str | None = None) -> str:
    cells = [[str(h) for h in header]] + [[c if isinstance(c, str) else fmt(c) for c in r] for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(header))]
    rule = "-+-".join("-" * w for w in widths)
    lines = []
    if title:
        lines.append(title)
    lines.append(" | ".join(h.ljust(w) for h, w in zip(cells[0], widths)))
    lines.append(rule)
    for row in cells[1:]:
        lines.append(" | ".join(c.rjust(w) if i else c.ljust(w) for i, (c, w) in enumerate(zip(row, widths))))
    return "\n".join(lines)


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    """CSV with floats in shortest round-trip form."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([repr(float(c)) if isinstance(c, (float, np.floating)) else c for c in r])


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(float(c)) if isinstance(c, (float, np.floating)) else c for c in r])
    return buf.getvalue()


def stars(p: float) -> str:
    if not p == p:
        return ""
    return "***" if p < 0.01 else "**" if p < 0.05 else "*" if p < 0.10 else ""


# -- unit root -----------------------------------------------------------------

UNIT_ROOT_HEADER = ("series", "test", "deterministic", "lags/bw", "nobs", "statistic",
                    "cv 1%", "cv 5%", "cv 10%")


def unit_root_rows(results: Sequence[UnitRootResult]) -> list[list]:
    return [
        [r.series_name, r.test_name, r.deterministic.value, r.lags_or_bandwidth, r.nobs_effective,
         r.statistic, *(r.critical_values[lvl] for lvl in LEVELS)]
        for r in results
    ]


def unit_root_text(res: UnitRootResult, level: float = 0.05) -> str:
    body = text_table(UNIT_ROOT_HEADER, unit_root_rows([res]))
    return f"{body}\n{res.describe(level)}"


# -- lag selection ---------------------------------------------------------------

LAG_HEADER = ("lag", "loglik", "LR", "df", "p", "FPE", "AIC", "HQIC", "SBIC")


def lag_rows(table: LagSelectionTable, mark: bool = True) -> list[list]:
    rows = []
    for r in table.rows:
        cells = [r.lag, r.loglik, r.lr_stat, r.lr_df if r.lag else math.nan, r.lr_p_value,
                 r.fpe, r.aic, r.hqic, r.sbic]
        if mark:
            text = [fmt(c) for c in cells]
            for col, crit in ((2, "lr"), (5, "fpe"), (6, "aic"), (7, "hqic"), (8, "sbic")):
                if table.chosen[crit] == r.lag and not (crit == "lr" and r.lag == 0):
                    text[col] += "*"
            cells = text
        rows.append(cells)
    return rows


def lag_table_text(table: LagSelectionTable) -> str:
    title = (f"Lag-order selection for {', '.join(table.variables)}; sample "
             f"{table.sample_start}-{table.sample_end}, nobs = {table.nobs}, max lag = {table.max_lag}")
    chosen = ", ".join(f"{k.upper()}={v}" for k, v in table.chosen.items())
    note = f"* = selected ({chosen}); LR tested sequentially from the top at {level_label(table.lr_level)}"
    return f"{text_table(LAG_HEADER, lag_rows(table), title)}\n{note}"


def lag_csv_rows(table: LagSelectionTable) -> list[list]:
    return [[r.lag, table.nobs, r.loglik, r.lr_stat, r.lr_df, r.lr_p_value, r.fpe, r.aic, r.hqic, r.sbic]
            for r in table.rows]


LAG_CSV_HEADER = ("lag", "nobs", "loglik", "lr_stat", "lr_df", "lr_p_value", "fpe", "aic", "hqic", "sbic")


# -- Granger ---------------------------------------------------------------------

GRANGER_HEADER = ("cause", "effect", "statistic", "df", "p-value", "decision")


def granger_rows(results: Sequence[GrangerResult], level: float) -> list[list]:
    return [[g.cause, g.effect, g.statistic, g.df if g.test == "wald" else f"{g.df},{g.df_denom}",
             g.p_value, ("reject" if g.rejects(level) else "do not reject") + f" at {level_label(level)}"]
            for g in results]


def granger_text(results: Sequence[GrangerResult], level: float, title: str | None = None) -> str:
    kind = "chi-squared Wald" if results and results[0].test == "wald" else "F"
    note = f"H0: cause does not Granger-cause effect ({kind} test)"
    return f"{text_table(GRANGER_HEADER, granger_rows(results, level), title)}\n{note}"


# -- regressions -------------------------------------------------------------------

COEF_HEADER = ("equation", "regressor", "coef", "std.err", "t", "p-value", "")


def coef_rows(eq_name: str, res: RegressionResult) -> list[list]:
    return [[eq_name, lab, b, se, t, p, stars(p)]
            for lab, b, se, t, p in zip(res.labels, res.coefficients, res.std_errors, res.t_stats, res.p_values)]


def model_coef_rows(model: VarModel | VecmModel) -> list[list]:
    prefix = "D." if isinstance(model, VecmModel) else ""
    rows = []
    for name, eq in zip(model.variables, model.equations):
        rows.extend(coef_rows(prefix + name, eq))
    return rows


def model_text(model: VarModel | VecmModel) -> str:
    if isinstance(model, VecmModel):
        title = (f"VECM with lag order {model.p} (VAR({model.p - 1}) in differences), rank {model.rank}, "
                 f"sample from {model.sample_start}, nobs = {model.nobs}")
    else:
        title = f"VAR({model.p}) sample from {model.sample_start}, nobs = {model.nobs}"
    body = text_table(COEF_HEADER, model_coef_rows(model), title)
    lines = [body, "* p<0.10, ** p<0.05, *** p<0.01"]
    if isinstance(model, VecmModel) and model.rank:
        for i, lr in enumerate(model.long_run):
            terms = " + ".join(f"{b:.6g}*{lab}" for lab, b in zip(lr.labels[1:], lr.coefficients[1:]))
            lines.append(f"long-run relation {i + 1}: {model.variables[i]} = {lr.coefficients[0]:.6g} + {terms}")
    return "\n".join(lines)


def cross_effects(model: VarModel | VecmModel) -> list[tuple[str, str, str, float, float]]:
    """``(effect, cause_regressor, sign, coef, p)`` for every lagged cross-variable term."""
    out = []
    for e, eq in zip(model.variables, model.equations):
        for lab, b, p in zip(eq.labels, eq.coefficients, eq.p_values):
            if not lab.startswith("L"):
                continue
            var = lab.split(".", 1)[1]
            if var.startswith("D."):
                var = var[2:]
            if var != e:
                out.append((e, lab, "negative" if b < 0 else "positive", float(b), float(p)))
    return out


# -- IRF ---------------------------------------------------------------------------

def irf_text(irf: IrfResult, levels: bool = False) -> str:
    arr = irf.level_responses if levels else irf.responses
    header = ["h"] + [f"{imp}->{resp}" for imp in irf.variables for resp in irf.variables]
    rows = []
    for h in range(irf.horizon + 1):
        rows.append([h] + [arr[h, i, j] for j in range(len(irf.variables)) for i in range(len(irf.variables))])
    return text_table(header, rows)
