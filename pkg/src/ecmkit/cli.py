"""Command-line interface.

    ecmkit analyze --config run.cfg
    ecmkit adf --input data.csv --column gdp --deterministic constant_and_trend
    ecmkit simulate --seed 7 --nobs 200 --output synthetic.csv
"""

from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from . import report as rp
from .errors import EcmkitError, StageError
from .irf import compute_irf
from .lagselect import CRITERIA, select_lag_order
from .pipeline import RunConfig, ingest, load_config, run_pipeline, write_series_csv
from .series import align_all, difference
from .simulate import as_series, lending_growth_pair
from .unitroot import Deterministic, adf_test, pp_test
from .var import fit_var, fit_vecm, granger_matrix

CCF_NOTE = "CCF convention: positive lag k pairs x[t] with y[t+k] (y follows x)."


def _load(args, names) -> list:
    series = {}
    for path in args.input:
        for s in ingest(path, None):
            series.setdefault(s.name, s)
    mapping = {}
    for item in names:
        name, _, col = item.partition("=")
        mapping[name] = col or name
    missing = [c for c in mapping.values() if c not in series]
    if missing:
        raise EcmkitError(f"column(s) {missing} not found; available: {sorted(series)}")
    out = []
    for name, col in mapping.items():
        s = series[col]
        out.append(type(s)(name, s.start_year, s.values))
    lo = args.start_year if args.start_year is not None else -10**9
    hi = args.end_year if args.end_year is not None else 10**9
    out = [s.window(lo, hi) for s in out]
    out = align_all(out)
    if getattr(args, "difference", 0):
        out = align_all([difference(s, args.difference).as_series() for s in out])
    return out


def _columns(value: str) -> list[str]:
    return [c.strip() for c in value.split(",") if c.strip()]


def _emit(args, text: str, tables: dict) -> None:
    print(text)
    if args.output_dir:
        root = Path(args.output_dir)
        for name, (header, rows) in tables.items():
            rp.write_csv(root / name, header, rows)


def cmd_analyze(args) -> int:
    cfg = load_config(args.config)
    if args.output_dir:
        cfg.output_dir = str(Path(args.output_dir).resolve())
    if args.keep_intermediates:
        cfg.keep_intermediates = True
    rep = run_pipeline(cfg)
    print(rep.text, end="")
    print(f"wrote {len(rep.files)} files to {cfg.out_path}", file=sys.stderr)
    return 0


def cmd_unitroot(args) -> int:
    (s,) = _load(args, [args.column])
    det = Deterministic.parse(args.deterministic)
    if args.command == "adf":
        lags = args.lags
        if lags is None:
            table = select_lag_order([s], args.max_lag)
            lags = max(table.chosen[args.criterion] - 1, 0)
        res = adf_test(s, lags, det)
    else:
        res = pp_test(s, args.bandwidth, det)
    rows = rp.unit_root_rows([res])
    _emit(args, rp.unit_root_text(res, args.level),
          {f"{args.command}.csv": (rp.UNIT_ROOT_HEADER, rows)})
    return 0


def cmd_varsoc(args) -> int:
    data = _load(args, _columns(args.columns))
    table = select_lag_order(data, args.max_lag)
    _emit(args, rp.lag_table_text(table), {"varsoc.csv": (rp.LAG_CSV_HEADER, rp.lag_csv_rows(table))})
    return 0


def cmd_granger(args) -> int:
    data = _load(args, _columns(args.columns))
    model = fit_var(data, args.lags)
    res = granger_matrix(model, args.test)
    _emit(args, rp.granger_text(res, args.level, f"VAR({model.p}), nobs = {model.nobs}"),
          {"granger.csv": (["cause", "effect", "test", "statistic", "df", "p_value"],
                           [[g.cause, g.effect, g.test, g.statistic, g.df, g.p_value] for g in res])})
    return 0


def cmd_vecm(args) -> int:
    data = _load(args, _columns(args.columns))
    model = fit_vecm(data, args.lags, args.rank)
    _emit(args, rp.model_text(model),
          {"vecm.csv": (["equation", "regressor", "coef", "std_err", "t", "p_value"],
                        [r[:6] for r in rp.model_coef_rows(model)])})
    return 0


def cmd_irf(args) -> int:
    data = _load(args, _columns(args.columns))
    model = fit_vecm(data, args.lags, args.rank) if args.vecm else fit_var(data, args.lags)
    order = _columns(args.order) if args.order else None
    irf = compute_irf(model, args.horizon, args.orthogonalized, order)
    header = ["impulse", "response", "horizon", "value"]
    tables = {"irf.csv": (header, irf.long_rows())}
    text = rp.irf_text(irf)
    if irf.level_responses is not None:
        tables = {"irf_differences.csv": (header, irf.long_rows()),
                  "irf_levels.csv": (header, irf.long_rows(levels=True))}
        text = "responses of differences:\n" + text + "\nlevel responses:\n" + rp.irf_text(irf, levels=True)
    _emit(args, text, tables)
    return 0


def cmd_simulate(args) -> int:
    rng = np.random.default_rng(args.seed)
    x, y = lending_growth_pair(args.nobs, rng, args.coef)
    series = as_series(np.column_stack([x, y]), ["x", "y"], args.start_year)
    write_series_csv(args.output, series)
    print(f"wrote {args.nobs} rows to {args.output} (seed {args.seed})")
    return 0


def _data_args(p: argparse.ArgumentParser, single: bool = False) -> None:
    p.add_argument("--input", action="append", required=True, help="CSV file (repeatable)")
    if single:
        p.add_argument("--column", required=True, help="series name or name=csv_column")
    else:
        p.add_argument("--columns", required=True, help="comma-separated names (name or name=csv_column)")
    p.add_argument("--start-year", type=int)
    p.add_argument("--end-year", type=int)
    p.add_argument("--difference", type=int, default=0, help="difference every series this many times first")
    p.add_argument("--output-dir", help="also write CSV results here")
    p.add_argument("--seed", type=int, help="unused by estimators; accepted for uniformity")


def _level(value: str) -> float:
    x = float(value.rstrip("%")) / (100 if value.endswith("%") else 1)
    if x not in (0.01, 0.05, 0.10):
        raise argparse.ArgumentTypeError("level must be 1%, 5% or 10%")
    return x


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ecmkit", description=__doc__.splitlines()[0] if __doc__ else None,
                                     epilog=CCF_NOTE)
    parser.add_argument("--version", action="version", version=f"ecmkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="run the full workflow from a config file", epilog=CCF_NOTE)
    p.add_argument("--config", required=True)
    p.add_argument("--output-dir", help="override the config's output_dir")
    p.add_argument("--keep-intermediates", action="store_true")
    p.add_argument("--seed", type=int, help="unused by the deterministic pipeline")
    p.set_defaults(func=cmd_analyze)

    dets = [d.value for d in Deterministic]
    p = sub.add_parser("adf", help="augmented Dickey-Fuller test")
    _data_args(p, single=True)
    p.add_argument("--deterministic", default="constant", choices=dets)
    p.add_argument("--lags", type=int, help="augmentation lags (default: chosen by --criterion)")
    p.add_argument("--max-lag", type=int, default=4)
    p.add_argument("--criterion", default="aic", choices=CRITERIA)
    p.add_argument("--level", type=_level, default=0.05)
    p.set_defaults(func=cmd_unitroot)

    p = sub.add_parser("pp", help="Phillips-Perron test")
    _data_args(p, single=True)
    p.add_argument("--deterministic", default="constant", choices=dets)
    p.add_argument("--bandwidth", type=int, help="Newey-West lags (default floor(4 (T/100)^(2/9)))")
    p.add_argument("--level", type=_level, default=0.05)
    p.set_defaults(func=cmd_unitroot)

    p = sub.add_parser("varsoc", help="lag-order selection table")
    _data_args(p)
    p.add_argument("--max-lag", type=int, default=4)
    p.set_defaults(func=cmd_varsoc)

    p = sub.add_parser("granger", help="pairwise Granger causality from a VAR")
    _data_args(p)
    p.add_argument("--lags", type=int, required=True)
    p.add_argument("--test", choices=("wald", "f"), default="wald")
    p.add_argument("--level", type=_level, default=0.05)
    p.set_defaults(func=cmd_granger)

    p = sub.add_parser("vecm", help="vector error-correction model")
    _data_args(p)
    p.add_argument("--lags", type=int, required=True, help="lag order of the underlying levels VAR")
    p.add_argument("--rank", type=int, default=0)
    p.set_defaults(func=cmd_vecm)

    p = sub.add_parser("irf", help="impulse responses from a VAR or VECM")
    _data_args(p)
    p.add_argument("--lags", type=int, required=True)
    p.add_argument("--horizon", type=int, default=8)
    p.add_argument("--vecm", action="store_true", help="fit a VECM instead of a VAR")
    p.add_argument("--rank", type=int, default=0)
    p.add_argument("--orthogonalized", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--order", help="comma-separated Cholesky ordering")
    p.set_defaults(func=cmd_irf)

    p = sub.add_parser("simulate", help="write a synthetic stationary-driver / integrated-response pair")
    p.add_argument("--seed", type=int, required=True, help="64-bit seed")
    p.add_argument("--nobs", type=int, default=200)
    p.add_argument("--coef", type=float, default=0.8)
    p.add_argument("--start-year", type=int, default=1800)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "seed", None) is not None and not 0 <= args.seed < 2**64:
        print("error: --seed must fit in an unsigned 64-bit integer", file=sys.stderr)
        return 2
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            return args.func(args)
    except StageError as exc:
        print(f"error: stage {exc.stage!r} failed: {exc.cause}", file=sys.stderr)
        return 1
    except (EcmkitError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
