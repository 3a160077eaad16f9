"""Command-line interface.

Subcommands: ``estimate`` (point estimate from a data file), ``test``
(exponentiality test report), ``analytic`` (reference value for a
parametric model) and ``simulate`` (Monte Carlo harness driven by a
config file).  Exit codes: 0 success, 2 usage or validation error,
3 numeric failure (divergent integral, infinite mean).

JSON schemas (``--format json``):

* estimate: ``{"c_s": float, "s": int, "n": int, "t": float|null,
  "se": float|null}``
* test: ``{"s": int, "n": int, "delta_hat": float, "delta_star": float,
  "statistic": float, "p_value": float, "alpha": float,
  "alternative": str, "reject": bool, "alt_se": float|null,
  "degenerate": bool}``
* analytic: ``{"model": str, "s": float, "t": float|null, "value": float,
  "method": str, "abs_err_bound": float}``
"""

import argparse
import json
import sys

from .analytic import cregf_numeric, cregf_closed, dcregf_closed, dcregf_numeric
from .datasets import parse_data_text
from .distributions import parse_model
from .estimation import cregf_estimate, dcregf_estimate
from .exceptions import (
    CregfError,
    DivergentIntegralError,
    NoClosedFormError,
    NonFiniteMeanError,
)
from .exptest import run_test
from .simulation import load_sim_config, run_bias_mse, run_size_power, write_csv
from .validation import sort_validate

USAGE_ERROR = 2
NUMERIC_ERROR = 3


def _read_data_file(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ValueError(f"cannot read {path}: {exc}") from exc
    return parse_data_text(text)


def _emit(payload: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(payload))
        return
    width = max(len(k) for k in payload)
    for key, value in payload.items():
        if isinstance(value, float):
            text = f"{value:.6g}"
        elif value is None:
            text = "-"
        else:
            text = str(value)
        print(f"{key:<{width}}  {text}")


def _cmd_estimate(args) -> int:
    data = sort_validate(_read_data_file(args.file))
    if args.t is None:
        est = cregf_estimate(data, args.s, want_se=args.se)
    else:
        est = dcregf_estimate(data, args.s, args.t, want_se=args.se)
    _emit(
        {"c_s": est.value, "s": est.s, "n": est.n, "t": args.t, "se": est.std_error},
        args.format,
    )
    return 0


def _cmd_test(args) -> int:
    data = sort_validate(_read_data_file(args.file))
    report = run_test(
        data, s=args.s, alpha=args.alpha, alternative=args.alternative,
        with_alt_se=args.diagnostics,
    )
    _emit(report.to_dict(), args.format)
    return 0


def _cmd_analytic(args) -> int:
    model = parse_model(args.model)
    if args.t is None:
        try:
            result = cregf_closed(model, args.s)
        except NoClosedFormError:
            result = cregf_numeric(model, args.s)
    else:
        try:
            result = dcregf_closed(model, args.s, args.t)
        except NoClosedFormError:
            result = dcregf_numeric(model, args.s, args.t)
    _emit(
        {
            "model": args.model,
            "s": float(args.s),
            "t": args.t,
            "value": result.value,
            "method": result.method,
            "abs_err_bound": result.abs_err_bound,
        },
        args.format,
    )
    return 0


def _cmd_simulate(args) -> int:
    spec = load_sim_config(args.config)
    overrides = {}
    if args.seed is not None:
        overrides["master_seed"] = args.seed
    if args.workers is not None:
        overrides["workers"] = args.workers
    if overrides:
        from dataclasses import replace

        spec = replace(spec, **overrides)

    def progress(done, total):
        print(f"simulate: {done}/{total}", file=sys.stderr)

    runner = run_bias_mse if spec.kind == "bias_mse" else run_size_power
    rows = runner(spec, progress=progress)
    write_csv(rows, args.out)
    print(f"wrote {len(rows)} rows to {args.out}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cregf",
        description=(
            "Survival-power functionals of lifetime data: estimation, "
            "exponentiality testing, analytic reference values and Monte "
            "Carlo studies."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p):
        p.add_argument(
            "--format", choices=("text", "json"), default="text",
            help="output format (default: text)",
        )

    p_est = sub.add_parser("estimate", help="estimate the functional from a data file")
    p_est.add_argument("file", help="whitespace-separated or single-column CSV data")
    p_est.add_argument("--s", type=int, required=True, help="subset order (>= 1)")
    p_est.add_argument("--t", type=float, default=None, help="conditioning age")
    p_est.add_argument("--se", action="store_true", help="attach the plug-in standard error")
    add_format(p_est)
    p_est.set_defaults(func=_cmd_estimate)

    p_test = sub.add_parser("test", help="run the exponentiality test on a data file")
    p_test.add_argument("file")
    p_test.add_argument("--s", type=int, default=1)
    p_test.add_argument("--alpha", type=float, default=0.05)
    p_test.add_argument(
        "--alternative", choices=("two-sided", "greater"), default="two-sided"
    )
    p_test.add_argument(
        "--diagnostics", action="store_true",
        help="include the plug-in alternative-variance SE in the report",
    )
    add_format(p_test)
    p_test.set_defaults(func=_cmd_test)

    p_an = sub.add_parser("analytic", help="closed-form or quadrature reference value")
    p_an.add_argument("model", help="model spec string, e.g. exp:2 or gamma:2,1")
    p_an.add_argument("--s", type=float, required=True)
    p_an.add_argument("--t", type=float, default=None)
    add_format(p_an)
    p_an.set_defaults(func=_cmd_analytic)

    p_sim = sub.add_parser("simulate", help="run a Monte Carlo experiment from a config")
    p_sim.add_argument("config", help="key = value config file (see README)")
    p_sim.add_argument("--seed", type=int, default=None, help="override the master seed")
    p_sim.add_argument("--workers", type=int, default=None, help="override worker count")
    p_sim.add_argument("--out", required=True, help="output CSV path")
    p_sim.set_defaults(func=_cmd_simulate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DivergentIntegralError, NonFiniteMeanError) as exc:
        print(f"cregf: numeric failure: {exc}", file=sys.stderr)
        return NUMERIC_ERROR
    except (CregfError, ValueError, OSError) as exc:
        print(f"cregf: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
