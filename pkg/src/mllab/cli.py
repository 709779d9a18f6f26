"""Command-line front end.

Exit codes: 0 success, 1 a check or probe failed, 2 bad flags/domain/config,
3 a search produced a confirmed counterexample candidate.
"""

import argparse
from dataclasses import replace
import json
import sys
import time

from . import __version__
from .errors import ConfigError, DomainError
from .grid import PRESETS, parse_axis, read_config, resolve
from .inequalities import CHECKS
from .probe import (PROBES, SearchRanges, Verdict, probe_ids, probe_sweep, search_problem1,
                    search_problem2)
from .report import RunReport, check_ids, check_report, probe_report, run_checks
from .series import (Family, MLParams, SeriesConfig, Summation, eval_ml, eval_ml_normalized,
                     eval_tail, eval_tail_any_q)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_COUNTEREXAMPLE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    """Raise instead of exiting so ``main`` can return the code."""

    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


class _UsageError(Exception):
    pass


def _series_flags(p):
    g = p.add_argument_group("series")
    g.add_argument("--rel-tol", type=float)
    g.add_argument("--abs-tol", type=float)
    g.add_argument("--max-terms", type=int)
    g.add_argument("--consecutive-small", type=int)
    g.add_argument("--z-abs-max", type=float)
    g.add_argument("--summation", choices=[s.value for s in Summation])


def _series_overrides(args):
    keys = ("rel_tol", "abs_tol", "max_terms", "consecutive_small", "z_abs_max", "summation")
    return {k: getattr(args, k) for k in keys}


def _grid_flags(p):
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--grid", help="axis overrides, e.g. 'z=1e-3:10:20;beta={1,2}'")
    p.add_argument("--config", help="INI file with [series] and [grid] sections")


def _output_flags(p, formats=("text", "json", "csv")):
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--format", choices=formats, default="text")


def _float_list(text):
    try:
        return tuple(float(s) for s in text.split(",") if s.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _range(text):
    try:
        lo, hi = (float(s) for s in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected min:max, got {text!r}")
    return lo, hi


def build_parser():
    parser = _Parser(prog="mllab", description="Mittag-Leffler evaluation and inequality checks")
    parser.add_argument("--version", action="version", version=f"mllab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", help="evaluate one series")
    p.add_argument("--family", choices=[f.value for f in Family], default="classical")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--q", type=float, default=1.0)
    p.add_argument("--z", type=float, required=True)
    p.add_argument("--normalized", action="store_true", help="multiply by Gamma(beta)")
    p.add_argument("--tail", type=int, metavar="N", help="sum from k = N+1 only")
    p.add_argument("--format", choices=("text", "json"), default="text")
    _series_flags(p)

    p = sub.add_parser("check", help="run inequality checks over a grid")
    p.add_argument("--checks", default="all", help="comma list of check ids, or 'all'")
    p.add_argument("--no-records", action="store_true", help="summary only in json output")
    _grid_flags(p)
    _output_flags(p)
    _series_flags(p)

    p = sub.add_parser("probe", help="monotonicity probes")
    p.add_argument("--probes", default="all", help="comma list of probe ids, or 'all'")
    for name in ("alpha", "beta", "gamma", "q"):
        p.add_argument(f"--{name}", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--beta1", type=float)
    p.add_argument("--beta2", type=float)
    p.add_argument("--z", type=_float_list, help="comma list of z values (successor_ratio)")
    p.add_argument("--z-grid", help="min:max:count[,log=..] or {a,b,...} for the z axis")
    p.add_argument("--beta-grid", help="min:max:count or {a,b,...} for the beta axis")
    _grid_flags(p)
    _output_flags(p, ("text", "json"))
    _series_flags(p)

    p = sub.add_parser("search", help="random search on the open problems")
    p.add_argument("--problem", type=int, choices=(1, 2), required=True)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--q-set", type=_float_list)
    p.add_argument("--n-set", type=_float_list)
    p.add_argument("--alpha-range", type=_range)
    p.add_argument("--beta-range", type=_range)
    p.add_argument("--gamma-range", type=_range)
    p.add_argument("--z-range", type=_range)
    p.add_argument("--z-points", type=int)
    _output_flags(p, ("text", "json"))
    _series_flags(p)

    sub.add_parser("list", help="list check and probe ids")
    return parser


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load(args):
    file_cfg = read_config(args.config) if getattr(args, "config", None) else None
    return resolve(getattr(args, "preset", None), getattr(args, "grid", None), file_cfg,
                   _series_overrides(args))


def _flag_axis(axis, text, param):
    try:
        return parse_axis(axis, text)
    except ConfigError as exc:
        raise ConfigError(str(exc), param=param) from None


def cmd_eval(args):
    cfg = SeriesConfig(**{k: v for k, v in _series_overrides(args).items() if v is not None})
    p = MLParams(args.alpha, args.beta, args.gamma, args.q, Family(args.family))
    if args.tail is not None:
        tail = eval_tail if p.family is not Family.FOUR_PARAMETER else eval_tail_any_q
        res = tail(p, args.tail, args.z, cfg)
    else:
        res = (eval_ml_normalized if args.normalized else eval_ml)(p, args.z, cfg)
    if args.format == "json":
        d = {"value": res.value, "trunc_error_bound": res.trunc_error_bound,
             "terms_used": res.terms_used, "converged": res.converged, "log_abs": res.log_abs,
             "sign": res.sign, "method": res.method}
        print(json.dumps(d, sort_keys=True))
    else:
        print(f"value             {res.value!r}")
        print(f"trunc_error_bound {res.trunc_error_bound:.3e}")
        print(f"terms_used        {res.terms_used}")
        print(f"converged         {res.converged}")
        if res.value in (float("inf"), float("-inf")):
            print(f"log|value|        {res.log_abs!r} (sign {res.sign:+d})")
    return EXIT_OK


def cmd_check(args):
    ids = check_ids(args.checks)
    grid, cfg = _load(args)
    t0 = time.perf_counter()
    records, skipped = run_checks(ids, grid, cfg)
    report = check_report(ids, records, skipped, grid, cfg, time.perf_counter() - t0,
                          include_records=not args.no_records)
    _emit(report.render(args.format), args.out)
    if args.out and args.format != "text":
        sys.stdout.write(report.to_text())
    return EXIT_FAIL if report.failures else EXIT_OK


def cmd_probe(args):
    ids = probe_ids(args.probes)
    grid, cfg = _load(args)
    pins = {}
    for name in ("alpha", "beta", "gamma", "q", "n"):
        if getattr(args, name) is not None:
            pins[name] = (getattr(args, name),)
    if args.z is not None:
        pins["z"] = tuple(z for z in args.z if z > 0) or grid.z
        pins["z_neg"] = tuple(z for z in args.z if z <= 0)
    if args.z_grid:
        pins["z"] = _flag_axis("z", args.z_grid, "z_grid")
        pins["z_neg"] = ()
    if args.beta_grid:
        pins["beta"] = _flag_axis("beta", args.beta_grid, "beta_grid")
    pairs = None
    if args.beta1 is not None or args.beta2 is not None:
        if args.beta1 is None or args.beta2 is None:
            raise DomainError("beta_ratio needs both --beta1 and --beta2", param="beta2")
        pairs = [(args.beta1, args.beta2)]
    if pins:
        grid = replace(grid, **pins)
    t0 = time.perf_counter()
    reports = probe_sweep(ids, grid, cfg, beta_pairs=pairs)
    if not reports:
        raise DomainError("no probe could run on the requested parameters", param="probes")
    report = probe_report(reports, cfg, time.perf_counter() - t0)
    _emit(report.render(args.format), args.out)
    return EXIT_FAIL if report.failures else EXIT_OK


def cmd_search(args):
    _, cfg = resolve(None, None, None, _series_overrides(args))
    kw = {}
    for flag, key in (("alpha_range", "alpha"), ("beta_range", "beta"), ("gamma_range", "gamma"),
                      ("z_range", "z"), ("q_set", "q_set"), ("z_points", "z_points")):
        if getattr(args, flag) is not None:
            kw[key] = getattr(args, flag)
    if args.n_set is not None:
        kw["n_set"] = tuple(int(n) if int(n) == n else n for n in args.n_set)
    ranges = SearchRanges(**kw)
    if args.problem == 1:
        res = search_problem1(args.trials or 10_000, 42 if args.seed is None else args.seed,
                              ranges, cfg)
    else:
        res = search_problem2(args.trials or 2_000, 7 if args.seed is None else args.seed,
                              ranges, cfg=cfg)
    report = RunReport("search", {"result": res.to_dict()}, 0.0)
    if args.format == "json":
        text = report.to_json()
    else:
        wp = ", ".join(f"{k}={v:.6g}" for k, v in res.worst_params.items())
        text = (f"Problem {args.problem}: {res.verdict.value}\n"
                f"trials {res.trials}, evaluated {res.evaluated}, skipped {res.skipped}, "
                f"seed {res.seed}\n"
                f"worst residual {res.worst_residual:.6e} at {wp}\n")
        for q, s in res.per_q.items():
            text += f"  q={q:<5} evaluated {s['evaluated']:>6}  worst {s['worst_residual']:.6e}\n"
    _emit(text, args.out)
    return EXIT_COUNTEREXAMPLE if res.verdict is Verdict.CANDIDATE else EXIT_OK


def cmd_list(args):
    print("checks:")
    for cid, info in CHECKS.items():
        axes = ",".join(info.axes)
        line = f"  {cid:<8} {info.anchor}  [{axes}]"
        print(line + ("  (real z)" if info.real_line else ""))
    print("probes:")
    for pid, desc in PROBES.items():
        print(f"  {pid:<16} {desc}")
    return EXIT_OK


_COMMANDS = {"eval": cmd_eval, "check": cmd_check, "probe": cmd_probe, "search": cmd_search,
             "list": cmd_list}


def _flag(param):
    return "--" + param.replace("_", "-")


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return exc.code if isinstance(exc.code, int) else EXIT_OK
    try:
        return _COMMANDS[args.command](args)
    except DomainError as exc:
        where = f"{_flag(exc.param)}: " if exc.param else ""
        print(f"error: {where}{exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as exc:
        where = f"{_flag(exc.param)}: " if exc.param else ""
        print(f"error: {where}{exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
