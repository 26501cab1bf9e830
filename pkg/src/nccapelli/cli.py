"""Command-line front end: the verification suite, single verifiers, path tables and CBH."""
from __future__ import annotations

import argparse
import configparser
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone
from fractions import Fraction

from . import __version__
from . import identities as ids
from .errors import DomainError, UsageError
from .lukasiewicz import c_formula, enumerate_excursions
from .scalars import ParamRing, rational
from .series import TruncSeries, cbh_rhs

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

REALIZED = ("capelli", "cauchy_binet", "oscillator", "grassmann", "holomorphic",
            "direct_grassmann", "support", "coherence")
IDENTITIES = REALIZED + ("substitution", "cbh", "lukasiewicz", "berezin", "oracles")

LIMITS = {"n": (1, 4), "m": (1, 5), "s_dim": (1, 3), "order": (1, 12), "trunc": (0, 8),
          "len": (0, 12), "jobs": (1, 64), "k": (0, 2), "h": (0, 3), "samples": (0, 100000)}

WEYL_GRID = ((2, 2, 1), (2, 3, 1), (2, 3, 2), (3, 3, 1), (3, 4, 2))
F_CHOICES = ((1, -1), (1, -1, Fraction(1, 2)))
CBH_CHOICES = ((0, 1), (0, 0, 1), (1, 1, 0, 1))


# -- task execution -----------------------------------------------------------

def _realize(choice):
    kind = choice[0]
    if kind == "capelli":
        return ids.realize_capelli(choice[1])
    if kind == "weyl_example":
        return ids.realize_weyl_example(*choice[1:])
    if kind == "free":
        return ids.realize_free(*choice[1:])
    raise UsageError(f"unknown realization {kind!r}")


def run_task(task):
    """Run one ``(identity, options)`` task and return its result."""
    name, opt = task
    if name in REALIZED:
        r = _realize(opt["realization"])
        if name in ("capelli", "cauchy_binet"):
            return ids.verify_cauchy_binet_quantum(r, opt["variant"])
        if name == "oscillator":
            return ids.verify_oscillator_rep(r, opt["variant"], opt.get("trunc"))
        if name == "grassmann":
            return ids.verify_grassmann_rep(r, opt["variant"])
        if name == "holomorphic":
            return ids.verify_holomorphic_coldet(r)
        if name == "direct_grassmann":
            return ids.verify_direct_grassmann(r)
        if name == "support":
            return ids.verify_support_lemmas(r)
        return ids.verify_coherence(r)
    if name == "substitution":
        opt = dict(opt)
        return ids.verify_substitution(opt.pop("kind"), **opt)
    if name == "cbh":
        return ids.verify_cbh(opt["f"], opt["order"], opt.get("c"))
    if name == "lukasiewicz":
        return ids.verify_lukasiewicz(opt["len"], opt["samples"], seed=opt.get("seed", 0))
    if name == "berezin":
        return ids.verify_berezin(opt.get("samples", 100), seed=opt.get("seed", 0))
    if name == "oracles":
        return ids.verify_oracles(seed=opt.get("seed", 0))
    raise UsageError(f"unknown identity {name!r}")


def default_tasks(path_len=6, order=6):
    tasks = []
    capelli = [("capelli", n) for n in (1, 2, 3)]
    weyl = [("weyl_example",) + d for d in WEYL_GRID]
    for r in capelli:
        for v in ("col", "row"):
            tasks.append(("capelli", {"realization": r, "variant": v}))
    for name in ("oscillator", "grassmann"):
        for r in capelli + weyl:
            for v in ("col", "row"):
                tasks.append((name, {"realization": r, "variant": v}))
    for r in capelli + [("weyl_example", 2, 3, 1)]:
        tasks.append(("holomorphic", {"realization": r}))
    for r in capelli:
        tasks.append(("direct_grassmann", {"realization": r}))
    for r in (("capelli", 3), ("weyl_example", 2, 3, 2)):
        tasks.append(("support", {"realization": r}))
    for r in capelli + [("weyl_example", 2, 3, 1), ("weyl_example", 2, 3, 2)]:
        tasks.append(("coherence", {"realization": r}))
    for n in (1, 2, 3):
        for v in ("col", "row"):
            tasks.append(("substitution", {"kind": "prop_old", "n": n, "variant": v}))
    for f in F_CHOICES:
        for s in (0, 1, 2, "symbolic"):
            for k in (0, 1, 2):
                for n in (1, 2, 3):
                    tasks.append(("substitution", {"kind": "multilin", "n": n, "k": k, "f": f, "s": s}))
    for f in F_CHOICES:
        for h in range(4):
            for m in range(4):
                tasks.append(("substitution", {"kind": "lem_faf", "h": h, "m": m, "f": f}))
    for f in CBH_CHOICES:
        tasks.append(("cbh", {"f": f, "order": order}))
    tasks.append(("lukasiewicz", {"len": path_len, "samples": 1000}))
    tasks.append(("berezin", {"samples": 100}))
    tasks.append(("oracles", {}))
    return tasks


def run_tasks(tasks, jobs=1):
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(jobs) as pool:
            return list(pool.map(run_task, tasks, chunksize=1))
    return [run_task(t) for t in tasks]


# -- reporting ----------------------------------------------------------------

def build_report(config, results, timestamp=True):
    return {
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds") if timestamp else None,
        "config": config,
        "results": [r.as_dict(timing=timestamp) for r in results],
        "overall": "pass" if all(r.passed for r in results) else "fail",
    }


def _fmt_params(params):
    return " ".join(f"{k}={v}" for k, v in params.items())


def render_text(report):
    lines = []
    for r in report["results"]:
        line = f"{r['status'].upper():4}  {r['identity']:<16} {_fmt_params(r['params'])}"
        if r["elapsed_ms"] is not None:
            line += f"  [{r['elapsed_ms']:.0f} ms]"
        lines.append(line)
        if r["first_discrepancy"]:
            lines.append(f"      first discrepancy: {r['first_discrepancy']}")
    n_pass = sum(r["status"] == "pass" for r in report["results"])
    lines.append(f"overall: {report['overall']} ({n_pass}/{len(report['results'])} passed)")
    return "\n".join(lines)


def _emit(report, fmt, out):
    if fmt == "json":
        out.write(json.dumps(report, indent=2, ensure_ascii=False, sort_keys=False) + "\n")
    else:
        out.write(render_text(report) + "\n")


# -- argument handling ----------------------------------------------------------

def _coeff_list(text):
    try:
        return tuple(rational(Fraction(x.strip())) for x in text.split(",") if x.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a comma-separated list of rationals: {text!r}") from None


def _s_value(text):
    if text == "symbolic":
        return text
    try:
        return rational(Fraction(text))
    except ValueError:
        raise argparse.ArgumentTypeError(f"s must be a rational or 'symbolic', got {text!r}") from None


def _add_common(p):
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--no-timestamp", action="store_true",
                   help="omit the timestamp and per-result timings (byte-stable output)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--output", help="write the report to this file instead of standard output")


def build_parser():
    parser = argparse.ArgumentParser(prog="nccapelli", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", help="file of 'key = value' lines using the flag names")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("suite", help="run the default verification grid")
    _add_common(p)
    p.add_argument("--only", action="append", choices=IDENTITIES, help="restrict to these identities")
    p.add_argument("--len", type=int, default=6, help="exhaustive path sweep length bound")
    p.add_argument("--order", type=int, default=6, help="t-order for the CBH checks")

    p = sub.add_parser("verify", help="run one verifier")
    _add_common(p)
    p.add_argument("name", choices=IDENTITIES)
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int, help="columns of X; the ket level for lem_faf")
    p.add_argument("--s-dim", type=int)
    p.add_argument("--realization", choices=("capelli", "weyl_example", "free"))
    p.add_argument("--variant", choices=("col", "row"))
    p.add_argument("--trunc", type=int)
    p.add_argument("--order", type=int, default=6)
    p.add_argument("--kind", choices=("prop_old", "multilin", "lem_faf"), default="prop_old")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--h", type=int, default=1)
    p.add_argument("--s", type=_s_value, default="symbolic")
    p.add_argument("--f", type=_coeff_list, help="polynomial coefficients, constant term first")
    p.add_argument("--c", type=Fraction, help="numeric c for cbh (symbolic if omitted)")
    p.add_argument("--len", type=int, default=6)
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("paths", help="excursion counts and weight tables")
    p.add_argument("--len", type=int, required=True)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--count", action="store_true")
    mode.add_argument("--table", action="store_true")
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("cbh", help="corrected exponent and its order-by-order check")
    p.add_argument("--order", type=int, default=6)
    p.add_argument("--f", type=_coeff_list, required=True)
    p.add_argument("--c", type=Fraction)
    _add_common(p)
    return parser


def _config_argv(path, parser):
    """Translate a ``key = value`` file into flags placed before the command-line ones."""
    cp = configparser.ConfigParser(interpolation=None)
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_string("[config]\n" + fh.read())
    except (OSError, configparser.Error) as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from None
    flags = []
    for key, value in cp["config"].items():
        flag = "--" + key.strip().replace("_", "-")
        if value.strip().lower() in ("true", "yes", "on"):
            flags.append(flag)
        elif value.strip().lower() in ("false", "no", "off"):
            continue
        else:
            flags += [flag, value.strip()]
    return flags


def _check_limits(args):
    for key, (lo, hi) in LIMITS.items():
        v = getattr(args, key, None)
        if v is not None and not lo <= v <= hi:
            raise UsageError(f"--{key.replace('_', '-')} must lie in {lo}..{hi}, got {v}")


def _verify_task(args):
    name = args.name
    if name in REALIZED:
        n = args.n or 2
        kind = args.realization or ("weyl_example" if args.m or args.s_dim else "capelli")
        if name == "capelli":
            kind = "capelli"
        if kind == "capelli":
            choice = ("capelli", n)
        elif kind == "weyl_example":
            choice = ("weyl_example", n, args.m or n, args.s_dim or 1)
        else:
            choice = ("free", n, args.m or n)
        variants = [args.variant] if args.variant else ["col", "row"]
        if name in ("capelli", "cauchy_binet", "oscillator", "grassmann"):
            return [(name, {"realization": choice, "variant": v, "trunc": args.trunc}) for v in variants]
        return [(name, {"realization": choice})]
    if name == "substitution":
        f = args.f or (1, -1)
        if args.kind == "prop_old":
            variants = [args.variant] if args.variant else ["col", "row"]
            return [(name, {"kind": "prop_old", "n": args.n or 2, "variant": v}) for v in variants]
        if args.kind == "multilin":
            return [(name, {"kind": "multilin", "n": args.n or 2, "k": args.k, "f": f, "s": args.s,
                            "seed": args.seed})]
        return [(name, {"kind": "lem_faf", "h": args.h, "m": args.m or 0, "f": f})]
    if name == "cbh":
        return [(name, {"f": args.f or (0, 1), "order": args.order, "c": args.c})]
    if name == "lukasiewicz":
        return [(name, {"len": args.len, "samples": 1000 if args.samples is None else args.samples,
                        "seed": args.seed})]
    if name == "berezin":
        return [(name, {"samples": 100 if args.samples is None else args.samples, "seed": args.seed})]
    return [(name, {"seed": args.seed})]


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (list, tuple)):
        return [_jsonable(x) for x in obj]
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    return obj


def _run_report(args, tasks, config):
    results = run_tasks(tasks, args.jobs)
    report = build_report(_jsonable(config), results, timestamp=not args.no_timestamp)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            _emit(report, args.format, fh)
    else:
        _emit(report, args.format, sys.stdout)
    return EXIT_PASS if report["overall"] == "pass" else EXIT_FAIL


def _cmd_paths(args):
    if args.table and args.len > 8:
        raise UsageError("--table is limited to --len 8")
    paths = enumerate_excursions(args.len)
    if args.table:
        rows = [{"nu": list(p.nu), "heights": list(p.heights()), "weight": c_formula(p)} for p in paths]
        if args.format == "json":
            print(json.dumps({"len": args.len, "paths": rows}, indent=2))
        else:
            for row in rows:
                print(f"{' '.join(f'{v:>2}' for v in row['nu'])}  ->  {row['weight']}")
            print(f"total weight: {sum(r['weight'] for r in rows)}")
    elif args.format == "json":
        print(json.dumps({"len": args.len, "count": len(paths)}))
    else:
        print(len(paths))
    return EXIT_PASS


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        pre = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
        pre.add_argument("--config")
        known, rest = pre.parse_known_args(argv)
        if known.config and rest:
            rest = rest[:1] + _config_argv(known.config, parser) + rest[1:]
        args = parser.parse_args(rest)
        _check_limits(args)
        if args.command == "paths":
            return _cmd_paths(args)
        if args.command == "cbh":
            f = TruncSeries.from_polynomial(args.f)
            c = "c" if args.c is None else str(args.c)
            if args.format == "text":
                cval = ParamRing(["c"]).var("c") if args.c is None else args.c
                print(f"corrected exponent in x = a: {cbh_rhs(f, cval, args.order)}")
            task = ("cbh", {"f": args.f, "order": args.order, "c": args.c})
            return _run_report(args, [task], {"command": "cbh", "f": args.f, "order": args.order, "c": c})
        if args.command == "suite":
            tasks = default_tasks(args.len, args.order)
            if args.only:
                tasks = [t for t in tasks if t[0] in args.only]
            config = {"command": "suite", "only": sorted(args.only or []), "len": args.len,
                      "order": args.order, "jobs": args.jobs}
            return _run_report(args, tasks, config)
        tasks = _verify_task(args)
        config = {"command": "verify", "name": args.name,
                  "tasks": [{"identity": n, **o} for n, o in tasks]}
        return _run_report(args, tasks, config)
    except (UsageError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
