"""``ehrlab`` command line: build, count, ehrhart, periods, verify.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
3 geometry / validation defect.
"""

import argparse
import json
import logging
import sys

from . import constructions as C
from .errors import EhrlabError, GeometryError, SearchBudgetExceeded
from .latcount import count, default_jobs, ehrhart
from .polygeom import PolytopalBall, denominator, pieces_of, pyr_power, target_from_json
from .qpalg import format_rational, period_sequence
from .verify import SUITES, run_suite

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

log = logging.getLogger("ehrlab")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_GEOMETRY = 0, 1, 2, 3

CONSTRUCTIONS = ("segment", "pentagon", "cyclic", "pyr", "q0", "qi", "qstar", "L", "R", "Lp", "Rp", "Mi", "M")


class UsageError(Exception):
    pass


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {value}")
    return value


def _nonneg_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative, got {value}")
    return value


def _int_list(text):
    try:
        return tuple(int(t) for t in str(text).split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated integer list, got {text!r}")


def _positive_list(text):
    values = _int_list(text)
    if not values or any(v < 1 for v in values):
        raise argparse.ArgumentTypeError(f"expected positive integers, got {text!r}")
    return values


def _range(text):
    try:
        a, b = text.split("..")
        a, b = int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a range like 1..5, got {text!r}")
    if a < 1 or b < a:
        raise argparse.ArgumentTypeError(f"range {text!r} must satisfy 1 <= a <= b")
    return a, b


# flag name -> converter, used for values coming from a --config file
_CONFIG_TYPES = {
    "jobs": _positive_int,
    "p": None,
    "dim": _positive_int,
    "i": None,
    "k": _positive_int,
    "T": _int_list,
    "periods": _positive_list,
    "shifts": _positive_list,
    "max_i": _nonneg_int,
    "base": str,
    "times": _nonneg_int,
    "out": str,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="ehrlab", description="Ehrhart quasi-polynomials of rational polytopes and balls.")
    parser.add_argument("--jobs", type=_positive_int, default=None, help="counting threads (default: EHRLAB_JOBS or CPU count)")
    parser.add_argument("--config", default=None, help="TOML file with flag values; command-line flags win")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build a construction and write it as JSON")
    b.add_argument("construction", choices=CONSTRUCTIONS)
    b.add_argument("--p", type=_positive_int)
    b.add_argument("--dim", type=_positive_int)
    b.add_argument("--i", type=_nonneg_int)
    b.add_argument("--k", type=_positive_int)
    b.add_argument("--T", type=_int_list)
    b.add_argument("--periods", type=_positive_list)
    b.add_argument("--shifts", type=_positive_list)
    b.add_argument("--base", choices=("segment", "pentagon"))
    b.add_argument("--times", type=_nonneg_int, help="pyramid power for 'pyr'")
    b.add_argument("--out", help="output path (default: stdout)")

    c = sub.add_parser("count", help="count lattice points of a dilate")
    c.add_argument("input")
    c.add_argument("--k", type=_positive_int)
    c.add_argument("--range", type=_range, dest="krange", metavar="A..B")

    e = sub.add_parser("ehrhart", help="Ehrhart quasi-polynomial as JSON")
    e.add_argument("input")

    pr = sub.add_parser("periods", help="period sequence of the Ehrhart quasi-polynomial")
    pr.add_argument("input")
    pr.add_argument("--json", action="store_true", help="print a JSON object instead of two text lines")

    v = sub.add_parser("verify", help="run a theorem verification suite")
    v.add_argument("suite", choices=SUITES + ("all",))
    v.add_argument("--T", type=_int_list)
    v.add_argument("--max-i", type=_nonneg_int, dest="max_i")
    v.add_argument("--p", type=_positive_list)
    v.add_argument("--i", type=_int_list)
    v.add_argument("--dim", type=_positive_int)
    v.add_argument("--periods", type=_positive_list)
    v.add_argument("--shifts", type=_positive_list)
    return parser


def _apply_config(args, parser):
    if not args.config:
        return
    try:
        with open(args.config, "rb") as fh:
            data = tomllib.load(fh)
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise UsageError(f"--config: cannot read {args.config}: {exc}")
    section = data.get(args.command, {})
    merged = {k: v for k, v in data.items() if not isinstance(v, dict)}
    if isinstance(section, dict):
        merged.update(section)
    for key, value in merged.items():
        attr = key.replace("-", "_")
        if attr in ("krange", "range"):
            attr, conv = "krange", _range
        else:
            conv = _CONFIG_TYPES.get(attr, str)
        if not hasattr(args, attr) or getattr(args, attr) is not None:
            continue
        if conv is None:  # --p / --i: scalar for build, list for verify
            conv = _positive_int if (args.command == "build" and attr == "p") else (
                _nonneg_int if args.command == "build" else _int_list)
        if isinstance(value, list):
            value = ",".join(str(x) for x in value)
        try:
            setattr(args, attr, conv(str(value)))
        except argparse.ArgumentTypeError as exc:
            raise UsageError(f"--{key} (from config): {exc}")


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"--{name} is required for 'build {args.construction}'")


def _params(args):
    _need(args, "dim", "periods")
    try:
        config = C.CyclicConfig(args.T) if args.T else None
        return C.ConstructionParams(args.dim, args.periods, config, args.shifts)
    except ValueError as exc:
        flag = "--periods" if "period" in str(exc) else "--shifts" if "shift" in str(exc) else "--T"
        raise UsageError(f"{flag}: {exc}")


def _config_for(args, n):
    if not args.T:
        return None
    if len(args.T) != n + 1:
        raise UsageError(f"--T must list {n + 1} integers for --dim {n}")
    try:
        return C.CyclicConfig(args.T)
    except ValueError as exc:
        raise UsageError(f"--T: {exc}")


def make_construction(args):
    """Return ``(target, provenance)`` for ``build``."""
    name = args.construction
    prov = {"construction": name, "n": None, "periods": None, "T": None, "shifts": None}
    if name in ("segment", "pentagon"):
        _need(args, "p")
        target = C.segment(args.p) if name == "segment" else C.pentagon(args.p)
        prov.update(n=target.ambient_dim, periods=[args.p])
    elif name == "pyr":
        _need(args, "p", "base")
        times = args.times or 0
        base = C.segment(args.p) if args.base == "segment" else C.pentagon(args.p)
        target = pyr_power(base, times)
        prov.update(n=target.ambient_dim, periods=[args.p], base=args.base, times=times)
    elif name == "cyclic":
        _need(args, "dim", "i")
        config = _config_for(args, args.dim) or C.CyclicConfig.default(args.dim)
        if args.i > args.dim:
            raise UsageError(f"--i must be at most --dim ({args.dim})")
        target = C.cyclic(config, args.i)
        prov.update(n=args.dim, T=list(config.T), i=args.i)
    elif name == "q0":
        _need(args, "dim", "p")
        target = C.q0_piece(args.dim, args.p, args.k) if args.k else pyr_power(C.segment(args.p), args.dim - 1)
        if args.k is None:
            target = PolytopalBall(args.dim, (target,))
        prov.update(n=args.dim, periods=[args.p], shifts=[args.k] if args.k else None)
    elif name in ("qi", "L", "R", "Lp", "Rp", "Mi"):
        need = ("dim", "i") if name == "Lp" else ("dim", "i", "p")
        _need(args, *need)
        n, i = args.dim, args.i
        lo = 0 if name == "qi" else 1
        if not lo <= i <= n - 1:
            raise UsageError(f"--i must satisfy {lo} <= i <= {n - 1} for 'build {name}'")
        config = _config_for(args, n)
        k = args.k or 1
        if name == "qi":
            if args.k not in (None, 1):
                raise UsageError("--k is fixed to 1 for 'build qi'")
            target = C.build_Qi(n, i, args.p, config)
        elif name == "L":
            target = C.left_summand(n, i, args.p, k, config)
        elif name == "R":
            target = C.right_summand(n, i, args.p, k, config)
        elif name == "Lp":
            target = C.left_facet(n, i, k, config)
        elif name == "Rp":
            target = C.right_facet(n, i, args.p, k, config)
        else:
            target = C.middle_single(n, i, args.p, k, config)
        prov.update(n=n, periods=[args.p] if args.p else None, T=list((config or C.CyclicConfig.default(n)).T),
                    shifts=[k], i=i)
    elif name in ("qstar", "M"):
        params = _params(args)
        if params.shifts is None:
            params = params.with_shifts(C.choose_shifts(params))
        target = C.build_qstar(params) if name == "qstar" else C.middle(params)
        prov.update(params.provenance(name))
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown construction {name}")
    return target, prov


def _summary(target):
    pieces = pieces_of(target)
    dims = sorted({p.dimension for p in pieces})
    nverts = len(target.vertices)
    return (f"dimension {max(dims)} in R^{target.ambient_dim}, pieces {len(pieces)}, "
            f"vertices {nverts}, denominator {denominator(target)}")


def cmd_build(args):
    try:
        target, prov = make_construction(args)
    except GeometryError:
        raise
    except ValueError as exc:
        raise UsageError(str(exc))
    data = target.to_json()
    data["provenance"] = prov
    text = json.dumps(data, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
        print(_summary(target))
    else:
        print(text)
        print(_summary(target), file=sys.stderr)
    return EXIT_OK


def _load(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON: {exc}")
    try:
        return target_from_json(data)
    except GeometryError:
        raise
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}")


def cmd_count(args):
    target = _load(args.input)
    if args.krange:
        a, b = args.krange
        for k in range(a, b + 1):
            print(f"{k},{count(target, k, args.jobs)}")
        return EXIT_OK
    if args.k is None:
        raise UsageError("count needs --k or --range")
    print(count(target, args.k, args.jobs))
    return EXIT_OK


def cmd_ehrhart(args):
    target = _load(args.input)
    res = ehrhart(target, args.jobs)
    out = res.to_json()
    lead = res.qp.coefficients[-1]
    if res.qp.degree == target.ambient_dim and lead.period == 1:
        out["volume"] = format_rational(lead.values[0])
    print(json.dumps(out, indent=2))
    return EXIT_OK


def cmd_periods(args):
    target = _load(args.input)
    res = ehrhart(target, args.jobs)
    seq = list(period_sequence(res.qp))
    if args.json:
        print(json.dumps({"periods": seq, "period_used": res.period_used,
                          "validation_points": [[k, c] for k, c in res.validation_points]}))
    else:
        print(",".join(str(p) for p in seq))
        print("validation " + " ".join(f"{k}:{c}" for k, c in res.validation_points))
    return EXIT_OK


def cmd_verify(args):
    options = {"T": args.T, "max_i": args.max_i, "p": args.p, "i": args.i, "dim": args.dim, "shifts": args.shifts}
    if args.suite == "qstar":
        if args.periods:
            if args.dim and args.dim != len(args.periods):
                raise UsageError(f"--periods must list {args.dim} entries for --dim {args.dim}")
            options["cases"] = (args.periods,)
        elif args.dim or args.T or args.shifts:
            raise UsageError("--periods is required with --dim/--T/--shifts for 'verify qstar'")
    try:
        report = run_suite(args.suite, args.jobs, **options)
    except ValueError as exc:
        raise UsageError(str(exc))
    print(json.dumps(report.to_json(), indent=2))
    return EXIT_OK if report.all_pass else EXIT_FAIL


COMMANDS = {"build": cmd_build, "count": cmd_count, "ehrhart": cmd_ehrhart, "periods": cmd_periods, "verify": cmd_verify}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        _apply_config(args, parser)
        if args.jobs is None:
            args.jobs = default_jobs()
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"ehrlab {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GeometryError, SearchBudgetExceeded) as exc:
        print(f"ehrlab {args.command}: geometry error: {exc}", file=sys.stderr)
        return EXIT_GEOMETRY
    except EhrlabError as exc:
        print(f"ehrlab {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_GEOMETRY


if __name__ == "__main__":
    sys.exit(main())
