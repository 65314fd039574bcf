"""Command-line front end: ``subshift-lab <command> ...``.

Exit codes: 1 usage, 2 domain/size, 3 precision, 4 I/O.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import warnings
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from . import __version__
from .complexity import complexity_table, gap_classify, morse_hedlund_classify
from .core import Alphabet, Window, format_grid, read_grid
from .errors import GridFormatError, SubshiftError
from .generators import (HALF_INTERVAL, PARTITIONS, ExactRational, FromFile, FullShift,
                         NaturalExtension, RandomDyadic, Sturmian, SturmianVertical, TimesPQ,
                         fixed_points, generate, is_multiplicatively_independent, load_spec,
                         required_bits, spec_to_json)
from .measure import DIRECTIONS, HORIZONTAL, directional_entropy_estimate
from .periodicity import DEFAULT_MIN_OVERLAP, fundamental_domain, period_vectors

DEFAULT_SEED = 20160901


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    command: str
    source: dict | None = None
    input: str | None = None
    output: str | None = None
    params: dict = field(default_factory=dict)
    format: str = "json"

    def to_json(self):
        return asdict(self)


# -- argument parsing -------------------------------------------------------

def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from None


def _fraction_in_unit(text: str) -> float:
    v = float(text)
    if not 0 < v <= 1:
        raise argparse.ArgumentTypeError(f"expected a value in (0, 1], got {text}")
    return v


def _add_source_args(p: argparse.ArgumentParser):
    g = p.add_argument_group("source")
    g.add_argument("--input", help="read the window from a grid file")
    g.add_argument("--source", help="JSON source specification file")
    g.add_argument("--kind", choices=["full-shift", "sturmian", "sturmian-vertical", "times-pq"],
                   help="inline source kind (alternative to --source)")
    g.add_argument("--alphabet", default="01", help="full-shift alphabet glyphs")
    g.add_argument("--alpha", type=_rational, help="Sturmian slope, e.g. 377/610")
    g.add_argument("--rho", type=_rational, default=Fraction(0), help="Sturmian intercept")
    g.add_argument("--p", type=int, default=2)
    g.add_argument("--q", type=int, default=3)
    g.add_argument("--x", type=_rational, help="exact rational point; omit for a random dyadic point")
    g.add_argument("--bits", type=int, help="bit budget of a random dyadic point (default: minimum safe)")
    g.add_argument("--partition", choices=PARTITIONS, default=HALF_INTERVAL)
    g.add_argument("--i-min", type=int, default=0, help="natural-extension offset (<= 0)")
    g.add_argument("--j-min", type=int, default=0, help="natural-extension offset (<= 0)")
    g.add_argument("--width", type=int, help="window columns")
    g.add_argument("--height", type=int, default=1, help="window rows")
    g.add_argument("--seed", type=int, default=DEFAULT_SEED)


def _add_common(p: argparse.ArgumentParser, formats=("json", "csv")):
    p.add_argument("-o", "--output", help="output file (default: stdout)")
    p.add_argument("--format", choices=formats, default=formats[0])
    p.add_argument("--threads", type=int, help="worker cap (env SUBSHIFT_LAB_THREADS)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="subshift-lab", description="Complexity, periods and entropy of subshift samples.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", help="write a sampled window in grid format")
    _add_source_args(p)
    _add_common(p, ("grid",))

    p = sub.add_parser("complexity", help="complexity table P(n, k)")
    _add_source_args(p)
    _add_common(p)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--k-max", type=int, default=1)
    p.add_argument("--plateau-steps", type=int, help="stable diagonal steps for 'bounded' (default ceil(n_max/4))")

    p = sub.add_parser("periods", help="period vectors and lattice")
    _add_source_args(p)
    _add_common(p, ("json",))
    p.add_argument("--max-shift", type=int, required=True)
    p.add_argument("--min-overlap", type=_fraction_in_unit, default=DEFAULT_MIN_OVERLAP)

    p = sub.add_parser("entropy", help="partition-entropy curve and directional estimate")
    _add_source_args(p)
    _add_common(p)
    p.add_argument("--n", type=int, default=1, help="transverse half-width")
    p.add_argument("--m-max", type=int, required=True)
    p.add_argument("--direction", choices=DIRECTIONS, default=HORIZONTAL)
    p.add_argument("--undersampling", type=float, default=0.1)

    p = sub.add_parser("fixed-points", help="solutions of the period congruence for (i, j)")
    for name in ("p", "q", "i", "j"):
        p.add_argument(name, type=int)
    _add_common(p)

    p = sub.add_parser("mulindep", help="multiplicative independence of p and q")
    p.add_argument("p", type=int)
    p.add_argument("q", type=int)
    _add_common(p, ("text", "json"))

    p = sub.add_parser("gap-report", help="complexity + periods + entropy with a consistency check")
    _add_source_args(p)
    _add_common(p, ("json",))
    p.add_argument("--n-max", type=int, default=12)
    p.add_argument("--plateau-steps", type=int)
    p.add_argument("--max-shift", type=int, default=10)
    p.add_argument("--min-overlap", type=_fraction_in_unit, default=DEFAULT_MIN_OVERLAP)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--m-max", type=int, default=8)
    return parser


# -- sources ----------------------------------------------------------------

def _source_from_args(args):
    """Source spec selected by ``--input``, ``--source`` or the inline ``--kind`` flags."""
    chosen = [x for x in (args.input, args.source, args.kind) if x]
    if len(chosen) != 1:
        raise UsageError("give exactly one of --input, --source, --kind")
    if args.input:
        return FromFile(args.input)
    if args.source:
        try:
            return load_spec(args.source)
        except json.JSONDecodeError as exc:
            raise GridFormatError(f"{args.source}: invalid JSON ({exc})") from None
    if args.kind == "full-shift":
        return FullShift(Alphabet.from_string(args.alphabet), args.seed)
    if args.kind in ("sturmian", "sturmian-vertical"):
        if args.alpha is None:
            raise UsageError("--alpha is required for Sturmian sources")
        cls = SturmianVertical if args.kind == "sturmian-vertical" else Sturmian
        return cls(args.alpha, args.rho)
    if args.width is None:
        raise UsageError("--width is required for generated sources")
    if args.x is not None:
        point = ExactRational(args.x)
    else:
        bits = args.bits or required_bits(args.p, args.q, args.width - args.i_min, args.height - args.j_min)
        point = RandomDyadic(args.seed, bits)
    ext = None
    if args.i_min or args.j_min:
        ext = NaturalExtension(args.i_min, args.j_min, args.seed)
    return TimesPQ(args.p, args.q, point, args.partition, ext)


def _window(spec, args) -> Window:
    if isinstance(spec, FromFile):
        return read_grid(spec.path)
    if args.width is None:
        raise UsageError("--width is required for generated sources")
    return generate(spec, args.width, args.height)


def _source_warnings(spec, w: Window) -> list:
    out = []
    if isinstance(spec, Sturmian) and spec.alpha.denominator <= w.width:
        out.append(
            f"slope {spec.alpha} has denominator {spec.alpha.denominator} <= window length {w.width}; "
            "the sample is periodic and does not emulate an irrational slope"
        )
    if isinstance(spec, TimesPQ):
        out.append("orbit coding of the measured system, not a minimal uniquely ergodic model")
    return out


def _threads(args) -> int:
    if getattr(args, "threads", None):
        return max(1, args.threads)
    env = os.environ.get("SUBSHIFT_LAB_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"SUBSHIFT_LAB_THREADS must be an integer, got {env!r}") from None
    return 1


def _config(args, spec, params) -> RunConfig:
    source = None
    if spec is not None and not isinstance(spec, FromFile):
        source = spec_to_json(spec)
    return RunConfig(
        command=args.command,
        source=source,
        input=getattr(args, "input", None),
        output=args.output,
        params=params,
        format=args.format,
    )


# -- commands ---------------------------------------------------------------

def cmd_gen(args):
    spec = _source_from_args(args)
    w = _window(spec, args)
    return format_grid(w)


def _source_params(args):
    return {"width": args.width, "height": args.height, "seed": args.seed}


def cmd_complexity(args):
    spec = _source_from_args(args)
    w = _window(spec, args)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        table = complexity_table(w, args.n_max, args.k_max, threads=_threads(args))
    if args.format == "csv":
        return _csv(["n", "k", "P", "provenance"], table.csv_rows())
    report = {
        "config": _config(args, spec, {**_source_params(args), "n_max": args.n_max, "k_max": args.k_max,
                                       "plateau_steps": args.plateau_steps}).to_json(),
        "table": table.to_json(),
        "warnings": [str(c.message) for c in caught] + _source_warnings(spec, w),
    }
    if args.k_max == 1:
        report["morse_hedlund"] = morse_hedlund_classify(table.values[:, 0].tolist()).to_json()
    if min(args.n_max, args.k_max) >= 3:
        report["gap"] = gap_classify(table, args.plateau_steps).to_json()
    return _json(report)


def _periods_report(w, max_shift, min_overlap):
    lat = period_vectors(w, max_shift, min_overlap)
    out = lat.to_json()
    out["doubly_periodic"] = lat.doubly_periodic
    if lat.rank == 2:
        try:
            dom = fundamental_domain(w, lat)
            out["fundamental_domain"] = {"width": dom.shape.width, "height": dom.shape.height,
                                         "rows": dom.rows(w.alphabet)}
        except SubshiftError as exc:
            out["fundamental_domain"] = {"error": str(exc)}
    return lat, out


def cmd_periods(args):
    spec = _source_from_args(args)
    w = _window(spec, args)
    _, out = _periods_report(w, args.max_shift, args.min_overlap)
    report = {
        "config": _config(args, spec, {**_source_params(args), "max_shift": args.max_shift,
                                       "min_overlap": args.min_overlap}).to_json(),
        "periods": out,
        "warnings": _source_warnings(spec, w),
    }
    return _json(report)


def cmd_entropy(args):
    spec = _source_from_args(args)
    w = _window(spec, args)
    est = directional_entropy_estimate(w, args.n, args.m_max, w.width, w.height, args.direction, args.undersampling)
    if isinstance(spec, TimesPQ):
        est.log_base_p = spec.p if args.direction == HORIZONTAL else spec.q
    if args.format == "csv":
        return _csv(["m", "H_m", "slope", "cylinders", "anchors", "flag"],
                    ((m, repr(h), repr(s), c, a, f) for m, h, s, c, a, f in est.csv_rows()))
    report = {
        "config": _config(args, spec, {**_source_params(args), "n": args.n, "m_max": args.m_max,
                                       "direction": args.direction, "undersampling": args.undersampling}).to_json(),
        "entropy": est.to_json(),
        "warnings": _source_warnings(spec, w),
    }
    return _json(report)


def cmd_fixed_points(args):
    pts = fixed_points(args.p, args.q, args.i, args.j)
    if args.format == "csv":
        return _csv(["y"], ((str(y),) for y in pts))
    report = {
        "config": _config(args, None, {"p": args.p, "q": args.q, "i": args.i, "j": args.j}).to_json(),
        "count": len(pts),
        "points": [str(y) for y in pts],
    }
    return _json(report)


def cmd_mulindep(args):
    indep = is_multiplicatively_independent(args.p, args.q)
    if args.format == "text":
        return ("independent" if indep else "dependent") + "\n"
    report = {
        "config": _config(args, None, {"p": args.p, "q": args.q}).to_json(),
        "independent": indep,
    }
    return _json(report)


def _is_atomic_source(spec) -> bool:
    return isinstance(spec, TimesPQ) and isinstance(spec.point, ExactRational)


def cmd_gap_report(args):
    spec = _source_from_args(args)
    w = _window(spec, args)
    n_max = args.n_max
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        table = complexity_table(w, n_max, n_max, threads=_threads(args))
    gap = gap_classify(table, args.plateau_steps)
    lat, periods = _periods_report(w, args.max_shift, args.min_overlap)
    try:
        est = directional_entropy_estimate(w, args.n, args.m_max, w.width, w.height, HORIZONTAL)
        if isinstance(spec, TimesPQ):
            est.log_base_p = spec.p
        entropy = est.to_json()
    except SubshiftError as exc:
        entropy = {"skipped": str(exc)}

    notes = []
    below = gap.kind == "below_gap"
    bounded = gap.kind == "bounded"
    if below and lat.rank == 2:
        notes.append("below the nk/2 threshold and doubly periodic: consistent with a finite model")
    elif below and lat.rank == 1:
        notes.append(
            "below the nk/2 threshold with a one-dimensional period lattice: a period vector exists, "
            "but the sample is aperiodic in the complementary direction, so it cannot code a finite "
            "(atomic) x p, x q system and is excluded as a model of any ergodic x p, x q measure"
        )
    elif below:
        notes.append("below the nk/2 threshold but no period was detected within max_shift")
    if bounded:
        notes.append(
            "bounded complexity coincides with an atomic (exact rational) source"
            if _is_atomic_source(spec) else
            "bounded complexity on a source not declared atomic"
        )
    if gap.kind == "above_gap":
        notes.append("sample complexity is above the nk/2 threshold at every tested (n, k)")
    consistency = {
        "gap_kind": gap.kind,
        "lattice_rank": lat.rank,
        "below_gap_with_rank2": below and lat.rank == 2,
        "below_gap_with_period": below and lat.rank >= 1,
        "bounded_with_rank2": bounded and lat.rank == 2,
        "bounded_with_atomic_source": bounded and _is_atomic_source(spec),
        "notes": notes,
    }
    report = {
        "config": _config(args, spec, {**_source_params(args), "n_max": n_max, "plateau_steps": args.plateau_steps,
                                       "max_shift": args.max_shift, "min_overlap": args.min_overlap,
                                       "n": args.n, "m_max": args.m_max}).to_json(),
        "complexity": table.to_json(),
        "gap": gap.to_json(),
        "periods": periods,
        "entropy": entropy,
        "consistency": consistency,
        "warnings": [str(c.message) for c in caught] + _source_warnings(spec, w),
    }
    return _json(report)


COMMANDS = {
    "gen": cmd_gen,
    "complexity": cmd_complexity,
    "periods": cmd_periods,
    "entropy": cmd_entropy,
    "fixed-points": cmd_fixed_points,
    "mulindep": cmd_mulindep,
    "gap-report": cmd_gap_report,
}


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = COMMANDS[args.command](args)
        if args.output:
            with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except UsageError as exc:
        print(f"subshift-lab: {exc}", file=sys.stderr)
        return 1
    except GridFormatError as exc:
        print(f"subshift-lab: {exc}", file=sys.stderr)
        return 4
    except SubshiftError as exc:
        print(f"subshift-lab: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"subshift-lab: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
