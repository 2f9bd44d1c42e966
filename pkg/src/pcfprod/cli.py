"""
Command-line front end.

    pcfprod eval --rep T2_1 --v -1 --x 0 --y 0
    pcfprod eval --entry 1 --s 1 --alpha 0 --x 0.7 --y 0.3 [--beta 0.1]
    pcfprod verify-reps [--tol 1e-8] [--format csv] [--out report.csv]
    pcfprod verify-laplace [--entry 3]
    pcfprod verify-limits [--entry ratio-golden]
    pcfprod report-all --format json

Exit status: 0 when every selected row passes, 1 on a failing row or a
numerical error, 2 on bad arguments.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import List, Optional, Sequence

from . import limits as lim
from .errors import DomainError, PcfError
from .product_reps import RepId, evaluate
from .special_fn import EvalPoint, pcf
from .suites import GridOverrides, Report, run_suite

__all__ = ["build_parser", "main", "render"]

_SUITE_OF = {
    "verify-reps": ("reps",),
    "verify-laplace": ("laplace",),
    "verify-limits": ("limits",),
    "report-all": ("reps", "laplace", "limits"),
}
CSV_FIELDS = ("case_id", "params", "computed", "reference", "residual", "pass")


def _positive(text: str) -> float:
    val = float(text)
    if not (math.isfinite(val) and val > 0):
        raise argparse.ArgumentTypeError(f"must be a positive number, got {text!r}")
    return val


def _finite(text: str) -> float:
    val = float(text)
    if not math.isfinite(val):
        raise argparse.ArgumentTypeError(f"must be finite, got {text!r}")
    return val


def _nonneg(text: str) -> float:
    val = _finite(text)
    if val < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {text!r}")
    return val


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")
    p.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    for name in ("v", "x", "y", "alpha"):
        p.add_argument(f"--{name}", type=_finite, nargs="+", metavar="N")
    for name in ("s", "beta"):
        p.add_argument(f"--{name}", type=_positive, nargs="+", metavar="N")
    p.add_argument("--c", type=_nonneg, nargs="+", metavar="N")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pcfprod",
        description="Products of parabolic cylinder functions: evaluation and verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="evaluate one representation or limit")
    target = ev.add_mutually_exclusive_group(required=True)
    target.add_argument(
        "--rep", choices=[r.value for r in RepId] + ["PCF"],
        help="representation id; PCF evaluates D_v(x) alone",
    )
    target.add_argument("--entry", help="limit entry 1-8 or ratio-general/ratio-golden/ratio-s4")
    ev.add_argument("--tol", type=_positive, default=1e-12)
    _add_common(ev)

    for name, text in (
        ("verify-reps", "integral representations vs the reference product"),
        ("verify-laplace", "transform pairs vs numerical forward transforms"),
        ("verify-limits", "extrapolated limits vs closed forms"),
        ("report-all", "all three suites"),
    ):
        sp = sub.add_parser(name, help=text)
        sp.add_argument("--tol", type=_positive, help="replace every row tolerance")
        sp.add_argument("--entry", action="append", help="restrict to these entries / rep ids")
        sp.add_argument("--rep", action="append", help="alias of --entry")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--jitter", type=_nonneg, default=0.0, help="uniform grid jitter half-width")
        _add_common(sp)
    return parser


# ---------------------------------------------------------------------------
# rendering


def _num(x: float) -> str:
    return "%.16e" % x


def render_csv(reports: Sequence[Report]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for rep in reports:
        for r in rep.rows:
            w.writerow([r.case_id, r.params_text, _num(r.computed), _num(r.reference),
                        _num(r.residual), "true" if r.passed else "false"])
    return buf.getvalue()


def _json_num(x: float):
    return x if math.isfinite(x) else str(x)


def _report_obj(rep: Report) -> dict:
    return {
        "suite": rep.suite,
        "rows": [
            {
                "case_id": r.case_id,
                "params": dict(r.params),
                "computed": _json_num(r.computed),
                "reference": _json_num(r.reference),
                "residual": _json_num(r.residual),
                "tol": r.tol,
                "pass": r.passed,
            }
            for r in rep.rows
        ],
        "summary": rep.summary,
    }


def render_json(reports: Sequence[Report]) -> str:
    objs = [_report_obj(r) for r in reports]
    payload = objs[0] if len(objs) == 1 else objs
    return json.dumps(payload, indent=2, sort_keys=False) + "\n"


def render_text(reports: Sequence[Report]) -> str:
    lines: List[str] = []
    for rep in reports:
        lines.append(f"== {rep.suite} ==")
        for r in rep.rows:
            lines.append(
                f"{r.case_id:<16} {r.params_text:<52} computed={r.computed:.10g} "
                f"reference={r.reference:.10g} residual={r.residual:.2e} "
                f"{'pass' if r.passed else 'FAIL'}"
            )
        s = rep.summary
        lines.append(f"{rep.suite}: {s['passed']}/{s['total']} passed ({rep.wall_time:.1f} s)")
    return "\n".join(lines) + "\n"


def render(reports: Sequence[Report], fmt: str) -> str:
    return {"csv": render_csv, "json": render_json, "text": render_text}[fmt](reports)


# ---------------------------------------------------------------------------


def _one(values, name: str, default=None):
    if values is None:
        if default is None:
            raise ValueError(f"--{name} is required")
        return default
    if len(values) != 1:
        raise ValueError(f"eval takes a single --{name} value")
    return values[0]


def _eval(args) -> str:
    if args.rep:
        v = _one(args.v, "v")
        x = _one(args.x, "x")
        if args.rep == "PCF":
            return repr(pcf(v, x))
        y = _one(args.y, "y", 0.0)
        beta = _one(args.beta, "beta", 1.0)
        return repr(evaluate(RepId(args.rep), EvalPoint(v, x, y), beta=beta, tol=args.tol))
    case = lim.LimitCase(
        args.entry,
        s=_one(args.s, "s", 1.0),
        alpha=_one(args.alpha, "alpha", 0.0),
        x=_one(args.x, "x", 0.0),
        y=_one(args.y, "y", 0.0),
    )
    if args.beta is not None:
        return repr(lim.limit_lhs(case, _one(args.beta, "beta")))
    if case.rhs_kind != lim.RhsKind.FINITE:
        return repr(lim.limit_rhs(case))
    return repr(lim.converge(case).extrapolated)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "eval":
        try:
            text = _eval(args)
        except ValueError as exc:
            # includes DomainError: parameters outside a representation's domain
            parser.error(str(exc))
        except PcfError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        _emit(text + "\n", args.out)
        return 0

    tup = lambda v: tuple(v) if v is not None else None
    g = GridOverrides(
        v=tup(args.v), x=tup(args.x), y=tup(args.y), s=tup(args.s), alpha=tup(args.alpha),
        beta=tup(args.beta), c=tup(args.c), tol=args.tol, jitter=args.jitter, seed=args.seed,
    )
    entries = (args.entry or []) + (args.rep or []) or None
    if g.beta is not None and args.command in ("verify-limits", "report-all") and len(g.beta) < 3:
        parser.error("--beta needs at least 3 values for extrapolation")
    reports = []
    try:
        for name in _SUITE_OF[args.command]:
            reports.append(run_suite(name, g, entries))
    except DomainError as exc:
        parser.error(str(exc))
    except PcfError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _emit(render(reports, args.format), args.out)
    failed = [r for rep in reports for r in rep.rows if not r.passed]
    for r in failed:
        print(f"FAIL {r.case_id} {r.params_text} residual={r.residual:.3e} tol={r.tol:.1e}", file=sys.stderr)
    if not any(rep.rows for rep in reports):
        print("error: no rows selected", file=sys.stderr)
        return 1
    return 1 if failed else 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
