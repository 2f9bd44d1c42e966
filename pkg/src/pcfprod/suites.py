"""
Verification suites: representations, transform pairs, and β → 0 limits.

Each suite returns a :class:`Report` of rows (computed, reference, residual,
tolerance).  Default grids mirror the acceptance criteria; every grid can be
overridden through :class:`GridOverrides`.
"""
from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import laplace_pairs as lp
from . import limits as lim
from . import product_reps as pr
from .special_fn import EvalPoint, bessel_k_quarter, pcf, pcf_at_zero, pcf_oracle

__all__ = [
    "Row",
    "Report",
    "GridOverrides",
    "SUITES",
    "REP_V",
    "REP_XY",
    "reps_suite",
    "laplace_suite",
    "limits_suite",
    "run_suite",
]

REP_V = (-0.3, -0.5, -1.0, -1.7, -2.5)
REP_XY = ((0.0, 0.0), (1.0, 0.5), (2.0, -1.0), (0.5, -0.5), (3.0, 2.0), (1.0, -1.0))
REP_TOL = 1e-8
REP_TOL_ZERO_SUM = 1e-6
TIME_FORM_BETAS = (0.5, 1.0, 2.0)
TIME_FORM_POINTS = ((-0.5, 1.0, 0.5), (-1.0, 0.0, 0.0), (-1.7, 2.0, -1.0), (-2.5, 1.0, -1.0), (-0.3, 3.0, 2.0))
MALYSHEV_X = (-2.0, -1.0, 0.0, 1.0, 2.0)
MALYSHEV_V = (-0.5, -1.7)
GLASSER_POINTS = ((-0.5, 1.0, 0.5), (-1.0, 2.0, 1.0), (-2.5, 0.5, -1.0))
MIXED_POINTS = ((-0.3, 1.0, 0.5), (-0.5, 0.0, 0.0), (-1.0, 2.0, -1.0), (-1.7, 3.0, 2.0), (-2.5, 1.0, -1.0))
ERFC_POINTS = ((0.0, 0.0), (1.0, -1.0), (0.3, 2.0), (2.0, -1.5), (-0.5, 1.5))
K14_X = (0.25, 0.5, 1.0, 2.0, 4.0)
SINGLE_POINTS = ((-0.3, 0.0), (-0.5, 1.0), (-1.0, 2.0), (-1.7, 0.5), (-2.5, 3.0), (-4.0, 1.5))
K14_D32_POINTS = ((0.5, 0.0), (1.0, -2.0), (2.0, 1.0))
AT_ZERO_V = (-0.5, -1.0, -2.0, -3.0)

PAIR_BETA_C = ((1.0, 0.0), (1.0, 0.5), (2.0, 0.0))
PAIR_XY = ((1.0, 0.5), (0.0, 0.0), (1.0, -1.0))

LIMIT_ALPHAS = (-1.0, 0.0, 1.0)
LIMIT_S = (1.0, 2.0)
LIMIT_XY = (0.7, 0.3)
SINGLE_LIMIT_S = (1.0, 4.0)
SINGLE_LIMIT_X = (0.0, 1.0)
GAMMA_RATIO_S = (1.0, 2.0, 8.0)
GAMMA_RATIO_BETA = 1e-4
GAMMA_RATIO_TOL = 2e-3
BRANCH_BETA = 0.05
BRANCH_FACTOR = 1e3


@dataclass(frozen=True, order=True)
class Row:
    case_id: str
    params: Tuple[Tuple[str, float], ...]
    computed: float = field(compare=False)
    reference: float = field(compare=False)
    residual: float = field(compare=False)
    tol: float = field(compare=False)
    entry: str = field(default="", compare=False)

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.tol)

    @property
    def params_text(self) -> str:
        return ";".join(f"{k}={v!r}" for k, v in self.params)


@dataclass(frozen=True)
class Report:
    suite: str
    rows: Tuple[Row, ...]
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    @property
    def summary(self) -> Dict[str, int]:
        n_pass = sum(r.passed for r in self.rows)
        return {"total": len(self.rows), "passed": n_pass, "failed": len(self.rows) - n_pass}


@dataclass(frozen=True)
class GridOverrides:
    """Optional replacements for the default grids (None keeps the default)."""

    v: Optional[Tuple[float, ...]] = None
    x: Optional[Tuple[float, ...]] = None
    y: Optional[Tuple[float, ...]] = None
    s: Optional[Tuple[float, ...]] = None
    alpha: Optional[Tuple[float, ...]] = None
    beta: Optional[Tuple[float, ...]] = None
    c: Optional[Tuple[float, ...]] = None
    tol: Optional[float] = None
    jitter: float = 0.0
    seed: int = 0


def _rel(a: float, b: float) -> float:
    if a == b:
        return 0.0
    return abs(a - b) / abs(b) if b != 0 else abs(a - b)


def _row(case_id, params: Dict[str, float], computed, reference, residual, tol, entry="") -> Row:
    return Row(
        case_id,
        tuple((k, float(v)) for k, v in params.items()),
        float(computed),
        float(reference),
        float(residual),
        float(tol),
        str(entry or case_id),
    )


def _jittered(values: Sequence[float], g: GridOverrides, rng: np.random.Generator):
    if not g.jitter:
        return tuple(values)
    return tuple(float(v + rng.uniform(-g.jitter, g.jitter)) for v in values)


def _xy_grid(default, g: GridOverrides, rng, *, require_nonneg=True):
    if g.x is None and g.y is None:
        pts = list(default)
    else:
        xs = g.x if g.x is not None else sorted({p[0] for p in default})
        ys = g.y if g.y is not None else sorted({p[1] for p in default})
        pts = list(itertools.product(xs, ys))
    if g.jitter:
        # jitter x only and move y with it, so zero-sum points stay on the boundary
        out = []
        for x, y in pts:
            d = float(rng.uniform(-g.jitter, g.jitter))
            out.append((x + d, y - d if x + y == 0 else y))
        pts = out
    if require_nonneg:
        pts = [(x, y) for x, y in pts if x + y >= 0 or EvalPoint(-1.0, x, y).sum_is_zero]
    return pts


def _wanted(entries: Optional[Iterable[str]]):
    if entries is None:
        return lambda key: True
    keys = {str(e).lower() for e in entries}
    return lambda key: str(key).lower() in keys


# ---------------------------------------------------------------------------


_INTEGRAL_IDS = [pr.RepId(f"T2_{i}") for i in range(1, 9)]


def reps_suite(g: GridOverrides = GridOverrides(), entries: Optional[Iterable[str]] = None) -> Report:
    """Product representations against the oracle, plus the cross-identities."""
    t0 = time.perf_counter()
    want = _wanted(entries)
    rng = np.random.default_rng(g.seed)
    vs = g.v if g.v is not None else REP_V
    vs = _jittered(vs, g, rng)
    pts = _xy_grid(REP_XY, g, rng)
    rows: List[Row] = []

    for rid in _INTEGRAL_IDS:
        if not want(rid.value):
            continue
        for v, (x, y) in itertools.product(vs, pts):
            p = EvalPoint(v, x, y)
            got = pr.evaluate(rid, p)
            ref = pr.oracle_product(p, rid.order_offset)
            tol = g.tol if g.tol is not None else (REP_TOL_ZERO_SUM if p.sum_is_zero else REP_TOL)
            rows.append(_row(rid.value, dict(v=v, x=x, y=y), got, ref, _rel(got, ref), tol))

    tol = g.tol if g.tol is not None else 1e-9
    if want("TIME_FORM"):
        for v, x, y in TIME_FORM_POINTS:
            p = EvalPoint(v, x, y)
            vals = {b: pr.dv_dv_time_form(p, b).value for b in TIME_FORM_BETAS}
            for b1, b2 in itertools.combinations(TIME_FORM_BETAS, 2):
                rows.append(_row(
                    "TIME_FORM", dict(v=v, x=x, y=y, beta=b1, beta_ref=b2),
                    vals[b1], vals[b2], _rel(vals[b1], vals[b2]), tol,
                ))

    if want("MIXED"):
        for v, x, y in MIXED_POINTS:
            p = EvalPoint(v, x, y)
            lhs = pr.dv_dvm2_mixed(p).value
            rhs = v * pr.dv_dvm2_x(p).value + (1.0 - v) * pr.dv_dvm2_y(p).value
            rows.append(_row("MIXED", dict(v=v, x=x, y=y), lhs, rhs, _rel(lhs, rhs), tol))

    tol = g.tol if g.tol is not None else 1e-8
    if want("MALYSHEV"):
        for v, x in itertools.product(MALYSHEV_V, MALYSHEV_X):
            got = pr.malyshev_same_arg(v, x)
            ref = pr.dv_dv(EvalPoint(v, x, -x)).value
            rows.append(_row("MALYSHEV", dict(v=v, x=x), got, ref, _rel(got, ref), tol))
    if want("GLASSER"):
        for v, x, y in GLASSER_POINTS:
            got = pr.glasser_form(-v, x, y)
            ref = pr.dv_dv(EvalPoint(v, x, -y)).value
            rows.append(_row("GLASSER", dict(v=v, x=x, y=y), got, ref, _rel(got, ref), tol))
    if want("ERFC_PROD"):
        for x, y in ERFC_POINTS:
            got = pr.erfc_product(x, y)
            ref = math.erfc(x) * math.erfc(y)
            rows.append(_row("ERFC_PROD", dict(x=x, y=y), got, ref, _rel(got, ref), tol))
    if want("SINGLE_PCF"):
        for v, x in SINGLE_POINTS:
            got = pr.single_pcf(v, x)
            ref = pcf_oracle(v, x).value
            rows.append(_row("SINGLE_PCF", dict(v=v, x=x), got, ref, _rel(got, ref), tol))
    if want("K14_D32"):
        for x, y in K14_D32_POINTS:
            got = pr.k14_times_d32(x, y)
            ref = bessel_k_quarter(x) * pcf_oracle(-1.5, y).value
            rows.append(_row("K14_D32", dict(x=x, y=y), got, ref, _rel(got, ref), tol))
    if want("K14"):
        t = g.tol if g.tol is not None else 1e-7
        for x in K14_X:
            got = pr.k14_rep(x)
            ref = bessel_k_quarter(x)
            rows.append(_row("K14", dict(x=x), got, ref, _rel(got, ref), t))
    if want("PCF_AT_ZERO"):
        t = g.tol if g.tol is not None else 1e-10
        for v in AT_ZERO_V:
            got = pcf_at_zero(v)
            ref = pcf_oracle(v, 0.0).value
            rows.append(_row("PCF_AT_ZERO", dict(v=v), got, ref, _rel(got, ref), t))

    return Report("reps", tuple(sorted(rows)), time.perf_counter() - t0)


def laplace_suite(g: GridOverrides = GridOverrides(), entries: Optional[Iterable[str]] = None) -> Report:
    """Transform pairs and transition-law transforms against forward transforms."""
    t0 = time.perf_counter()
    want = _wanted(entries)
    rng = np.random.default_rng(g.seed)
    tol = g.tol if g.tol is not None else lp.PAIR_TOL
    if g.beta is not None or g.c is not None:
        bc = list(itertools.product(
            g.beta if g.beta is not None else (1.0, 2.0),
            g.c if g.c is not None else (0.0, 0.5),
        ))
    else:
        bc = list(PAIR_BETA_C)
    pts = _xy_grid(PAIR_XY, g, rng)
    s_grid = g.s if g.s is not None else lp.DEFAULT_S_GRID
    rows: List[Row] = []

    for e in lp.ENTRIES:
        if not want(e):
            continue
        for (b, c), (x, y) in itertools.product(bc, pts):
            rep = lp.verify_pair(e, lp.PairParams(beta=b, c=c, x=x, y=y), s_grid, tol=tol)
            for s, f, cl, r in zip(rep.s_grid, rep.forward, rep.closed, rep.residuals):
                rows.append(_row(f"T1_{e}", dict(beta=b, c=c, x=x, y=y, s=s), f, cl, r, tol, e))

    if want("ou"):
        P = lp.PairParams(alpha=0.5, beta=1.0, sigma=math.sqrt(2.0))
        prm = dict(alpha=P.alpha, beta=P.beta, sigma=P.sigma)
        for w, w0, s in ((1.0, 0.0, 1.0), (0.0, 1.0, 1.0), (-0.5, 0.5, 2.0), (0.3, 0.3, 0.5)):
            f = lp.forward_laplace(lambda t: lp.ou_time_density(w, t, w0, P), s).value
            cl = lp.ou_density_transform(w, s, w0, P)
            rows.append(_row("OU_DENSITY", dict(prm, w=w, w0=w0, s=s), f, cl, _rel(f, cl), tol, "ou"))
        for w1, w0, s in ((1.0, 0.0, 1.0), (0.3, 0.3, 2.0), (2.0, -1.0, 0.5)):
            f = lp.forward_laplace(lambda t: lp.ou_time_distribution(w1, t, w0, P), s).value
            cl = lp.ou_distribution_transform(w1, s, w0, P)
            rows.append(_row("OU_DISTRIBUTION", dict(prm, w1=w1, w0=w0, s=s), f, cl, _rel(f, cl), tol, "ou"))
        h = 1e-4
        for w1, w0, s in ((1.0, 0.0, 1.0), (0.5, -0.5, 2.0)):
            d = (lp.ou_distribution_transform(w1 + h, s, w0, P) - lp.ou_distribution_transform(w1 - h, s, w0, P)) / (2 * h)
            cl = lp.ou_density_transform(w1, s, w0, P)
            t = g.tol if g.tol is not None else 1e-5
            rows.append(_row("OU_DERIVATIVE", dict(prm, w1=w1, w0=w0, s=s), d, cl, _rel(d, cl), t, "ou"))
    if want("bm"):
        for a, sg, w, w0, s in ((1.0, 1.0, 0.5, 0.0, 2.0), (1.0, 1.0, -0.5, 0.0, 2.0), (-0.3, 0.7, 0.2, -0.4, 1.0)):
            prm = dict(alpha=a, sigma=sg, w=w, w0=w0, s=s)
            f = lp.forward_laplace(lambda t: lp.bm_time_density(w, t, w0, a, sg), s).value
            cl = lp.bm_density_transform(w, s, w0, a, sg)
            rows.append(_row("BM_DENSITY", prm, f, cl, _rel(f, cl), tol, "bm"))
        for a, sg, w1, w0, s in ((1.0, 1.0, 0.5, 0.0, 2.0), (-0.3, 0.7, 0.0, 0.0, 1.0)):
            prm = dict(alpha=a, sigma=sg, w1=w1, w0=w0, s=s)
            f = lp.forward_laplace(lambda t: lp.bm_time_distribution(w1, t, w0, a, sg), s).value
            cl = lp.bm_distribution_transform(w1, s, w0, a, sg)
            rows.append(_row("BM_DISTRIBUTION", prm, f, cl, _rel(f, cl), tol, "bm"))

    return Report("laplace", tuple(sorted(rows)), time.perf_counter() - t0)


def _limit_row(case: lim.LimitCase, grid, tol) -> Row:
    rec = lim.converge(case, grid)
    prm = dict(s=case.s, alpha=case.alpha, x=case.x)
    if case.entry_id in (1, 2, 3):
        prm["y"] = case.y
    cid = f"L{case.entry_id}" if isinstance(case.entry_id, int) else case.entry_id
    return _row(cid, prm, rec.extrapolated, rec.rhs, rec.residual, tol, case.entry_id)


def limits_suite(g: GridOverrides = GridOverrides(), entries: Optional[Iterable[str]] = None) -> Report:
    """β → 0 limits: finite branches, ratio constants, and divergent branches."""
    t0 = time.perf_counter()
    want = _wanted(entries)
    rng = np.random.default_rng(g.seed)
    grid = g.beta if g.beta is not None else lim.DEFAULT_BETA_GRID
    tol = g.tol if g.tol is not None else lim.LIMIT_TOL
    alphas = g.alpha if g.alpha is not None else LIMIT_ALPHAS
    rows: List[Row] = []

    s_pair = g.s if g.s is not None else LIMIT_S
    xs = _jittered(g.x if g.x is not None else (LIMIT_XY[0],), g, rng)
    ys = _jittered(g.y if g.y is not None else (LIMIT_XY[1],), g, rng)
    for e in (1, 2, 3):
        if not want(e):
            continue
        for al, s, x, y in itertools.product(alphas, s_pair, xs, ys):
            rows.append(_limit_row(lim.LimitCase(e, s=s, alpha=al, x=x, y=y), grid, tol))

    s_single = g.s if g.s is not None else SINGLE_LIMIT_S
    x_single = _jittered(g.x if g.x is not None else SINGLE_LIMIT_X, g, rng)
    for e in (4, 5, 6, 7):
        if not want(e):
            continue
        for s, x in itertools.product(s_single, x_single):
            rows.append(_limit_row(lim.LimitCase(e, s=s, alpha=0.0, x=x), grid, tol))
        for al, s in itertools.product((-1.0, 1.0), s_single):
            case = lim.LimitCase(e, s=s, alpha=al, x=x_single[0])
            ratio = lim.branch_ratio(case, BRANCH_BETA)
            # residual ≤ 1e-3 ⇔ the ratio is on the expected side of 10^∓3
            residual = ratio if al < 0 else 1.0 / ratio
            rows.append(_row(
                f"L{e}_BRANCH", dict(s=s, alpha=al, x=case.x, beta=BRANCH_BETA),
                ratio, lim.limit_rhs(case), residual, 1.0 / BRANCH_FACTOR, e,
            ))

    if want(8):
        t = g.tol if g.tol is not None else GAMMA_RATIO_TOL
        for s in (g.s if g.s is not None else GAMMA_RATIO_S):
            val = lim.gamma_ratio_limit_check(s, GAMMA_RATIO_BETA)
            ref = math.sqrt(2.0 / s)
            rows.append(_row("L8", dict(s=s, beta=GAMMA_RATIO_BETA), val, ref, abs(val - ref), t, 8))
        z = 1.0 / GAMMA_RATIO_BETA
        val = 1.0 / lim.erdelyi_ratio(z, 0.5)
        ref = lim.gamma_ratio_limit_check(2.0, GAMMA_RATIO_BETA)
        rows.append(_row("L8_ERDELYI", dict(s=2.0, beta=GAMMA_RATIO_BETA), val, ref, _rel(val, ref), 1e-12, 8))

    for name in (lim.RATIO_GOLDEN, lim.RATIO_S4):
        if want(name):
            rows.append(_limit_row(lim.LimitCase(name), grid, tol))
    if want(lim.RATIO_GENERAL):
        for al, s in itertools.product(alphas, s_pair):
            rows.append(_limit_row(lim.LimitCase(lim.RATIO_GENERAL, s=s, alpha=al, x=0.0), grid, tol))

    if want("3") or want("recurrence"):
        case = lim.LimitCase(3, s=1.0, alpha=1.0, x=LIMIT_XY[0], y=LIMIT_XY[1])
        res = lim.entry3_recurrence_residual(case, 0.2)
        rows.append(_row("L3_RECURRENCE", dict(s=1.0, alpha=1.0, x=case.x, y=case.y, beta=0.2), res, 0.0, res, 1e-8, 3))

    return Report("limits", tuple(sorted(rows)), time.perf_counter() - t0)


SUITES: Dict[str, Callable[..., Report]] = {
    "reps": reps_suite,
    "laplace": laplace_suite,
    "limits": limits_suite,
}


def run_suite(name: str, g: GridOverrides = GridOverrides(), entries=None) -> Report:
    return SUITES[name](g, entries)
