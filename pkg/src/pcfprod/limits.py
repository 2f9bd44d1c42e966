"""
β → 0 limits of gamma-weighted parabolic cylinder products.

Arguments are written with

    xb = x√β - α/√β,    yb = y√β + α/√β,    a = s/β,

and every left-hand side is assembled as a sum of logs (log Γ, log D, and
the power and 2^(a/2) prefactors) before a single exponentiation: at β =
0.05 the gamma factor is ~1e17 while each D is ~1e-10.

The limit itself is estimated by polynomial (Richardson/Neville)
extrapolation to β = 0 from a short decreasing β grid.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Tuple, Union

import numpy as np

from ._kernels import LOG2
from .errors import DomainError
from .special_fn import SpecialValue, log_gamma, pcf_oracle

__all__ = [
    "RATIO_GENERAL",
    "RATIO_GOLDEN",
    "RATIO_S4",
    "RhsKind",
    "LimitCase",
    "ConvergenceRecord",
    "DEFAULT_BETA_GRID",
    "LIMIT_TOL",
    "limit_log_lhs",
    "limit_lhs",
    "limit_rhs",
    "richardson_table",
    "extrapolate",
    "converge",
    "ratio_general",
    "gamma_ratio_limit_check",
    "erdelyi_ratio",
    "branch_ratio",
    "entry3_recurrence_residual",
]

RATIO_GENERAL = "ratio-general"
RATIO_GOLDEN = "ratio-golden"
RATIO_S4 = "ratio-s4"
_RATIOS = (RATIO_GENERAL, RATIO_GOLDEN, RATIO_S4)

DEFAULT_BETA_GRID = (0.4, 0.2, 0.1, 0.05)
LIMIT_TOL = 1e-3


class RhsKind:
    FINITE = "finite"
    ZERO = "zero"
    INFINITE = "infinite"


@dataclass(frozen=True)
class LimitCase:
    """One limit: table entry 1-8 or one of the ratio specialisations.

    The ratio presets fix their parameters: ``ratio-golden`` is s=1, α=1,
    x=0 and ``ratio-s4`` is s=4, α=0, x=1.
    """

    entry_id: Union[int, str]
    s: float = 1.0
    alpha: float = 0.0
    x: float = 0.0
    y: float = 0.0
    rhs_kind: str = field(init=False)

    def __post_init__(self):
        eid = self.entry_id
        if isinstance(eid, str) and eid.isdigit():
            eid = int(eid)
            object.__setattr__(self, "entry_id", eid)
        if eid == RATIO_GOLDEN:
            object.__setattr__(self, "s", 1.0)
            object.__setattr__(self, "alpha", 1.0)
            object.__setattr__(self, "x", 0.0)
        elif eid == RATIO_S4:
            object.__setattr__(self, "s", 4.0)
            object.__setattr__(self, "alpha", 0.0)
            object.__setattr__(self, "x", 1.0)
        elif eid not in _RATIOS and not (isinstance(eid, int) and 1 <= eid <= 8):
            raise DomainError(f"unknown limit entry {self.entry_id!r}")
        for name in ("s", "alpha", "x", "y"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        if not self.s > 0:
            raise DomainError(f"s must be positive, got {self.s}")
        kind = RhsKind.FINITE
        if eid in (4, 5, 6, 7) and self.alpha != 0:
            kind = RhsKind.ZERO if self.alpha < 0 else RhsKind.INFINITE
        object.__setattr__(self, "rhs_kind", kind)

    @property
    def is_ratio(self) -> bool:
        return self.entry_id in _RATIOS


def _check_beta(beta: float) -> None:
    if not (math.isfinite(beta) and beta > 0):
        raise DomainError(f"beta must be positive, got {beta!r}")


def _log_d(v: float, z: float, beta: float) -> float:
    try:
        return pcf_oracle(v, z).log_value
    except ArithmeticError as exc:
        raise type(exc)(f"{exc} (at beta={beta})") from exc


def limit_log_lhs(case: LimitCase, beta: float) -> SpecialValue:
    """The bracketed expression of ``case`` at finite ``beta``, in log form."""
    _check_beta(beta)
    s, al, x, y = case.s, case.alpha, case.x, case.y
    eid = case.entry_id
    a = s / beta
    rb = math.sqrt(beta)
    lb = math.log(beta)
    xb = x * rb - al / rb
    yb = y * rb + al / rb
    pow2 = 0.5 * a * LOG2

    if eid in _RATIOS:
        log_val = 0.5 * lb + _log_d(-a, xb, beta) - _log_d(-1.0 - a, xb, beta)
    elif eid == 1:
        log_val = log_gamma(a) - 0.5 * lb + _log_d(-a, xb, beta) + _log_d(-a, yb, beta)
    elif eid == 2:
        log_val = log_gamma(a) - lb + _log_d(-a, yb, beta) + _log_d(-1.0 - a, xb, beta)
    elif eid == 3:
        log_val = (
            math.log(s + beta) + log_gamma(a) - 1.5 * lb
            + _log_d(-a, yb, beta) + _log_d(-2.0 - a, xb, beta)
        )
    elif eid == 4:
        log_val = pow2 + log_gamma(0.5 * a) - 0.5 * lb + _log_d(-a, xb, beta)
    elif eid == 5:
        log_val = pow2 + log_gamma(0.5 * (s + beta) / beta) + _log_d(-a, xb, beta)
    elif eid == 6:
        log_val = pow2 + log_gamma(0.5 * a) - lb + _log_d(-1.0 - a, xb, beta)
    elif eid == 7:
        log_val = (
            pow2 + math.log(s + beta) + log_gamma(0.5 * a) - 1.5 * lb
            + _log_d(-2.0 - a, xb, beta)
        )
    else:
        log_val = log_gamma(0.5 * a) - 0.5 * lb - log_gamma(0.5 * (s + beta) / beta)
    return SpecialValue.from_log(log_val, 1)


def limit_lhs(case: LimitCase, beta: float) -> float:
    return limit_log_lhs(case, beta).value


def limit_rhs(case: LimitCase) -> float:
    """Closed-form β → 0 value; 0.0 or ``inf`` on the divergent branches."""
    s, al, x, y = case.s, case.alpha, case.x, case.y
    eid = case.entry_id
    if case.rhs_kind == RhsKind.ZERO:
        return 0.0
    if case.rhs_kind == RhsKind.INFINITE:
        return math.inf
    r = math.sqrt(al * al + 4.0 * s)
    if eid in _RATIOS:
        return 0.5 * (r - al)
    damp = math.exp(-0.5 * r * (x + y))
    root2pi = math.sqrt(2.0 * math.pi)
    if eid == 1:
        return root2pi / r * damp
    if eid == 2:
        return 2.0 * root2pi / (r * (r - al)) * damp
    if eid == 3:
        return root2pi * (al + r) / (r * (r - al)) * damp
    damp1 = math.exp(-math.sqrt(s) * x)
    if eid in (4, 7):
        return math.sqrt(2.0 * math.pi / s) * damp1
    if eid == 5:
        return math.sqrt(math.pi) * damp1
    if eid == 6:
        return root2pi / s * damp1
    return math.sqrt(2.0 / s)


def richardson_table(betas: Sequence[float], values: Sequence[float]) -> np.ndarray:
    """Neville table for the polynomial in β through (betas, values), at β = 0.

    Row ``k`` holds the extrapolations that eliminate the first ``k`` powers
    of β; ``table[k, i]`` uses points ``i .. i+k``.  Unused cells are NaN.
    """
    b = np.asarray(betas, dtype=float)
    n = b.size
    tab = np.full((n, n), np.nan)
    tab[0] = values
    for k in range(1, n):
        for i in range(n - k):
            lo, hi = b[i], b[i + k]
            tab[k, i] = (lo * tab[k - 1, i + 1] - hi * tab[k - 1, i]) / (lo - hi)
    return tab


@dataclass(frozen=True)
class ConvergenceRecord:
    case: LimitCase
    beta_grid: Tuple[float, ...]
    lhs_values: Tuple[float, ...]
    extrapolated: float
    rhs: float
    residual: float
    observed_order: float
    low_confidence: bool

    @property
    def passed(self) -> bool:
        return self.residual <= LIMIT_TOL


def _observed_order(betas: np.ndarray, values: np.ndarray) -> float:
    d = np.diff(values)
    if d.size < 2 or np.any(d == 0):
        return math.nan
    # |f(β_i) - f(β_{i+1})| ~ C β^p on a geometric grid
    ratios = np.abs(d[:-1] / d[1:])
    steps = betas[:-2] / betas[1:-1]
    return float(np.mean(np.log(ratios) / np.log(steps)))


def extrapolate(betas: Sequence[float], values: Sequence[float], rhs: float = math.nan):
    """β → 0 estimate from the full Neville table.

    Returns (estimate, observed_order, low_confidence).  Low confidence is
    flagged when |value - rhs| does not shrink monotonically along the grid
    (skipped if ``rhs`` is NaN) or the observed order is not close to 1.
    """
    b = np.asarray(betas, dtype=float)
    v = np.asarray(values, dtype=float)
    if b.size < 3:
        raise DomainError("extrapolation needs at least 3 grid points")
    if not np.all(np.diff(b) < 0) or b[-1] <= 0:
        raise DomainError("beta grid must be positive and strictly decreasing")
    if not np.all(np.isfinite(v)):
        raise DomainError("cannot extrapolate non-finite values")
    if np.ptp(v) <= 1e-12 * np.max(np.abs(v)):
        # the sequence is already at its limit (e.g. exact for every β)
        return float(v[-1]), math.nan, False
    est = float(richardson_table(b, v)[-1, 0])
    order = _observed_order(b, v)
    low = not (abs(order - 1.0) <= 0.5)
    if math.isfinite(rhs):
        res = np.abs(v - rhs)
        low = low or bool(np.any(np.diff(res) > 0))
    return est, order, low


def converge(case: LimitCase, beta_grid: Sequence[float] = DEFAULT_BETA_GRID) -> ConvergenceRecord:
    """Evaluate ``case`` along ``beta_grid`` and extrapolate to β = 0."""
    if case.rhs_kind != RhsKind.FINITE:
        raise DomainError(f"entry {case.entry_id} has no finite limit at alpha={case.alpha}")
    grid = tuple(float(b) for b in beta_grid)
    values = tuple(limit_lhs(case, b) for b in grid)
    rhs = limit_rhs(case)
    est, order, low = extrapolate(grid, values, rhs)
    residual = abs(est - rhs) / abs(rhs)
    return ConvergenceRecord(case, grid, values, est, rhs, residual, order, low)


def ratio_general(s: float, alpha: float, x: float, beta: float) -> float:
    """√β D_{-a}(xb) / D_{-1-a}(xb) at finite β."""
    return limit_lhs(LimitCase(RATIO_GENERAL, s=s, alpha=alpha, x=x), beta)


def gamma_ratio_limit_check(s: float, beta: float) -> float:
    """Γ(s/(2β)) / (√β Γ((s+β)/(2β))); tends to √(2/s)."""
    return limit_lhs(LimitCase(8, s=s), beta)


def erdelyi_ratio(z: float, a: float = 0.5) -> float:
    """exp(-a log z) Γ(z+a) / Γ(z); tends to 1 as z → ∞."""
    if not z > 0:
        raise DomainError(f"z must be positive, got {z}")
    return math.exp(-a * math.log(z) + log_gamma(z + a) - log_gamma(z))


def branch_ratio(case: LimitCase, beta: float = 0.05) -> float:
    """LHS(β) of a divergent-branch case over the finite α = 0 limit."""
    if case.entry_id not in (4, 5, 6, 7):
        raise DomainError("branch checks apply to entries 4-7")
    finite = LimitCase(case.entry_id, s=case.s, alpha=0.0, x=case.x, y=case.y)
    log_ratio = limit_log_lhs(case, beta).log_value - math.log(limit_rhs(finite))
    return math.exp(min(log_ratio, 700.0))


def entry3_recurrence_residual(case: LimitCase, beta: float) -> float:
    """Relative gap in LHS₃ = LHS₁ - (xβ - α)·LHS₂ at finite β."""
    s, al, x, y = case.s, case.alpha, case.x, case.y
    l1 = limit_lhs(LimitCase(1, s=s, alpha=al, x=x, y=y), beta)
    l2 = limit_lhs(LimitCase(2, s=s, alpha=al, x=x, y=y), beta)
    l3 = limit_lhs(LimitCase(3, s=s, alpha=al, x=x, y=y), beta)
    return abs(l3 - (l1 - (x * beta - al) * l2)) / abs(l3)
