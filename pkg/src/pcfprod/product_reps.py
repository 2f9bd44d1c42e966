"""
Integral representations for products D_v(x)·D_{v+k}(y).

Every unit-interval kernel shares the Gaussian factor

    E(u) = exp(-(y + x√(1-u))² / (2u))

and the prefactor exp((y² - x²)/4) / Γ(-v).  Kernels are assembled in log
space so that u^(-3/2) and (1-u)^(-1-v/2) never overflow against a vanishing
exponential.  ``y + x√(1-u)`` is formed as ``(x+y) - x·u/(1+√(1-u))`` which
keeps full relative accuracy on the boundary x + y = 0.

On that boundary three representations (the second D_v·D_{v-1} form, the
compact D_v·D_{v-2} form and the D_v·D_{v+1} form) need a constant
correction; it is applied when :attr:`EvalPoint.sum_is_zero` is set, in
which case the kernel is evaluated with x + y replaced by exactly 0.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Dict, Optional

import numpy as np

from ._kernels import (
    LOG2,
    LOG_SQRT_PI,
    log_erfc,
    log_gauss_minus_erfc,
    safe_log_abs,
    signed_exp,
)
from .errors import DomainError, PoleError
from .quadrature import (
    IntegralEstimate,
    SingularityHint,
    integrate_semi_infinite,
    integrate_unit,
    log_integrate_semi_infinite,
)
from .special_fn import EvalPoint, is_zero_sum, pcf

__all__ = [
    "RepId",
    "ProductRep",
    "ProductValue",
    "REPS",
    "dv_dv",
    "dv_dv_time_form",
    "dv_dvm1_erfc",
    "dv_dvm1_exp",
    "dv_dvm2_mixed",
    "dv_dvm2_x",
    "dv_dvm2_y",
    "dv_dvm2_compact",
    "dv_dvp1",
    "product_by_offset",
    "oracle_product",
    "malyshev_same_arg",
    "glasser_form",
    "single_pcf",
    "erfc_product",
    "k14_rep",
    "k14_times_d32",
    "evaluate",
]

REP_TOL = 1e-12


class RepId(enum.Enum):
    T2_1 = "T2_1"
    T2_2 = "T2_2"
    T2_3 = "T2_3"
    T2_4 = "T2_4"
    T2_5 = "T2_5"
    T2_6 = "T2_6"
    T2_7 = "T2_7"
    T2_8 = "T2_8"
    TIME_FORM = "TIME_FORM"
    MALYSHEV = "MALYSHEV"
    GLASSER = "GLASSER"
    SINGLE_PCF = "SINGLE_PCF"
    ERFC_PROD = "ERFC_PROD"
    K14 = "K14"
    K14_D32 = "K14_D32"

    @property
    def order_offset(self) -> int:
        return _OFFSETS[self]

    @property
    def corrected(self) -> bool:
        """Whether the representation carries an x+y=0 correction term."""
        return self in (RepId.T2_3, RepId.T2_7, RepId.T2_8)


_OFFSETS = {
    RepId.T2_1: 0,
    RepId.T2_2: -1,
    RepId.T2_3: -1,
    RepId.T2_4: -2,
    RepId.T2_5: -2,
    RepId.T2_6: -2,
    RepId.T2_7: -2,
    RepId.T2_8: 1,
    RepId.TIME_FORM: 0,
    RepId.MALYSHEV: 0,
    RepId.GLASSER: 0,
    RepId.SINGLE_PCF: 0,
    RepId.ERFC_PROD: 0,
    RepId.K14: 0,
    RepId.K14_D32: 0,
}


@dataclass(frozen=True)
class ProductValue:
    value: float
    estimate: IntegralEstimate
    correction_applied: bool = False


# ---------------------------------------------------------------------------
# kernel pieces


class _Kernel:
    """Shared per-abscissa quantities for the unit-interval kernels."""

    def __init__(self, p: EvalPoint, u, um):
        self.u, self.um = u, um
        self.r = np.sqrt(um)
        self.log_u = np.log(u)
        self.log_um = np.log(um)
        s = p.arg_sum
        # y + x√(1-u) and x + y√(1-u), accurate when x + y is small
        self.w = s - p.x * u / (1.0 + self.r)
        self.w3 = s - p.y * u / (1.0 + self.r)
        self.q2 = self.w * self.w / (2.0 * u)
        self.q = self.w / np.sqrt(2.0 * u)


def _prefactor_log(p: EvalPoint) -> float:
    """log of exp((y²-x²)/4) / (2Γ(-v))."""
    return 0.25 * (p.y * p.y - p.x * p.x) - LOG2 - math.lgamma(-p.v)


def _left(p: EvalPoint, boundary_exponent: float) -> float:
    return boundary_exponent if p.sum_is_zero else 0.0


def _right(exponent: float) -> float:
    return min(exponent, 0.0)


def _unit(p: EvalPoint, kernel, left: float, right: float, tol: float) -> IntegralEstimate:
    def f(u, um):
        return kernel(_Kernel(p, u, um))

    return integrate_unit(f, SingularityHint(left, right), tol)


def _finish(
    log_scale: float,
    sign: float,
    est: IntegralEstimate,
    p: EvalPoint,
    correction: float = 0.0,
) -> ProductValue:
    factor = sign * math.exp(log_scale)
    scaled = est.scaled(factor)
    if p.sum_is_zero and correction:
        return ProductValue(scaled.value + correction, scaled, True)
    return ProductValue(scaled.value, scaled, False)


# ---------------------------------------------------------------------------
# Table of two-factor representations


def dv_dv(p: EvalPoint, tol: float = REP_TOL) -> ProductValue:
    """D_v(x)·D_v(y) as a unit-interval integral (x + y >= 0)."""
    p.require()
    a = -1.0 - 0.5 * p.v

    def kernel(k: _Kernel):
        with np.errstate(under="ignore"):
            return np.exp(a * k.log_um - 0.5 * k.log_u - k.q2)

    est = _unit(p, kernel, _left(p, -0.5), _right(a), tol)
    return _finish(_prefactor_log(p), 1.0, est, p)


def dv_dv_time_form(p: EvalPoint, beta: float, tol: float = REP_TOL) -> ProductValue:
    """D_v(x)·D_v(y) as an integral over t in (0, ∞) with rate ``beta``.

    The value does not depend on ``beta``; u = 1 - exp(-2βt) maps it onto
    :func:`dv_dv`.
    """
    p.require()
    if not beta > 0:
        raise DomainError(f"beta must be positive, got {beta}")
    s, x, v = p.arg_sum, p.x, p.v

    def f(t):
        bt = beta * t
        den = -np.expm1(-2.0 * bt)
        w = s + x * np.expm1(-bt)
        with np.errstate(under="ignore", divide="ignore"):
            return beta * np.exp(v * bt - 0.5 * np.log(den) - w * w / (2.0 * den))

    est = integrate_semi_infinite(f, tol, left_exponent=-0.5 if p.sum_is_zero else 0.0)
    log_scale = 0.25 * (p.y * p.y - p.x * p.x) - math.lgamma(-v)
    return _finish(log_scale, 1.0, est, p)


def dv_dvm1_erfc(p: EvalPoint, tol: float = REP_TOL) -> ProductValue:
    """D_v(x)·D_{v-1}(y) with a complementary-error-function kernel."""
    p.require()
    a = -1.0 - 0.5 * p.v

    def kernel(k: _Kernel):
        with np.errstate(under="ignore"):
            return np.exp(a * k.log_um + log_erfc(k.q))

    est = _unit(p, kernel, 0.0, _right(a), tol)
    log_scale = _prefactor_log(p) + LOG_SQRT_PI - 0.5 * LOG2
    return _finish(log_scale, 1.0, est, p)


def dv_dvm1_exp(p: EvalPoint, tol: float = REP_TOL) -> ProductValue:
    """D_v(x)·D_{v-1}(y) with an exponential kernel and boundary correction."""
    p.require()
    v = p.v
    a = -0.5 * (1.0 + v)

    def kernel(k: _Kernel):
        return signed_exp(np.sign(k.w3), safe_log_abs(k.w3) + a * k.log_um - 1.5 * k.log_u - k.q2)

    est = _unit(p, kernel, _left(p, -0.5), _right(a), tol)
    # -1/(2vΓ(-v)) = 1/(2Γ(1-v))
    log_scale = 0.25 * (p.y * p.y - p.x * p.x) - LOG2 - math.lgamma(1.0 - v)
    correction = math.sqrt(math.pi / 2.0) * math.exp(-math.lgamma(1.0 - v))
    return _finish(log_scale, 1.0, est, p, correction)


def dv_dvm2_mixed(p: EvalPoint, tol: float = REP_TOL) -> ProductValue:
    """D_v(x)·D_{v-2}(y); kernel weights both x and y in the erfc term."""
    p.require()
    a = -1.0 - 0.5 * p.v

    def kernel(k: _Kernel):
        # √u E - √(π/2)(x√(1-u) + y) erfc(q) = √u (E - √π q erfc(q))
        with np.errstate(under="ignore"):
            return np.exp(a * k.log_um + 0.5 * k.log_u + log_gauss_minus_erfc(k.q))

    est = _unit(p, kernel, 0.0, _right(a), tol)
    return _finish(_prefactor_log(p), 1.0, est, p)


def dv_dvm2_x(p: EvalPoint, tol: float = REP_TOL) -> ProductValue:
    """D_v(x)·D_{v-2}(y); erfc term weighted by x."""
    p.require()
    v, x = p.v, p.x
    a = -1.0 - 0.5 * v
    c = x * math.sqrt(math.pi / 2.0)

    def kernel(k: _Kernel):
        with np.errstate(under="ignore"):
            t1 = np.exp((a + 1.0) * k.log_um - 0.5 * k.log_u - k.q2)
            t2 = c * np.exp((a + 0.5) * k.log_um + log_erfc(k.q))
        return t1 + t2

    est = _unit(p, kernel, _left(p, -0.5), _right(a), tol)
    log_scale = 0.25 * (p.y * p.y - x * x) - LOG2 - math.lgamma(1.0 - v)
    return _finish(log_scale, 1.0, est, p)


def dv_dvm2_y(p: EvalPoint, tol: float = REP_TOL) -> ProductValue:
    """D_v(x)·D_{v-2}(y); erfc term weighted by y."""
    p.require()
    v, y = p.v, p.y
    a = -1.0 - 0.5 * v
    c = -y * math.sqrt(math.pi / 2.0)

    def kernel(k: _Kernel):
        with np.errstate(under="ignore"):
            t1 = np.exp(a * k.log_um - 0.5 * k.log_u - k.q2)
            t2 = c * np.exp(a * k.log_um + log_erfc(k.q))
        return t1 + t2

    est = _unit(p, kernel, _left(p, -0.5), _right(a), tol)
    log_scale = _prefactor_log(p) - math.log1p(-v)
    return _finish(log_scale, 1.0, est, p)


def dv_dvm2_compact(p: EvalPoint, tol: float = REP_TOL) -> ProductValue:
    """D_v(x)·D_{v-2}(y) from the recurrence-combined exponential kernel."""
    p.require()
    v, y = p.v, p.y
    a = -1.0 - 0.5 * v

    def kernel(k: _Kernel):
        num = y * k.r * k.w3 + v * k.u
        return signed_exp(np.sign(num), safe_log_abs(num) + a * k.log_um - 1.5 * k.log_u - k.q2)

    est = _unit(p, kernel, _left(p, -0.5), _right(a), tol)
    # 1/(2v(1-v)Γ(-v)) is negative for v < 0
    log_scale = _prefactor_log(p) - math.log(-v) - math.log1p(-v)
    correction = -y * math.sqrt(math.pi / 2.0) / (v * (v - 1.0)) * math.exp(-math.lgamma(-v))
    return _finish(log_scale, -1.0, est, p, correction)


def dv_dvp1(p: EvalPoint, tol: float = REP_TOL) -> ProductValue:
    """D_v(x)·D_{v+1}(y) with boundary correction."""
    p.require()
    v, y = p.v, p.y
    a = -1.0 - 0.5 * v

    def kernel(k: _Kernel):
        num = y * k.u + k.r * k.w3
        return signed_exp(np.sign(num), safe_log_abs(num) + a * k.log_um - 1.5 * k.log_u - k.q2)

    est = _unit(p, kernel, _left(p, -0.5), _right(a), tol)
    correction = math.sqrt(math.pi / 2.0) * math.exp(-math.lgamma(-v))
    return _finish(_prefactor_log(p), 1.0, est, p, correction)


# ---------------------------------------------------------------------------
# other order offsets


def _offset_coefficients(v: float, y: float, k: int):
    """(a, b) with D_v(x)D_{v+k}(y) = a·D_v(x)D_v(y) + b·D_v(x)D_{v-1}(y)."""
    coeff = {0: (1.0, 0.0), -1: (0.0, 1.0)}
    for j in range(1, k + 1):
        # D_{v+j} = y D_{v+j-1} - (v+j-1) D_{v+j-2}
        a1, b1 = coeff[j - 1]
        a2, b2 = coeff[j - 2]
        m = v + j - 1
        coeff[j] = (y * a1 - m * a2, y * b1 - m * b2)
    for j in range(-2, k - 1, -1):
        # D_{v+j} = (y D_{v+j+1} - D_{v+j+2}) / (v+j+1)
        m = v + j + 1
        if m == 0:
            raise PoleError(f"recurrence divides by v + {j + 1} = 0")
        a1, b1 = coeff[j + 1]
        a2, b2 = coeff[j + 2]
        coeff[j] = ((y * a1 - a2) / m, (y * b1 - b2) / m)
    return coeff[k]


def product_by_offset(p: EvalPoint, k: int, tol: float = REP_TOL) -> float:
    """D_v(x)·D_{v+k}(y) for integer |k| <= 6.

    The second factor's order is reduced to the base offsets 0 and -1 with
    the three-term recurrence, and the two base products are taken from
    :func:`dv_dv` and :func:`dv_dvm1_erfc`.
    """
    if not (isinstance(k, (int, np.integer)) and -6 <= k <= 6):
        raise DomainError(f"offset must be an integer in [-6, 6], got {k!r}")
    p.require()
    a, b = _offset_coefficients(p.v, p.y, int(k))
    total = 0.0
    if a:
        total += a * dv_dv(p, tol).value
    if b:
        total += b * dv_dvm1_erfc(p, tol).value
    return total


def oracle_product(p: EvalPoint, k: int = 0) -> float:
    """D_v(x)·D_{v+k}(y) from the reference evaluator."""
    return pcf(p.v, p.x) * pcf(p.v + k, p.y)


# ---------------------------------------------------------------------------
# cross-identities and special cases


def malyshev_same_arg(v: float, x: float, tol: float = REP_TOL) -> float:
    """D_v(x)·D_v(-x) from the tanh/sinh integral; any real x."""
    if not v < 0:
        raise DomainError(f"order must be negative, got v={v}")
    half_x2 = 0.5 * x * x

    def log_f(t):
        log_sinh = t + np.log(-np.expm1(-2.0 * t)) - LOG2
        return (v + 0.5) * t - half_x2 * np.tanh(0.5 * t) - 0.5 * log_sinh

    log_int = log_integrate_semi_infinite(log_f, tol, left_exponent=-0.5)
    return math.exp(log_int - 0.5 * LOG2 - math.lgamma(-v))


def glasser_form(v_pos: float, x: float, y: float, tol: float = REP_TOL) -> float:
    """D_{-v}(x)·D_{-v}(-y) from the semi-infinite integral, for x >= y.

    The t-integral is mapped to (0, 1) by t = w/(1-w).
    """
    if not v_pos > 0:
        raise DomainError(f"v_pos must be positive, got {v_pos}")
    if not (x - y >= 0 or is_zero_sum(x, -y)):
        raise DomainError(f"requires x >= y, got x={x}, y={y}")
    d2 = 0.0 if is_zero_sum(x, -y) else (x - y) ** 2
    xy = x * y

    def f(u, um):
        log_u, log_um = np.log(u), np.log(um)
        su = np.sqrt(u)
        # (x²+y²)u/2 - xy√u, rearranged to stay accurate as u → 1
        expo = 0.5 * d2 * u - xy * su * um / (1.0 + su)
        with np.errstate(under="ignore"):
            return np.exp(
                (0.5 * v_pos - 1.0) * (log_u - log_um)
                + 0.5 * (v_pos + 1.0) * log_um
                - expo / um
                - 2.0 * log_um
            )

    est = integrate_unit(f, SingularityHint(0.5 * v_pos - 1.0, -0.5), tol)
    log_scale = -0.25 * (x * x + y * y) - LOG2 - math.lgamma(v_pos)
    return est.value * math.exp(log_scale)


def single_pcf(v: float, x: float, tol: float = REP_TOL) -> float:
    """D_v(x) for v < 0, x >= 0 from an erfc kernel."""
    if not v < 0:
        raise DomainError(f"order must be negative, got v={v}")
    if not x >= 0:
        raise DomainError(f"requires x >= 0, got x={x}")
    a = -1.0 - 0.5 * v

    def f(u, um):
        with np.errstate(under="ignore"):
            return np.exp(a * np.log(um) + log_erfc(x * np.sqrt(um / (2.0 * u))))

    est = integrate_unit(f, SingularityHint(0.0, _right(a)), tol)
    log_scale = (
        math.log(-v) + LOG_SQRT_PI + (0.5 * v - 1.0) * LOG2
        - 0.25 * x * x - math.lgamma(0.5 - 0.5 * v)
    )
    return est.value * math.exp(log_scale)


def erfc_product(x: float, y: float, tol: float = REP_TOL) -> float:
    """erfc(x)·erfc(y) for x + y >= 0."""
    zero = is_zero_sum(x, y)
    if not (zero or x + y > 0):
        raise DomainError(f"requires x + y >= 0, got x={x}, y={y}")
    s = 0.0 if zero else x + y

    def f(u, um):
        r = np.sqrt(um)
        w = s - x * u / (1.0 + r)
        with np.errstate(under="ignore"):
            return np.exp(-0.5 * (np.log(u) + np.log(um)) - w * w / u)

    est = integrate_unit(f, SingularityHint(-0.5 if zero else 0.0, -0.5), tol)
    return est.value * math.exp(-x * x) / math.pi


def k14_rep(x: float, tol: float = REP_TOL) -> float:
    """K_{1/4}(x) for x > 0 from a unit-interval integral."""
    if not x > 0:
        raise DomainError(f"requires x > 0, got {x}")

    def f(u, um):
        with np.errstate(under="ignore"):
            return np.exp(-0.75 * np.log(um) - 0.5 * np.log(u) - x * (1.0 + um) / u)

    est = integrate_unit(f, SingularityHint(0.0, -0.75), tol)
    log_scale = LOG_SQRT_PI - 0.25 * math.log(2.0 * x) - math.lgamma(0.25)
    return est.value * math.exp(log_scale)


def k14_times_d32(x: float, y: float, tol: float = REP_TOL) -> float:
    """K_{1/4}(x)·D_{-3/2}(y) for x > 0, 2√x + y >= 0."""
    if not x > 0:
        raise DomainError(f"requires x > 0, got {x}")
    c = 2.0 * math.sqrt(x)
    zero = is_zero_sum(c, y)
    if not (zero or c + y > 0):
        raise DomainError(f"requires 2√x + y >= 0, got x={x}, y={y}")
    s = 0.0 if zero else c + y

    def f(u, um):
        r = np.sqrt(um)
        w = s - c * u / (1.0 + r)
        with np.errstate(under="ignore"):
            return np.exp(-0.75 * np.log(um) + log_erfc(w / np.sqrt(2.0 * u)))

    est = integrate_unit(f, SingularityHint(0.0, -0.75), tol)
    log_scale = LOG_SQRT_PI + 0.25 * (y * y - 4.0 * x) - 1.5 * LOG2 - 0.25 * math.log(x)
    return est.value * math.exp(log_scale)


# ---------------------------------------------------------------------------
# registry

_INTEGRAL_FORMS: Dict[RepId, Callable[[EvalPoint, float], ProductValue]] = {
    RepId.T2_1: dv_dv,
    RepId.T2_2: dv_dvm1_erfc,
    RepId.T2_3: dv_dvm1_exp,
    RepId.T2_4: dv_dvm2_mixed,
    RepId.T2_5: dv_dvm2_x,
    RepId.T2_6: dv_dvm2_y,
    RepId.T2_7: dv_dvm2_compact,
    RepId.T2_8: dv_dvp1,
}


@dataclass(frozen=True)
class ProductRep:
    """One representation together with its validity predicate."""

    rep_id: RepId

    @property
    def order_offset(self) -> int:
        return self.rep_id.order_offset

    def is_valid(self, p: EvalPoint) -> bool:
        rid = self.rep_id
        if rid is RepId.GLASSER:
            return p.v < 0 and (p.x - p.y >= 0 or is_zero_sum(p.x, -p.y))
        if rid is RepId.MALYSHEV:
            return p.v < 0 and is_zero_sum(p.x, p.y)
        if rid is RepId.SINGLE_PCF:
            return p.v < 0 and p.x >= 0
        if rid is RepId.ERFC_PROD:
            return p.sum_is_zero or p.x + p.y > 0
        if rid is RepId.K14:
            return p.x > 0
        if rid is RepId.K14_D32:
            return p.x > 0 and (is_zero_sum(2 * math.sqrt(p.x), p.y) or 2 * math.sqrt(p.x) + p.y > 0)
        return p.v < 0 and (p.sum_is_zero or p.x + p.y > 0)


REPS = {rid: ProductRep(rid) for rid in RepId}


def evaluate(rep_id: RepId, p: EvalPoint, *, beta: Optional[float] = None, tol: float = REP_TOL) -> float:
    """Evaluate any representation at ``p``.

    Single-argument forms read their inputs from ``p``: SINGLE_PCF uses
    (v, x); ERFC_PROD uses (x, y); K14 uses x; K14_D32 uses (x, y);
    MALYSHEV uses (v, x) and ignores y; GLASSER returns
    D_v(x)·D_v(-y) with order ``v`` < 0.
    """
    rep_id = RepId(rep_id)
    if rep_id in _INTEGRAL_FORMS:
        return _INTEGRAL_FORMS[rep_id](p, tol).value
    if rep_id is RepId.TIME_FORM:
        return dv_dv_time_form(p, 1.0 if beta is None else beta, tol).value
    if rep_id is RepId.MALYSHEV:
        return malyshev_same_arg(p.v, p.x, tol)
    if rep_id is RepId.GLASSER:
        return glasser_form(-p.v, p.x, p.y, tol)
    if rep_id is RepId.SINGLE_PCF:
        return single_pcf(p.v, p.x, tol)
    if rep_id is RepId.ERFC_PROD:
        return erfc_product(p.x, p.y, tol)
    if rep_id is RepId.K14:
        return k14_rep(p.x, tol)
    return k14_times_d32(p.x, p.y, tol)
