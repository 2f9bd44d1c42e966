"""
Double-exponential (tanh-sinh) quadrature.

Three entry points cover the integral shapes used in this package:

    integrate_unit              ∫_0^1 f(u) du, algebraic endpoint singularities
    integrate_semi_infinite     ∫_0^∞ f(t) dt, eventual exponential decay
    log_integrate_semi_infinite log ∫_0^∞ exp(log_f(t)) dt, for integrands
                                whose magnitude is not representable

The unit-interval rule uses the map

    u = 1 / (1 + exp(-2 s)),    1 - u = 1 / (1 + exp(2 s)),    s = (π/2) sinh τ

so that both ``u`` and ``1 - u`` are available to full relative precision
near their respective endpoints.  Integrands on (0, 1) are therefore called
as ``f(u, um)`` with ``um == 1 - u``; all integrands receive numpy arrays.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator, Optional, Tuple

import numpy as np
from scipy.special import expit, logsumexp

from .errors import QuadratureError

__all__ = [
    "IntegralEstimate",
    "SingularityHint",
    "integrate_unit",
    "integrate_interval",
    "integrate_semi_infinite",
    "log_integrate_semi_infinite",
    "DEFAULT_TOL",
    "MAX_LEVEL",
]

DEFAULT_TOL = 1e-10
MAX_LEVEL = 12
MIN_LEVEL = 3
TRUNCATION_NATS = 45.0

# tail mass below distance d from an endpoint with exponent e scales as
# d**(1+e); this is the log-size at which that mass is ignored
_TAIL_NATS = 48.0
_MAX_S = 354.0  # exp(-2*354) is still a normal double

_SCAN = np.geomspace(1e-12, 1e8, 721)


@dataclass(frozen=True)
class IntegralEstimate:
    """Result of one quadrature call."""

    value: float
    abs_error_estimate: float
    evaluations: int
    converged: bool

    def __add__(self, other: "IntegralEstimate") -> "IntegralEstimate":
        return IntegralEstimate(
            self.value + other.value,
            self.abs_error_estimate + other.abs_error_estimate,
            self.evaluations + other.evaluations,
            self.converged and other.converged,
        )

    def scaled(self, factor: float) -> "IntegralEstimate":
        return IntegralEstimate(
            factor * self.value,
            abs(factor) * self.abs_error_estimate,
            self.evaluations,
            self.converged,
        )


@dataclass(frozen=True)
class SingularityHint:
    """Endpoint behaviour f ~ u**left_exponent (u→0) and (1-u)**right_exponent (u→1).

    Exponents of integrands that are exponentially damped at an endpoint
    should be given as 0.
    """

    left_exponent: float = 0.0
    right_exponent: float = 0.0

    def __post_init__(self):
        for e in (self.left_exponent, self.right_exponent):
            if not (e > -1.0):
                raise ValueError(f"endpoint exponent must exceed -1, got {e}")


def _tau_extent(exponent: float) -> float:
    s_max = min(_MAX_S, _TAIL_NATS / (2.0 * (1.0 + min(exponent, 0.0))))
    return math.asinh(2.0 * s_max / math.pi)


def _levels(hint: SingularityHint, max_level: int) -> Iterator[Tuple[int, float, np.ndarray]]:
    """Yield (level, h, tau) with only the new abscissae at each level."""
    t_lo = -_tau_extent(hint.left_exponent)
    t_hi = _tau_extent(hint.right_exponent)
    h = 0.5
    j = np.arange(math.floor(t_lo / h), math.ceil(t_hi / h) + 1)
    yield 0, h, j * h
    for level in range(1, max_level + 1):
        h /= 2.0
        j = np.arange(math.floor(t_lo / h), math.ceil(t_hi / h) + 1)
        j = j[j % 2 != 0]
        yield level, h, j * h


def _nodes(tau: np.ndarray):
    s = 0.5 * math.pi * np.sinh(tau)
    u = expit(2.0 * s)
    um = expit(-2.0 * s)
    # du/dτ = π cosh τ · u · (1-u)
    log_w = math.log(math.pi) + np.log(np.cosh(tau))
    with np.errstate(divide="ignore"):
        log_w = log_w + np.log(u) + np.log(um)
    return u, um, log_w


def _check_finite(values: np.ndarray, where: np.ndarray, what: str) -> None:
    bad = ~np.isfinite(values)
    if np.any(bad):
        k = int(np.argmax(bad))
        raise QuadratureError(
            f"{what} returned {values[k]!r} at abscissa {where[k]!r}"
        )


def integrate_unit(
    f: Callable[[np.ndarray, np.ndarray], np.ndarray],
    hint: SingularityHint = SingularityHint(),
    tol: float = DEFAULT_TOL,
    *,
    abs_tol: float = 0.0,
    max_level: int = MAX_LEVEL,
) -> IntegralEstimate:
    """Integrate ``f(u, 1-u)`` over (0, 1).

    Refinement halves the tanh-sinh step until two successive levels agree
    to ``max(tol*|I|, abs_tol)``.  The reported error is that difference.
    Non-convergence is reported through ``converged=False``; a non-finite
    integrand value raises :class:`QuadratureError`.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    total = 0.0
    prev = None
    evals = 0
    err = math.inf
    for level, h, tau in _levels(hint, max_level):
        u, um, log_w = _nodes(tau)
        keep = np.isfinite(log_w)
        u, um, log_w = u[keep], um[keep], log_w[keep]
        fx = np.asarray(f(u, um), dtype=float)
        evals += fx.size
        _check_finite(fx, u, "integrand")
        part = float(np.sum(fx * np.exp(log_w)))
        total = part if level == 0 else total + part
        estimate = total * h
        if prev is not None:
            err = abs(estimate - prev)
            if level >= MIN_LEVEL and err <= max(tol * abs(estimate), abs_tol):
                return IntegralEstimate(estimate, err, evals, True)
        prev = estimate
    return IntegralEstimate(prev, err, evals, False)


def integrate_interval(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    tol: float = DEFAULT_TOL,
    *,
    left_exponent: float = 0.0,
    right_exponent: float = 0.0,
    abs_tol: float = 0.0,
) -> IntegralEstimate:
    """∫_a^b f(t) dt for finite a < b; abscissae near ``a`` keep full precision."""
    width = b - a
    if width == 0:
        return IntegralEstimate(0.0, 0.0, 1, True)
    est = integrate_unit(
        lambda u, um: f(a + width * u),
        SingularityHint(left_exponent, right_exponent),
        tol,
        abs_tol=abs_tol / abs(width),
    )
    return est.scaled(width)


def _support(log_abs: Callable[[np.ndarray], np.ndarray]):
    """Locate the peak and the 45-nat window of a non-negative integrand.

    Returns (lo, peak, hi, left_slope) or None if the integrand vanishes.
    """
    with np.errstate(all="ignore"):
        ell = np.asarray(log_abs(_SCAN), dtype=float)
    ell = np.where(np.isnan(ell), -np.inf, ell)
    if np.any(ell == np.inf):
        raise QuadratureError("integrand is infinite on the scan grid")
    m = int(np.argmax(ell))
    top = ell[m]
    if top == -np.inf:
        return None
    inside = np.nonzero(ell >= top - TRUNCATION_NATS)[0]
    last = int(inside[-1])
    if last == _SCAN.size - 1:
        raise QuadratureError(
            "integrand does not decay by 45 nats before t = 1e8"
        )
    hi = float(_SCAN[last + 1])
    first = int(inside[0])
    lo = 0.0 if first == 0 else float(_SCAN[first - 1])
    slope = 0.0
    if first == 0 and np.isfinite(ell[0]) and np.isfinite(ell[1]):
        slope = (ell[1] - ell[0]) / math.log(_SCAN[1] / _SCAN[0])
    return lo, float(_SCAN[m]), hi, slope


def _left_hint(left_exponent: Optional[float], slope: float) -> float:
    if left_exponent is not None:
        return left_exponent
    # empirical local power at the left end of the scan, kept integrable
    return max(min(slope, 0.0), -0.999)


def _pieces(lo: float, peak: float, hi: float):
    if lo == 0.0 and peak <= _SCAN[0]:
        return [(0.0, hi)]
    return [(lo, peak), (peak, hi)]


def integrate_semi_infinite(
    f: Callable[[np.ndarray], np.ndarray],
    tol: float = DEFAULT_TOL,
    *,
    left_exponent: Optional[float] = None,
    abs_tol: float = 0.0,
) -> IntegralEstimate:
    """∫_0^∞ f(t) dt for integrands with eventual exponential decay.

    The range is truncated where log|f| falls 45 nats below its maximum and
    split at the maximum; each piece is a tanh-sinh integral.  A t→0
    singularity t**e is handled when ``left_exponent`` (or the exponent read
    off the integrand itself) is greater than -1.
    """

    def log_abs(t):
        return np.log(np.abs(f(t)))

    support = _support(log_abs)
    if support is None:
        return IntegralEstimate(0.0, 0.0, _SCAN.size, True)
    lo, peak, hi, slope = support
    total = IntegralEstimate(0.0, 0.0, _SCAN.size, True)
    for a, b in _pieces(lo, peak, hi):
        left = _left_hint(left_exponent, slope) if a == 0.0 else 0.0
        total = total + integrate_interval(
            f, a, b, tol, left_exponent=left, abs_tol=abs_tol
        )
    return total


def _log_unit(log_g, hint: SingularityHint, tol: float) -> Tuple[float, int]:
    parts = []
    prev = None
    evals = 0
    for level, h, tau in _levels(hint, MAX_LEVEL):
        u, um, log_w = _nodes(tau)
        keep = np.isfinite(log_w)
        u, um, log_w = u[keep], um[keep], log_w[keep]
        lg = np.asarray(log_g(u, um), dtype=float)
        evals += lg.size
        bad = np.isnan(lg) | (lg == np.inf)
        if np.any(bad):
            k = int(np.argmax(bad))
            raise QuadratureError(f"log-integrand returned {lg[k]!r} at u={u[k]!r}")
        parts.append(float(logsumexp(lg + log_w)))
        estimate = float(logsumexp(parts)) + math.log(h)
        if prev is not None:
            change = abs(estimate - prev) if estimate != prev else 0.0
            if level >= MIN_LEVEL and (estimate == -math.inf or change <= tol):
                return estimate, evals
        prev = estimate
    raise QuadratureError(
        f"log-space quadrature did not converge (last change {change:.3g})"
    )


def log_integrate_semi_infinite(
    log_f: Callable[[np.ndarray], np.ndarray],
    tol: float = DEFAULT_TOL,
    *,
    left_exponent: Optional[float] = None,
) -> float:
    """Return log ∫_0^∞ exp(log_f(t)) dt, accumulated with log-sum-exp.

    ``tol`` bounds the change in the log between refinement levels, i.e. it
    is a relative tolerance on the integral.  Returns ``-inf`` when the
    integrand is identically zero on the scan grid.
    """
    support = _support(log_f)
    if support is None:
        return -math.inf
    lo, peak, hi, slope = support
    logs = []
    for a, b in _pieces(lo, peak, hi):
        left = _left_hint(left_exponent, slope) if a == 0.0 else 0.0
        width = b - a
        value, _ = _log_unit(
            lambda u, um: log_f(a + width * u),
            SingularityHint(left, 0.0),
            tol,
        )
        logs.append(value + math.log(width))
    return float(logsumexp(logs))
