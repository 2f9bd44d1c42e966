"""
Laplace-transform pairs built on products of two parabolic cylinder functions,
and the transition-law transforms of the Ornstein-Uhlenbeck process and of
Brownian motion with drift.

Closed forms are assembled as log Γ + log D + log D and exponentiated once.
Each pair is checked by transforming its time-domain side numerically.

Throughout, ``a = (s + c)/β`` and

    E(t) = exp(-(y + x e^{-βt})² / (2(1 - e^{-2βt}))),
    q(t) = (y + x e^{-βt}) / √(2(1 - e^{-2βt})).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import ndtr

from ._kernels import (
    LOG2,
    LOG_SQRT_PI,
    SQRT_HALF_PI,
    log_erfc,
    log_gauss_minus_erfc,
    safe_log_abs,
    signed_exp,
)
from .errors import DomainError
from .quadrature import DEFAULT_TOL, IntegralEstimate, integrate_semi_infinite
from .special_fn import is_zero_sum, pcf_oracle

__all__ = [
    "PairParams",
    "LaplacePair",
    "PairReport",
    "ENTRIES",
    "DEFAULT_S_GRID",
    "PAIR_TOL",
    "table1_time",
    "table1_transform",
    "forward_laplace",
    "verify_pair",
    "ou_density_transform",
    "ou_distribution_transform",
    "ou_time_density",
    "ou_time_distribution",
    "bm_density_transform",
    "bm_distribution_transform",
    "bm_time_density",
    "bm_time_distribution",
]

ENTRIES = (1, 2, 3, 4, 5, 6)
DEFAULT_S_GRID = (0.5, 1.0, 2.0, 4.0)
PAIR_TOL = 1e-6

# order offset of the second factor, per entry
_OFFSET = {1: 0, 2: -1, 3: -1, 4: -2, 5: -2, 6: -2}


@dataclass(frozen=True)
class PairParams:
    """Parameters for the transform pairs and the diffusion transition laws.

    ``beta``, ``c``, ``x``, ``y`` feed the table entries; ``alpha``, ``beta``,
    ``sigma`` describe the diffusion dW = (alpha - beta W) dt + sigma dZ.
    """

    beta: float = 1.0
    c: float = 0.0
    x: float = 0.0
    y: float = 0.0
    alpha: float = 0.0
    sigma: float = 1.0
    sum_is_zero: bool = field(init=False)

    def __post_init__(self):
        for name in ("beta", "c", "x", "y", "alpha", "sigma"):
            val = getattr(self, name)
            if not math.isfinite(val):
                raise DomainError(f"{name} must be finite, got {val!r}")
        if not self.beta > 0:
            raise DomainError(f"beta must be positive, got {self.beta}")
        if self.c < 0:
            raise DomainError(f"c must be non-negative, got {self.c}")
        if not self.sigma > 0:
            raise DomainError(f"sigma must be positive, got {self.sigma}")
        object.__setattr__(self, "sum_is_zero", is_zero_sum(self.x, self.y))

    @property
    def arg_sum(self) -> float:
        return 0.0 if self.sum_is_zero else self.x + self.y

    def require_pair_domain(self) -> None:
        if not (self.sum_is_zero or self.x + self.y > 0):
            raise DomainError(f"requires x + y >= 0, got x={self.x}, y={self.y}")


def _check_entry(entry: int) -> int:
    if entry not in ENTRIES:
        raise DomainError(f"table entry must be one of {ENTRIES}, got {entry!r}")
    return entry


def _check_s(s: float) -> None:
    if not (math.isfinite(s) and s > 0):
        raise DomainError(f"s must be positive, got {s!r}")


# ---------------------------------------------------------------------------
# time-domain side


def table1_time(entry: int, t, params: PairParams):
    """f(t) of table entry ``entry``; vectorised over ``t > 0``.

    Entry 3's stand-alone boundary constant is not part of f; it is carried
    by :func:`table1_transform`.
    """
    _check_entry(entry)
    params.require_pair_domain()
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise DomainError("t must be positive")
    b, c, x, y = params.beta, params.c, params.x, params.y
    s0 = params.arg_sum
    bt = b * t
    den = -np.expm1(-2.0 * bt)  # 1 - e^{-2βt}
    # y + x e^{-βt} and x + y e^{-βt}, accurate when x + y ≈ 0
    w = s0 + x * np.expm1(-bt)
    w3 = s0 + y * np.expm1(-bt)
    log_den = np.log(den)
    q = w / np.sqrt(2.0 * den)
    log_e = -q * q
    base = 0.25 * (y * y - x * x) + math.log(b) - c * t

    with np.errstate(under="ignore"):
        if entry == 1:
            return np.exp(base - 0.5 * log_den + log_e)
        if entry == 2:
            return np.exp(base + LOG_SQRT_PI - 0.5 * LOG2 + log_erfc(q))
        if entry == 3:
            head = signed_exp(
                np.sign(w3), base + math.log(b) - bt - 1.5 * log_den + safe_log_abs(w3) + log_e
            )
            return head - c * np.exp(base + log_erfc(q)) * SQRT_HALF_PI
        if entry == 4:
            # √den E - w √(π/2) erfc(q) = √den (e^{-q²} - √π q erfc(q))
            return np.exp(base + 0.5 * log_den + log_gauss_minus_erfc(q))
        if entry == 5:
            t1 = np.exp(base - 2.0 * bt - 0.5 * log_den + log_e)
            return t1 + x * SQRT_HALF_PI * np.exp(base - bt + log_erfc(q))
        t1 = np.exp(base - 0.5 * log_den + log_e)
        return t1 - y * SQRT_HALF_PI * np.exp(base + log_erfc(q))


def _time_left_exponent(entry: int, params: PairParams) -> Optional[float]:
    if not params.sum_is_zero:
        return None  # Gaussian damping at t → 0, or a bounded start
    return -0.5 if entry in (1, 3, 5, 6) else 0.0


# ---------------------------------------------------------------------------
# transform side


def _log_transform_product(entry: int, s: float, params: PairParams) -> float:
    a = (s + params.c) / params.beta
    log_val = (
        math.lgamma(a)
        + pcf_oracle(-a, params.x).log_value
        + pcf_oracle(-a + _OFFSET[entry], params.y).log_value
    )
    if entry == 3:
        log_val += math.log(s)
    elif entry == 5:
        log_val += math.log(a)
    elif entry == 6:
        log_val += math.log((s + params.beta + params.c) / params.beta)
    return log_val


def table1_transform(entry: int, s: float, params: PairParams) -> float:
    """Closed-form F(s) of table entry ``entry``, including its s-prefactor."""
    _check_entry(entry)
    _check_s(s)
    params.require_pair_domain()
    value = math.exp(_log_transform_product(entry, s, params))
    if entry == 3 and params.sum_is_zero:
        value -= params.beta * SQRT_HALF_PI
    return value


# ---------------------------------------------------------------------------
# numerical forward transform


def forward_laplace(
    time_fn: Callable[[np.ndarray], np.ndarray],
    s: float,
    tol: float = DEFAULT_TOL,
    *,
    left_exponent: Optional[float] = None,
) -> IntegralEstimate:
    """∫_0^∞ e^{-st} f(t) dt by double-exponential quadrature."""
    _check_s(s)

    def g(t):
        with np.errstate(under="ignore"):
            return np.exp(-s * t) * time_fn(t)

    return integrate_semi_infinite(g, tol, left_exponent=left_exponent)


@dataclass(frozen=True)
class LaplacePair:
    entry_id: int
    params: PairParams

    def __post_init__(self):
        _check_entry(self.entry_id)
        self.params.require_pair_domain()

    def transform(self, s: float) -> float:
        return table1_transform(self.entry_id, s, self.params)

    def time_fn(self, t):
        return table1_time(self.entry_id, t, self.params)

    def forward(self, s: float, tol: float = DEFAULT_TOL) -> IntegralEstimate:
        return forward_laplace(
            self.time_fn, s, tol, left_exponent=_time_left_exponent(self.entry_id, self.params)
        )


@dataclass(frozen=True)
class PairReport:
    entry_id: int
    params: PairParams
    s_grid: Tuple[float, ...]
    forward: Tuple[float, ...]
    closed: Tuple[float, ...]
    residuals: Tuple[float, ...]
    tol: float

    @property
    def passed(self) -> bool:
        return all(r <= self.tol for r in self.residuals)

    @property
    def max_residual(self) -> float:
        return max(self.residuals)


def verify_pair(
    entry: int,
    params: PairParams,
    s_grid: Iterable[float] = DEFAULT_S_GRID,
    *,
    tol: float = PAIR_TOL,
) -> PairReport:
    """Compare the numerical forward transform with the closed form on ``s_grid``.

    Residuals are |forward - closed| / max(1, |closed|).
    """
    pair = LaplacePair(entry, params)
    s_grid = tuple(float(s) for s in s_grid)
    if not s_grid:
        raise DomainError("s_grid is empty")
    fwd, closed, res = [], [], []
    for s in s_grid:
        f = pair.forward(s).value
        g = pair.transform(s)
        fwd.append(f)
        closed.append(g)
        res.append(abs(f - g) / max(1.0, abs(g)))
    return PairReport(entry, params, s_grid, tuple(fwd), tuple(closed), tuple(res), tol)


# ---------------------------------------------------------------------------
# Ornstein-Uhlenbeck transition law


def _ou_scaled(w: float, params: PairParams) -> float:
    """√2 (βw - α) / (σ√β)."""
    b = params.beta
    return math.sqrt(2.0) * (b * w - params.alpha) / (params.sigma * math.sqrt(b))


def ou_density_transform(w: float, s: float, w0: float, params: PairParams) -> float:
    """Laplace transform in t of the OU transition density p(w, t | w0)."""
    _check_s(s)
    b = params.beta
    a = s / b
    z, z0 = _ou_scaled(w, params), _ou_scaled(w0, params)
    if w >= w0:
        first, second = z, -z0
    else:
        first, second = -z, z0
    log_val = (
        math.lgamma(a)
        - math.log(params.sigma)
        - 0.5 * math.log(math.pi * b)
        + 0.25 * (z0 * z0 - z * z)
        + pcf_oracle(-a, first).log_value
        + pcf_oracle(-a, second).log_value
    )
    return math.exp(log_val)


def ou_distribution_transform(w1: float, s: float, w0: float, params: PairParams) -> float:
    """Laplace transform in t of P(W_t <= w1 | W_0 = w0), for w1 >= w0."""
    _check_s(s)
    if w1 < w0:
        raise DomainError(f"requires w1 >= w0, got w1={w1}, w0={w0}")
    b = params.beta
    a = s / b
    z0, z1 = _ou_scaled(w0, params), _ou_scaled(w1, params)
    log_tail = (
        math.lgamma(a)
        - math.log(b)
        - 0.5 * math.log(2.0 * math.pi)
        + 0.25 * (z0 * z0 - z1 * z1)
        + pcf_oracle(-a, -z0).log_value
        + pcf_oracle(-a - 1.0, z1).log_value
    )
    return 1.0 / s - math.exp(log_tail)


def _ou_moments(t, w0: float, params: PairParams):
    b = params.beta
    m = params.alpha / b
    mean = m + (w0 - m) * np.exp(-b * t)
    var = params.sigma**2 * -np.expm1(-2.0 * b * t) / (2.0 * b)
    return mean, var


def ou_time_density(w: float, t, w0: float, params: PairParams):
    """Gaussian OU transition density p(w, t | w0)."""
    mean, var = _ou_moments(np.asarray(t, dtype=float), w0, params)
    with np.errstate(under="ignore"):
        return np.exp(-((w - mean) ** 2) / (2.0 * var)) / np.sqrt(2.0 * math.pi * var)


def ou_time_distribution(w1: float, t, w0: float, params: PairParams):
    """Gaussian OU transition distribution P(W_t <= w1 | W_0 = w0)."""
    mean, var = _ou_moments(np.asarray(t, dtype=float), w0, params)
    return ndtr((w1 - mean) / np.sqrt(var))


# ---------------------------------------------------------------------------
# Brownian motion with drift


def _bm_root(s: float, alpha: float, sigma: float) -> float:
    _check_s(s)
    if not sigma > 0:
        raise DomainError(f"sigma must be positive, got {sigma}")
    return math.sqrt(alpha * alpha + 2.0 * s * sigma * sigma)


def bm_density_transform(w: float, s: float, w0: float, alpha: float, sigma: float) -> float:
    """Laplace transform in t of the drifted Brownian transition density."""
    r = _bm_root(s, alpha, sigma)
    k = (-alpha + r) if w >= w0 else (-alpha - r)
    return math.exp(k / (sigma * sigma) * (w0 - w)) / r


def bm_distribution_transform(w1: float, s: float, w0: float, alpha: float, sigma: float) -> float:
    """Laplace transform in t of P(W_t <= w1 | W_0 = w0), for w1 >= w0."""
    if w1 < w0:
        raise DomainError(f"requires w1 >= w0, got w1={w1}, w0={w0}")
    r = _bm_root(s, alpha, sigma)
    tail = sigma * sigma / (r * (r - alpha)) * math.exp((r - alpha) / (sigma * sigma) * (w0 - w1))
    return 1.0 / s - tail


def bm_time_density(w: float, t, w0: float, alpha: float, sigma: float):
    t = np.asarray(t, dtype=float)
    var = sigma * sigma * t
    with np.errstate(under="ignore"):
        return np.exp(-((w - w0 - alpha * t) ** 2) / (2.0 * var)) / np.sqrt(2.0 * math.pi * var)


def bm_time_distribution(w1: float, t, w0: float, alpha: float, sigma: float):
    t = np.asarray(t, dtype=float)
    return ndtr((w1 - w0 - alpha * t) / (sigma * np.sqrt(t)))
