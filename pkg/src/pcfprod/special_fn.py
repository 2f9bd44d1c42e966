"""
Reference special functions.

The parabolic cylinder function D_v(z) has two independent routes here:

* :func:`pcf_oracle`: for v < 0,

      D_v(z) = exp(-z²/4) / Γ(-v) · ∫_0^∞ t^(-v-1) exp(-t²/2 - z t) dt,

  integrated in log space so that very negative orders and large |z| stay
  finite.  This is the oracle every representation in the package is
  tested against.

* :func:`pcf_kummer`: the even/odd confluent hypergeometric split

      D_v(z) = 2^(v/2) √π e^(-z²/4) [ M(-v/2, 1/2, z²/2) / Γ((1-v)/2)
                                      - √2 z M((1-v)/2, 3/2, z²/2) / Γ(-v/2) ]

  summed directly.  For z > 0 the two terms cancel, so the routine
  monitors the cancellation and refuses to answer when it would cost more
  than the accuracy it promises.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, DomainError, PoleError, QuadratureError
from .quadrature import log_integrate_semi_infinite

__all__ = [
    "SpecialValue",
    "EvalPoint",
    "ZERO_SUM_RTOL",
    "is_zero_sum",
    "log_gamma",
    "gamma_sign",
    "erfc",
    "pcf_oracle",
    "pcf",
    "pcf_kummer",
    "pcf_at_zero",
    "bessel_k_quarter",
]

ZERO_SUM_RTOL = 1e-12
KUMMER_MAX_ORDER = 40.0
KUMMER_MAX_ARG = 20.0
ORACLE_TOL = 1e-13


@dataclass(frozen=True)
class SpecialValue:
    """A real value carried together with its log-magnitude and sign."""

    value: float
    log_value: float
    sign: int

    @classmethod
    def from_log(cls, log_value: float, sign: int = 1) -> "SpecialValue":
        with np.errstate(over="ignore", under="ignore"):
            value = sign * math.exp(log_value) if log_value < 709.78 else sign * math.inf
        return cls(value, log_value, sign)


def is_zero_sum(x: float, y: float) -> bool:
    """Whether x + y counts as exactly zero for boundary correction terms."""
    return abs(x + y) <= ZERO_SUM_RTOL * max(1.0, abs(x), abs(y))


@dataclass(frozen=True)
class EvalPoint:
    """Order ``v`` and arguments ``x``, ``y`` of a product D_v(x)·D_w(y)."""

    v: float
    x: float
    y: float
    sum_is_zero: bool = field(init=False)

    def __post_init__(self):
        for name in ("v", "x", "y"):
            val = getattr(self, name)
            if not math.isfinite(val):
                raise DomainError(f"{name} must be finite, got {val!r}")
        object.__setattr__(self, "sum_is_zero", is_zero_sum(self.x, self.y))

    @property
    def arg_sum(self) -> float:
        """x + y, snapped to exactly 0.0 on the boundary."""
        return 0.0 if self.sum_is_zero else self.x + self.y

    def require(self, *, negative_order: bool = True, nonneg_sum: bool = True) -> None:
        if negative_order and not self.v < 0:
            raise DomainError(f"order must be negative, got v={self.v}")
        if nonneg_sum and not (self.sum_is_zero or self.x + self.y > 0):
            raise DomainError(f"requires x + y >= 0, got x={self.x}, y={self.y}")


def log_gamma(a: float) -> float:
    """ln Γ(a) for a > 0."""
    if not (math.isfinite(a) and a > 0):
        raise DomainError(f"log_gamma requires a finite positive argument, got {a!r}")
    return math.lgamma(a)


def gamma_sign(a: float) -> int:
    """Sign of Γ(a); raises :class:`PoleError` at non-positive integers."""
    if a > 0:
        return 1
    if a == math.floor(a):
        raise PoleError(f"Γ has a pole at {a}")
    return -1 if math.ceil(-a) % 2 else 1


def erfc(x: float) -> float:
    """Complementary error function."""
    return math.erfc(x)


def _log_pcf_integral(v: float, z: float) -> float:
    a = -v - 1.0
    if a >= 0.0:

        def log_f(t):
            with np.errstate(divide="ignore"):
                return a * np.log(t) - 0.5 * t * t - z * t

        return log_integrate_semi_infinite(log_f, ORACLE_TOL, left_exponent=0.0)

    # t = r**k with k = 1/(1+a) absorbs the t**a singularity:
    # ∫ t^a g(t) dt = k ∫ g(r^k) dr
    k = 1.0 / (1.0 + a)

    def log_g(r):
        with np.errstate(over="ignore"):
            t = r**k
        return -0.5 * t * t - z * t

    return math.log(k) + log_integrate_semi_infinite(log_g, ORACLE_TOL, left_exponent=0.0)


def pcf_oracle(v: float, z: float) -> SpecialValue:
    """D_v(z) for real v < 0 from the classical Laplace-type integral.

    The result is always positive.  Raises :class:`DomainError` for v >= 0
    and :class:`QuadratureError` if the integral cannot be resolved.
    """
    if not (math.isfinite(v) and math.isfinite(z)):
        raise DomainError(f"non-finite input v={v!r}, z={z!r}")
    if not v < 0:
        raise DomainError(f"pcf_oracle requires v < 0, got {v}")
    log_int = _log_pcf_integral(v, z)
    if not math.isfinite(log_int):
        raise QuadratureError(f"oracle integral vanished for v={v}, z={z}")
    log_value = -0.25 * z * z - math.lgamma(-v) + log_int
    return SpecialValue.from_log(log_value, 1)


def pcf(v: float, z: float) -> float:
    """D_v(z) for any real order.

    Negative orders go straight to the oracle.  Orders v >= 0 are lifted
    with D_{μ+1}(z) = z D_μ(z) - μ D_{μ-1}(z) starting from the two
    negative orders v - n and v - n - 1.
    """
    if v < 0:
        return pcf_oracle(v, z).value
    n = math.floor(v) + 1
    mu = v - n  # in [-1, 0)
    lower = pcf_oracle(mu - 1.0, z).value
    upper = pcf_oracle(mu, z).value
    for _ in range(n):
        lower, upper = upper, z * upper - mu * lower
        mu += 1.0
    return upper


_LD = np.longdouble
_LD_PI = 4 * np.arctan(_LD(1))
_LD_EPS = float(np.finfo(_LD).eps)
# B_{2n} / (2n (2n-1)) for the Stirling series of ln Γ
_STIRLING = [_LD(n) / _LD(d) for n, d in (
    (1, 12), (-1, 360), (1, 1260), (-1, 1680), (1, 1188),
    (-691, 360360), (1, 156), (-3617, 122400),
)]


def _rgamma_ld(a) -> np.longdouble:
    """1/Γ(a) in extended precision (zero at the poles)."""
    a = _LD(a)
    if a <= 0 and a == np.floor(a):
        return _LD(0)
    if a < 0.5:
        # reflection: 1/Γ(a) = Γ(1-a) sin(πa) / π
        return np.sin(_LD_PI * a) / _LD_PI * _gamma_ld(1 - a)
    return 1 / _gamma_ld(a)


def _gamma_ld(a: np.longdouble) -> np.longdouble:
    shift = _LD(1)
    while a < 25:
        shift *= a
        a += 1
    inv = 1 / a
    inv2 = inv * inv
    series = _LD(0)
    power = inv
    for c in _STIRLING:
        series += c * power
        power *= inv2
    return np.sqrt(2 * _LD_PI) * np.power(a, a - _LD(0.5)) * np.exp(series - a) / shift


def _kummer_m(a, b, x):
    """Sum M(a, b, x) = Σ (a)_k/(b)_k x^k/k! for x >= 0 in extended precision.

    Returns (value, sum of |terms|).
    """
    a, b, x = _LD(a), _LD(b), _LD(x)
    term = _LD(1)
    total = _LD(1)
    mag = _LD(1)
    for k in range(20000):
        term *= (a + k) / (b + k) * x / (k + 1)
        total += term
        mag += abs(term)
        if term == 0 or (k > a + x and abs(term) <= _LD_EPS * abs(total)):
            return total, mag
    raise ConvergenceError(f"Kummer series M({a}, {b}, {x}) did not converge")


def pcf_kummer(v: float, z: float, *, rtol: float = 1e-9) -> float:
    """D_v(z) from the confluent hypergeometric decomposition.

    Restricted to |v| <= 40 and |z| <= 20.  Series and gamma factors are
    carried in extended precision; when cancellation between the even and
    odd parts would still push the relative error past ``rtol`` a
    :class:`ConvergenceError` is raised rather than returning a degraded
    value.  In practice this limits z > 0 to a few units.
    """
    if abs(v) > KUMMER_MAX_ORDER or abs(z) > KUMMER_MAX_ARG:
        raise ConvergenceError(
            f"pcf_kummer window is |v| <= {KUMMER_MAX_ORDER}, |z| <= {KUMMER_MAX_ARG}; "
            f"got v={v}, z={z}"
        )
    v_ld, z_ld = _LD(v), _LD(z)
    x = z_ld * z_ld / 2
    m_even, mag_even = _kummer_m(-v_ld / 2, _LD(0.5), x)
    m_odd, mag_odd = _kummer_m((1 - v_ld) / 2, _LD(1.5), x)
    c_even = _rgamma_ld((1 - v_ld) / 2)
    c_odd = -np.sqrt(_LD(2)) * z_ld * _rgamma_ld(-v_ld / 2)
    bracket = c_even * m_even + c_odd * m_odd
    scale = abs(c_even) * mag_even + abs(c_odd) * mag_odd
    if bracket == 0 or 16 * _LD_EPS * float(scale) > rtol * abs(float(bracket)):
        raise ConvergenceError(
            f"cancellation in Kummer route at v={v}, z={z} "
            f"(condition ~{float(scale / abs(bracket)) if bracket else math.inf:.2e})"
        )
    return float(2.0 ** (0.5 * v) * math.sqrt(math.pi) * math.exp(-0.25 * z * z) * bracket)


def pcf_at_zero(v: float) -> float:
    """D_v(0) = 2^(v/2) √π / Γ((1 - v)/2)."""
    a = 0.5 * (1.0 - v)
    if a <= 0 and a == math.floor(a):
        return 0.0  # 1/Γ vanishes at its poles: D_v(0) = 0 for v = 1, 3, 5, ...
    sign = gamma_sign(a)
    return sign * math.exp(0.5 * v * math.log(2.0) + 0.5 * math.log(math.pi) - math.lgamma(a))


def bessel_k_quarter(x: float) -> float:
    """K_{1/4}(x) through D_{-1/2}(z) = √z / √(2π) · K_{1/4}(z²/4)."""
    if not (math.isfinite(x) and x > 0):
        raise DomainError(f"bessel_k_quarter requires x > 0, got {x!r}")
    z = 2.0 * math.sqrt(x)
    d = pcf_oracle(-0.5, z)
    return math.exp(0.5 * math.log(2.0 * math.pi) + d.log_value - 0.5 * math.log(z))
