"""Vectorised log-space building blocks shared by the integrand kernels."""
from __future__ import annotations

import math

import numpy as np
from scipy.special import erfcx, log_ndtr

LOG2 = math.log(2.0)
LOG_SQRT_PI = 0.5 * math.log(math.pi)
SQRT_HALF_PI = math.sqrt(0.5 * math.pi)

# (2n+1)!! for the large-q tail of log_gauss_minus_erfc
_DOUBLE_FACT = [float(np.prod(np.arange(1, 2 * n + 2, 2))) for n in range(20)]
_TAIL_SWITCH = 8.0


def log_erfc(q):
    """log erfc(q); finite far into the right tail."""
    return LOG2 + log_ndtr(-math.sqrt(2.0) * np.asarray(q, dtype=float))


def log_gauss_minus_erfc(q):
    """log(exp(-q²) - √π q erfc(q)); the bracket is positive for all real q."""
    q = np.asarray(q, dtype=float)
    out = np.empty_like(q)
    mid = (q >= 0) & (q <= _TAIL_SWITCH)
    big = q > _TAIL_SWITCH
    neg = q < 0
    with np.errstate(under="ignore"):
        qm = q[mid]
        out[mid] = -qm * qm + np.log1p(-math.sqrt(math.pi) * qm * erfcx(qm))
        # 1 - √π q erfcx(q) = Σ (-1)^n (2n+1)!! / (2q²)^(n+1)
        qb = q[big]
        z = 1.0 / (2.0 * qb * qb)
        tail = np.zeros_like(qb)
        for c in reversed(_DOUBLE_FACT):
            tail = c - z * tail
        out[big] = -qb * qb + np.log(z * tail)
        qn = q[neg]
        out[neg] = np.log(np.exp(-qn * qn) - math.sqrt(math.pi) * qn * np.exp(log_erfc(qn)))
    return out


def safe_log_abs(a):
    with np.errstate(divide="ignore"):
        return np.log(np.abs(a))


def signed_exp(sign, log_mag):
    """sign·exp(log_mag), with exact zeros where sign == 0."""
    with np.errstate(under="ignore"):
        return np.where(sign == 0, 0.0, sign * np.exp(log_mag))
