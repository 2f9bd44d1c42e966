"""Integral representations, Laplace pairs and limits for products of parabolic cylinder functions."""
from .errors import ConvergenceError, DomainError, PcfError, PoleError, QuadratureError
from .special_fn import EvalPoint, SpecialValue, pcf, pcf_oracle

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "DomainError",
    "PcfError",
    "PoleError",
    "QuadratureError",
    "EvalPoint",
    "SpecialValue",
    "pcf",
    "pcf_oracle",
]
