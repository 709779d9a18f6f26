"""Mittag-Leffler type functions: evaluation, identities and inequality checks."""

from .errors import ConfigError, DomainError
from .series import (DEFAULT_CONFIG, EvalResult, Family, MLParams, SeriesConfig, Summation,
                     eval_ml, eval_ml_normalized, eval_tail, eval_tail_any_q, partial_sum)

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "DomainError", "DEFAULT_CONFIG", "EvalResult", "Family", "MLParams",
    "SeriesConfig", "Summation", "eval_ml", "eval_ml_normalized", "eval_tail",
    "eval_tail_any_q", "partial_sum", "__version__",
]
