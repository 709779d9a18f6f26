"""Exact functional identities: shift recurrences and differentiation formulas.

These double as internal cross-checks of the series engine.
"""

from dataclasses import dataclass
from enum import Enum
import math

from .errors import DomainError
from .series import DEFAULT_CONFIG, Family, MLParams, eval_ml, partial_sum


class DerivativeMethod(str, Enum):
    CLOSED_FORM = "formula"
    CENTRAL_DIFFERENCE = "central"


@dataclass(frozen=True)
class DerivativeResult:
    value: float
    method: DerivativeMethod


def _require_classical(p):
    if p.family is not Family.CLASSICAL:
        raise DomainError("expected classical parameters", param="family")


def recurrence_shift(p, n, z, cfg=DEFAULT_CONFIG):
    """z^n E_{alpha, beta + n alpha}(z)."""
    _require_classical(p)
    if int(n) != n or n < 1:
        raise DomainError(f"n must be an integer >= 1, got {n}", param="n")
    if z <= 0:
        raise DomainError("z must be > 0", param="z")
    shifted = p.with_beta(p.beta + n * p.alpha)
    return z**n * eval_ml(shifted, z, cfg).value


def recurrence_shift_rhs(p, n, z, cfg=DEFAULT_CONFIG):
    """E_{alpha,beta}(z) - sum_{k<n} z^k / Gamma(beta + k alpha)."""
    _require_classical(p)
    return eval_ml(p, z, cfg).value - partial_sum(p, n - 1, z)


def recurrence_residual(p, n, z, cfg=DEFAULT_CONFIG):
    return recurrence_shift(p, n, z, cfg) - recurrence_shift_rhs(p, n, z, cfg)


def step_down_recurrence(p, z, cfg=DEFAULT_CONFIG):
    """z E_{alpha, alpha+beta}(z) + 1/Gamma(beta); equals E_{alpha,beta}(z)."""
    _require_classical(p)
    if z == 0:
        raise DomainError("z must be nonzero", param="z")
    return z * eval_ml(p.with_beta(p.alpha + p.beta), z, cfg).value + math.exp(-math.lgamma(p.beta))


def _fd_step(z):
    return 1e-5 * max(1.0, abs(z))


def _central_difference(p, z, cfg):
    """Central difference at step h and h/2, Richardson-combined to O(h^4)."""
    h = _fd_step(z)
    # keep the stencil on the positive axis for small z (Prabhakar needs z >= 0)
    if p.family is Family.PRABHAKAR and z - h <= 0:
        h = z / 2

    def d(step):
        return (eval_ml(p, z + step, cfg).value - eval_ml(p, z - step, cfg).value) / (2 * step)

    return (4 * d(h / 2) - d(h)) / 3


def _formula(p, z, cfg):
    if p.beta <= 1:
        raise DomainError(f"the differentiation formula needs beta > 1, got {p.beta}", param="beta")
    lower = eval_ml(p.with_beta(p.beta - 1), z, cfg).value
    here = eval_ml(p, z, cfg).value
    return (lower - (p.beta - 1) * here) / (p.alpha * z)


def _derivative(p, z, method, cfg):
    method = DerivativeMethod(method)
    if z <= 0:
        raise DomainError("z must be > 0", param="z")
    if method is DerivativeMethod.CENTRAL_DIFFERENCE:
        return DerivativeResult(_central_difference(p, z, cfg), method)
    return DerivativeResult(_formula(p, z, cfg), method)


def derivative_classical(p, z, method=DerivativeMethod.CLOSED_FORM, cfg=DEFAULT_CONFIG):
    """d/dz E_{alpha,beta}(z) = [E_{alpha,beta-1}(z) - (beta-1) E_{alpha,beta}(z)] / (alpha z)."""
    _require_classical(p)
    return _derivative(p, z, method, cfg)


def derivative_generalized(p, z, method=DerivativeMethod.CLOSED_FORM, cfg=DEFAULT_CONFIG):
    """Same formula for E^{gamma,q}_{alpha,beta}; any family is accepted."""
    return _derivative(p, z, method, cfg)


def shifted_identity_rhs(p, z, cfg=DEFAULT_CONFIG):
    """beta E_{beta+1}(z) + alpha z d/dz E_{beta+1}(z), derivative by central difference.

    Equals E_{beta}(z); used to cross-check the second differentiation form.
    """
    up = p.with_beta(p.beta + 1)
    d = _central_difference(up, z, cfg)
    return p.beta * eval_ml(up, z, cfg).value + p.alpha * z * d


__all__ = [
    "DerivativeMethod", "DerivativeResult", "MLParams", "recurrence_shift",
    "recurrence_shift_rhs", "recurrence_residual", "step_down_recurrence",
    "derivative_classical", "derivative_generalized", "shifted_identity_rhs",
]
