"""Mittag-Leffler families by direct power series, with truncation accounting.

All three families share one coefficient formula

    c_k = (gamma)_{qk} / (k! Gamma(alpha k + beta))

with gamma = q = 1 for the classical function (where the Pochhammer and
factorial cancel and are skipped outright) and q = 1 for Prabhakar.
"""

from dataclasses import dataclass, replace
from enum import Enum
from functools import lru_cache
import math

import mpmath

from . import _kernels
from .errors import DomainError
from .gamma import pochhammer

_EPS = 2.0**-52
_LOG_FLOAT_MAX = 709.782712893384


class Family(str, Enum):
    CLASSICAL = "classical"
    PRABHAKAR = "prabhakar"
    FOUR_PARAMETER = "fourparam"


class Summation(str, Enum):
    COMPENSATED = "compensated"
    PLAIN = "plain"


def _is_valid_q(q):
    if 0.0 < q < 1.0:
        return True
    return q >= 1.0 and q == int(q)


@dataclass(frozen=True)
class MLParams:
    """(alpha, beta, gamma, q) plus the family they are read under.

    ``gamma`` is forced to 1 for the classical family and ``q`` to 1 for
    both classical and Prabhakar, so equal functions compare equal.
    """

    alpha: float
    beta: float
    gamma: float = 1.0
    q: float = 1.0
    family: Family = Family.CLASSICAL

    def __post_init__(self):
        fam = Family(self.family)
        object.__setattr__(self, "family", fam)
        for name in ("alpha", "beta", "gamma", "q"):
            v = getattr(self, name)
            try:
                v = float(v)
            except (TypeError, ValueError):
                raise DomainError(f"{name} must be a real number", param=name) from None
            if not math.isfinite(v):
                raise DomainError(f"{name} must be finite", param=name)
            object.__setattr__(self, name, v)
        if self.alpha <= 0.0:
            raise DomainError(f"alpha must be > 0, got {self.alpha}", param="alpha")
        if self.beta <= 0.0:
            raise DomainError(f"beta must be > 0, got {self.beta}", param="beta")
        if fam is Family.CLASSICAL:
            object.__setattr__(self, "gamma", 1.0)
            object.__setattr__(self, "q", 1.0)
        else:
            if self.gamma <= 0.0:
                raise DomainError(f"gamma must be > 0, got {self.gamma}", param="gamma")
            if fam is Family.PRABHAKAR:
                object.__setattr__(self, "q", 1.0)
            elif not _is_valid_q(self.q):
                raise DomainError(f"q must lie in (0,1) or be a positive integer, got {self.q}",
                                  param="q")

    @classmethod
    def classical(cls, alpha, beta):
        return cls(alpha, beta)

    @classmethod
    def prabhakar(cls, alpha, beta, gamma):
        return cls(alpha, beta, gamma, 1.0, Family.PRABHAKAR)

    @classmethod
    def four(cls, alpha, beta, gamma, q):
        return cls(alpha, beta, gamma, q, Family.FOUR_PARAMETER)

    def with_beta(self, beta):
        return replace(self, beta=beta)

    @property
    def uses_pochhammer(self):
        return not (self.gamma == 1.0 and self.q == 1.0)

    @property
    def radius(self):
        """Radius of convergence of the series: inf when alpha > q - 1.

        The coefficients behave like k^{(q - 1 - alpha) k}, so for q >= 2 the
        series is entire only when alpha > q - 1.
        """
        excess = self.alpha - (self.q - 1.0)
        if excess > 0.0:
            return math.inf
        if excess == 0.0:
            return self.alpha**self.alpha / self.q**self.q
        return 0.0


@dataclass(frozen=True)
class SeriesConfig:
    rel_tol: float = 1e-14
    abs_tol: float = 1e-300
    max_terms: int = 10_000
    consecutive_small: int = 3
    z_abs_max: float = 700.0
    summation: Summation = Summation.COMPENSATED

    def __post_init__(self):
        object.__setattr__(self, "summation", Summation(self.summation))
        if not (0.0 < self.rel_tol <= 1e-6):
            raise DomainError(f"rel_tol must lie in (0, 1e-6], got {self.rel_tol}", param="rel_tol")
        if not self.abs_tol > 0.0:
            raise DomainError("abs_tol must be > 0", param="abs_tol")
        if int(self.max_terms) != self.max_terms or self.max_terms < 16:
            raise DomainError("max_terms must be an integer >= 16", param="max_terms")
        if int(self.consecutive_small) != self.consecutive_small or self.consecutive_small < 1:
            raise DomainError("consecutive_small must be an integer >= 1",
                              param="consecutive_small")
        if not self.z_abs_max > 0.0:
            raise DomainError("z_abs_max must be > 0", param="z_abs_max")
        object.__setattr__(self, "max_terms", int(self.max_terms))
        object.__setattr__(self, "consecutive_small", int(self.consecutive_small))


DEFAULT_CONFIG = SeriesConfig()


@dataclass(frozen=True)
class EvalResult:
    """Value of a series plus how far it can be trusted.

    ``log_abs`` and ``sign`` carry the value even when it overflows a double
    (``value`` is then +-inf). ``method`` is ``"double"`` or ``"mp"``; the
    latter marks an alternating series re-summed in extended precision.
    """

    value: float
    trunc_error_bound: float
    terms_used: int
    converged: bool
    log_abs: float = 0.0
    sign: int = 1
    method: str = "double"

    @property
    def rel_error_bound(self):
        if self.value == 0.0:
            return math.inf if self.trunc_error_bound > 0 else 0.0
        return self.trunc_error_bound / abs(self.value)


def _check_z(p, z, cfg):
    try:
        z = float(z)
    except (TypeError, ValueError):
        raise DomainError("z must be a real number", param="z") from None
    if not math.isfinite(z):
        raise DomainError("z must be finite", param="z")
    if abs(z) > cfg.z_abs_max:
        raise DomainError(f"|z| = {abs(z)} exceeds z_abs_max = {cfg.z_abs_max}", param="z")
    if z < 0.0 and p.family is Family.PRABHAKAR:
        raise DomainError("negative z is only supported for the classical and "
                          "four-parameter families", param="z")
    if z != 0.0 and abs(z) >= p.radius:
        raise DomainError(f"series diverges at z={z}: alpha={p.alpha} must exceed q-1={p.q - 1} "
                          f"(radius of convergence {p.radius:g})", param="alpha")
    return z


def _from_log(log_abs, sign):
    if log_abs > _LOG_FLOAT_MAX:
        return sign * math.inf
    return sign * math.exp(log_abs)


def _sum(p, z, k0, log_norm, cfg):
    """Sum c_k z^k e^{log_norm} for k >= k0; z != 0."""
    shift, s, abs_s, peak, last_l, last_lr, n, converged = _kernels.series_sum(
        p.alpha, p.beta, p.gamma, p.q, p.uses_pochhammer, log_norm, z, k0,
        cfg.rel_tol, cfg.abs_tol, cfg.max_terms, cfg.consecutive_small,
        cfg.summation is Summation.COMPENSATED)
    if s == 0.0:
        log_abs, sign = -math.inf, 1
    else:
        log_abs, sign = shift + math.log(abs(s)), (1 if s > 0 else -1)

    r = min(math.exp(last_lr), 0.5) if converged else 1.0
    if converged:
        log_bound = last_l + math.log(r / (1.0 - r))
        cancel = peak / abs(s) if s != 0.0 else math.inf
        log_bound += math.log(max(1.0, cancel))
        bound = _from_log(log_bound, 1) if math.isfinite(log_bound) else math.inf
    else:
        bound = math.inf
    value = _from_log(log_abs, sign) if math.isfinite(log_abs) else 0.0

    if converged and z < 0.0:
        cond = abs_s / abs(s) if s != 0.0 else math.inf
        tol_ok = bound <= max(cfg.abs_tol, cfg.rel_tol * abs(value))
        if not tol_ok or 8.0 * _EPS * cond > cfg.rel_tol:
            return _sum_mp(p, z, k0, log_norm, cfg, cond, shift + math.log(abs_s))
    return EvalResult(value, bound if converged else math.inf, n, converged, log_abs, sign)


def _sum_mp(p, z, k0, log_norm, cfg, cond, log_abs_sum):
    """Re-sum an alternating series with enough digits to absorb cancellation.

    The double-precision estimate of the condition number can itself be wrecked
    by cancellation, so the digits are re-derived from the extended sum and the
    pass repeated until they cover it.
    """
    target = -math.log10(cfg.rel_tol)
    extra = math.log10(cond) if math.isfinite(cond) else log_abs_sum / math.log(10.0)
    dps = int(target + max(extra, 0.0) + 12)
    for _ in range(6):
        s, abs_s, n, converged, last_l, last_lr = _mp_pass(p, z, k0, log_norm, cfg, dps, target)
        if s == 0 or not converged:
            break
        need = target + float(mpmath.log10(abs_s / abs(s))) + 8
        if need <= dps:
            break
        dps = int(need) + 10
    if s == 0:
        log_abs, sign = -math.inf, 1
    else:
        log_abs, sign = float(mpmath.log(abs(s))), (1 if s > 0 else -1)
    if converged:
        r = min(float(mpmath.exp(last_lr)), 0.5)
        bound = float(mpmath.exp(last_l)) * r / (1.0 - r)
    else:
        bound = math.inf
    value = _from_log(log_abs, sign) if math.isfinite(log_abs) else 0.0
    return EvalResult(value, bound, n, converged, log_abs, sign, "mp")


def _mp_pass(p, z, k0, log_norm, cfg, dps, target):
    with mpmath.workdps(dps):
        logz = mpmath.log(-mpmath.mpf(z))
        alpha, beta = mpmath.mpf(p.alpha), mpmath.mpf(p.beta)
        gam, q = mpmath.mpf(p.gamma), mpmath.mpf(p.q)
        lg_gamma = mpmath.loggamma(gam)
        poch = p.uses_pochhammer
        eps = mpmath.mpf(10) ** (-(target + 2))
        s = mpmath.mpf(0)
        abs_s = mpmath.mpf(0)
        prev_l = None
        run = 0
        converged = False
        n = 0
        last_l = None
        last_lr = mpmath.mpf(0)
        for i in range(cfg.max_terms):
            k = k0 + i
            lk = -mpmath.loggamma(alpha * k + beta) + k * logz + log_norm
            if poch:
                lk += mpmath.loggamma(gam + q * k) - lg_gamma - mpmath.loggamma(k + 1)
            t = mpmath.exp(lk)
            s = s - t if k % 2 else s + t
            abs_s += t
            n += 1
            last_l = lk
            if prev_l is not None:
                last_lr = lk - prev_l
                if t <= eps * abs(s) and last_lr < math.log(0.5):
                    run += 1
                    if run >= cfg.consecutive_small:
                        converged = True
                        break
                else:
                    run = 0
            prev_l = lk
        return s, abs_s, n, converged, last_l, last_lr


@lru_cache(maxsize=1 << 16)
def _cached(p, z, k0, normalized, cfg):
    log_norm = math.lgamma(p.beta) if normalized else 0.0
    if z == 0.0:
        if k0 > 0:
            return EvalResult(0.0, 0.0, 0, True, -math.inf, 1)
        # only the k = 0 term survives: (gamma)_0 / Gamma(beta)
        log_abs = 0.0 if normalized else -math.lgamma(p.beta)
        return EvalResult(_from_log(log_abs, 1), 0.0, 1, True, log_abs, 1)
    return _sum(p, z, k0, log_norm, cfg)


def eval_ml(p, z, cfg=DEFAULT_CONFIG):
    """E^{gamma,q}_{alpha,beta}(z) by its power series."""
    z = _check_z(p, z, cfg)
    return _cached(p, z, 0, False, cfg)


def eval_ml_normalized(p, z, cfg=DEFAULT_CONFIG):
    """Gamma(beta) * E^{gamma,q}_{alpha,beta}(z); the Gamma(beta) factor is folded
    into every term so the value at z = 0 is exactly 1."""
    z = _check_z(p, z, cfg)
    return _cached(p, z, 0, True, cfg)


def _tail(p, n, z, cfg):
    if int(n) != n or n < 0:
        raise DomainError(f"tail index n must be an integer >= 0, got {n}", param="n")
    z = _check_z(p, z, cfg)
    if z <= 0.0:
        raise DomainError("tail sections are defined for z > 0", param="z")
    return _cached(p, z, int(n) + 1, False, cfg)


def eval_tail(p, n, z, cfg=DEFAULT_CONFIG):
    """Tail section sum_{k >= n+1} c_k z^k, summed directly from k = n + 1.

    Only the classical and Prabhakar families; tails for general q are the
    subject of :mod:`mllab.probe`'s search mode.
    """
    if p.family is Family.FOUR_PARAMETER:
        raise DomainError("tail sections are only defined here for the classical and "
                          "Prabhakar families", param="family")
    return _tail(p, n, z, cfg)


def eval_tail_any_q(p, n, z, cfg=DEFAULT_CONFIG):
    """Tail section for any family, including general q (exploratory use)."""
    return _tail(p, n, z, cfg)


def log_coeff(p, k):
    """ln c_k for the series of ``p``."""
    out = -math.lgamma(p.alpha * k + p.beta)
    if p.uses_pochhammer:
        out += math.lgamma(p.gamma + p.q * k) - math.lgamma(p.gamma) - math.lgamma(k + 1.0)
    return out


def partial_sum(p, n, z):
    """First n + 1 terms, sum_{k=0}^{n} c_k z^k, exactly rounded via fsum."""
    if int(n) != n or n < 0:
        raise DomainError(f"n must be an integer >= 0, got {n}", param="n")
    z = float(z)
    if not math.isfinite(z):
        raise DomainError("z must be finite", param="z")
    terms = [_term(p, 0, z)]
    if z != 0.0:
        terms.extend(_term(p, k, z) for k in range(1, int(n) + 1))
    return math.fsum(terms)


def _term(p, k, z):
    """c_k z^k straight from Gamma and the Pochhammer product; log form on overflow."""
    try:
        t = z**k / math.gamma(p.alpha * k + p.beta)
        if p.uses_pochhammer:
            t *= pochhammer(p.gamma, p.q * k) / math.factorial(k)
        if math.isfinite(t) and (t != 0.0 or z == 0.0):
            return t
    except OverflowError:
        pass
    t = math.exp(log_coeff(p, k) + k * math.log(abs(z)))
    return -t if (z < 0 and k % 2) else t


def clear_cache():
    _cached.cache_clear()
