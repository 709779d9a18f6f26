"""Every inequality as a residual with one verdict contract.

A residual is oriented so that the claimed inequality reads ``residual >= 0``.
Residuals are formed from logarithms of the function values: for a Turan-type
difference ``A B - C^2`` we compute ``expm1(ln A + ln B - 2 ln C)`` times the
scale ``C^2``, which stays accurate when A, B, C are huge or nearly equal.

Verdict: ``passed`` iff ``residual >= -max(eps_abs, eps_rel * scale)``.
Records whose series did not converge are marked ``unresolved``; real-line
checks that meet a non-positive function value are marked ``guard``. Neither
counts as a pass or a failure.
"""

from dataclasses import dataclass, field
import math
from typing import Callable, Optional

from .errors import DomainError
from .gamma import GAMMA_MIN_X
from .series import (DEFAULT_CONFIG, MLParams, eval_ml, eval_ml_normalized,
                     eval_tail)

EPS_ABS = 1e-12
EPS_REL = 1e-9
# real-power checks only look at points where every normalized value exceeds this
GUARD_FLOOR = 1e-12
_LOG_GUARD = math.log(GUARD_FLOOR)

PASS, FAIL, GUARD, UNRESOLVED = "pass", "fail", "guard", "unresolved"


@dataclass(frozen=True)
class CheckRecord:
    equation_id: str
    params: MLParams
    z: float
    residual: float
    scale: float
    passed: bool
    tol_used: float
    status: str
    n: Optional[int] = None
    beta2: Optional[float] = None
    rel_residual: float = math.nan
    note: str = field(default="", compare=False)

    def sort_key(self):
        p = self.params
        return (self.equation_id, p.alpha, p.beta,
                -1.0 if self.beta2 is None else self.beta2,
                p.gamma, p.q, -1 if self.n is None else self.n, self.z)


class _Unresolved(Exception):
    pass


class _Guarded(Exception):
    pass


def _exp(x):
    return math.inf if x > 709.0 else math.exp(x)


def _log(res):
    if not res.converged:
        raise _Unresolved(f"series did not converge in {res.terms_used} terms")
    return res.log_abs


def _log_guarded(res):
    if not res.converged:
        raise _Unresolved(f"series did not converge in {res.terms_used} terms")
    if res.sign <= 0 or res.log_abs <= _LOG_GUARD:
        raise _Guarded("normalized value <= 1e-12; real powers undefined")
    return res.log_abs


def _record(eid, p, z, rel, log_scale, eps_abs, eps_rel, n=None, beta2=None):
    scale = _exp(log_scale)
    tol_used = max(eps_abs, eps_rel * scale)
    passed = rel >= -max(eps_abs * _exp(-log_scale), eps_rel)
    residual = 0.0 if rel == 0.0 else rel * scale
    return CheckRecord(eid, p, float(z), residual, scale, passed, tol_used,
                       PASS if passed else FAIL, n, beta2, rel)


def _run(eid, p, z, body, eps_abs, eps_rel, n=None, beta2=None):
    """Evaluate ``body() -> (rel_residual, log_scale)`` and wrap it in a record."""
    try:
        rel, log_scale = body()
    except _Unresolved as exc:
        return CheckRecord(eid, p, float(z), math.nan, math.nan, False, math.nan, UNRESOLVED,
                           n, beta2, math.nan, str(exc))
    except _Guarded as exc:
        return CheckRecord(eid, p, float(z), math.nan, math.nan, False, math.nan, GUARD,
                           n, beta2, math.nan, str(exc))
    return _record(eid, p, z, rel, log_scale, eps_abs, eps_rel, n, beta2)


def _positive_z(z):
    if not z > 0:
        raise DomainError(f"z must be > 0, got {z}", param="z")


def _tail_index(n):
    if int(n) != n or n < 0:
        raise DomainError(f"n must be an integer >= 0, got {n}", param="n")
    return int(n)


def _log_gamma_turan_constant(alpha, beta, n):
    """ln of Gamma^2(beta+(n+2)a) / (Gamma(beta+(n+1)a) Gamma(beta+(n+3)a))."""
    return (2 * math.lgamma(beta + (n + 2) * alpha) - math.lgamma(beta + (n + 1) * alpha)
            - math.lgamma(beta + (n + 3) * alpha))


def sharp_constant_classical(alpha, beta, n):
    return math.exp(_log_gamma_turan_constant(alpha, beta, n))


def sharp_constant_prabhakar(alpha, beta, gamma, n):
    """The constant stated for the Prabhakar tail inequality:
    (n+1)(gamma+n+2) / ((n+2)(gamma+n+1)) times the classical Gamma ratio."""
    factor = (n + 1) * (gamma + n + 2) / ((n + 2) * (gamma + n + 1))
    return factor * sharp_constant_classical(alpha, beta, n)


def prabhakar_tail_ratio_limit(alpha, beta, gamma, n):
    """lim_{z -> 0+} of E^{n} E^{n+2} / (E^{n+1})^2 for Prabhakar tails: c_{n+1} c_{n+3} / c_{n+2}^2.

    Equals (n+2)(gamma+n+2) / ((n+3)(gamma+n+1)) times the classical Gamma ratio.
    """
    factor = (n + 2) * (gamma + n + 2) / ((n + 3) * (gamma + n + 1))
    return factor * sharp_constant_classical(alpha, beta, n)


# ---------------------------------------------------------------- classical


def check_turan_classical(alpha, beta, z, cfg=DEFAULT_CONFIG, eps_abs=EPS_ABS, eps_rel=EPS_REL):
    """E(b) E(b+2) - E(b+1)^2 >= 0 for the normalized classical function, z > 0."""
    p = MLParams.classical(alpha, beta)
    _positive_z(z)

    def body():
        la = _log(eval_ml_normalized(p, z, cfg))
        lb = _log(eval_ml_normalized(p.with_beta(beta + 2), z, cfg))
        lc = _log(eval_ml_normalized(p.with_beta(beta + 1), z, cfg))
        return math.expm1(la + lb - 2 * lc), 2 * lc

    return _run("eq6", p, z, body, eps_abs, eps_rel)


def check_exp_corollary(z, cfg=DEFAULT_CONFIG, eps_abs=EPS_ABS, eps_rel=EPS_REL):
    """2 e^z (e^z - 1 - z) - (e^z - 1)^2 >= 0, with
    e^z = E_{1,1}, e^z - 1 = z E_{1,2}, e^z - 1 - z = z^2 E_{1,3}."""
    _positive_z(z)
    p = MLParams.classical(1.0, 1.0)

    def body():
        l1 = _log(eval_ml(p, z, cfg))
        l2 = _log(eval_ml(p.with_beta(2.0), z, cfg))
        l3 = _log(eval_ml(p.with_beta(3.0), z, cfg))
        lz = math.log(z)
        # residual / (e^z - 1)^2 = 2 E11 E13 / E12^2 - 1
        return math.expm1(math.log(2.0) + l1 + l3 - 2 * l2), 2 * (lz + l2)

    return _run("eq66", p, z, body, eps_abs, eps_rel)


def _tail_turan(eid, p, n, z, cfg, eps_abs, eps_rel):
    n = _tail_index(n)
    _positive_z(z)

    def body():
        l0 = _log(eval_tail(p, n, z, cfg))
        l1 = _log(eval_tail(p, n + 1, z, cfg))
        l2 = _log(eval_tail(p, n + 2, z, cfg))
        return -math.expm1(l0 + l2 - 2 * l1), 2 * l1

    return _run(eid, p, z, body, eps_abs, eps_rel, n=n)


def check_tail_turan_classical(alpha, beta, n, z, cfg=DEFAULT_CONFIG, eps_abs=EPS_ABS,
                               eps_rel=EPS_REL):
    """(E^{n+1})^2 - E^n E^{n+2} >= 0 for classical tail sections."""
    return _tail_turan("eq8", MLParams.classical(alpha, beta), n, z, cfg, eps_abs, eps_rel)


def check_shifted_turan(alpha, beta, n, z, cfg=DEFAULT_CONFIG, eps_abs=EPS_ABS, eps_rel=EPS_REL):
    """E_{b+(n+2)a}^2 - E_{b+(n+1)a} E_{b+(n+3)a} >= 0 (no Gamma normalization).

    beta = 0 is allowed as long as every evaluated order is positive.
    """
    n = _tail_index(n)
    _positive_z(z)
    if beta < 0:
        raise DomainError(f"beta must be >= 0, got {beta}", param="beta")
    b1 = beta + (n + 1) * alpha
    p = MLParams.classical(alpha, b1)

    def body():
        l1 = _log(eval_ml(p, z, cfg))
        l2 = _log(eval_ml(p.with_beta(beta + (n + 2) * alpha), z, cfg))
        l3 = _log(eval_ml(p.with_beta(beta + (n + 3) * alpha), z, cfg))
        return -math.expm1(l1 + l3 - 2 * l2), 2 * l2

    # beta = 0 has no MLParams of its own; such records carry the shifted order instead
    shown = MLParams.classical(alpha, beta) if beta > 0 else p
    return _run("eq09", shown, z, body, eps_abs, eps_rel, n=n)


def check_sharp_turan_tail(alpha, beta, n, z, cfg=DEFAULT_CONFIG, eps_abs=EPS_ABS, eps_rel=EPS_REL):
    """E^n E^{n+2} - C (E^{n+1})^2 >= 0 with the Gamma-ratio constant C."""
    p = MLParams.classical(alpha, beta)
    n = _tail_index(n)
    _positive_z(z)
    log_c = _log_gamma_turan_constant(alpha, beta, n)

    def body():
        l0 = _log(eval_tail(p, n, z, cfg))
        l1 = _log(eval_tail(p, n + 1, z, cfg))
        l2 = _log(eval_tail(p, n + 2, z, cfg))
        return _exp(log_c) * math.expm1(l0 + l2 - 2 * l1 - log_c), 2 * l1

    return _run("eq999", p, z, body, eps_abs, eps_rel, n=n)


def _ratio_turan(eid, p, beta1, beta2, z, cfg, eps_abs, eps_rel):
    if not beta2 > beta1:
        raise DomainError(f"need beta2 > beta1, got beta1={beta1}, beta2={beta2}", param="beta2")
    if not beta1 > 1:
        raise DomainError(f"need beta1 > 1, got {beta1}", param="beta")
    _positive_z(z)
    p1 = p.with_beta(beta1)

    def body():
        l1 = _log(eval_ml(p1, z, cfg))
        l2 = _log(eval_ml(p.with_beta(beta2), z, cfg))
        l1m = _log(eval_ml(p.with_beta(beta1 - 1), z, cfg))
        l2m = _log(eval_ml(p.with_beta(beta2 - 1), z, cfg))
        # residual / (E1 E2)
        return _exp(l1m - l1) - _exp(l2m - l2) + (beta2 - beta1), l1 + l2

    return _run(eid, p1, z, body, eps_abs, eps_rel, beta2=float(beta2))


def check_ratio_turan_classical(alpha, beta1, beta2, z, cfg=DEFAULT_CONFIG, eps_abs=EPS_ABS,
                                eps_rel=EPS_REL):
    """E_{b2} E_{b1-1} - E_{b1} E_{b2-1} + (b2 - b1) E_{b1} E_{b2} >= 0 for b2 > b1 > 1."""
    return _ratio_turan("eq7777", MLParams.classical(alpha, beta1), beta1, beta2, z, cfg,
                        eps_abs, eps_rel)


def _ratio_special(eid, p, z, cfg, eps_abs, eps_rel):
    _positive_z(z)
    beta = p.beta

    def body():
        l0 = _log(eval_ml(p, z, cfg))
        l1 = _log(eval_ml(p.with_beta(beta + 1), z, cfg))
        l2 = _log(eval_ml(p.with_beta(beta + 2), z, cfg))
        # residual / (E_{b+1} E_{b+2})
        return _exp(l0 - l1) - _exp(l1 - l2) + (beta + 1), l1 + l2

    return _run(eid, p, z, body, eps_abs, eps_rel)


def check_ratio_turan_special(alpha, beta, z, cfg=DEFAULT_CONFIG, eps_abs=EPS_ABS, eps_rel=EPS_REL):
    """E_b E_{b+2} - E_{b+1}^2 + (b+1) E_{b+1} E_{b+2} >= 0."""
    return _ratio_special("eq8888", MLParams.classical(alpha, beta), z, cfg, eps_abs, eps_rel)


def _order_real_line(beta1, beta2, floor):
    if not beta1 >= beta2:
        raise DomainError(f"need beta1 >= beta2, got beta1={beta1}, beta2={beta2}", param="beta2")
    if not beta2 > floor:
        raise DomainError(f"need beta2 > {floor}, got {beta2}", param="beta2")


def _real_z(z):
    z = float(z)
    if not math.isfinite(z):
        raise DomainError("z must be finite", param="z")
    return z


def check_lazarevic_classical(alpha, beta1, beta2, z, cfg=DEFAULT_CONFIG, eps_abs=EPS_ABS,
                              eps_rel=EPS_REL):
    """ln E(b2)/(b2-1) - ln E(b1)/(b1-1) >= 0 for b1 >= b2 > 1, normalized, real z."""
    _order_real_line(beta1, beta2, 1.0)
    z = _real_z(z)
    p = MLParams.classical(alpha, beta1)

    def body():
        l1 = _log_guarded(eval_ml_normalized(p, z, cfg))
        l2 = _log_guarded(eval_ml_normalized(p.with_beta(beta2), z, cfg))
        return l2 / (beta2 - 1) - l1 / (beta1 - 1), 0.0

    return _run("a1", p, z, body, eps_abs, eps_rel, beta2=float(beta2))


def check_wilker_classical(alpha, beta1, beta2, z, cfg=DEFAULT_CONFIG, eps_abs=EPS_ABS,
                           eps_rel=EPS_REL):
    """E(b2)^{(b1-b2)/(b2-1)} + E(b2)/E(b1) - 2 >= 0 for b1 >= b2 > 1, normalized, real z."""
    _order_real_line(beta1, beta2, 1.0)
    z = _real_z(z)
    p = MLParams.classical(alpha, beta1)

    def body():
        l1 = _log_guarded(eval_ml_normalized(p, z, cfg))
        l2 = _log_guarded(eval_ml_normalized(p.with_beta(beta2), z, cfg))
        return _exp(l2 * (beta1 - beta2) / (beta2 - 1)) + _exp(l2 - l1) - 2.0, 0.0

    return _run("a4", p, z, body, eps_abs, eps_rel, beta2=float(beta2))


# -------------------------------------------------------------- generalized


def check_turan_generalized(alpha, beta, gamma, q, z, cfg=DEFAULT_CONFIG, eps_abs=EPS_ABS,
                            eps_rel=EPS_REL):
    """E(b) E(b+2) - E(b+1)^2 >= 0 for the normalized four-parameter function, z > 0."""
    p = MLParams.four(alpha, beta, gamma, q)
    _positive_z(z)

    def body():
        la = _log(eval_ml_normalized(p, z, cfg))
        lb = _log(eval_ml_normalized(p.with_beta(beta + 2), z, cfg))
        lc = _log(eval_ml_normalized(p.with_beta(beta + 1), z, cfg))
        return math.expm1(la + lb - 2 * lc), 2 * lc

    return _run("eq666", p, z, body, eps_abs, eps_rel)


def check_bounded_turan_prabhakar(alpha, beta, gamma, z, cfg=DEFAULT_CONFIG, eps_abs=EPS_ABS,
                                  eps_rel=EPS_REL):
    """E(b) E(b+2) - E(b+1)^2 + 1/(Gamma(b+1) Gamma(b+2) (1-z)^2) >= 0, Prabhakar, 0 <= z < 1."""
    if not 0.0 < gamma <= 1.0:
        raise DomainError(f"need 0 < gamma <= 1, got {gamma}", param="gamma")
    if not beta > GAMMA_MIN_X - 1.0:
        raise DomainError(f"need beta > x* - 1 = {GAMMA_MIN_X - 1:.9f}, got {beta}", param="beta")
    if not 0.0 <= z < 1.0:
        raise DomainError(f"need 0 <= z < 1, got {z}", param="z")
    p = MLParams.prabhakar(alpha, beta, gamma)
    log_k = -math.lgamma(beta + 1) - math.lgamma(beta + 2) - 2 * math.log1p(-z)

    def body():
        la = _log(eval_ml(p, z, cfg))
        lb = _log(eval_ml(p.with_beta(beta + 2), z, cfg))
        lc = _log(eval_ml(p.with_beta(beta + 1), z, cfg))
        return math.expm1(la + lb - 2 * lc) + _exp(log_k - 2 * lc), 2 * lc

    return _run("eq001", p, z, body, eps_abs, eps_rel)


def check_ratio_turan_generalized(alpha, beta1, beta2, gamma, q, z, cfg=DEFAULT_CONFIG,
                                  eps_abs=EPS_ABS, eps_rel=EPS_REL):
    """Four-parameter form of the beta1/beta2 ratio inequality, b2 > b1 > 1."""
    return _ratio_turan("eq7777g", MLParams.four(alpha, beta1, gamma, q), beta1, beta2, z, cfg,
                        eps_abs, eps_rel)


def check_ratio_turan_generalized_special(alpha, beta, gamma, q, z, cfg=DEFAULT_CONFIG,
                                          eps_abs=EPS_ABS, eps_rel=EPS_REL):
    """Four-parameter form of E_b E_{b+2} - E_{b+1}^2 + (b+1) E_{b+1} E_{b+2} >= 0."""
    return _ratio_special("eq8888g", MLParams.four(alpha, beta, gamma, q), z, cfg, eps_abs, eps_rel)


def check_tail_turan_prabhakar(alpha, beta, gamma, n, z, cfg=DEFAULT_CONFIG, eps_abs=EPS_ABS,
                               eps_rel=EPS_REL):
    """(E^{gamma,1,n+1})^2 - E^{gamma,1,n} E^{gamma,1,n+2} >= 0."""
    return _tail_turan("KK1", MLParams.prabhakar(alpha, beta, gamma), n, z, cfg, eps_abs, eps_rel)


def check_sharp_turan_prabhakar(alpha, beta, gamma, n, z, cfg=DEFAULT_CONFIG, eps_abs=EPS_ABS,
                                eps_rel=EPS_REL):
    """E^{n} E^{n+2} - C' (E^{n+1})^2 >= 0 with the stated Prabhakar constant C'."""
    p = MLParams.prabhakar(alpha, beta, gamma)
    n = _tail_index(n)
    _positive_z(z)
    log_c = math.log(sharp_constant_prabhakar(alpha, beta, gamma, n))

    def body():
        l0 = _log(eval_tail(p, n, z, cfg))
        l1 = _log(eval_tail(p, n + 1, z, cfg))
        l2 = _log(eval_tail(p, n + 2, z, cfg))
        return _exp(log_c) * math.expm1(l0 + l2 - 2 * l1 - log_c), 2 * l1

    return _run("SS", p, z, body, eps_abs, eps_rel, n=n)


def check_lazarevic_generalized(alpha, beta1, beta2, gamma, q, z, cfg=DEFAULT_CONFIG,
                                eps_abs=EPS_ABS, eps_rel=EPS_REL):
    """b1 ln E(b2+1) - b2 ln E(b1+1) >= 0 for b1 >= b2 > 0, normalized four-parameter, real z."""
    _order_real_line(beta1, beta2, 0.0)
    z = _real_z(z)
    p = MLParams.four(alpha, beta1, gamma, q)

    def body():
        l1 = _log_guarded(eval_ml_normalized(p.with_beta(beta1 + 1), z, cfg))
        l2 = _log_guarded(eval_ml_normalized(p.with_beta(beta2 + 1), z, cfg))
        return beta1 * l2 - beta2 * l1, 0.0

    return _run("eq07", p, z, body, eps_abs, eps_rel, beta2=float(beta2))


def check_wilker_generalized(alpha, beta1, beta2, gamma, q, z, cfg=DEFAULT_CONFIG,
                             eps_abs=EPS_ABS, eps_rel=EPS_REL):
    """E(b2+1)^{(b1-b2)/b2} + E(b2+1)/E(b1+1) - 2 >= 0, normalized four-parameter, real z."""
    _order_real_line(beta1, beta2, 0.0)
    z = _real_z(z)
    p = MLParams.four(alpha, beta1, gamma, q)

    def body():
        l1 = _log_guarded(eval_ml_normalized(p.with_beta(beta1 + 1), z, cfg))
        l2 = _log_guarded(eval_ml_normalized(p.with_beta(beta2 + 1), z, cfg))
        return _exp(l2 * (beta1 - beta2) / beta2) + _exp(l2 - l1) - 2.0, 0.0

    return _run("eq08", p, z, body, eps_abs, eps_rel, beta2=float(beta2))


@dataclass(frozen=True)
class CheckInfo:
    func: Callable
    anchor: str
    # grid axes the check consumes, in call order
    axes: tuple
    real_line: bool = False


CHECKS = {
    "eq6": CheckInfo(check_turan_classical, "Turan inequality, normalized classical, z>0",
                     ("alpha", "beta", "z")),
    "eq66": CheckInfo(check_exp_corollary, "(e^z-1)^2 <= 2e^z(e^z-1-z), z>0", ("z",)),
    "eq8": CheckInfo(check_tail_turan_classical, "tail-section Turan, classical",
                     ("alpha", "beta", "n", "z")),
    "eq09": CheckInfo(check_shifted_turan, "shifted-order Turan, classical",
                      ("alpha", "beta", "n", "z")),
    "eq999": CheckInfo(check_sharp_turan_tail, "sharp tail Turan with Gamma-ratio constant",
                       ("alpha", "beta", "n", "z")),
    "eq7777": CheckInfo(check_ratio_turan_classical, "beta-ratio Turan, classical, b2>b1>1",
                        ("alpha", "beta", "beta2", "z")),
    "eq8888": CheckInfo(check_ratio_turan_special, "beta-ratio Turan special case, classical",
                        ("alpha", "beta", "z")),
    "a1": CheckInfo(check_lazarevic_classical, "Lazarevic-type, normalized classical, real z",
                    ("alpha", "beta", "beta2", "z"), real_line=True),
    "a4": CheckInfo(check_wilker_classical, "Wilker-type, normalized classical, real z",
                    ("alpha", "beta", "beta2", "z"), real_line=True),
    "eq666": CheckInfo(check_turan_generalized, "Turan inequality, normalized four-parameter",
                       ("alpha", "beta", "gamma", "q", "z")),
    "eq001": CheckInfo(check_bounded_turan_prabhakar, "bounded Turan, Prabhakar, 0<=z<1",
                       ("alpha", "beta", "gamma", "z")),
    "eq7777g": CheckInfo(check_ratio_turan_generalized, "beta-ratio Turan, four-parameter",
                         ("alpha", "beta", "beta2", "gamma", "q", "z")),
    "eq8888g": CheckInfo(check_ratio_turan_generalized_special,
                         "beta-ratio Turan special case, four-parameter",
                         ("alpha", "beta", "gamma", "q", "z")),
    "KK1": CheckInfo(check_tail_turan_prabhakar, "tail-section Turan, Prabhakar",
                     ("alpha", "beta", "gamma", "n", "z")),
    "SS": CheckInfo(check_sharp_turan_prabhakar, "sharp tail Turan, Prabhakar constant",
                    ("alpha", "beta", "gamma", "n", "z")),
    "eq07": CheckInfo(check_lazarevic_generalized, "Lazarevic-type, four-parameter, real z",
                      ("alpha", "beta", "beta2", "gamma", "q", "z"), real_line=True),
    "eq08": CheckInfo(check_wilker_generalized, "Wilker-type, four-parameter, real z",
                      ("alpha", "beta", "beta2", "gamma", "q", "z"), real_line=True),
}
