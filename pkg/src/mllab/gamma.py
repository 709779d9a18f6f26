"""Real-argument gamma-family primitives for positive arguments.

Everything here works in log space where it matters; the series terms are
assembled from :func:`log_gamma` differences and exponentiated once.
"""

from dataclasses import dataclass
import math

from .errors import DomainError

# abscissa of the minimum of Gamma on (0, inf)
GAMMA_MIN_X = 1.4616321449683623

_LOG_FLOAT_MAX = math.log(2.0**1023 * (2.0 - 2.0**-52))

# B_{2k} / (2k) for the digamma asymptotic expansion, k = 1..8
_DIGAMMA_ASYMPTOTIC = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
    -3617.0 / 8160.0,
)


@dataclass(frozen=True)
class GammaValue:
    log_abs: float
    sign: int = 1

    @property
    def value(self):
        if self.log_abs > _LOG_FLOAT_MAX:
            raise OverflowError("Gamma value exceeds the double range; use log_abs")
        return self.sign * math.exp(self.log_abs)


def _check_positive(x, name="x"):
    if not (isinstance(x, (int, float)) or hasattr(x, "__float__")):
        raise DomainError(f"{name} must be a real number", param=name)
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"{name} must be finite and > 0, got {x!r}", param=name)
    return x


def log_gamma(x):
    """Natural log of Gamma(x) for finite x > 0."""
    x = _check_positive(x)
    return math.lgamma(x)


def gamma_value(x):
    """Gamma(x) as a :class:`GammaValue` (x > 0, so the sign is always +1)."""
    return GammaValue(log_gamma(x), 1)


def digamma(x):
    """psi(x) = d/dx ln Gamma(x) for x > 0.

    Upward recurrence to x >= 10, then the Bernoulli asymptotic series.
    """
    x = _check_positive(x)
    shift = 0.0
    while x < 10.0:
        shift -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    tail = 0.0
    p = inv2
    for c in _DIGAMMA_ASYMPTOTIC:
        tail += c * p
        p *= inv2
    return shift + math.log(x) - 0.5 / x - tail


def log_pochhammer(gamma, t):
    """ln (gamma)_t = ln Gamma(gamma + t) - ln Gamma(gamma), real t >= 0."""
    gamma = _check_positive(gamma, "gamma")
    t = float(t)
    if not math.isfinite(t) or t < 0.0:
        raise DomainError(f"t must be finite and >= 0, got {t!r}", param="t")
    if t == 0.0:
        return 0.0
    if t == int(t) and t <= 64:
        # short integer index: exact-ish product keeps 24 == (2)_3 to the ulp
        acc = 0.0
        for j in range(int(t)):
            acc += math.log(gamma + j)
        return acc
    return math.lgamma(gamma + t) - math.lgamma(gamma)


def pochhammer(gamma, t):
    """Rising factorial (gamma)_t = Gamma(gamma + t) / Gamma(gamma).

    Raises OverflowError when the value does not fit in a double; the log form
    is still available from :func:`log_pochhammer`.
    """
    gamma = _check_positive(gamma, "gamma")
    t = float(t)
    if not math.isfinite(t) or t < 0.0:
        raise DomainError(f"t must be finite and >= 0, got {t!r}", param="t")
    if t == int(t) and t <= 64:
        acc = 1.0
        for j in range(int(t)):
            acc *= gamma + j
        if math.isinf(acc):
            raise OverflowError("pochhammer value exceeds the double range; use log_pochhammer")
        return acc
    lp = log_pochhammer(gamma, t)
    if lp > _LOG_FLOAT_MAX:
        raise OverflowError("pochhammer value exceeds the double range; use log_pochhammer")
    return math.exp(lp)


def log_gamma_ratio(x, a):
    """ln[Gamma(x + a) / Gamma(x)] for x > 0, x + a > 0."""
    x = _check_positive(x)
    _check_positive(x + a, "x+a")
    return math.lgamma(x + a) - math.lgamma(x)
