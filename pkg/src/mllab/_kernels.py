"""Hot loops for the power-series sums.

Two interchangeable implementations of :func:`series_sum`:

* ``series_sum_numba``: a scalar loop compiled with numba, Neumaier-compensated.
* ``series_sum_numpy``: chunked, vectorized with ``scipy.special.gammaln``;
  the accepted terms are summed with ``math.fsum``.

``series_sum`` points at the numba one unless ``MLLAB_DISABLE_NUMBA`` is set.

Both return the same 8-tuple::

    (shift, scaled_sum, scaled_abs_sum, scaled_peak, last_log_term,
     last_log_ratio, terms_used, converged)

where the true sum is ``scaled_sum * exp(shift)``. Terms are
``sign_k * exp(L_k)`` with ``L_k = log|c_k| + k log|z| + log_norm`` and
``log|c_k| = ln(gamma)_{qk} - ln k! - ln Gamma(alpha k + beta)`` (the Pochhammer
and factorial parts are dropped for the classical family).
"""

import math

import numpy as np
from scipy.special import gammaln

from ._accel import USE_NUMBA, njit

LN_HALF = math.log(0.5)
# rescale the running sum once terms outgrow it by this many e-folds
_RESCALE = 300.0


@njit
def _log_coeff(k, alpha, beta, gamma_, q, poch, lg_gamma):
    out = -math.lgamma(alpha * k + beta)
    if poch:
        out += math.lgamma(gamma_ + q * k) - lg_gamma - math.lgamma(k + 1.0)
    return out


@njit
def log_coeff_numba(k, alpha, beta, gamma_, q, poch):
    lg = math.lgamma(gamma_) if poch else 0.0
    return _log_coeff(k, alpha, beta, gamma_, q, poch, lg)


@njit
def series_sum_numba(alpha, beta, gamma_, q, poch, log_norm, z, k0,
                     rel_tol, abs_tol, max_terms, consecutive_small, compensated):
    lg_gamma = math.lgamma(gamma_) if poch else 0.0
    logz = math.log(abs(z))
    neg = z < 0.0
    log_abs_tol = math.log(abs_tol)
    log_rel_tol = math.log(rel_tol)

    shift = _log_coeff(k0, alpha, beta, gamma_, q, poch, lg_gamma) + k0 * logz + log_norm
    s = 0.0
    comp = 0.0
    abs_s = 0.0
    peak = 0.0
    prev_l = shift
    last_l = shift
    last_lr = 0.0
    run = 0
    n = 0
    converged = False
    for i in range(max_terms):
        k = k0 + i
        lk = _log_coeff(k, alpha, beta, gamma_, q, poch, lg_gamma) + k * logz + log_norm
        if lk > shift + _RESCALE:
            f = math.exp(shift - lk)
            s *= f
            comp *= f
            abs_s *= f
            peak *= f
            shift = lk
        t = math.exp(lk - shift)
        if neg and (k % 2 == 1):
            t = -t
        if compensated:
            tmp = s + t
            if abs(s) >= abs(t):
                comp += (s - tmp) + t
            else:
                comp += (t - tmp) + s
            s = tmp
        else:
            s += t
        abs_s += abs(t)
        partial = s + comp
        if abs(partial) > peak:
            peak = abs(partial)
        n += 1
        last_l = lk
        if i > 0:
            lr = lk - prev_l
            last_lr = lr
            if partial != 0.0:
                thr = max(log_abs_tol, log_rel_tol + math.log(abs(partial)) + shift)
            else:
                thr = log_abs_tol
            if lk <= thr and lr < LN_HALF:
                run += 1
                if run >= consecutive_small:
                    converged = True
                    break
            else:
                run = 0
        prev_l = lk
    return shift, s + comp, abs_s, peak, last_l, last_lr, n, converged


def _log_coeff_vec(ks, alpha, beta, gamma_, q, poch, lg_gamma):
    out = -gammaln(alpha * ks + beta)
    if poch:
        out += gammaln(gamma_ + q * ks) - lg_gamma - gammaln(ks + 1.0)
    return out


def series_sum_numpy(alpha, beta, gamma_, q, poch, log_norm, z, k0,
                     rel_tol, abs_tol, max_terms, consecutive_small, compensated):
    lg_gamma = math.lgamma(gamma_) if poch else 0.0
    logz = math.log(abs(z))
    neg = z < 0.0
    log_abs_tol = math.log(abs_tol)
    log_rel_tol = math.log(rel_tol)

    logs = []
    running = 0.0  # plain running sum at scale ``shift``, only for the stop test
    shift = None
    run = 0
    done = 0
    prev_l = None
    last_lr = 0.0
    converged = False
    chunk = 32
    while done < max_terms and not converged:
        m = min(chunk, max_terms - done)
        ks = np.arange(k0 + done, k0 + done + m, dtype=np.float64)
        lk = _log_coeff_vec(ks, alpha, beta, gamma_, q, poch, lg_gamma) + ks * logz + log_norm
        cmax = float(lk.max())
        if shift is None:
            shift = float(lk[0])
        if cmax > shift + _RESCALE:
            running *= math.exp(shift - cmax)
            shift = cmax
        t = np.exp(lk - shift)
        if neg:
            t = np.where(ks.astype(np.int64) % 2 == 1, -t, t)
        partial = running + np.cumsum(t)
        with np.errstate(divide="ignore"):
            lp = np.log(np.abs(partial)) + shift
        thr = np.maximum(log_abs_tol, log_rel_tol + lp)
        lr = np.diff(np.concatenate(([lk[0] if prev_l is None else prev_l], lk)))
        small = (lk <= thr) & (lr < LN_HALF)
        if done == 0:
            small[0] = False
        stop_at = -1
        for j in range(m):
            if small[j]:
                run += 1
                if run >= consecutive_small:
                    stop_at = j
                    break
            else:
                run = 0
        if stop_at >= 0:
            converged = True
            lk = lk[: stop_at + 1]
            lr = lr[: stop_at + 1]
            partial = partial[: stop_at + 1]
        logs.append(lk)
        running = float(partial[-1])
        prev_l = float(lk[-1])
        if done + len(lk) > 1:
            last_lr = float(lr[-1])
        done += len(lk)
        chunk = min(chunk * 2, 4096)

    lk = np.concatenate(logs)
    ks = np.arange(k0, k0 + len(lk))
    terms = np.exp(lk - shift)
    if neg:
        terms = np.where(ks % 2 == 1, -terms, terms)
    if compensated:
        total = math.fsum(terms.tolist())
    else:
        total = float(np.sum(terms))
    peak = float(np.max(np.abs(np.cumsum(terms))))
    return (shift, total, float(np.sum(np.abs(terms))), peak, float(lk[-1]), last_lr,
            len(lk), converged)


series_sum = series_sum_numba if USE_NUMBA else series_sum_numpy
BACKEND = "numba" if USE_NUMBA else "numpy"
