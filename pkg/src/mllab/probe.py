"""Monotonicity probes for the ratio functions and the open-problem searches.

Monotonicity is judged pairwise: for consecutive samples the relative drop
``(v_i - v_{i+1}) / max(|v_i|, |v_{i+1}|)`` (or rise, for decreasing claims) must
stay below ``tol_mono``.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from enum import Enum
import itertools
import math
import os
from typing import Optional

import mpmath
import numpy as np

from .errors import DomainError
from .inequalities import (EPS_REL, GUARD_FLOOR,
                           sharp_constant_classical, sharp_constant_prabhakar)
from .series import (DEFAULT_CONFIG, Family, MLParams, eval_ml, eval_ml_normalized, eval_tail,
                     eval_tail_any_q, log_coeff)

TOL_MONO = 1e-9
LIMIT_Z = 1e-8
LIMIT_TOL = 1e-6


class Direction(str, Enum):
    INCREASING = "increasing"
    DECREASING = "decreasing"


@dataclass(frozen=True)
class MonotonicityReport:
    function_id: str
    direction: Direction
    sample_points: tuple
    max_violation: float
    passed: bool
    limit_at_zero: Optional[float] = None
    limit_reference: Optional[float] = None
    params: dict = field(default_factory=dict)
    skipped: int = 0
    in_hypothesis: bool = True
    # c_{n+1} c_{n+3} / c_{n+2}^2 straight from the series coefficients
    limit_series: Optional[float] = None

    @property
    def limit_error(self):
        if self.limit_at_zero is None or self.limit_reference is None:
            return None
        return abs(self.limit_at_zero - self.limit_reference)

    @property
    def ok(self):
        """Monotone in the claimed direction and, when a reference exists, limit matched."""
        err = self.limit_error
        return self.passed and (err is None or err <= LIMIT_TOL)

    def to_dict(self):
        d = asdict(self)
        d["direction"] = self.direction.value
        d["sample_points"] = [list(pt) for pt in self.sample_points]
        d["limit_error"] = self.limit_error
        d["ok"] = self.ok
        return d


def _validate_grid(grid, name="z_grid", min_points=2, min_decades=0.0, positive=True):
    xs = [float(v) for v in grid]
    if len(xs) < min_points:
        raise DomainError(f"{name} needs at least {min_points} points", param=name)
    if any(not math.isfinite(v) for v in xs):
        raise DomainError(f"{name} must be finite", param=name)
    if positive and xs[0] <= 0:
        raise DomainError(f"{name} must be positive", param=name)
    if any(b <= a for a, b in zip(xs, xs[1:])):
        raise DomainError(f"{name} must be strictly increasing (degenerate grid)", param=name)
    if min_decades and math.log10(xs[-1] / xs[0]) < min_decades:
        raise DomainError(f"{name} must span at least {min_decades:g} decades", param=name)
    return xs


def _max_violation(values, direction):
    worst = 0.0
    sign = 1.0 if direction is Direction.INCREASING else -1.0
    for a, b in zip(values, values[1:]):
        drop = sign * (a - b)
        if drop > 0:
            worst = max(worst, drop / max(abs(a), abs(b), 1e-300))
    return worst


def _report(fid, direction, xs, vals, tol, skipped=0, **extra):
    mv = _max_violation(vals, direction)
    return MonotonicityReport(fid, direction, tuple(zip(xs, vals)), mv, mv <= tol,
                              skipped=skipped, **extra)


def _tail_ratio(p, n, z, cfg, tail=eval_tail):
    """E^n E^{n+2} / (E^{n+1})^2, or None when a tail fails to converge."""
    r0, r1, r2 = (tail(p, n + j, z, cfg) for j in range(3))
    if not (r0.converged and r1.converged and r2.converged):
        return None
    return math.exp(r0.log_abs + r2.log_abs - 2 * r1.log_abs)


def _series_limit(p, n):
    return math.exp(log_coeff(p, n + 1) + log_coeff(p, n + 3) - 2 * log_coeff(p, n + 2))


def _tail_probe(fid, p, n, z_grid, cfg, tol, reference):
    if int(n) != n or n < 0:
        raise DomainError(f"n must be an integer >= 0, got {n}", param="n")
    n = int(n)
    xs = _validate_grid(z_grid, min_points=8, min_decades=2.0)
    kept, vals, skipped = [], [], 0
    for z in xs:
        h = _tail_ratio(p, n, z, cfg)
        if h is None:
            skipped += 1
            continue
        kept.append(z)
        vals.append(h)
    z0 = min(LIMIT_Z, xs[0])
    params = {"alpha": p.alpha, "beta": p.beta, "gamma": p.gamma, "n": n}
    return _report(fid, Direction.INCREASING, kept, vals, tol, skipped,
                   limit_at_zero=_tail_ratio(p, n, z0, cfg), limit_reference=reference,
                   params=params, limit_series=_series_limit(p, n))


def probe_hn(alpha, beta, n, z_grid, cfg=DEFAULT_CONFIG, tol_mono=TOL_MONO):
    """h_n(z) = E^n E^{n+2} / (E^{n+1})^2 for classical tails; claimed increasing,
    tending to the Gamma-ratio constant as z -> 0+."""
    p = MLParams.classical(alpha, beta)
    return _tail_probe("hn", p, n, z_grid, cfg, tol_mono, sharp_constant_classical(alpha, beta, n))


def probe_H_prabhakar(alpha, beta, gamma, n, z_grid, cfg=DEFAULT_CONFIG, tol_mono=TOL_MONO):
    """H(z) for Prabhakar tails; limit_reference is the stated sharp constant."""
    p = MLParams.prabhakar(alpha, beta, gamma)
    return _tail_probe("H", p, n, z_grid, cfg, tol_mono,
                       sharp_constant_prabhakar(alpha, beta, gamma, n))


def probe_beta_ratio(alpha, beta1, beta2, z_grid, family=Family.CLASSICAL, gamma=1.0, q=1.0,
                     cfg=DEFAULT_CONFIG, tol_mono=TOL_MONO):
    """z -> E_{alpha,beta1}(z) / E_{alpha,beta2}(z): increasing when beta1 < beta2."""
    if beta1 == beta2:
        raise DomainError("beta1 and beta2 must differ", param="beta2")
    family = Family(family)
    p1 = MLParams(alpha, beta1, gamma, q, family)
    p2 = p1.with_beta(beta2)
    xs = _validate_grid(z_grid)
    kept, vals, skipped = [], [], 0
    for z in xs:
        a, b = eval_ml(p1, z, cfg), eval_ml(p2, z, cfg)
        if not (a.converged and b.converged):
            skipped += 1
            continue
        kept.append(z)
        vals.append(math.exp(a.log_abs - b.log_abs))
    direction = Direction.INCREASING if beta1 < beta2 else Direction.DECREASING
    floor = 1.0 if family is Family.CLASSICAL else 0.0
    params = {"alpha": alpha, "beta1": beta1, "beta2": beta2, "gamma": p1.gamma, "q": p1.q,
              "family": family.value}
    return _report("beta_ratio", direction, kept, vals, tol_mono, skipped, params=params,
                   in_hypothesis=min(beta1, beta2) > floor)


def probe_normalized_successor_ratio(alpha, beta_grid, z, family=Family.CLASSICAL, gamma=1.0,
                                     q=1.0, cfg=DEFAULT_CONFIG, tol_mono=TOL_MONO):
    """beta -> E(beta+1)(z) / E(beta)(z) for the normalized function, fixed real z.

    Points where either normalized value is <= 1e-12 or a series fails to
    converge are skipped and counted.
    """
    family = Family(family)
    bs = _validate_grid(beta_grid, name="beta_grid")
    kept, vals, skipped = [], [], 0
    for b in bs:
        p = MLParams(alpha, b, gamma, q, family)
        lo, hi = eval_ml_normalized(p, z, cfg), eval_ml_normalized(p.with_beta(b + 1), z, cfg)
        ok = lo.converged and hi.converged and lo.sign > 0 and hi.sign > 0
        if not ok or min(lo.log_abs, hi.log_abs) <= math.log(GUARD_FLOOR):
            skipped += 1
            continue
        kept.append(b)
        vals.append(math.exp(hi.log_abs - lo.log_abs))
    params = {"alpha": alpha, "z": float(z), "gamma": gamma, "q": q, "family": family.value}
    return _report("successor_ratio", Direction.INCREASING, kept, vals, tol_mono, skipped,
                   params=params)


# ------------------------------------------------------------------ search


class Verdict(str, Enum):
    NONE_FOUND = "NoCounterexampleFound"
    CANDIDATE = "CounterexampleCandidate"


@dataclass(frozen=True)
class SearchRanges:
    alpha: tuple = (0.1, 5.0)
    beta: tuple = (0.1, 5.0)
    gamma: tuple = (0.1, 5.0)
    z: tuple = (1e-3, 10.0)
    q_set: tuple = (0.25, 0.5, 0.75, 1.0, 2.0, 3.0)
    n_set: tuple = (0, 1, 2)
    z_points: int = 24

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "z"):
            lo, hi = getattr(self, name)
            if not (0 < lo <= hi) or not math.isfinite(hi):
                raise DomainError(f"{name} range must satisfy 0 < min <= max", param=name)
        if not self.q_set or not self.n_set:
            raise DomainError("q_set and n_set must be non-empty", param="q_set")
        for q in self.q_set:
            MLParams.four(1.0 + q, 1.0, 1.0, q)  # validates q
        if any(int(n) != n or n < 0 for n in self.n_set):
            raise DomainError("n_set must hold integers >= 0", param="n_set")
        if self.z_points < 2:
            raise DomainError("z_points must be >= 2", param="z_points")


@dataclass(frozen=True)
class SearchResult:
    problem_id: str
    trials: int
    worst_residual: float
    worst_params: dict
    verdict: Verdict
    evaluated: int = 0
    skipped: int = 0
    seed: int = 0
    per_q: dict = field(default_factory=dict)
    ranges: dict = field(default_factory=dict)
    confirmed_residual: Optional[float] = None

    def to_dict(self):
        d = asdict(self)
        d["verdict"] = self.verdict.value
        return d


# trials per deterministic substream, independent of the worker count
_CHUNK = 250
_ALPHA_MARGIN = 0.05


def _log_uniform(rng, lo, hi):
    if lo == hi:
        return float(lo)
    return float(math.exp(rng.uniform(math.log(lo), math.log(hi))))


def _sample(rng, ranges):
    q = float(ranges.q_set[rng.integers(len(ranges.q_set))])
    n = int(ranges.n_set[rng.integers(len(ranges.n_set))])
    # the series is entire only for alpha > q - 1
    a_lo = max(ranges.alpha[0], q - 1.0 + _ALPHA_MARGIN) if q >= 2 else ranges.alpha[0]
    alpha = _log_uniform(rng, a_lo, ranges.alpha[1]) if a_lo <= ranges.alpha[1] else None
    beta = _log_uniform(rng, *ranges.beta)
    gamma = _log_uniform(rng, *ranges.gamma)
    z = _log_uniform(rng, *ranges.z)
    return alpha, beta, gamma, q, n, z


def _params(alpha, beta, gamma, q):
    return MLParams.four(alpha, beta, gamma, q)


def _problem1_trial(rng, ranges, cfg):
    alpha, beta, gamma, q, n, z = _sample(rng, ranges)
    if alpha is None:
        return None
    p = _params(alpha, beta, gamma, q)
    h = _tail_ratio(p, n, z, cfg, tail=eval_tail_any_q)
    if h is None:
        return None
    # (E^{n+1})^2 - E^n E^{n+2}, relative to (E^{n+1})^2
    return 1.0 - h, {"alpha": alpha, "beta": beta, "gamma": gamma, "q": q, "n": n, "z": z}


def _problem2_trial(rng, ranges, cfg, z_grid):
    alpha, beta, gamma, q, n, _ = _sample(rng, ranges)
    if alpha is None:
        return None
    p = _params(alpha, beta, gamma, q)
    zs, hs = [], []
    for z in z_grid:
        h = _tail_ratio(p, n, z, cfg, tail=eval_tail_any_q)
        if h is not None:
            zs.append(z)
            hs.append(h)
    if len(hs) < 2:
        return None
    worst, where = math.inf, None
    for i in range(len(hs) - 1):
        rise = (hs[i + 1] - hs[i]) / max(abs(hs[i]), abs(hs[i + 1]))
        if rise < worst:
            worst, where = rise, (zs[i], zs[i + 1])
    return worst, {"alpha": alpha, "beta": beta, "gamma": gamma, "q": q, "n": n,
                   "z": where[0], "z_next": where[1]}


def _mp_tail(alpha, beta, gamma, q, n, z, dps=50):
    with mpmath.workdps(dps + 10):
        a, b, g, qq, zz = (mpmath.mpf(v) for v in (alpha, beta, gamma, q, z))
        total = mpmath.mpf(0)
        k = n + 1
        prev = None
        while True:
            t = mpmath.rf(g, qq * k) * zz**k / (mpmath.factorial(k) * mpmath.gamma(a * k + b))
            total += t
            if prev is not None and t < prev and t < total * mpmath.mpf(10) ** (-dps - 5):
                break
            prev = t
            k += 1
            if k > 200_000:
                raise RuntimeError("high-precision tail did not converge")
        return total


def _mp_ratio(wp, z):
    t0, t1, t2 = (_mp_tail(wp["alpha"], wp["beta"], wp["gamma"], wp["q"], wp["n"] + j, z)
                  for j in range(3))
    with mpmath.workdps(60):
        return t0 * t2 / (t1 * t1)


def confirm_problem1(wp):
    """Relative residual 1 - h at 50 digits."""
    return float(1 - _mp_ratio(wp, wp["z"]))


def confirm_problem2(wp):
    """Relative rise of H between the two flagged grid points at 50 digits."""
    h0, h1 = _mp_ratio(wp, wp["z"]), _mp_ratio(wp, wp["z_next"])
    return float((h1 - h0) / max(abs(h0), abs(h1)))


def _workers():
    try:
        n = int(os.environ.get("MLLAB_THREADS", "0"))
    except ValueError:
        n = 0
    return n if n > 0 else (os.cpu_count() or 1)


def _run_chunks(trial, trials, seed):
    children = np.random.SeedSequence(seed).spawn((trials + _CHUNK - 1) // _CHUNK)

    def chunk(ci):
        rng = np.random.default_rng(children[ci])
        out = []
        for j in range(min(_CHUNK, trials - ci * _CHUNK)):
            out.append((ci * _CHUNK + j, trial(rng)))
        return out

    with ThreadPoolExecutor(max_workers=_workers()) as pool:
        return [item for part in pool.map(chunk, range(len(children))) for item in part]


def _search(problem_id, trial, confirm, trials, seed, ranges, tol, confirm_limit=5):
    if int(trials) != trials or trials < 1:
        raise DomainError("trials must be an integer >= 1", param="trials")
    results = _run_chunks(trial, int(trials), seed)
    scored = [(r[0], idx, r[1]) for idx, r in results if r is not None]
    skipped = len(results) - len(scored)
    per_q = {}
    for res, _, wp in scored:
        key = repr(wp["q"])
        slot = per_q.setdefault(key, {"evaluated": 0, "worst_residual": math.inf})
        slot["evaluated"] += 1
        slot["worst_residual"] = min(slot["worst_residual"], res)
    scored.sort(key=lambda item: (item[0], item[1]))
    verdict, confirmed = Verdict.NONE_FOUND, None
    if scored:
        worst_res, _, worst_params = scored[0]
        for res, _, wp in scored[:confirm_limit]:
            if res >= -10 * tol:
                break
            check = confirm(wp)
            if check < -10 * tol:
                verdict, confirmed = Verdict.CANDIDATE, check
                worst_res, worst_params = res, wp
                break
    else:
        worst_res, worst_params = math.nan, {}
    return SearchResult(problem_id, int(trials), worst_res, worst_params, verdict,
                        evaluated=len(scored), skipped=skipped, seed=int(seed),
                        per_q=dict(sorted(per_q.items())), ranges=asdict(ranges),
                        confirmed_residual=confirmed)


def search_problem1(trials=10_000, seed=42, ranges=SearchRanges(), cfg=DEFAULT_CONFIG,
                    tol=EPS_REL):
    """Random search for E^{n} E^{n+2} > (E^{n+1})^2 with general q (tails from k = n+1).

    The residual reported is ``1 - E^n E^{n+2} / (E^{n+1})^2``; negative values
    violate the conjectured inequality.
    """
    return _search("Problem1", lambda rng: _problem1_trial(rng, ranges, cfg), confirm_problem1,
                   trials, seed, ranges, tol)


def search_problem2(trials=2_000, seed=7, ranges=SearchRanges(), z_grid=None, cfg=DEFAULT_CONFIG,
                    tol=EPS_REL):
    """Random search for decreasing stretches of H^{gamma,q,n}(z) along a z grid.

    The residual is the most negative relative step ``(H_{i+1} - H_i) / max``;
    it is negative exactly when H fails to increase somewhere on the grid.
    """
    if z_grid is None:
        z_grid = np.geomspace(ranges.z[0], ranges.z[1], ranges.z_points)
    zs = _validate_grid(z_grid)
    return _search("Problem2", lambda rng: _problem2_trial(rng, ranges, cfg, zs), confirm_problem2,
                   trials, seed, ranges, tol)


# ------------------------------------------------------------------ sweeps

PROBES = {
    "hn": "classical tail ratio h_n, increasing in z, limit at 0+",
    "H": "Prabhakar tail ratio H, increasing in z, limit at 0+",
    "beta_ratio": "E(beta1)/E(beta2) monotone in z, both directions",
    "successor_ratio": "normalized E(beta+1)/E(beta) increasing in beta, fixed real z",
}


def probe_ids(spec):
    if isinstance(spec, str):
        spec = [s.strip() for s in spec.split(",") if s.strip()]
    if not spec or list(spec) == ["all"]:
        return list(PROBES)
    unknown = [s for s in spec if s not in PROBES]
    if unknown:
        raise DomainError(f"unknown probe id(s): {', '.join(unknown)}", param="probes")
    return list(spec)


def _collect(out, fn, *args, **kw):
    try:
        out.append(fn(*args, **kw))
    except DomainError:
        pass


def probe_sweep(ids, grid, cfg=DEFAULT_CONFIG, beta_pairs=None, tol_mono=TOL_MONO):
    """Run the requested probes over a GridSpec.

    Tail probes use the positive ``z`` axis as their grid. ``beta_ratio`` runs every
    ordered pair of distinct beta values (or ``beta_pairs``) for the classical
    family and for the four-parameter family over the gamma and q axes.
    ``successor_ratio`` uses the beta axis as its grid at every z, negative
    points included.
    """
    zs = tuple(z for z in grid.z if z > 0)
    ids = probe_ids(ids)
    # grid problems are user errors, unlike per-point domain exclusions
    if {"hn", "H"} & set(ids):
        _validate_grid(zs, min_points=8, min_decades=2.0)
    if "beta_ratio" in ids:
        _validate_grid(zs)
    if "successor_ratio" in ids:
        _validate_grid(grid.beta, name="beta_grid")
    out = []
    for pid in ids:
        if pid == "hn":
            for a, b, n in itertools.product(grid.alpha, grid.beta, grid.n):
                _collect(out, probe_hn, a, b, n, zs, cfg, tol_mono)
        elif pid == "H":
            for a, b, g, n in itertools.product(grid.alpha, grid.beta, grid.gamma, grid.n):
                _collect(out, probe_H_prabhakar, a, b, g, n, zs, cfg, tol_mono)
        elif pid == "beta_ratio":
            pairs = beta_pairs or [(b1, b2) for b1 in grid.beta for b2 in grid.axis("beta2")
                                   if b1 != b2]
            for a, (b1, b2) in itertools.product(grid.alpha, pairs):
                _collect(out, probe_beta_ratio, a, b1, b2, zs, Family.CLASSICAL, cfg=cfg,
                         tol_mono=tol_mono)
                for g, q in itertools.product(grid.gamma, grid.q):
                    _collect(out, probe_beta_ratio, a, b1, b2, zs, Family.FOUR_PARAMETER, g, q,
                             cfg=cfg, tol_mono=tol_mono)
        else:
            for a, z in itertools.product(grid.alpha, grid.axis("z", real_line=True)):
                _collect(out, probe_normalized_successor_ratio, a, grid.beta, z,
                         Family.CLASSICAL, cfg=cfg, tol_mono=tol_mono)
                for g, q in itertools.product(grid.gamma, grid.q):
                    _collect(out, probe_normalized_successor_ratio, a, grid.beta, z,
                             Family.FOUR_PARAMETER, g, q, cfg=cfg, tol_mono=tol_mono)
    return out
