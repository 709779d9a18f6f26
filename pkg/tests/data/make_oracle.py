"""Regenerate oracle_points.json: 500 seeded points summed with mpmath.

Each series is summed term by term in 50+ digit arithmetic with terms built
from mpmath.rf / factorial / gamma (no log-space code shared with the
library). Alternating sums get extra digits to cover the cancellation.

    python3 tests/data/make_oracle.py
"""

import json
import math
from pathlib import Path

import mpmath
import numpy as np

OUT = Path(__file__).with_name("oracle_points.json")
SEED = 20240611
N_POINTS = 500
MAX_TERMS = 200_000
DPS = 50


def sample(rng):
    fam = ["classical", "prabhakar", "fourparam"][rng.integers(3)]
    beta = float(rng.uniform(0.1, 5.0))
    gamma = float(rng.uniform(0.1, 5.0)) if fam != "classical" else 1.0
    q = float([0.5, 1.0, 2.0][rng.integers(3)]) if fam == "fourparam" else 1.0
    # the four-parameter series only converges for alpha > q - 1
    alpha = float(rng.uniform(max(0.1, q - 1.0), 5.0))
    while alpha <= q - 1.0:
        alpha = float(rng.uniform(max(0.1, q - 1.0), 5.0))
    if fam == "classical":
        z = float(rng.uniform(-10.0, 10.0))
    else:
        z = float(10.0 - rng.uniform(0.0, 10.0))  # (0, 10]
    return dict(family=fam, alpha=alpha, beta=beta, gamma=gamma, q=q, z=z)


def term(pt, k, z):
    a, b, g, q = (mpmath.mpf(pt[key]) for key in ("alpha", "beta", "gamma", "q"))
    c = 1 / mpmath.gamma(a * k + b)
    if pt["family"] != "classical":
        c *= mpmath.rf(g, q * k) / mpmath.factorial(k)
    return c * z**k


def peak_log10(pt):
    """Rough log10 of the largest term magnitude, for sizing the precision."""
    best, k = -math.inf, 0
    z = abs(pt["z"])
    while k < MAX_TERMS:
        lt = k * math.log(z) - math.lgamma(pt["alpha"] * k + pt["beta"])
        if pt["family"] != "classical":
            lt += (math.lgamma(pt["gamma"] + pt["q"] * k) - math.lgamma(pt["gamma"])
                   - math.lgamma(k + 1.0))
        best = max(best, lt)
        if lt < best - 300 and k > 10:
            return best / math.log(10), k
        k += 1
    return best / math.log(10), None


def oracle(pt):
    top, n_needed = peak_log10(pt)
    if n_needed is None:
        return None
    extra = max(0, int(top)) + 10 if pt["z"] < 0 else 0
    with mpmath.workdps(DPS + extra + 10):
        z = mpmath.mpf(pt["z"])
        s = mpmath.mpf(0)
        k = 0
        while True:
            t = term(pt, k, z)
            s += t
            k += 1
            if k > n_needed and abs(t) < abs(s) * mpmath.mpf(10) ** (-DPS - 5):
                break
        return mpmath.nstr(mpmath.log(abs(s)), 40), (1 if s > 0 else -1), k


def main():
    rng = np.random.default_rng(SEED)
    out = []
    for i in range(N_POINTS):
        pt = sample(rng)
        res = oracle(pt)
        if res is None:
            pt.update(log_abs=None, sign=None, terms=None)
        else:
            pt.update(log_abs=res[0], sign=res[1], terms=res[2])
        out.append(pt)
        if i % 50 == 49:
            print(f"{i + 1} points", flush=True)
    OUT.write_text(json.dumps({"seed": SEED, "dps": DPS, "points": out}, indent=1) + "\n")
    print(f"wrote {len(out)} points, {sum(p['log_abs'] is None for p in out)} infeasible")


if __name__ == "__main__":
    main()
