"""Sweeps shared by the unit tests and the acceptance suite."""

import math

import numpy as np

from mllab.errors import DomainError
from mllab.grid import preset
from mllab.identities import (derivative_generalized, recurrence_shift, recurrence_shift_rhs,
                              shifted_identity_rhs, step_down_recurrence)
from mllab.series import DEFAULT_CONFIG, MLParams, eval_ml, eval_tail, partial_sum

STANDARD = preset("standard")


def tail_partition_worst(grid=STANDARD, cfg=DEFAULT_CONFIG):
    """Largest |tail + partial - E| as a multiple of its allowance (<= 1 passes)."""
    worst = 0.0
    for a in grid.alpha:
        for b in grid.beta:
            for p in [MLParams.classical(a, b)] + [MLParams.prabhakar(a, b, g) for g in grid.gamma]:
                for z in grid.z:
                    e = eval_ml(p, z, cfg)
                    if not e.converged:
                        continue
                    for n in grid.n:
                        t = eval_tail(p, n, z, cfg)
                        if not t.converged:
                            continue
                        gap = abs(t.value + partial_sum(p, n, z) - e.value)
                        allow = 8 * max(cfg.abs_tol, cfg.rel_tol * abs(e.value))
                        worst = max(worst, gap / allow)
    return worst


def recurrence_worst(grid=STANDARD, ns=(1, 2, 3)):
    """Largest relative residual of z^n E_{b+na} = E_b - partial_{n-1}."""
    worst = 0.0
    for a in grid.alpha:
        for b in grid.beta:
            p = MLParams.classical(a, b)
            for z in grid.z:
                e = eval_ml(p, z)
                if not e.converged:
                    continue
                for n in ns:
                    if not eval_ml(p.with_beta(b + n * a), z).converged:
                        continue
                    res = recurrence_shift(p, n, z) - recurrence_shift_rhs(p, n, z)
                    worst = max(worst, abs(res) / abs(e.value))
    return worst


def step_down_worst(grid=STANDARD, zs=None):
    """Largest relative residual of z E_{a,a+b} + 1/Gamma(b) = E_{a,b}, z in [-10, 50]."""
    zs = tuple(grid.z) + tuple(np.linspace(-10.0, -0.1, 12)) if zs is None else zs
    worst = 0.0
    for a in grid.alpha:
        for b in grid.beta:
            p = MLParams.classical(a, b)
            for z in zs:
                e, up = eval_ml(p, z), eval_ml(p.with_beta(a + b), z)
                if not (e.converged and up.converged):
                    continue
                scale = max(abs(e.value), abs(z * up.value), 1 / math.gamma(b))
                worst = max(worst, abs(step_down_recurrence(p, z) - e.value) / scale)
    return worst


def derivative_worst(grid=STANDARD, zs=tuple(np.geomspace(0.01, 20.0, 15)),
                     betas=(1.5, 2.5, 5.0, 6.0)):
    """Largest disagreement of the two derivative forms with the central difference,
    relative to max(1, |value|); classical and four-parameter families."""
    worst = {"formula": 0.0, "second_form": 0.0}
    for a in grid.alpha:
        for b in betas:
            fams = [MLParams.classical(a, b)]
            fams += [MLParams.four(a, b, g, q) for g in grid.gamma for q in grid.q if a > q - 1]
            for p in fams:
                for z in zs:
                    try:
                        f = derivative_generalized(p, z).value
                        c = derivative_generalized(p, z, "central").value
                        e = eval_ml(p, z).value
                        s = shifted_identity_rhs(p, z)
                    except DomainError:
                        continue
                    worst["formula"] = max(worst["formula"], abs(f - c) / max(1.0, abs(f)))
                    worst["second_form"] = max(worst["second_form"],
                                               abs(s - e) / max(1.0, abs(e)))
    return worst
