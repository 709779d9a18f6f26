from dataclasses import replace
import math

import numpy as np
import pytest

from mllab.errors import DomainError
from mllab.grid import preset
from mllab.probe import (Direction, SearchRanges, Verdict, probe_beta_ratio, probe_H_prabhakar,
                         probe_hn, probe_normalized_successor_ratio, probe_sweep,
                         search_problem1, search_problem2)
from mllab.series import Family

ZS = tuple(np.geomspace(1e-6, 50.0, 25))


def test_hn_limit_and_monotone():
    r = probe_hn(1.0, 1.0, 0, ZS)
    assert r.direction is Direction.INCREASING
    assert r.passed and r.ok
    assert r.limit_reference == pytest.approx(2 / 3, rel=1e-14)
    assert r.limit_error < 1e-6


def test_H_at_gamma_one_matches_hn():
    h, H = probe_hn(1.0, 1.5, 1, ZS), probe_H_prabhakar(1.0, 1.5, 1.0, 1, ZS)
    assert H.passed
    for (_, a), (_, b) in zip(h.sample_points, H.sample_points):
        assert a == pytest.approx(b, rel=1e-12)
    # the measured limit is the classical one, 2/3 at (1, 1, 0), not the stated 1/2
    H0 = probe_H_prabhakar(1.0, 1.0, 1.0, 0, ZS)
    assert H0.limit_reference == pytest.approx(0.5, rel=1e-14)
    assert H0.limit_at_zero == pytest.approx(2 / 3, abs=1e-6)
    assert H0.limit_series == pytest.approx(H0.limit_at_zero, abs=1e-6)
    assert not H0.ok


def test_H_not_monotone_below_gamma_one():
    r = probe_H_prabhakar(0.25, 5.0, 0.5, 0, ZS)
    assert not r.passed and r.max_violation > 1e-3


@pytest.mark.parametrize("grid", [(1.0,), (1.0, 1.0, 1.0), (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8),
                                  (1.0, math.nan, 2.0), (2.0, 1.0, 3.0)])
def test_degenerate_z_grid_rejected(grid):
    with pytest.raises(DomainError) as exc:
        probe_hn(1.0, 1.0, 0, grid)
    assert exc.value.param == "z_grid"


def test_beta_ratio_directions():
    up = probe_beta_ratio(1.0, 1.5, 3.0, ZS)
    down = probe_beta_ratio(1.0, 3.0, 1.5, ZS)
    assert up.direction is Direction.INCREASING and up.passed
    assert down.direction is Direction.DECREASING and down.passed
    g = probe_beta_ratio(1.5, 2.0, 4.0, ZS, Family.FOUR_PARAMETER, 2.0, 2.0)
    assert g.passed and g.in_hypothesis
    assert not probe_beta_ratio(1.0, 0.5, 2.0, ZS).in_hypothesis
    with pytest.raises(DomainError):
        probe_beta_ratio(1.0, 2.0, 2.0, ZS)


def test_successor_ratio():
    betas = preset("standard").beta
    assert probe_normalized_successor_ratio(1.0, betas, 2.0).passed
    assert probe_normalized_successor_ratio(0.8, betas, 1.0, Family.FOUR_PARAMETER, 2.0, 1.0).passed
    # on the negative axis the ratio decreases in beta
    neg = probe_normalized_successor_ratio(1.0, betas, -0.5)
    assert not neg.passed


@pytest.mark.parametrize("args", [(0.5, 1.5, 0), (2.0, 0.5, 2), (3.0, 5.0, 1)])
def test_refinement_invariance(args):
    coarse = probe_hn(*args, ZS)
    fine = probe_hn(*args, tuple(np.geomspace(1e-6, 50.0, 250)))
    assert coarse.passed == fine.passed
    assert coarse.limit_at_zero == fine.limit_at_zero


def test_sweep_counts_on_smoke():
    reps = probe_sweep(["hn", "beta_ratio"], replace(preset("smoke"), z=ZS[::3]))
    hn = [r for r in reps if r.function_id == "hn"]
    assert len(hn) == 27
    assert all(r.passed for r in reps if r.in_hypothesis)


def test_search_is_deterministic():
    a = search_problem1(300, seed=5)
    b = search_problem1(300, seed=5)
    assert a.to_dict() == b.to_dict()
    assert search_problem1(300, seed=6).worst_params != a.worst_params


def test_problem1_clean_for_gamma_at_least_one():
    r = search_problem1(1000, seed=42, ranges=SearchRanges(gamma=(1.0, 5.0), q_set=(1.0,)))
    assert r.verdict is Verdict.NONE_FOUND
    assert r.worst_residual >= -1e-9


def test_problem1_finds_gamma_below_one():
    r = search_problem1(1000, seed=42, ranges=SearchRanges(q_set=(1.0,)))
    assert r.verdict is Verdict.CANDIDATE
    assert r.worst_params["gamma"] < 1.0
    assert r.confirmed_residual < 0


def test_problem2_runs():
    r = search_problem2(100, seed=7, ranges=SearchRanges(gamma=(1.0, 5.0), q_set=(1.0,)))
    assert r.verdict is Verdict.NONE_FOUND
    assert r.evaluated + r.skipped == 100


def test_search_ranges_validated():
    with pytest.raises(DomainError):
        SearchRanges(alpha=(0.0, 1.0))
    with pytest.raises(DomainError):
        SearchRanges(n_set=(0.5,))
    with pytest.raises(DomainError):
        search_problem1(0)
