import math

import numpy as np
import pytest

from mllab.errors import DomainError
from mllab.gamma import (GAMMA_MIN_X, digamma, gamma_value, log_gamma, log_gamma_ratio,
                         log_pochhammer, pochhammer)

# reference values from mpmath at 30 digits
LOG_GAMMA_REF = [
    (1.0, 0.0),
    (5.0, math.log(24.0)),
    (1.461632144, -0.121486290535849607641809026961),
    (0.01, 4.59947987804202172251394541101),
    (123.456, 469.605547129929468730069192331),
    (1e5, 1051287.70897365689490085801825),
]

DIGAMMA_REF = [
    (1.0, -0.577215664901532860606512090082),
    (2.0, 1.0 - 0.577215664901532860606512090082),
    (0.1, -10.423754940411076795168216219),
    (50.5, 3.91203967092839198460878722535),
]


@pytest.mark.parametrize("x,ref", LOG_GAMMA_REF)
def test_log_gamma_reference(x, ref):
    assert abs(log_gamma(x) - ref) <= 1e-13 * max(1.0, abs(ref))


@pytest.mark.parametrize("x,ref", DIGAMMA_REF)
def test_digamma_reference(x, ref):
    assert abs(digamma(x) - ref) <= 1e-11 * max(1.0, abs(ref))


def test_digamma_vanishes_at_gamma_minimum():
    assert abs(digamma(1.461632144)) < 1e-8
    assert abs(digamma(GAMMA_MIN_X)) < 1e-14


def test_digamma_recurrence():
    for x in np.linspace(0.05, 30, 57):
        assert digamma(x + 1) - digamma(x) == pytest.approx(1 / x, rel=1e-11, abs=1e-12)


@pytest.mark.parametrize("bad", [0.0, -1.0, -0.5, math.inf, math.nan])
def test_log_gamma_rejects(bad):
    with pytest.raises(DomainError):
        log_gamma(bad)


def test_digamma_rejects_nonpositive():
    with pytest.raises(DomainError):
        digamma(0.0)


def test_gamma_value_sign_and_overflow():
    g = gamma_value(5.0)
    assert g.sign == 1 and g.value == pytest.approx(24.0, rel=1e-14)
    big = gamma_value(200.0)
    assert big.log_abs == pytest.approx(math.lgamma(200.0), rel=1e-15)
    with pytest.raises(OverflowError):
        big.value


def test_log_gamma_monotone_either_side_of_minimum():
    left = [log_gamma(x) for x in np.linspace(0.05, GAMMA_MIN_X, 200)]
    right = [log_gamma(x) for x in np.linspace(GAMMA_MIN_X, 50, 200)]
    assert all(b < a for a, b in zip(left, left[1:]))
    assert all(b > a for a, b in zip(right, right[1:]))


def test_pochhammer_examples():
    assert pochhammer(3.7, 0) == 1.0
    assert pochhammer(2.0, 3) == 24.0
    assert pochhammer(0.5, 1.5) == pytest.approx(0.564189583547756286948, rel=1e-12)
    assert pochhammer(0.3, 7.7) == pytest.approx(1684.73467292352039204524, rel=1e-12)


def test_pochhammer_log_form_past_overflow():
    assert log_pochhammer(2.5, 300.25) == pytest.approx(1424.61078725767735972868959606,
                                                        rel=1e-13)
    with pytest.raises(OverflowError):
        pochhammer(2.5, 300.25)


def test_pochhammer_rejects():
    with pytest.raises(DomainError):
        pochhammer(0.0, 1.0)
    with pytest.raises(DomainError):
        pochhammer(1.0, -0.5)


def test_log_gamma_ratio():
    assert log_gamma_ratio(3.0, 2.0) == pytest.approx(math.log(12.0), rel=1e-14)
    with pytest.raises(DomainError):
        log_gamma_ratio(1.0, -2.0)
