import math

import pytest

from helpers import derivative_worst, recurrence_worst, step_down_worst, tail_partition_worst
from mllab.errors import DomainError
from mllab.identities import (DerivativeMethod, derivative_classical, derivative_generalized,
                              recurrence_residual, recurrence_shift, recurrence_shift_rhs,
                              shifted_identity_rhs, step_down_recurrence)
from mllab.series import MLParams, eval_ml

C = MLParams.classical


def test_recurrence_examples():
    assert recurrence_shift(C(1, 1), 1, 1.0) == pytest.approx(math.e - 1, rel=1e-15)
    assert recurrence_shift_rhs(C(1, 1), 1, 1.0) == pytest.approx(math.e - 1, rel=1e-15)
    assert recurrence_shift(C(1, 1), 2, 1.0) == pytest.approx(math.e - 2, rel=1e-14)
    assert abs(recurrence_shift(C(0.7, 1.3), 1, 1e-9)) < 1e-8


def test_recurrence_residual_small():
    assert abs(recurrence_residual(C(0.5, 2.0), 3, 4.0)) < 1e-11 * eval_ml(C(0.5, 2.0), 4.0).value


def test_recurrence_domain():
    with pytest.raises(DomainError):
        recurrence_shift(C(1, 1), 0, 1.0)
    with pytest.raises(DomainError):
        recurrence_shift(C(1, 1), 1, -1.0)
    with pytest.raises(DomainError):
        recurrence_shift(MLParams.prabhakar(1, 1, 2), 1, 1.0)


def test_step_down_examples():
    assert step_down_recurrence(C(1, 1), 1.0) == pytest.approx(math.e, rel=1e-15)
    assert step_down_recurrence(C(2, 1), 1.0) == pytest.approx(math.cosh(1.0), rel=1e-15)
    assert step_down_recurrence(C(1, 2.5), 1e-12) == pytest.approx(1 / math.gamma(2.5), rel=1e-11)
    with pytest.raises(DomainError):
        step_down_recurrence(C(1, 1), 0.0)


def test_derivative_examples():
    assert derivative_classical(C(1, 2), 1.0).value == pytest.approx(1.0, rel=1e-14)
    assert derivative_classical(C(1, 3), 1.0).value == pytest.approx(3 - math.e, rel=1e-13)
    d = derivative_classical(C(1, 3), 1.0, DerivativeMethod.CENTRAL_DIFFERENCE)
    assert d.method is DerivativeMethod.CENTRAL_DIFFERENCE
    assert d.value == pytest.approx(3 - math.e, rel=1e-9)


def test_derivative_near_zero():
    a = 0.8
    assert derivative_classical(C(a, 2), 1e-7).value == pytest.approx(1 / math.gamma(a + 2),
                                                                      rel=1e-5)
    p = MLParams.four(1.0, 2.0, 1.0, 1.0)
    f = derivative_generalized(p, 1e-10).value
    c = derivative_generalized(p, 1e-10, "central").value
    assert abs(f - c) <= 1e-4 * abs(c)


def test_derivative_formula_needs_beta_above_one():
    with pytest.raises(DomainError) as exc:
        derivative_classical(C(1, 1), 1.0)
    assert exc.value.param == "beta"
    assert derivative_classical(C(1, 1), 1.0, "central").value == pytest.approx(math.e, rel=1e-9)


def test_generalized_reduces_to_classical():
    p = MLParams.four(1.0, 2.0, 1.0, 1.0)
    assert derivative_generalized(p, 1.0).value == pytest.approx(1.0, rel=1e-14)


def test_second_form():
    assert shifted_identity_rhs(C(1, 1), 1.0) == pytest.approx(math.e, rel=1e-9)
    p = MLParams.four(2.0, 1.5, 0.5, 2.0)
    assert shifted_identity_rhs(p, 3.0) == pytest.approx(eval_ml(p, 3.0).value, rel=1e-9)


def test_tail_partition_standard_grid():
    assert tail_partition_worst() <= 1.0


def test_recurrence_standard_grid():
    assert recurrence_worst() <= 1e-11


def test_step_down_standard_grid():
    assert step_down_worst() <= 1e-12


def test_derivatives_standard_grid():
    w = derivative_worst()
    assert w["formula"] <= 1e-6 and w["second_form"] <= 1e-6
