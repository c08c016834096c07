from fractions import Fraction as F

import numpy as np
import pytest

from ratdensity.errors import NotPrimitive, NotStochastic, SingularSystem
from ratdensity.numeric import (ApproxReal, cesaro_projector, format_scalar, is_primitive,
                                matmul, parse_scalar, perron_vector, recurrent_classes,
                                solve_linear, stationary_distribution)


def test_parse_and_format():
    assert parse_scalar("1/3") == F(1, 3)
    assert parse_scalar("0.25") == F(1, 4)
    assert parse_scalar("1/4", exact=False) == 0.25
    assert format_scalar(F(2, 9)) == "2/9"
    assert format_scalar(0.5, 1e-3).startswith("0.5±")


def test_approx_real_tracks_error():
    x = ApproxReal(1.0, 1e-3) * ApproxReal(2.0, 1e-3)
    assert x.contains(2.0)
    assert x.error >= 3e-3
    assert (ApproxReal(1.0) / 3).contains(1 / 3)
    with pytest.raises(ZeroDivisionError):
        ApproxReal(1.0) / ApproxReal(0.0, 0.1)


def test_solve_linear_exact():
    A = [[F(2), F(1)], [F(1), F(3)]]
    x = solve_linear(A, [F(3), F(5)])
    assert x == [F(4, 5), F(7, 5)]
    with pytest.raises(SingularSystem):
        solve_linear([[F(1), F(2)], [F(2), F(4)]], [F(1), F(1)])


def test_stationary_two_state():
    # closed form (b, a)/(a + b) for [[1-a, a], [b, 1-b]]
    a, b = F(1, 3), F(1, 5)
    pi = stationary_distribution([[1 - a, a], [b, 1 - b]])
    assert pi == [b / (a + b), a / (a + b)]


def test_cesaro_periodic_chain():
    P = [[F(0), F(1)], [F(1), F(0)]]
    assert cesaro_projector(P) == [[F(1, 2)] * 2] * 2


def test_cesaro_with_transients_matches_powers():
    P = [[F(1, 2), F(1, 4), F(1, 4)], [F(0), F(1), F(0)], [F(0), F(0), F(1)]]
    Pi = cesaro_projector(P)
    assert Pi[0] == [F(0), F(1, 2), F(1, 2)]
    # Π P = Π and row sums 1
    assert matmul(Pi, P) == Pi
    assert all(sum(r) == 1 for r in Pi)
    closed, transient = recurrent_classes(P)
    assert closed == [[1], [2]] and transient == [0]


def test_cesaro_float_matches_numeric_average():
    rng = np.random.default_rng(1)
    P = rng.random((5, 5))
    P[:, 2] = 0
    P /= P.sum(axis=1, keepdims=True)
    Pi = np.array(cesaro_projector(P.tolist()))
    avg = np.zeros_like(P)
    Q = np.eye(5)
    for _ in range(4000):
        avg += Q
        Q = Q @ P
    assert np.allclose(Pi, avg / 4000, atol=1e-3)


def test_not_stochastic():
    with pytest.raises(NotStochastic):
        cesaro_projector([[F(1, 2), F(1, 3)], [F(0), F(1)]])


def test_perron_exact_and_approx():
    theta, v = perron_vector([[F(1), F(1)], [F(1), F(0)]], exact=True)
    # golden ratio is irrational: the approximate path must be taken
    assert isinstance(theta, ApproxReal)
    assert theta.contains((1 + 5 ** 0.5) / 2)
    assert abs(sum(float(x) for x in v) - 1) < 1e-12
    theta, v = perron_vector([[F(1), F(1)], [F(1), F(1)]])
    assert theta == 2 and v == [F(1, 2), F(1, 2)]


def test_primitivity():
    assert is_primitive([[1, 1], [1, 0]])
    assert not is_primitive([[0, 1], [1, 0]])
    with pytest.raises(NotPrimitive):
        perron_vector([[0, 1], [1, 0]])
