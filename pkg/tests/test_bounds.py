import math
from fractions import Fraction

import numpy as np
import pandas as pd
import pytest

from hullcode.bounds import (
    AsymptoticParams,
    DomainError,
    HypothesisViolatedError,
    entropy,
    epsilon,
    epsilon0,
    epsilon0_table,
    gv_condition,
    rate_feasible,
    rational_string,
    simplified_condition,
    step_probabilities,
    success_probability_lower_bound,
    theta,
)
from hullcode.valid import InvalidParamsError

FIELD_SIZES = [2, 3, 4, 5, 7, 8, 9]


def _grid(max_m=20, qs=FIELD_SIZES):
    for q in qs:
        for m in range(1, max_m + 1):
            for k in range(1, m + 1):
                for d in range(1, m + 1):
                    yield q, m, k, d


@pytest.mark.parametrize(
    "q,m,k,d,lhs,rhs,holds",
    [
        (2, 10, 2, 2, 12, Fraction(256), True),
        (2, 4, 2, 3, 12, Fraction(4), False),
        (2, 4, 4, 1, 2, Fraction(1, 4), False),
    ],
)
def test_gv_condition_examples(q, m, k, d, lhs, rhs, holds):
    """Exact sides of the existence condition"""
    report = gv_condition(q, m, k, d)
    assert report.lhs == lhs
    assert report.rhs == rhs
    assert report.holds is holds


def test_gv_condition_large_integers():
    """Values beyond 128 bits are compared exactly"""
    report = gv_condition(9, 64, 2, 20)
    assert report.rhs == 9**62
    assert report.rhs > 2**128
    assert report.holds is (report.lhs < 9**62)


def test_gv_condition_invalid():
    """Invalid parameters are rejected"""
    with pytest.raises(InvalidParamsError) as excinfo:
        gv_condition(6, 10, 2, 2)
    assert "q=6 is not a prime power" in str(excinfo.value)
    with pytest.raises(InvalidParamsError):
        gv_condition(2, 4, 5, 2)


def test_simplified_condition_example():
    """Closed form at q=2, m=10, k=2, d=2"""
    report = simplified_condition(2, 10, 2, 2)
    assert (report.lhs, report.rhs, report.holds) == (30, 64, True)
    assert report.condition == "simplified"


def test_simplified_condition_hypothesis():
    """The closed form needs d - 1 <= m / 2"""
    with pytest.raises(HypothesisViolatedError) as excinfo:
        simplified_condition(2, 4, 1, 4)
    assert "d - 1 <= m / 2" in str(excinfo.value)


def test_simplified_condition_intermediate():
    """The intermediate form evaluates (d+1) (q-1)^d C(m, d-1)"""
    report = simplified_condition(3, 10, 2, 2, intermediate=True)
    assert report.lhs == 3 * 2**2 * 10
    assert report.rhs == 3**8
    assert report.condition == "intermediate"


@pytest.mark.slow
def test_simplified_implies_gv():
    """Both closed forms imply the existence condition on the full grid"""
    for q, m, k, d in _grid():
        if 2 * (d - 1) > m:
            continue
        holds = gv_condition(q, m, k, d).holds
        assert holds or not simplified_condition(q, m, k, d).holds, (q, m, k, d)
        intermediate = simplified_condition(q, m, k, d, intermediate=True)
        assert holds or not intermediate.holds, (q, m, k, d)


@pytest.mark.slow
def test_last_step_factor_positive_iff_gv():
    """eps_k > 0 exactly when the existence condition holds"""
    for q, m, k, d in _grid():
        assert (epsilon(q, m, d, k) > 0) is gv_condition(q, m, k, d).holds


def test_gv_condition_monotone():
    """Larger d or k keep failure"""
    for q, m, k, d in _grid(max_m=12):
        if gv_condition(q, m, k, d).holds:
            continue
        if d < m:
            assert not gv_condition(q, m, k, d + 1).holds
        if k < m:
            assert not gv_condition(q, m, k + 1, d).holds


def test_gv_condition_not_monotone_in_q():
    """A larger field can lose the condition: q=2 holds, q=3 does not"""
    binary = gv_condition(2, 5, 1, 4)
    ternary = gv_condition(3, 5, 1, 4)
    assert (binary.lhs, binary.rhs, binary.holds) == (27, 32, True)
    assert (ternary.lhs, ternary.rhs, ternary.holds) == (263, 243, False)


@pytest.mark.parametrize("q,m,d,expected", [(2, 1, 1, 1), (2, 10, 1, 1), (2, 20, 1, 1)])
def test_theta_d1(q, m, d, expected):
    """A single term remains for d=1"""
    assert theta(q, m, d) == expected


@pytest.mark.parametrize("q,m,d,expected", [(2, 10, 2, 11), (3, 4, 2, 18)])
def test_theta_examples(q, m, d, expected):
    """theta = (q-1) sum (q-1)^j C(m, j)"""
    assert theta(q, m, d) == expected


def test_epsilon_invalid_step():
    """Steps start at 1"""
    with pytest.raises(InvalidParamsError) as excinfo:
        epsilon(2, 10, 2, 0)
    assert "i=0" in str(excinfo.value)


def test_success_probability_example():
    """Lower bound at q=2, m=10, k=2, d=2 as an exact rational"""
    expected = (1 - Fraction(12, 2**8)) * (1 - Fraction(11, 2**10)) * Fraction(1, 2)
    assert success_probability_lower_bound(2, 10, 2, 2) == expected
    assert expected == Fraction(61793, 131072)


@pytest.mark.parametrize("q,m,d", [(2, 10, 2), (3, 6, 3), (7, 5, 1)])
def test_success_probability_single_vector(q, m, d):
    """For k=1 the bound is 1 - theta / q^m"""
    expected = 1 - Fraction(theta(q, m, d), q**m)
    assert success_probability_lower_bound(q, m, 1, d) == expected


def test_success_probability_range():
    """The bound is a probability and vanishes when a factor is negative"""
    for q, m, k, d in _grid(max_m=10, qs=[2, 3, 4]):
        bound = success_probability_lower_bound(q, m, k, d)
        assert 0 <= bound <= 1
        factors = [epsilon(q, m, d, i) for i in range(2, k + 1)]
        if any(factor < 0 for factor in factors):
            assert bound == 0
    assert success_probability_lower_bound(2, 4, 4, 1) == 0


def test_step_probabilities():
    """Per-step probabilities at q=2, m=10, k=2, d=2"""
    steps = step_probabilities(2, 10, 2, 2)
    assert list(steps["step"]) == [1, 2]
    assert list(steps["p_orthogonal"]) == [1, Fraction(1, 2)]
    assert steps.loc[0, "p_distance_lower"] == 1 - Fraction(11, 2**10)
    assert steps.loc[1, "p_step_lower"] == Fraction(1, 2) - Fraction(12, 2**9)
    assert steps.loc[1, "epsilon"] == Fraction(61, 64)
    assert np.isnan(steps.loc[0, "epsilon_float"])
    assert steps.loc[1, "p_basis_float"] == pytest.approx(1 - 2**-9)


@pytest.mark.parametrize(
    "delta,expected",
    [(Fraction(1, 2), 1.0), (0, 0.0), (1, 0.0), (Fraction(1, 4), 0.811278124459)],
)
def test_entropy_examples(delta, expected):
    """Entropy at the endpoints, the maximum and 1/4"""
    assert entropy(delta) == pytest.approx(expected, abs=1e-9)


def test_entropy_half_exact():
    """H(1/2) is 1 to 1e-12"""
    assert abs(entropy(0.5) - 1) < 1e-12


@pytest.mark.parametrize("delta", [-0.1, 1.5, "abc"])
def test_entropy_domain(delta):
    """Arguments outside [0, 1] are rejected"""
    with pytest.raises(DomainError):
        entropy(delta)


def test_entropy_symmetric_concave():
    """H(d) = H(1-d) and midpoint concavity on a grid"""
    grid = [Fraction(i, 100) for i in range(101)]
    values = [entropy(delta) for delta in grid]
    for delta, value in zip(grid, values):
        assert abs(value - entropy(1 - delta)) < 1e-12
    for left, middle, right in zip(values, values[1:], values[2:]):
        assert middle >= (left + right) / 2 - 1e-12


def test_epsilon0_binary():
    """Over GF(2) the threshold is (1 - delta - H(delta)) / 2 on 99 points"""
    for i in range(1, 100):
        delta = Fraction(i, 200)
        expected = (1 - float(delta) - entropy(delta)) / 2
        assert abs(epsilon0(delta, 2) - expected) < 1e-12


def test_epsilon0_examples():
    """Threshold at delta=0.11 and towards delta=0"""
    assert epsilon0(0.11, 2) == pytest.approx(0.19504, abs=1e-4)
    assert epsilon0(Fraction(1, 10**9), 4) == pytest.approx(0.5, abs=1e-6)
    assert epsilon0(0.11, 16) > epsilon0(0.11, 2)


@pytest.mark.parametrize("delta,q", [(0.5, 2), (0, 2), (0.7, 3), (0.1, 1)])
def test_epsilon0_domain(delta, q):
    """delta should lie strictly inside (0, 1/2) and q >= 2"""
    with pytest.raises(DomainError):
        epsilon0(delta, q)


def test_asymptotic_params():
    """Rates from code parameters and the strict threshold comparison"""
    params = AsymptoticParams.from_code(m=100, k=10, t=5, d=11)
    assert params.delta == Fraction(11, 100)
    assert rate_feasible(params, 2)
    assert not rate_feasible(AsymptoticParams.from_code(100, 30, 5, 11), 2)
    with pytest.raises(DomainError) as excinfo:
        AsymptoticParams(delta=0.1, gamma=0.3, epsilon=0.2)
    assert "gamma < epsilon" in str(excinfo.value)
    with pytest.raises(DomainError):
        AsymptoticParams(delta=Fraction(1, 2), gamma=0.1, epsilon=0.2)


def test_epsilon0_table():
    """One row per delta and one column per q"""
    table = epsilon0_table([0.05, 0.11, 0.2], [2, 3, 4])
    assert isinstance(table, pd.DataFrame)
    assert table.shape == (3, 3)
    assert table.index.name == "delta"
    assert table.columns.name == "q"
    assert table.loc[0.11, 2] == epsilon0(0.11, 2)


def test_bound_report_to_dict():
    """Big integers and rationals are written as strings"""
    report = gv_condition(2, 10, 2, 2).to_dict()
    assert report["lhs"] == "12"
    assert report["rhs"] == "256"
    assert report["holds"] is True
    assert report["theta"] == "11"
    assert report["epsilons"] == ["61/64"]
    assert report["p_lower"] == "61793/131072"
    assert gv_condition(2, 4, 4, 1).to_dict()["rhs"] == "1/4"


@pytest.mark.parametrize(
    "value,expected", [(Fraction(3, 6), "1/2"), (5, "5"), (Fraction(-7, 3), "-7/3")]
)
def test_rational_string(value, expected):
    """Reduced num/den strings"""
    assert rational_string(value) == expected


def test_binomial_growth_matches_entropy():
    """log2 C(m, delta m) / m approaches H(delta)"""
    m = 4000
    assert math.log2(math.comb(m, m // 4)) / m == pytest.approx(
        entropy(Fraction(1, 4)), abs=5e-3
    )
