from fractions import Fraction
from math import comb, factorial

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from qsat12 import oracles
from qsat12.counting import (
    FALLING_FACTORIAL_CONVENTION,
    as_fraction,
    bicycle_union_bound,
    binomial_bounds_check,
    count_bicycles,
    count_snakes,
    d_pure_sequences,
    expected_bicycles_exact,
    expected_snakes,
    expected_snakes_exact,
    falling_factorial,
    g_coefficient,
    monte_carlo_snake_count,
    stirling2,
)
from qsat12.errors import BadLength, IndexTooLarge, KOutOfRange, ProbabilityOutOfRange


def test_stirling_small_values():
    assert stirling2(0, 0) == 1
    assert stirling2(4, 2) == 7
    assert stirling2(5, 3) == 25
    assert stirling2(3, 5) == 0
    assert stirling2(6, 0) == 0


@pytest.mark.parametrize("a", range(0, 10))
def test_stirling_against_set_partitions(a):
    for b in range(0, a + 1):
        assert stirling2(a, b) == oracles.stirling2_bruteforce(a, b)


def test_stirling_rows_sum_to_bell():
    for a in range(0, 16):
        row = sum(stirling2(a, b) for b in range(a + 1))
        assert row == oracles.bell_triangle(a) == int(sympy.bell(a))
        if a <= 9:
            assert row == oracles.bell_bruteforce(a)


def test_stirling_against_sympy_large():
    from sympy.functions.combinatorial.numbers import stirling

    for a, b in [(30, 7), (60, 20), (200, 3), (200, 150)]:
        assert stirling2(a, b) == int(stirling(a, b, kind=2))


def test_falling_factorial_conventions():
    assert FALLING_FACTORIAL_CONVENTION == "standard"
    assert falling_factorial(5, 3) == 60
    assert falling_factorial(5, 0) == 1
    assert falling_factorial(2, 3) == 0
    assert falling_factorial(5, 3, "paper") == 12
    with pytest.raises(ValueError):
        falling_factorial(5, 3, "other")


@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("s1", range(1, 7))
def test_d_matches_bruteforce(m, s1):
    assert d_pure_sequences(m, s1) == oracles.count_pure_sequences_bruteforce(m, s1)


def test_d_closed_form_single_variable():
    # one variable: pick a sign, repeat it
    assert all(d_pure_sequences(1, s1) == 2 for s1 in range(1, 10))
    # s1 = 1: any of the 2m literals
    assert all(d_pure_sequences(m, 1) == 2 * m for m in range(1, 10))


def test_snake_count_pins_convention():
    tuples, sets = oracles.snake_structures(3, 1, 3)
    assert tuples == count_snakes(3, 1, 3) == 96
    assert count_snakes(3, 1, 3, "paper") == 32
    # the counts are of structures; each clause set arises from exactly 8
    assert sets * 8 == tuples
    for n, m, s in [(4, 2, 3), (5, 3, 3), (5, 1, 5)]:
        t, k = oracles.snake_structures(n, m, s)
        assert 8 * k == t


@pytest.mark.parametrize("n", range(1, 6))
@pytest.mark.parametrize("m", range(1, 4))
def test_counts_match_enumeration(n, m):
    assert count_snakes(n, m, 3) == oracles.snake_structures(n, m, 3)[0]
    for s in (2, 3):
        assert count_bicycles(n, m, s) == oracles.bicycle_structure_count(n, m, s)


def test_bicycle_joint_enumeration_small():
    for n, m, s in [(3, 1, 2), (3, 2, 2), (4, 2, 3), (3, 3, 3)]:
        tuples, _ = oracles.bicycle_structures(n, m, s)
        assert tuples == count_bicycles(n, m, s)


def test_bad_lengths():
    with pytest.raises(BadLength):
        count_snakes(5, 2, 2)
    with pytest.raises(BadLength):
        count_snakes(5, 2, 4)
    with pytest.raises(BadLength):
        count_bicycles(5, 2, 1)


def test_expected_snakes_value():
    # n=8, m=2, c=3/2: p = 3/128, structures = 336 * 8 * 60
    p = Fraction(3, 128)
    assert expected_snakes_exact(8, 2, Fraction(3, 2), 3) == p**4 * 336 * 8 * 60
    assert expected_snakes(8, 2, 1.5, 3) == pytest.approx(0.048666000366, rel=1e-10)


@given(st.integers(2, 40), st.integers(1, 6), st.integers(2, 12), st.fractions(0, 3))
def test_bicycle_snake_ratio_exact(n, m, s, c):
    ratio = expected_bicycles_exact(n, m, c, s)
    base = count_bicycles(n, m, s) // ((2 * s) ** 2 - 1)
    assert ratio == Fraction(c, 4 * m * n) ** (s + 1) * ((2 * s) ** 2 - 1) * base
    if (s + 1) % 2 == 0 and s >= 3 and expected_snakes_exact(n, m, c, s):
        assert ratio / expected_snakes_exact(n, m, c, s) == (2 * s) ** 2 - 1


def test_probability_guard():
    with pytest.raises(ProbabilityOutOfRange):
        expected_snakes(2, 1, 9.0, 3)
    with pytest.raises(ProbabilityOutOfRange):
        expected_snakes(2, 1, -1.0, 3)


def test_as_fraction_reads_repr():
    assert as_fraction(1.5) == Fraction(3, 2)
    assert as_fraction(0.1) == Fraction(1, 10)


def test_g_coefficients_sum_to_expectation():
    n, m, c, s1 = 30, 4, Fraction(3, 2), 6
    total = sum(g_coefficient(m, n, c, k, s1, exact=True) for k in range(1, min(m, s1) + 1))
    assert total == expected_snakes_exact(n, m, c, s1 - 1)
    with pytest.raises(KOutOfRange):
        g_coefficient(m, n, c, 0, s1)
    with pytest.raises(KOutOfRange):
        g_coefficient(m, n, c, 5, s1)


def test_union_bound_matches_sum():
    n, m, c = 50, 3, Fraction(3, 2)
    exact = sum(expected_bicycles_exact(n, m, c, s) for s in range(2, 21))
    assert bicycle_union_bound(n, m, c, 20) == pytest.approx(float(exact), rel=1e-14)
    assert bicycle_union_bound(n, m, 0, 20) == 0.0


def test_binomial_bound_examples():
    assert binomial_bounds_check(5, 5)
    assert all(binomial_bounds_check(a, a) for a in range(1, 50))
    # the sqrt(1/a) lower bound is violated here: 449.7/sqrt(10) = 142.2 > 120
    assert not binomial_bounds_check(10, 3)
    assert binomial_bounds_check(10, 3, lower_sq=Fraction(1, 20))


def test_binomial_bounds_sweep():
    upper_and_safe = all(
        binomial_bounds_check(a, b, Fraction(1, 2 * a)) for a in range(1, 201) for b in range(1, a + 1)
    )
    assert upper_and_safe
    # the upper bound alone (lower_sq = 0) always holds
    assert all(binomial_bounds_check(a, b, Fraction(0)) for a in range(1, 201) for b in range(1, a + 1))


def test_monte_carlo_small():
    rep = monte_carlo_snake_count(6, 1, 1.5, 3, 2000, 1)
    assert rep.within(4.0)
    zero = monte_carlo_snake_count(6, 1, 0.0, 3, 50, 1)
    assert zero.empirical_mean == 0 and zero.expected == 0


def test_monte_carlo_stderr_scaling():
    a = monte_carlo_snake_count(5, 1, 3.0, 3, 4000, 2)
    b = monte_carlo_snake_count(5, 1, 3.0, 3, 8000, 3)
    assert b.empirical_stderr / a.empirical_stderr == pytest.approx(2**-0.5, rel=0.2)


def test_monte_carlo_threads_merge():
    one = monte_carlo_snake_count(6, 1, 2.0, 3, 300, 4)
    two = monte_carlo_snake_count(6, 1, 2.0, 3, 300, 4, threads=2)
    assert one.empirical_mean == two.empirical_mean
    assert one.empirical_stderr == pytest.approx(two.empirical_stderr)


def test_monte_carlo_index_cap():
    with pytest.raises(IndexTooLarge):
        monte_carlo_snake_count(40, 4, 1.5, 5, 10, 0)


def _log(fr):
    import math

    return math.log(fr.numerator) - math.log(fr.denominator)


@pytest.mark.parametrize("beta,gamma", [(0.5, 1.0), (1.0, 2.0), (4 / 3, 1.85), (0.3, 3.0)])
def test_minmaj_sandwich(beta, gamma):
    """A (n)_s sqrt(k) / (n^s sqrt(m(s+1))) n^g <= G <= B sqrt(m) n^g with
    A = 1/e and B = 1 along n = 10^2 .. 10^4 (alpha = 2, c = 3/2)."""
    import math

    from qsat12.threshold import g_expanded

    for n in (100, 300, 1000, 3000, 10000):
        L = math.log(n)
        m = round(2 * L)
        k, s1 = max(1, round(beta * L)), max(2, round(gamma * L))
        a, b, gm = m / L, k / L, s1 / L
        G = g_coefficient(m, n, Fraction(3, 2), k, s1, exact=True)
        base = _log(G) - L * g_expanded(a, 1.5, b, gm)
        s = s1 - 1
        lower = math.log(falling_factorial(n, s)) + 0.5 * math.log(k) - s * L - 0.5 * math.log(m * s1)
        assert base - lower >= -1.0
        assert base - 0.5 * math.log(m) <= 0.0
