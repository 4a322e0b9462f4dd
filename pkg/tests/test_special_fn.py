import math
from fractions import Fraction

import numpy as np
import pytest

from bellcat.special_fn import (
    laguerre_assoc,
    laguerre_assoc_table,
    log_factorial,
    log_factorial_table,
)


def laguerre_series_exact(n: int, m: int, x: Fraction) -> Fraction:
    """Finite power-series definition, evaluated in exact rational arithmetic.

    L^m_n(x) = sum_{i=0}^{n} (-1)^i C(n+m, n-i) x^i / i!
    """
    acc = Fraction(0)
    for i in range(n + 1):
        acc += Fraction((-1) ** i * math.comb(n + m, n - i), math.factorial(i)) * x**i
    return acc


class TestLogFactorial:
    def test_zero_and_one(self):
        assert log_factorial(0) == 0.0
        assert log_factorial(1) == 0.0

    def test_twenty(self):
        # 20! computed exactly by integer multiplication
        exact = 1
        for k in range(2, 21):
            exact *= k
        assert exact == 2432902008176640000
        assert log_factorial(20) == pytest.approx(math.log(exact), rel=1e-13)

    @pytest.mark.parametrize("n", [2, 5, 37, 100, 999, 4096, 10000])
    def test_against_exact_integer_factorial(self, n):
        assert log_factorial(n) == pytest.approx(math.log(math.factorial(n)), rel=1e-13)

    def test_ladder_identity(self):
        # lf(n+1) - lf(n) = ln(n+1), abs tolerance 1e-12 up to n = 1000
        table = log_factorial_table(1001)
        steps = table[1:] - table[:-1]
        expected = np.log(np.arange(1, 1002))
        assert np.max(np.abs(steps - expected)) < 1e-12

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            log_factorial(-1)

    def test_table_matches_scalar(self):
        table = log_factorial_table(50)
        for n in (0, 1, 7, 50):
            assert table[n] == log_factorial(n)


class TestLaguerre:
    def test_degree_zero_is_one(self):
        for m in (0, 3, 17):
            for x in (0.0, 0.5, 42.0):
                assert laguerre_assoc(0, m, x) == 1.0

    def test_degree_one_closed_form(self):
        for m in (0, 2, 9):
            for x in (0.0, 1.25, 80.0):
                assert laguerre_assoc(1, m, x) == pytest.approx(1.0 + m - x, rel=1e-15)

    def test_l12_at_two(self):
        # L^1_2(x) = 3 - 3x + x^2/2, so L^1_2(2) = -1; series oracle agrees
        assert laguerre_series_exact(2, 1, Fraction(2)) == -1
        assert laguerre_assoc(2, 1, 2.0) == pytest.approx(-1.0, abs=1e-14)

    @pytest.mark.parametrize("n", [0, 1, 2, 3, 5, 10, 20, 35, 50])
    @pytest.mark.parametrize("m", [0, 1, 2, 5, 10, 20])
    def test_recurrence_matches_exact_series(self, n, m):
        # sample grid over [0, 100]; oracle in exact rationals so the
        # alternating series cannot contaminate the reference values
        for x in (Fraction(0), Fraction(1, 2), Fraction(1), Fraction(5, 2),
                  Fraction(10), Fraction(25), Fraction(50), Fraction(75), Fraction(100)):
            exact = float(laguerre_series_exact(n, m, x))
            got = laguerre_assoc(n, m, float(x))
            if abs(exact) < 1.0:
                assert got == pytest.approx(exact, abs=1e-9)
            else:
                assert got == pytest.approx(exact, rel=1e-9)

    def test_table_consistent_with_scalar(self):
        x = np.array([0.0, 0.3, 7.0, 64.0])
        table = laguerre_assoc_table(12, 4, x)
        assert table.shape == (13, 4)
        for n in (0, 1, 5, 12):
            for j, xx in enumerate(x):
                assert table[n, j] == pytest.approx(laguerre_assoc(n, 4, float(xx)), rel=1e-12, abs=1e-12)

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            laguerre_assoc(3, 0, math.inf)
        with pytest.raises(ValueError):
            laguerre_assoc_table(3, 0, np.array([1.0, math.nan]))
