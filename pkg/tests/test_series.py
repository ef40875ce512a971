"""Tests for truncated power-series arithmetic."""

import sympy as sp

from layerdent.oracle import series_revert
from layerdent.series import poly_eval, series_mul, series_pow, series_quotient, series_revert4

C = sp.symbols("c1:5")


def _compose(outer: list, inner: list, n: int) -> list:
    """``outer(inner(x))`` for a series *inner* with zero constant term."""
    out = [sp.Integer(0)] * (n + 1)
    power = [sp.Integer(1)] + [sp.Integer(0)] * n
    for coeff in outer:
        out = [sp.expand(o + coeff * p) for o, p in zip(out, power)]
        power = series_mul(power, inner, n)
    return out


# --- arithmetic ---


class TestArithmetic:
    def test_poly_eval(self) -> None:
        assert poly_eval([1, 2, 3], 2) == 17

    def test_mul_truncates(self) -> None:
        assert series_mul([1, 1], [1, -1], 2) == [1, 0, -1]
        assert series_mul([1, 1, 1], [1, 1, 1], 1) == [1, 2]

    def test_quotient_geometric(self) -> None:
        assert series_quotient([1], [1, -1], 5) == [1, 1, 1, 1, 1, 1]

    def test_quotient_inverts_mul(self) -> None:
        p = [sp.Integer(2), sp.Integer(3), sp.Rational(1, 2)]
        q = [sp.Integer(1), sp.Integer(-4), sp.Integer(5)]
        assert series_quotient(series_mul(p, q, 4), q, 4) == p + [0, 0]

    def test_pow_square_root(self) -> None:
        half = sp.Rational(1, 2)
        got = series_pow([sp.Integer(1), sp.Integer(1)], half, 6)
        assert got == [sp.binomial(half, k) for k in range(7)]

    def test_pow_matches_sympy_series(self) -> None:
        x = sp.symbols("x")
        p = sp.Rational(2, 3)
        g = [sp.Integer(1), sp.Integer(2), sp.Integer(-1), sp.Rational(1, 3)]
        got = series_pow(g, p, 4)
        expected = sp.series((1 + 2 * x - x**2 + x**3 / 3) ** p, x, 0, 5).removeO()
        assert [sp.simplify(got[k] - expected.coeff(x, k)) for k in range(5)] == [0] * 5


# --- reversion ---


class TestRevert4:
    def test_catalan_numbers(self) -> None:
        assert series_revert4((-1, 0, 0, 0)) == (1, 2, 5, 14)

    def test_composition_is_identity(self) -> None:
        y = [sp.Integer(0), sp.Integer(1), *C]
        d = series_revert4(C)
        x_of_y = [sp.Integer(0), sp.Integer(1), *d]
        assert _compose(x_of_y, y, 5) == [0, 1, 0, 0, 0, 0]

    def test_agrees_with_fixed_point_reversion(self) -> None:
        closed = series_revert4(C)
        iterated = series_revert(C)
        assert [sp.expand(a - b) for a, b in zip(closed, iterated)] == [0] * 4

    def test_fractional_power(self) -> None:
        q = sp.Rational(1, 3)
        inner = series_pow([sp.Integer(1), *C], q, 4)
        closed = series_revert4(inner[1:5])
        iterated = series_revert(C, power=q)
        assert [sp.expand(a - b) for a, b in zip(closed, iterated)] == [0] * 4

    def test_floats(self) -> None:
        d = series_revert([0.5, -0.25, 0.125, 0.0])
        closed = series_revert4((0.5, -0.25, 0.125, 0.0))
        assert all(abs(a - b) < 1e-14 for a, b in zip(d, closed))
