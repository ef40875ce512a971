"""Tests for the hemispherical indenter."""

import math
from unittest.mock import patch

import pytest
import sympy as sp
from scipy import integrate

from layerdent import checks
from layerdent.errors import DomainError, NoBracket, SmallContactWarning
from layerdent.hemisphere import (
    ALPHA_MAX,
    alpha0_from_force,
    england_expansion,
    hemi_parametric,
    hemi_shape_integrals,
    hemisphere_from_force,
)
from layerdent.kernel import AsymptoticConstants
from layerdent.oracle import bracket_invert

from helpers import SYNTHETIC, ZERO, unit_system


def _exact_integrals(alpha: sp.Rational) -> tuple[float, float]:
    L = sp.log((1 + alpha) / (1 - alpha))
    load = ((1 + alpha**2) * L - 2 * alpha) / 4
    moment = alpha / 4 + alpha**3 / 12 - (1 - alpha**4) * L / 8
    return float(sp.N(load, 30)), float(sp.N(moment, 30))


# --- shape integrals ---


class TestShapeIntegrals:
    def test_half_contact(self) -> None:
        L = math.log(3.0)
        I1, I2, I3 = hemi_shape_integrals(0.5)
        assert I1 == pytest.approx(L / 2, rel=1e-14)
        assert I2 == pytest.approx((1.25 * L - 1) / 4, rel=1e-13)
        assert I3 == pytest.approx(0.125 + 0.125 / 12 - 0.9375 * L / 8, rel=1e-12)

    @pytest.mark.parametrize("alpha", [sp.Rational(1, 1000), sp.Rational(1, 25), sp.Rational(3, 50)])
    def test_small_alpha_without_cancellation(self, alpha: sp.Rational) -> None:
        load, moment = _exact_integrals(alpha)
        _, I2, I3 = hemi_shape_integrals(float(alpha))
        assert I2 == pytest.approx(load, rel=1e-12)
        assert I3 == pytest.approx(moment, rel=1e-9)

    @pytest.mark.parametrize("alpha", [0.1 * n for n in range(1, 10)])
    def test_matches_singular_quadrature(self, alpha: float) -> None:
        # int_0^a f(rho) / sqrt(a^2 - rho^2) d rho, with (a - rho)^(-1/2) as the quadrature weight
        def singular(f) -> float:
            value, _ = integrate.quad(
                lambda rho: f(rho) / math.sqrt(alpha + rho),
                0.0,
                alpha,
                weight="alg",
                wvar=(0.0, -0.5),
                epsabs=0.0,
                epsrel=1e-12,
                limit=200,
            )
            return value

        def dphi(rho: float) -> float:
            return rho / math.sqrt(1 - rho * rho)

        def phi(rho: float) -> float:
            return rho * rho / (1 + math.sqrt(1 - rho * rho))

        expected = (
            singular(dphi),
            singular(lambda rho: dphi(rho) * rho * rho),
            singular(lambda rho: phi(rho) * (2 * rho * rho - alpha * alpha) * rho),
        )
        for got, want in zip(hemi_shape_integrals(alpha), expected, strict=True):
            assert got == pytest.approx(want, rel=1e-10)

    def test_radius_scaling(self) -> None:
        unit = hemi_shape_integrals(0.3)
        scaled = hemi_shape_integrals(0.3, R=2.0)
        assert scaled[0] == unit[0]
        assert scaled[1] == pytest.approx(4 * unit[1], rel=1e-15)
        assert scaled[2] == pytest.approx(16 * unit[2], rel=1e-15)

    def test_zero_contact(self) -> None:
        assert hemi_shape_integrals(0.0) == (0.0, 0.0, 0.0)

    @pytest.mark.parametrize("alpha", [-0.1, 1.0, ALPHA_MAX])
    def test_rejects_alpha(self, alpha: float) -> None:
        with pytest.raises(DomainError, match="alpha"):
            hemi_shape_integrals(alpha)


# --- parametric relations ---


class TestParametric:
    def test_homogeneous_forms(self) -> None:
        alpha, theta, R = 0.4, 2.0, 3.0
        L = math.log(1.4 / 0.6)
        P, w = hemi_parametric(alpha, 0.1, theta, R, ZERO)
        assert P == pytest.approx(theta * R**2 * ((1 + alpha**2) * L - 2 * alpha), rel=1e-13)
        assert w == pytest.approx(R * alpha * L / 2, rel=1e-13)

    def test_hertz_limit(self) -> None:
        alpha, theta, R = 1e-3, 1.0, 1.0
        P, w = hemi_parametric(alpha, 0.0, theta, R, SYNTHETIC)
        assert P == pytest.approx(8 * theta * (alpha * R) ** 3 / (3 * R), rel=1e-5)
        assert w == pytest.approx((alpha * R) ** 2 / R, rel=1e-5)

    def test_agrees_with_general_shape_quadrature(self) -> None:
        result = checks.check_hemisphere_general_shape(0.2, unit_system(), SYNTHETIC)
        assert result.passed, result.detail

    def test_small_contact_warning(self) -> None:
        with pytest.warns(SmallContactWarning):
            hemi_parametric(0.9, 1.0, 1.0, 1.0, SYNTHETIC)

    def test_rejects_negative_mu(self) -> None:
        with pytest.raises(DomainError, match="mu"):
            hemi_parametric(0.3, -1.0, 1.0, 1.0, SYNTHETIC)


# --- leading-order root ---


class TestAlpha0:
    def test_recovers_half_contact(self) -> None:
        target = 4 * hemi_shape_integrals(0.5)[1]
        assert alpha0_from_force(target * 2.0, 2.0, 1.0) == pytest.approx(0.5, rel=1e-13)

    def test_matches_bisection(self) -> None:
        def load(x: float) -> float:
            return 4 * hemi_shape_integrals(x)[1]

        for target in (1e-3, 0.1, 1.7):
            expected = bracket_invert(load, target, 1e-12, 0.999)
            assert alpha0_from_force(target, 1.0, 1.0) == pytest.approx(expected, rel=1e-11)

    def test_tiny_force(self) -> None:
        # Hertz: P = 8 theta R^2 alpha^3 / 3
        alpha = alpha0_from_force(8e-12 / 3, 1.0, 1.0)
        assert alpha == pytest.approx(1e-4, rel=1e-6)

    def test_residual_check(self) -> None:
        assert checks.check_alpha0_residuals().passed

    def test_rejects_step_in_load(self) -> None:
        with patch("layerdent.hemisphere._load_shape", lambda x: 0.0 if x < 0.5 else 2.0):
            with pytest.raises(NoBracket, match="residual"):
                alpha0_from_force(1.0, 1.0, 1.0)

    def test_beyond_equator(self) -> None:
        with pytest.raises(NoBracket, match="equator"):
            alpha0_from_force(100.0, 1.0, 1.0)

    def test_rejects_nonpositive_force(self) -> None:
        with pytest.raises(DomainError):
            alpha0_from_force(0.0, 1.0, 1.0)


# --- expansion in mu ---


class TestEnglandExpansion:
    def test_zero_mu_is_leading_order(self) -> None:
        state = england_expansion(0.3, 0.0, SYNTHETIC, R=2.0)
        assert state.alpha == 0.3
        assert state.a == pytest.approx(0.6)
        assert state.w == pytest.approx(hemi_parametric(0.3, 0.0, 1.0, 2.0, SYNTHETIC)[1], rel=1e-14)

    def test_no_radius_correction_without_a1(self) -> None:
        consts = AsymptoticConstants.from_values((-0.5, 0.0))
        state = england_expansion(0.3, 0.2, consts)
        assert state.alpha3 == 0.0
        assert state.alpha == state.alpha0

    def test_radius_correction_sign_follows_a1(self) -> None:
        state = england_expansion(0.3, 0.2, SYNTHETIC)
        assert state.alpha3 > 0
        assert state.alpha == pytest.approx(0.3 + 0.008 * state.alpha3)

    def test_from_force_round_trip(self) -> None:
        P, w = hemi_parametric(0.3, 0.0, 1.5, 1.0, SYNTHETIC)
        state = hemisphere_from_force(P, 1.5, 1.0, 0.0, SYNTHETIC)
        assert state.alpha == pytest.approx(0.3, rel=1e-12)
        assert state.w == pytest.approx(w, rel=1e-12)

    def test_residual_shrinks_with_mu(self) -> None:
        assert checks.england_residual(0.3, 0.1, SYNTHETIC) < checks.england_residual(0.3, 0.2, SYNTHETIC)
        assert checks.england_residual(0.3, 0.1, SYNTHETIC) < 1e-4

    def test_order(self) -> None:
        result = checks.check_england_order(SYNTHETIC)
        assert result.passed, result.detail

    def test_homogeneous_is_exact(self) -> None:
        assert checks.england_residual(0.3, 0.2, ZERO) < 1e-13
