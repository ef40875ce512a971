"""Hemispherically-ended indenter ``Phi(r) = R - sqrt(R^2 - r^2)``.

Lengths are measured in units of the tip radius: ``alpha = a / R`` and
``mu = R / h``.  ``L(alpha)`` below is ``ln((1 + alpha) / (1 - alpha))``.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass

from scipy import optimize

from layerdent.errors import DomainError, NoBracket, SmallContactWarning
from layerdent.kernel import AsymptoticConstants
from layerdent.powerlaw import VALIDITY_EPS

logger = logging.getLogger(__name__)

ALPHA_MAX = 1 - 1e-9
_SERIES_BELOW = 0.05
_SERIES_TERMS = 14


@dataclass(frozen=True)
class HemisphereState:
    """Contact state of the hemisphere from the perturbation expansion in ``mu``."""

    R: float
    alpha: float
    mu: float
    alpha0: float
    alpha3: float
    w: float

    @property
    def a(self) -> float:
        return self.R * self.alpha


def _check_alpha(alpha: float, *, allow_zero: bool = False) -> None:
    if alpha < 0 or (alpha == 0 and not allow_zero):
        raise DomainError(f"alpha = a/R must be positive, got {alpha}")
    if alpha >= ALPHA_MAX:
        raise DomainError(
            f"alpha = a/R = {alpha} reaches the hemisphere equator (limit {ALPHA_MAX})",
        )


def _log_ratio(alpha: float) -> float:
    return 2 * math.atanh(alpha)


def _load_shape(alpha: float) -> float:
    """``(1 + alpha^2) L(alpha) - 2 alpha``, the bracket shared by force and root equation."""
    if alpha < _SERIES_BELOW:
        return sum(
            8 * n / (4 * n * n - 1) * alpha ** (2 * n + 1) for n in range(1, _SERIES_TERMS)
        )
    return (1 + alpha**2) * _log_ratio(alpha) - 2 * alpha


def _moment_shape(alpha: float) -> float:
    """``alpha/4 + alpha^3/12 - (1 - alpha^4) L(alpha) / 8``."""
    if alpha < _SERIES_BELOW:
        return sum(
            alpha ** (2 * n + 1) / ((2 * n + 1) * (2 * n - 3)) for n in range(2, _SERIES_TERMS)
        )
    return alpha / 4 + alpha**3 / 12 - (1 - alpha**4) * _log_ratio(alpha) / 8


def hemi_shape_integrals(alpha: float, R: float = 1.0) -> tuple[float, float, float]:
    """Closed forms of the three contact integrals of the hemisphere profile.

    Returns ``(I1, I2, I3)``: the ``Phi'`` integral, its ``rho^2`` moment
    (units ``R^2``) and the ``Phi (2 rho^2 - a^2) rho`` integral (units ``R^4``).
    """
    _check_alpha(alpha, allow_zero=True)
    return (
        math.atanh(alpha),
        R**2 * _load_shape(alpha) / 4,
        R**4 * _moment_shape(alpha),
    )


def _warn_eps(eps: float) -> None:
    if eps > VALIDITY_EPS:
        warnings.warn(
            f"eps = a/h = {eps:.4g} exceeds {VALIDITY_EPS}; small-contact asymptotics may be inaccurate",
            SmallContactWarning,
            stacklevel=3,
        )


def hemi_parametric(
    alpha: float, mu: float, theta: float, R: float, consts: AsymptoticConstants,
) -> tuple[float, float]:
    """Force and displacement at contact radius ``a = alpha R``."""
    _check_alpha(alpha)
    if mu < 0:
        raise DomainError(f"mu = R/h must be >= 0, got {mu}")
    _warn_eps(alpha * mu)
    a0, a1 = consts.a0, consts.a1
    q = _load_shape(alpha)
    L = _log_ratio(alpha)
    P = theta * R**2 * q * (1 - mu**3 * alpha**3 * 8 * a1 / (3 * math.pi))
    w_over_R = (
        alpha * L / 2
        - mu * a0 / (2 * math.pi) * q
        + mu**3 * a1 / (6 * math.pi) * (2 * alpha * (7 * alpha**2 + 3) - (7 * alpha**4 + 6 * alpha**2 + 3) * L)
        + mu**4 * 4 * a0 * a1 / (3 * math.pi**2) * alpha**3 * q
    )
    return P, R * w_over_R


def alpha0_from_force(P: float, theta: float, R: float, *, tol: float = 1e-12) -> float:
    """Leading-order contact ratio: the root of ``P / (theta R^2) = (1 + a^2) L(a) - 2 a``."""
    if not P > 0:
        raise DomainError(f"force P must be positive, got {P}")
    target = P / (theta * R**2)
    top = _load_shape(ALPHA_MAX)
    if target >= top:
        raise NoBracket(
            f"P/(theta R^2) = {target:.6g} exceeds {top:.6g}; contact would pass the hemisphere equator",
        )
    root, info = optimize.brentq(
        lambda x: _load_shape(x) - target,
        0.0,
        ALPHA_MAX,
        xtol=1e-16,
        rtol=1e-15,
        maxiter=200,
        full_output=True,
    )
    residual = abs(_load_shape(root) - target)
    logger.debug(
        "alpha0 root %.15g after %d iterations (residual %.2e)", root, info.iterations, residual,
    )
    if residual > tol * max(1.0, target):
        raise NoBracket(
            f"alpha0 residual {residual:.3e} above {tol:.1e} at P/(theta R^2) = {target:.6g}",
        )
    return float(root)


def england_expansion(
    alpha0: float, mu: float, consts: AsymptoticConstants, R: float = 1.0,
) -> HemisphereState:
    """Contact radius and displacement expanded through ``mu^4``.

    The ``mu``, ``mu^2`` and ``mu^4`` radius corrections vanish, so
    ``a / R = alpha0 + mu^3 alpha3``.
    """
    _check_alpha(alpha0)
    if mu < 0:
        raise DomainError(f"mu = R/h must be >= 0, got {mu}")
    a0, a1 = consts.a0, consts.a1
    L = _log_ratio(alpha0)
    q = _load_shape(alpha0)
    one_minus = 1 - alpha0**2
    alpha3 = 4 * a1 / (3 * math.pi) * alpha0**2 * one_minus * q / (one_minus * L + 2 * alpha0)
    alpha = alpha0 + mu**3 * alpha3
    _warn_eps(alpha * mu)
    w_over_R = (
        alpha0 * L / 2
        - mu * a0 / (2 * math.pi) * q
        - mu**3 * a1 / (6 * math.pi) * ((3 * alpha0**4 + 2 * alpha0**2 + 3) * L - 6 * alpha0 * (1 + alpha0**2))
    )
    return HemisphereState(R=R, alpha=alpha, mu=mu, alpha0=alpha0, alpha3=alpha3, w=R * w_over_R)


def hemisphere_from_force(
    P: float, theta: float, R: float, mu: float, consts: AsymptoticConstants, *, tol: float = 1e-12,
) -> HemisphereState:
    """Solve for ``alpha0`` at force *P*, then expand in ``mu``."""
    return england_expansion(alpha0_from_force(P, theta, R, tol=tol), mu, consts, R)
