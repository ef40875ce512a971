"""Independent numerical checks for the closed-form indentation model.

Nothing here is used to produce results; everything here is used to
cross-check them.  The S-function quadratures integrate ``1 - L(u)``
against Bessel/trigonometric weights panel by panel between oscillation
zeros, up to the point where the exponential tail bound of the kernel
drops below the tolerance.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from scipy import integrate, optimize, special

from layerdent.errors import DomainError, NoBracket, QuadratureNotConverged
from layerdent.kernel import AsymptoticConstants, Kernel, tail_bound, truncation_point
from layerdent.materials import LayerSystem
from layerdent.series import series_mul, series_pow

logger = logging.getLogger(__name__)

ORACLE_TOL = 1e-9
_MAX_PANELS = 4000
_SHAPE_TOL = 1e-12

Weight = Callable[[float], float]


@dataclass(frozen=True)
class ShapeFunction:
    """Axisymmetric indenter profile with its derivative.

    The tip touches first: ``phi(0) = 0`` and ``dphi(0) >= 0``.
    """

    kind: str
    phi: Callable[[float], float]
    dphi: Callable[[float], float]
    params: dict[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        tip, slope = self.phi(0.0), self.dphi(0.0)
        if abs(tip) > _SHAPE_TOL:
            raise DomainError(f"{self.kind} profile must vanish at r = 0, got phi(0) = {tip:.6g}")
        if slope < 0:
            raise DomainError(f"{self.kind} profile must not decrease at r = 0, got dphi(0) = {slope:.6g}")


@dataclass(frozen=True)
class QuadratureReport:
    value: float
    est_error: float
    panels: int
    converged: bool


def power_law_profile(lam: float, A: float) -> ShapeFunction:
    if not lam >= 1 or not A > 0:
        raise DomainError(f"power-law profile needs lambda >= 1 and A > 0, got {lam}, {A}")
    return ShapeFunction(
        kind="powerlaw",
        phi=lambda r: A * r**lam,
        dphi=lambda r: A * lam * r ** (lam - 1),
        params={"lambda": lam, "A": A},
    )


def hemisphere_profile(R: float) -> ShapeFunction:
    if not R > 0:
        raise DomainError(f"hemisphere radius must be positive, got {R}")
    return ShapeFunction(
        kind="hemisphere",
        phi=lambda r: R - math.sqrt(R * R - r * r),
        dphi=lambda r: r / math.sqrt(R * R - r * r),
        params={"R": R},
    )


def flat_profile() -> ShapeFunction:
    return ShapeFunction(kind="flat", phi=lambda r: 0.0, dphi=lambda r: 0.0)


# --- oscillatory quadrature ---


def integrate_weighted(
    kernel: Kernel, weight: Weight, frequency: float, *, power: int = 0, tol: float = ORACLE_TOL,
) -> QuadratureReport:
    """``int_0^inf [1 - L(u)] weight(u) du``.

    *frequency* is the fastest angular frequency in *weight* and sets the
    panel width; *power* is the polynomial growth of ``|weight|``, used for
    the truncation point.
    """
    bound = tail_bound(kernel)
    u_max = truncation_point(bound, power, 0.1 * tol * min(1.0, bound.r))
    width = math.pi / frequency if frequency > 0 else u_max
    width = max(width, u_max / _MAX_PANELS)
    edges = np.append(np.arange(0.0, u_max, width), u_max)
    panels = len(edges) - 1

    def integrand(u: float) -> float:
        return float(kernel.deficit(u)) * weight(u)

    total = 0.0
    err = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        value, panel_err = integrate.quad(
            integrand, lo, hi, epsabs=tol / panels, epsrel=1e-13, limit=200,
        )
        total += value
        err += panel_err
    logger.debug("weighted quadrature: %d panels to u=%.3f, err=%.2e", panels, u_max, err)
    return QuadratureReport(value=total, est_error=err, panels=panels, converged=err <= tol)


def _value(report: QuadratureReport, name: str, tol: float) -> float:
    if not report.converged:
        raise QuadratureNotConverged(
            f"{name}: error estimate {report.est_error:.3e} exceeds {tol:.1e} "
            f"({report.panels} panels)",
        )
    return report.value


def _nonneg(**kwargs: float) -> None:
    for name, value in kwargs.items():
        if value < 0:
            raise DomainError(f"{name} must be >= 0, got {value}")


def quad_F(t: float, kernel: Kernel, *, tol: float = ORACLE_TOL) -> float:
    """``F(t) = int [1 - L(u)] J0(t u) du``."""
    _nonneg(t=t)
    report = integrate_weighted(kernel, lambda u: special.j0(t * u), t, tol=tol)
    return _value(report, "F", tol)


def quad_F2(sigma: float, tau: float, kernel: Kernel, *, tol: float = ORACLE_TOL) -> float:
    _nonneg(sigma=sigma, tau=tau)
    report = integrate_weighted(
        kernel, lambda u: special.j0(sigma * u) * special.j0(tau * u), sigma + tau, tol=tol,
    )
    return _value(report, "F2", tol)


def quad_S0(sigma: float, alpha: float, kernel: Kernel, *, tol: float = ORACLE_TOL) -> float:
    _nonneg(sigma=sigma, alpha=alpha)
    report = integrate_weighted(
        kernel, lambda u: special.j0(sigma * u) * math.cos(alpha * u), sigma + alpha, tol=tol,
    )
    return _value(report, "S0", tol)


def quad_S2(sigma: float, alpha: float, kernel: Kernel, *, tol: float = ORACLE_TOL) -> float:
    """Weight ``J0(sigma u) sin(alpha u) / u``."""
    _nonneg(sigma=sigma, alpha=alpha)
    report = integrate_weighted(
        kernel,
        lambda u: special.j0(sigma * u) * alpha * special.spherical_jn(0, alpha * u),
        sigma + alpha,
        tol=tol,
    )
    return _value(report, "S2", tol)


def quad_S2tilde(sigma: float, alpha: float, kernel: Kernel, *, tol: float = ORACLE_TOL) -> float:
    """Weight ``J0(sigma u) (sin(alpha u) / u - alpha cos(alpha u))``."""
    _nonneg(sigma=sigma, alpha=alpha)
    report = integrate_weighted(
        kernel,
        lambda u: special.j0(sigma * u) * alpha**2 * u * special.spherical_jn(1, alpha * u),
        sigma + alpha,
        power=1,
        tol=tol,
    )
    return _value(report, "S2tilde", tol)


def _s4_weight(x: float) -> float:
    # sin x / x - 2 (sin x / x - cos x) / x^2, which tends to 1/3 at x = 0
    return (special.spherical_jn(0, x) - 2 * special.spherical_jn(2, x)) / 3


def quad_S4(sigma: float, alpha: float, kernel: Kernel, *, tol: float = ORACLE_TOL) -> float:
    _nonneg(sigma=sigma, alpha=alpha)
    report = integrate_weighted(
        kernel, lambda u: special.j0(sigma * u) * _s4_weight(alpha * u), sigma + alpha, tol=tol,
    )
    return _value(report, "S4", tol)


def trapezoid_moment(kernel: Kernel, m: int, *, u_max: float = 60.0, n: int = 2_000_001) -> float:
    """``a_m`` by the trapezoid rule on a uniform grid."""
    u = np.linspace(0.0, u_max, n)
    integral = integrate.trapezoid(kernel.deficit(u) * u ** (2 * m), u)
    return float((-1) ** m * integral / (2**m * math.factorial(m)) ** 2)


# --- general-shape relations ---


def _shape_integrals(a: float, phi: ShapeFunction) -> tuple[float, float, float]:
    """The three contact integrals with ``rho = a sin t`` removing the square root."""

    def quad(f: Callable[[float], float]) -> float:
        value, err = integrate.quad(f, 0.0, math.pi / 2, epsabs=0.0, epsrel=_SHAPE_TOL, limit=200)
        if err > 1e2 * _SHAPE_TOL * max(abs(value), 1e-300):
            raise QuadratureNotConverged(f"{phi.kind} shape integral error {err:.3e}")
        return value

    I1 = quad(lambda t: phi.dphi(a * math.sin(t)))
    I2 = quad(lambda t: phi.dphi(a * math.sin(t)) * (a * math.sin(t)) ** 2)
    I3 = quad(
        lambda t: phi.phi(a * math.sin(t))
        * (2 * (a * math.sin(t)) ** 2 - a * a)
        * a
        * math.sin(t),
    )
    return I1, I2, I3


def exact_general_relations(
    a: float, phi: ShapeFunction, system: LayerSystem, consts: AsymptoticConstants,
) -> tuple[float, float]:
    """Force and displacement of an arbitrary profile in the simplified fourth-order form."""
    if not a > 0:
        raise DomainError(f"contact radius must be positive, got {a}")
    h, theta = system.h, system.theta
    a0, a1 = consts.a0, consts.a1
    eps = a / h
    k = 8 * a1 / (3 * math.pi)
    I1, I2, I3 = _shape_integrals(a, phi)
    P = (1 - k * eps**3) * 4 * theta * I2
    w = (
        (1 - k / 2 * eps**3) * a * I1
        + 4 * a1 / (math.pi * h**3) * I3
        - 2 / (math.pi * h) * (a0 + 2 * a1 * eps**2 - a0 * k * eps**3) * I2
    )
    return P, w


def rational_general_relations(
    a: float, phi: ShapeFunction, system: LayerSystem, consts: AsymptoticConstants,
) -> tuple[float, float]:
    """The same pair before expanding the ``1 + O(eps^3)`` denominators."""
    if not a > 0:
        raise DomainError(f"contact radius must be positive, got {a}")
    h, theta = system.h, system.theta
    a0, a1 = consts.a0, consts.a1
    eps = a / h
    k = 8 * a1 / (3 * math.pi)
    I1, I2, I3 = _shape_integrals(a, phi)
    P = 4 * theta * I2 / (1 + k * eps**3)
    rhs = (
        a * I1
        + 4 * a1 / (math.pi * h**3) * I3
        - P / (2 * math.pi * theta * h) * (a0 + 2 * a1 * eps**2 + a0 * k / 2 * eps**3)
    )
    return P, rhs / (1 + k / 2 * eps**3)


# --- inversion, reversion and differentiation ---


def bracket_invert(
    f: Callable[[float], float], target: float, lo: float, hi: float, *, tol: float = 1e-12,
) -> float:
    """Solve ``f(x) = target`` on ``[lo, hi]`` by bisection.

    The returned root satisfies ``|f(x) - target| <= tol * max(1, |target|)``;
    a sign change without such a point (a jump in *f*) raises ``NoBracket``.
    """
    f_lo, f_hi = f(lo) - target, f(hi) - target
    if f_lo == 0:
        return lo
    if f_hi == 0:
        return hi
    if f_lo * f_hi > 0:
        raise NoBracket(
            f"target {target:.6g} not bracketed: f({lo:.6g})={f_lo + target:.6g}, "
            f"f({hi:.6g})={f_hi + target:.6g}",
        )
    root = optimize.bisect(
        lambda x: f(x) - target, lo, hi, xtol=1e-15 * abs(hi - lo), rtol=1e-15, maxiter=200,
    )
    residual = abs(f(root) - target)
    logger.debug("bisection root %.15g, residual %.2e", root, residual)
    if residual > tol * max(1.0, abs(target)):
        raise NoBracket(
            f"no root of f(x) = {target:.6g} in [{lo:.6g}, {hi:.6g}]: "
            f"bisection stopped at x={root:.15g} with residual {residual:.3e} > {tol:.1e}",
        )
    return float(root)


def series_revert(c: Sequence[Any], power: Any = 1) -> tuple[Any, Any, Any, Any]:
    """Invert ``y = x (1 + c1 x + ... + c4 x^4)^power`` through ``y^5``.

    Fixed-point iteration ``x <- y (1 + c(x))^(-power)`` on truncated
    polynomials; each sweep fixes one more coefficient.
    """
    n = 5
    zero = c[0] * 0
    y = [zero, zero + 1] + [zero] * (n - 1)
    x = list(y)
    for _ in range(n):
        cx = [zero] * (n + 1)
        xk = [zero + 1] + [zero] * n
        for ck in c:
            xk = series_mul(xk, x, n)
            cx = [s + ck * t for s, t in zip(cx, xk)]
        x = series_mul(y, series_pow([zero + 1, *cx[1:]], -power, n), n)
    return x[2], x[3], x[4], x[5]


def finite_diff_stiffness(
    curve: Callable[[float], tuple[float, float]], a: float, delta: float,
) -> float:
    """``dP/dw`` of a parametric ``a -> (P, w)`` curve, Richardson-extrapolated over ``delta``."""
    if not 0 < delta < a:
        raise DomainError(f"need 0 < delta < a, got delta={delta}, a={a}")

    def central(d: float) -> float:
        p_hi, w_hi = curve(a + d)
        p_lo, w_lo = curve(a - d)
        return (p_hi - p_lo) / (w_hi - w_lo)

    coarse, fine = central(delta), central(delta / 2)
    return (4 * fine - coarse) / 3
