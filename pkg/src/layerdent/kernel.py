"""Kernel function L(u) of the layer/substrate pair and its moment constants."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Protocol

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import integrate

from layerdent.errors import DomainError, QuadratureNotConverged, SingularZ
from layerdent.materials import LayerSystem, MaterialParams

logger = logging.getLogger(__name__)

_Z_RTOL = 1e-14
_TAIL_FIT_RANGE = (2.0, 20.0)
_TAIL_TOL = 1e-13
_NULL_LEVEL = 1e-12
_QUAD_TOL = 1e-10
_REFINE_TOL = 1e-9
_MAX_ORDER = 3


class Kernel(Protocol):
    """Anything that can evaluate the deficit ``1 - L(u)``."""

    def deficit(self, u: ArrayLike) -> NDArray[np.float64]:
        """Return ``1 - L(u)`` for ``u >= 0``."""
        ...


@dataclass(frozen=True)
class KernelModel:
    """Closed-form kernel for a transversely isotropic layer and substrate.

    ``layer_g1``/``layer_g2`` are the layer's ``g`` ratios; ``g`` and
    ``Hratio`` couple the two materials.
    """

    a11: float
    a12: float
    a21: float
    a22: float
    Z: float
    g: float
    Hratio: float
    decay1: float
    decay2: float
    layer_g1: float
    layer_g2: float

    def _mn(self, u: ArrayLike) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        u = np.asarray(u, dtype=float)
        x = np.exp(-u * self.decay1)
        y = np.exp(-u * self.decay2)
        g1, g2 = self.layer_g1, self.layer_g2
        cross = g1 * self.a12 - g2 * self.a21
        det = self.a12 * self.a21 - self.a11 * self.a22
        m = -cross * x * y - g1 * self.a11 * x**2 + g2 * self.a22 * y**2 - det * x**2 * y**2
        n = (
            1
            + 2 * cross * x * y
            + (g1 + g2) * (self.a11 * x**2 - self.a22 * y**2)
            + det * x**2 * y**2
        )
        return m, n

    def deficit(self, u: ArrayLike) -> NDArray[np.float64]:
        m, n = self._mn(u)
        return -2 * m / n


@dataclass(frozen=True)
class IsotropicKernelCoeffs:
    """Coefficients of the isotropic kernel

    ``Q(u) = -2 e^{-2u} (d1 + d2 e^{-2u}) / (1 + d3 e^{-2u} + d2 e^{-4u})``.
    """

    d1: float
    d2: float
    d3: float

    def __post_init__(self) -> None:
        # denominator 1 + d3 x + d2 x^2 must not vanish for x = e^{-2u} in (0, 1]
        for root in np.roots([self.d2, self.d3, 1.0]):
            if abs(root.imag) < 1e-12 and 0 < root.real <= 1:
                raise DomainError(
                    f"isotropic kernel denominator vanishes at exp(-2u)={root.real:.6g}",
                )

    def deficit(self, u: ArrayLike) -> NDArray[np.float64]:
        x = np.exp(-2 * np.asarray(u, dtype=float))
        return 2 * x * (self.d1 + self.d2 * x) / (1 + self.d3 * x + self.d2 * x**2)


@dataclass(frozen=True)
class TailBound:
    """Exponential envelope ``|1 - L(u)| <= c exp(-r u)``."""

    c: float
    r: float
    max_violation: float


@dataclass(frozen=True)
class AsymptoticConstants:
    """Moments ``a_m`` of ``1 - L`` with England's ``K0``, ``K1``."""

    a: tuple[float, ...]
    K0: float
    K1: float
    errors: tuple[float, ...] = ()

    @classmethod
    def from_values(
        cls, a: tuple[float, ...] | list[float], errors: tuple[float, ...] = (),
    ) -> AsymptoticConstants:
        a = tuple(float(v) for v in a)
        if len(a) < 2:
            a = a + (0.0,) * (2 - len(a))
        return cls(a=a, K0=-2 * a[0] / math.pi, K1=-4 * a[1] / math.pi, errors=errors)

    @property
    def a0(self) -> float:
        return self.a[0]

    @property
    def a1(self) -> float:
        return self.a[1]


@dataclass(frozen=True)
class SeriesCoefficients:
    """Double-index coefficients of the ``F``, ``S0`` and ``S~2`` expansions.

    Entries with ``i + j`` above the order are ``nan``.
    """

    b: NDArray[np.float64]
    b0: NDArray[np.float64]
    b2t: NDArray[np.float64]


def build_kernel_ti(sys: LayerSystem) -> KernelModel:
    """Assemble the coupling coefficients of the TI layer/substrate kernel."""
    lay, sub = sys.layer, sys.substrate
    if not (isinstance(lay, MaterialParams) and isinstance(sub, MaterialParams)):
        raise DomainError("transversely isotropic kernel needs MaterialParams for both materials")
    if abs(sub.m1 - 1) < 1e-12:
        raise SingularZ("substrate m1 equals 1; the H ratio is undefined")

    g1s, g2s, g1t, g2t = lay.gamma1, lay.gamma2, sub.gamma1, sub.gamma2
    m1s, m1t = lay.m1, sub.m1
    spread_t = g1t - g2t
    H = sub.H * (m1s - 1) / (lay.H * (m1t - 1))
    g = (g1s - g2s) / spread_t

    sub_g = sub.g1 - m1t**2 * sub.g2
    terms = (
        H**2 * (g1s - g2s) * sub_g,
        -g * H / spread_t * (m1s - 1) * (m1t - 1) * (g1s * g2s + g1t * g2t),
        -g * H / spread_t * 2 * (g1t - m1t * g2t) * (g1s - m1s * g2s),
        g**2 * (g1s - m1s**2 * g2s),
    )
    Z = math.fsum(terms)
    if abs(Z) < _Z_RTOL * max(abs(t) for t in terms):
        raise SingularZ(f"coupling determinant Z={Z:.3e} cancels; material pair is ill-conditioned")

    brace11 = -H**2 * (g1t - m1t**2 * g2t) + g * H * (
        2 * (g1t - m1t * g2t) + (m1s - 1) * (m1t - 1) * g2s
    )
    a11 = 1 + 2 * g1s / Z * (brace11 / spread_t - g**2)
    shared = g**2 * m1s - g * H * (sub.g1 - m1t * sub.g2) * (m1s + 1) + H**2 * sub_g
    a12 = 2 * g2s / Z * shared
    a21 = 2 * g1s / Z * shared
    brace22 = H**2 * (g1t - m1t**2 * g2t) - g * H * (
        2 * m1s * (g1t - m1t * g2t) - (m1s - 1) * (m1t - 1) * g1s
    )
    a22 = 1 + 2 * g2s / Z * (brace22 / spread_t + g**2 * m1s**2)

    logger.debug("kernel Z=%.6e a11=%.6e a12=%.6e a21=%.6e a22=%.6e", Z, a11, a12, a21, a22)
    return KernelModel(
        a11=a11,
        a12=a12,
        a21=a21,
        a22=a22,
        Z=Z,
        g=g,
        Hratio=H,
        decay1=1 / g1s,
        decay2=1 / g2s,
        layer_g1=lay.g1,
        layer_g2=lay.g2,
    )


def build_kernel(sys: LayerSystem, iso: IsotropicKernelCoeffs | None = None) -> Kernel:
    """Pick the isotropic or the transversely isotropic kernel for *sys*."""
    if iso is not None:
        return iso
    if sys.is_isotropic:
        raise DomainError("an isotropic material needs isotropic kernel coefficients d1, d2, d3")
    return build_kernel_ti(sys)


def eval_L(k: Kernel, u: ArrayLike) -> NDArray[np.float64]:
    """Evaluate ``L(u)``."""
    u = np.asarray(u, dtype=float)
    if np.any(u < 0):
        raise DomainError("L(u) is defined for u >= 0")
    return 1 - k.deficit(u)


def tail_bound(k: Kernel, *, samples: int = 91) -> TailBound:
    """Fit an exponential envelope to ``|1 - L|`` on ``u`` in ``[2, 20]``.

    The rate comes from a log-linear fit over the upper half of the range,
    the amplitude is the smallest one bounding all sample points.  The
    reported violation is measured on a grid ten times finer.
    """
    lo, hi = _TAIL_FIT_RANGE
    peak = float(np.max(np.abs(k.deficit(np.linspace(0.0, hi, samples)))))
    if peak < _NULL_LEVEL:
        # L is 1 up to rounding: homogeneous medium
        return TailBound(c=peak, r=1.0, max_violation=0.0)
    u = np.linspace(lo, hi, samples)
    y = np.abs(k.deficit(u))
    upper = (u >= 0.5 * (lo + hi)) & (y > 1e-300)
    if upper.sum() >= 2:
        slope, _ = np.polyfit(u[upper], np.log(y[upper]), 1)
        r = -slope
    else:
        r = 1.0
    if not r > 0:
        raise QuadratureNotConverged(f"1 - L(u) does not decay on [{lo}, {hi}] (rate {r:.3e})")
    c = float(np.max(y * np.exp(r * u)))
    fine = np.linspace(lo, hi, 10 * samples)
    excess = np.abs(k.deficit(fine)) / (c * np.exp(-r * fine)) - 1
    violation = max(float(np.max(excess)), 0.0)
    logger.debug("tail bound c=%.6e r=%.6e violation=%.3e", c, r, violation)
    return TailBound(c=c, r=float(r), max_violation=violation)


def truncation_point(bound: TailBound, power: int = 0, tol: float = _TAIL_TOL) -> float:
    """Smallest ``u`` (at least 20) where ``c u^power e^{-r u}`` drops below *tol*."""
    if bound.c == 0:
        return _TAIL_FIT_RANGE[1]
    u = max(math.log(bound.c / tol) / bound.r, 1.0)
    for _ in range(50):
        u_next = (math.log(bound.c / tol) + power * math.log(u)) / bound.r
        if abs(u_next - u) < 1e-6:
            break
        u = max(u_next, 1.0)
    return max(u, _TAIL_FIT_RANGE[1])


def double_factorial_even(m: int) -> int:
    """``(2m)!! = 2 * 4 * ... * 2m`` with ``(0)!! = 1``."""
    return 2**m * math.factorial(m)


def _richardson_simpson(f, u_max: float, n: int = 2**13) -> float:
    coarse_u = np.linspace(0.0, u_max, n + 1)
    fine_u = np.linspace(0.0, u_max, 2 * n + 1)
    coarse = integrate.simpson(f(coarse_u), x=coarse_u)
    fine = integrate.simpson(f(fine_u), x=fine_u)
    return float(fine + (fine - coarse) / 15)


def asymptotic_constants(
    k: Kernel, order: int = 1, *, tol: float = _QUAD_TOL,
) -> AsymptoticConstants:
    """Compute ``a_m = (-1)^m / [(2m)!!]^2 * int_0^inf [1 - L(u)] u^{2m} du``.

    Orders above 1 are diagnostics; the fourth-order model uses ``a0, a1``.
    """
    if not 0 <= order <= _MAX_ORDER:
        raise DomainError(f"order must lie in [0, {_MAX_ORDER}], got {order}")
    bound = tail_bound(k)
    values: list[float] = []
    errors: list[float] = []
    for m in range(order + 1):
        u_max = truncation_point(bound, 2 * m, _TAIL_TOL * min(1.0, bound.r))

        def integrand(u, m=m):
            return k.deficit(u) * np.asarray(u, dtype=float) ** (2 * m)

        value, err = integrate.quad(
            lambda u: float(integrand(u)), 0.0, u_max, epsabs=tol, epsrel=tol, limit=400,
        )
        if err > tol * max(1.0, abs(value)):
            raise QuadratureNotConverged(
                f"a_{m}: quadrature error estimate {err:.3e} exceeds {tol:.1e}",
            )
        check = _richardson_simpson(integrand, u_max)
        if abs(check - value) > _REFINE_TOL * max(1.0, abs(value)):
            raise QuadratureNotConverged(
                f"a_{m}: refinements disagree ({value:.12e} vs {check:.12e})",
            )
        scale = (-1) ** m / double_factorial_even(m) ** 2
        logger.debug("a_%d: u_max=%.3f integral=%.12e err=%.2e", m, u_max, value, err)
        values.append(scale * value)
        errors.append(abs(scale) * err)
    return AsymptoticConstants.from_values(values, tuple(errors))


def series_coefficients(a: AsymptoticConstants, order: int) -> SeriesCoefficients:
    """Coefficients ``b_ij``, ``b0_ij``, ``b2t_ij`` with ``m = i + j <= order``."""
    if order >= len(a.a):
        raise DomainError(f"need a_m up to m={order}, have {len(a.a) - 1}")
    f = math.factorial
    shape = (order + 1, order + 1)
    b = np.full(shape, np.nan)
    b0 = np.full(shape, np.nan)
    b2t = np.full(shape, np.nan)
    for i in range(order + 1):
        for j in range(order + 1 - i):
            m = i + j
            am = a.a[m]
            common = f(m) ** 2 / f(i) ** 2
            b[i, j] = common / f(j) ** 2 * am
            b0[i, j] = 2 ** (2 * j) * common / f(2 * j) * am
            b2t[i, j] = -(2 ** (2 * j + 1)) * j * common / f(2 * j + 1) * am
    return SeriesCoefficients(b=b, b0=b0, b2t=b2t)
