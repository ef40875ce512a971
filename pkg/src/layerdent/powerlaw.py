"""Fourth-order indentation model for blunt power-law indenters ``Phi = A r^lambda``.

Every correction is written in the two scaled constants

    c = 2 a0 / pi,    k = 8 a1 / (3 pi),

so all coefficient tables are polynomials in ``(c, k)`` with rational
coefficients in ``lambda``.  The ``*_ck`` functions take ``(c, k)`` directly
and accept exact rationals; the plain functions take ``(a0, a1)``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Any

from scipy.special import gammaln

from layerdent.errors import DomainError, SmallContactWarning
from layerdent.kernel import AsymptoticConstants
from layerdent.materials import LayerSystem
from layerdent.series import poly_eval, series_pow, series_quotient, series_revert4

VALIDITY_EPS = 0.5

Coeffs4 = tuple[Any, Any, Any, Any]


@dataclass(frozen=True)
class PowerLawShape:
    """Indenter profile ``Phi(r) = A r^lambda``; ``A`` has units ``length^(1-lambda)``."""

    lam: float
    A: float

    def __post_init__(self) -> None:
        if not self.lam >= 1:
            raise DomainError(f"lambda must be >= 1, got {self.lam}")
        if not self.A > 0:
            raise DomainError(f"A must be positive, got {self.A}")

    @classmethod
    def paraboloid(cls, R: float) -> PowerLawShape:
        """Paraboloid of tip radius *R*."""
        if not R > 0:
            raise DomainError(f"R must be positive, got {R}")
        return cls(lam=2.0, A=1 / (2 * R))

    @classmethod
    def cone(cls, angle: float) -> PowerLawShape:
        """Cone whose side makes *angle* (radians) with the contact plane."""
        if not 0 < angle < math.pi / 2:
            raise DomainError(f"cone angle must lie in (0, pi/2), got {angle}")
        return cls(lam=1.0, A=math.tan(angle))


@dataclass(frozen=True)
class FlatPunch:
    """Flat-ended cylindrical punch, the ``lambda -> infinity`` limit."""

    radius: float

    def __post_init__(self) -> None:
        if not self.radius > 0:
            raise DomainError(f"punch radius must be positive, got {self.radius}")


@dataclass(frozen=True)
class ShapeFactors:
    F1: float
    F2: float
    F3: float


@dataclass(frozen=True)
class ExpansionCoeffs:
    """All coefficient families for one ``(lambda, a0, a1)``."""

    B: Coeffs4
    C: Coeffs4
    D: Coeffs4
    Kp: Coeffs4
    E: Coeffs4


@dataclass(frozen=True)
class IndentationState:
    """One point of an indentation curve."""

    a: float
    w: float
    P: float
    eps: float
    varpi: float
    Ptilde: float


# --- scaled constants and coefficient tables ---


def scaled_constants(a0: float, a1: float) -> tuple[float, float]:
    """Return ``(c, k) = (2 a0 / pi, 8 a1 / (3 pi))``."""
    return 2 * a0 / math.pi, 8 * a1 / (3 * math.pi)


def shape_factors(lam: float) -> ShapeFactors:
    """``F1``, ``F2``, ``F3`` evaluated through log-gamma."""
    if not lam >= 1:
        raise DomainError(f"lambda must be >= 1, got {lam}")
    log_ratio = 2 * gammaln(lam / 2) - gammaln(lam)
    log2 = math.log(2.0)
    return ShapeFactors(
        F1=math.exp(2 * math.log(lam) + lam * log2 - math.log(lam + 1) + log_ratio),
        F2=math.exp(math.log(lam) + (lam - 2) * log2 + log_ratio),
        F3=math.exp(
            (lam - 1) / lam * math.log(lam)
            + (lam + 2) / lam * log2
            - math.log(lam + 1)
            - log_ratio / lam,
        ),
    )


def radius_coeffs_ck(lam: Any, c: Any, k: Any) -> Coeffs4:
    l1 = lam + 1
    return (
        c / l1,
        (lam + 3) * c**2 / (2 * l1**2),
        (lam + 4) * (lam + 2) * c**3 / (3 * l1**3) + (2 * lam + 5) * k / (l1 * (lam + 3)),
        (2 * lam + 5) * (lam + 5) * (3 * lam + 5) * c**4 / (24 * l1**4)
        + (lam**2 + 11 * lam + 22) * c * k / (l1**2 * (lam + 3)),
    )


def force_coeffs_ck(lam: Any, c: Any, k: Any) -> Coeffs4:
    l1 = lam + 1
    return (
        c,
        (2 * lam + 3) * c**2 / (2 * l1),
        (lam + 2) * (3 * lam + 4) * c**3 / (3 * l1**2) + (lam + 2) * k / (lam + 3),
        (2 * lam + 5) * (3 * lam + 5) * (4 * lam + 5) * c**4 / (24 * l1**3)
        + (2 * lam + 5) * (lam + 2) * c * k / (l1 * (lam + 3)),
    )


def varpi_coeffs_ck(lam: Any, c: Any, k: Any) -> Coeffs4:
    """Coefficients ``E1..E4`` of ``varpi = eps (1 + E1 eps + ... + E4 eps^4)``."""
    l1 = lam + 1
    return (
        -c / l1,
        -(lam - 1) * c**2 / (2 * l1**2),
        -((lam - 1) * (2 * lam - 1) * c**3 / (6 * l1**3) + (2 * lam + 5) * k / ((lam + 3) * l1)),
        -(
            (lam - 1) * (2 * lam - 1) * (3 * lam - 1) * c**4 / (24 * l1**4)
            + (lam**2 - lam - 8) * c * k / (l1**2 * (lam + 3))
        ),
    )


def kappa_coeffs_ck(lam: Any, c: Any, k: Any) -> Coeffs4:
    """Coefficients of the scaling factor ``kappa_lambda(eps)``.

    The eps^3 ``k`` term carries ``(lambda + 2)``; this is the value that
    composing ``f_lambda`` with ``varpi(eps)`` produces and that the
    ``lambda = 2`` and ``lambda -> infinity`` forms agree with.
    """
    if lam == math.inf:
        return c, c**2, c**3 + k, c**4 + 2 * c * k
    l1 = lam + 1
    return (
        c,
        (2 * lam + 1) * c**2 / (2 * l1),
        (2 * lam + 1) * (3 * lam + 1) * c**3 / (6 * l1**2) + (lam + 2) * k / (lam + 3),
        (2 * lam + 1) * (3 * lam + 1) * (4 * lam + 1) * c**4 / (24 * l1**3)
        + (2 * lam**2 + 4 * lam - 1) * c * k / (l1 * (lam + 3)),
    )


def reversion_coeffs_ck(lam: Any, c: Any, k: Any) -> Coeffs4:
    """``D1..D4`` from ``varpi^(lambda+1) (1 + sum C_n varpi^n) = Ptilde^(lambda+1)``."""
    C = force_coeffs_ck(lam, c, k)
    one = c * 0 + 1
    root = series_pow([one, *C], one / (lam + 1), 4)
    return series_revert4(root[1:5])


def radius_coeffs(lam: float, a0: float, a1: float) -> Coeffs4:
    """``B1..B4`` of the contact radius as a function of displacement."""
    return radius_coeffs_ck(lam, *scaled_constants(a0, a1))


def force_coeffs(lam: float, a0: float, a1: float) -> Coeffs4:
    """``C1..C4`` of the force-displacement correction."""
    return force_coeffs_ck(lam, *scaled_constants(a0, a1))


def reversion_coeffs(lam: float, a0: float, a1: float) -> Coeffs4:
    """``D1..D4`` of the normalised displacement as a function of force."""
    return reversion_coeffs_ck(lam, *scaled_constants(a0, a1))


def expansion_coeffs(lam: float, a0: float, a1: float) -> ExpansionCoeffs:
    c, k = scaled_constants(a0, a1)
    return ExpansionCoeffs(
        B=radius_coeffs_ck(lam, c, k),
        C=force_coeffs_ck(lam, c, k),
        D=reversion_coeffs_ck(lam, c, k),
        Kp=kappa_coeffs_ck(lam, c, k),
        E=varpi_coeffs_ck(lam, c, k),
    )


def _bracket(coeffs: Coeffs4, x: float) -> float:
    return poly_eval([1.0, *coeffs], x)


def _check_eps(eps: float) -> None:
    if eps > VALIDITY_EPS:
        warnings.warn(
            f"eps = a/h = {eps:.4g} exceeds {VALIDITY_EPS}; small-contact asymptotics may be inaccurate",
            SmallContactWarning,
            stacklevel=3,
        )


def _positive(name: str, value: float) -> None:
    if not value > 0:
        raise DomainError(f"{name} must be positive, got {value}")


# --- scaling factors ---


def kappa(lam: float, eps: float, consts: AsymptoticConstants) -> float:
    """Indentation scaling factor ``kappa_lambda(eps)``; ``lam=math.inf`` for the flat punch."""
    if eps < 0:
        raise DomainError(f"eps must be >= 0, got {eps}")
    return _bracket(kappa_coeffs_ck(lam, *scaled_constants(consts.a0, consts.a1)), eps)


def varpi_from_epsilon(lam: float, eps: float, consts: AsymptoticConstants) -> float:
    if eps < 0:
        raise DomainError(f"eps must be >= 0, got {eps}")
    return eps * _bracket(varpi_coeffs_ck(lam, *scaled_constants(consts.a0, consts.a1)), eps)


def scaling_factor(lam: float, varpi: float, consts: AsymptoticConstants) -> float:
    """``f_lambda(varpi) = 1 + C1 varpi + ... + C4 varpi^4``."""
    return _bracket(force_coeffs(lam, consts.a0, consts.a1), varpi)


# --- curve relations ---


def _varpi(w: float, shape: PowerLawShape, h: float, F2: float) -> float:
    return (w / (shape.A * F2)) ** (1 / shape.lam) / h


def _ptilde(P: float, shape: PowerLawShape, system: LayerSystem, F1: float) -> float:
    return (system.theta * shape.A * F1) ** (-1 / (shape.lam + 1)) * P ** (1 / (shape.lam + 1)) / system.h


def parametric_state(
    a: float, shape: PowerLawShape, system: LayerSystem, consts: AsymptoticConstants,
) -> IndentationState:
    """Force and displacement for a given contact radius."""
    _positive("contact radius a", a)
    lam = shape.lam
    eps = a / system.h
    _check_eps(eps)
    f = shape_factors(lam)
    c, k = scaled_constants(consts.a0, consts.a1)
    P = system.theta * shape.A * f.F1 * a ** (lam + 1) * (1 - k * eps**3)
    bracket = (
        1
        - lam * c / (lam + 1) * eps
        - lam * (2 * lam + 5) * k / ((lam + 3) * (lam + 1)) * eps**3
        + lam * c * k / (lam + 1) * eps**4
    )
    w = shape.A * f.F2 * a**lam * bracket
    varpi = _varpi(w, shape, system.h, f.F2) if w > 0 else math.nan
    ptilde = _ptilde(P, shape, system, f.F1) if P > 0 else math.nan
    return IndentationState(a=a, w=w, P=P, eps=eps, varpi=varpi, Ptilde=ptilde)


def radius_from_displacement(
    w: float, shape: PowerLawShape, system: LayerSystem, consts: AsymptoticConstants,
) -> float:
    _positive("displacement w", w)
    varpi = _varpi(w, shape, system.h, shape_factors(shape.lam).F2)
    a = system.h * varpi * _bracket(radius_coeffs(shape.lam, consts.a0, consts.a1), varpi)
    _check_eps(a / system.h)
    return a


def force_from_displacement(
    w: float, shape: PowerLawShape, system: LayerSystem, consts: AsymptoticConstants,
) -> float:
    _positive("displacement w", w)
    lam = shape.lam
    f = shape_factors(lam)
    varpi = _varpi(w, shape, system.h, f.F2)
    _check_eps(varpi)
    return (
        system.theta
        * shape.A ** (-1 / lam)
        * f.F3
        * w ** ((lam + 1) / lam)
        * scaling_factor(lam, varpi, consts)
    )


def displacement_from_force(
    P: float, shape: PowerLawShape, system: LayerSystem, consts: AsymptoticConstants,
) -> float:
    _positive("force P", P)
    lam = shape.lam
    f = shape_factors(lam)
    pt = _ptilde(P, shape, system, f.F1)
    _check_eps(pt)
    c, k = scaled_constants(consts.a0, consts.a1)
    bracket = 1 - lam * c / (lam + 1) * pt - lam * (lam + 2) * k / ((lam + 1) * (lam + 3)) * pt**3
    return shape.A ** (1 / (lam + 1)) * (P / (system.theta * f.F3)) ** (lam / (lam + 1)) * bracket


def radius_from_force(
    P: float, shape: PowerLawShape, system: LayerSystem, consts: AsymptoticConstants,
) -> float:
    _positive("force P", P)
    lam = shape.lam
    pt = _ptilde(P, shape, system, shape_factors(lam).F1)
    _check_eps(pt)
    _, k = scaled_constants(consts.a0, consts.a1)
    return system.h * pt * (1 + k / (lam + 1) * pt**3)


def varpi_from_force(
    P: float, shape: PowerLawShape, system: LayerSystem, consts: AsymptoticConstants,
) -> float:
    """``varpi = Ptilde (1 + D1 Ptilde + ... + D4 Ptilde^4)``."""
    _positive("force P", P)
    pt = _ptilde(P, shape, system, shape_factors(shape.lam).F1)
    return pt * _bracket(reversion_coeffs(shape.lam, consts.a0, consts.a1), pt)


# --- incremental stiffness ---


def stiffness(
    a: float, shape: PowerLawShape, system: LayerSystem, consts: AsymptoticConstants,
) -> float:
    """Expanded incremental stiffness ``dP/dw = 4 theta a kappa_inf(eps)``."""
    _positive("contact radius a", a)
    eps = a / system.h
    _check_eps(eps)
    return 4 * system.theta * a * kappa(math.inf, eps, consts)


def stiffness_rational(
    a: float, shape: PowerLawShape, system: LayerSystem, consts: AsymptoticConstants,
) -> float:
    """Incremental stiffness as the ratio of ``dP/da`` and ``dw/da``."""
    _positive("contact radius a", a)
    lam = shape.lam
    eps = a / system.h
    _check_eps(eps)
    c, k = scaled_constants(consts.a0, consts.a1)
    num, den = _stiffness_ratio(lam, c, k)
    return 4 * system.theta * a * poly_eval(num, eps) / poly_eval(den, eps)


def _stiffness_ratio(lam: Any, c: Any, k: Any) -> tuple[list[Any], list[Any]]:
    zero = c * 0
    one = zero + 1
    l1 = lam + 1
    num = [one, zero, zero, -k * (lam + 4) / l1, zero]
    den = [one, -c, zero, -k * (2 * lam + 5) / l1, c * k * (lam + 4) / l1]
    return num, den


def stiffness_expansion_ck(lam: Any, c: Any, k: Any) -> Coeffs4:
    """eps-coefficients of the rational stiffness expanded through ``eps^4``."""
    num, den = _stiffness_ratio(lam, c, k)
    series = series_quotient(num, den, 4)
    return tuple(series[1:5])  # type: ignore[return-value]


def stiffness_from_displacement(
    w: float, shape: PowerLawShape, system: LayerSystem, consts: AsymptoticConstants,
) -> float:
    """Incremental stiffness differentiated from the force-displacement law."""
    _positive("displacement w", w)
    lam = shape.lam
    f = shape_factors(lam)
    varpi = _varpi(w, shape, system.h, f.F2)
    _check_eps(varpi)
    C = force_coeffs(lam, consts.a0, consts.a1)
    weighted = tuple(Cn * (lam + n + 1) / (lam + 1) for n, Cn in enumerate(C, start=1))
    prefactor = system.theta * (lam + 1) / lam * f.F3 * f.F2 ** (1 / lam)
    return prefactor * system.h * varpi * _bracket(weighted, varpi)  # type: ignore[arg-type]


def bash_stiffness(contact_area: float, system: LayerSystem, consts: AsymptoticConstants) -> float:
    """Stiffness from the current contact area with the layer correction ``kappa_inf``."""
    _positive("contact area", contact_area)
    radius = math.sqrt(contact_area / math.pi)
    eps = radius / system.h
    _check_eps(eps)
    return 4 * system.theta * radius * kappa(math.inf, eps, consts)


def flat_punch_force(
    radius: float, w: float, system: LayerSystem, consts: AsymptoticConstants,
) -> float:
    """Force on a flat punch of fixed *radius*, linear in ``w``."""
    _positive("punch radius", radius)
    _positive("displacement w", w)
    eps = radius / system.h
    _check_eps(eps)
    return 4 * system.theta * radius * kappa(math.inf, eps, consts) * w


# --- cone closed forms ---


def cone_series(consts: AsymptoticConstants) -> tuple[Coeffs4, Coeffs4]:
    """Coefficients in powers of ``cot(gamma) w / h`` for a cone.

    Returns ``(radius, force)`` where
    ``a = (2 cot(gamma) / pi) w (1 + sum radius_n t^n)`` and
    ``P = (4 theta cot(gamma) / pi) w^2 (1 + sum force_n t^n)``.
    """
    a0, a1 = consts.a0, consts.a1
    pi = math.pi
    radius = (
        2 * a0 / pi**2,
        8 * a0**2 / pi**4,
        40 * a0**3 / pi**6 + 56 * a1 / (3 * pi**4),
        224 * a0**4 / pi**8 + 544 * a0 * a1 / (3 * pi**6),
    )
    force = (
        4 * a0 / pi**2,
        20 * a0**2 / pi**4,
        112 * a0**3 / pi**6 + 16 * a1 / pi**4,
        672 * a0**4 / pi**8 + 224 * a0 * a1 / pi**6,
    )
    return radius, force
