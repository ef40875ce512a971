"""Transversely isotropic material constants and the layer/substrate pair.

Moduli follow the convention in which the ``x3`` axis is normal to the
surface and to the plane of isotropy.  All quantities are in one
user-chosen pressure unit and one length unit; nothing here converts units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from layerdent.errors import DegenerateRoots, InvalidModuli, StabilityViolation

_DISC_RTOL = 1e-12
_RESIDUAL_RTOL = 1e-12


@dataclass(frozen=True)
class EngineeringConstants:
    """Five engineering constants of a transversely isotropic material.

    ``E``/``nu`` act in the plane of isotropy, ``E_axial``/``nu_axial``/``G_axial``
    describe the response along the symmetry axis.
    """

    E: float
    E_axial: float
    nu: float
    nu_axial: float
    G_axial: float

    def __post_init__(self) -> None:
        for name in ("E", "E_axial", "G_axial"):
            if not getattr(self, name) > 0:
                raise StabilityViolation(f"{name} must be positive, got {getattr(self, name)}")
        if not 1 + self.nu > 0:
            raise StabilityViolation(f"1 + nu must be positive, got nu={self.nu}")
        if not self.denominator > 0:
            raise StabilityViolation(
                "1 - nu - 2*(E/E_axial)*nu_axial**2 must be positive, "
                f"got {self.denominator}",
            )

    @property
    def denominator(self) -> float:
        """``1 - nu - 2 (E/E') nu'^2``, shared by the A_ij formulas."""
        return 1 - self.nu - 2 * (self.E / self.E_axial) * self.nu_axial**2


@dataclass(frozen=True)
class IsotropicConstants:
    """Young's modulus and Poisson's ratio of an isotropic material."""

    E: float
    nu: float

    def __post_init__(self) -> None:
        if not self.E > 0:
            raise StabilityViolation(f"E must be positive, got {self.E}")
        if not -1 < self.nu < 0.5:
            raise StabilityViolation(f"nu must lie in (-1, 0.5), got {self.nu}")

    @property
    def theta(self) -> float:
        """Contact modulus ``E / (2 (1 - nu^2))``."""
        return self.E / (2 * (1 - self.nu**2))

    def as_engineering(self) -> EngineeringConstants:
        return EngineeringConstants(
            E=self.E,
            E_axial=self.E,
            nu=self.nu,
            nu_axial=self.nu,
            G_axial=self.E / (2 * (1 + self.nu)),
        )


@dataclass(frozen=True)
class StiffnessModuli:
    """The five independent stiffness moduli ``A11, A12, A13, A33, A44``."""

    A11: float
    A12: float
    A13: float
    A33: float
    A44: float

    def __post_init__(self) -> None:
        if not self.A44 > 0:
            raise InvalidModuli(f"A44 must be positive, got {self.A44}")
        if not self.A11 > abs(self.A12):
            raise InvalidModuli(f"A11 must exceed |A12|, got A11={self.A11}, A12={self.A12}")
        if not self.A11 * self.A33 > self.A13**2:
            raise InvalidModuli("A11*A33 must exceed A13**2")


@dataclass(frozen=True)
class MaterialParams:
    """Per-material quantities entering the layer/substrate kernel.

    ``H`` carries the ``1/(2 pi)`` normalisation, so a layer with these
    parameters has contact modulus ``theta = 1 / (2 pi H)``.
    """

    gamma1: float
    gamma2: float
    m1: float
    m2: float
    H: float
    g1: float
    g2: float

    @classmethod
    def from_roots(cls, gamma1: float, gamma2: float, m1: float, H: float) -> MaterialParams:
        """Build from precomputed roots; ``m2``, ``g1``, ``g2`` are derived."""
        if not gamma1 > gamma2 > 0:
            raise DegenerateRoots(
                f"need gamma1 > gamma2 > 0, got gamma1={gamma1}, gamma2={gamma2}",
            )
        if not H > 0:
            raise InvalidModuli(f"H must be positive, got {H}")
        if m1 == 0:
            raise InvalidModuli("m1 must be non-zero")
        spread = gamma1 - gamma2
        return cls(
            gamma1=gamma1,
            gamma2=gamma2,
            m1=m1,
            m2=1 / m1,
            H=H,
            g1=gamma1 / spread,
            g2=gamma2 / spread,
        )


Material = MaterialParams | IsotropicConstants


@dataclass(frozen=True)
class LayerSystem:
    """A layer of thickness ``h`` bonded to a substrate."""

    layer: Material
    substrate: Material
    h: float
    theta: float

    @property
    def is_isotropic(self) -> bool:
        return isinstance(self.layer, IsotropicConstants) or isinstance(
            self.substrate, IsotropicConstants,
        )


def stiffness_from_engineering(c: EngineeringConstants) -> StiffnessModuli:
    """Convert engineering constants into stiffness moduli."""
    r = c.E / c.E_axial
    nu2 = c.nu_axial**2
    d = c.denominator
    return StiffnessModuli(
        A11=c.E * (1 - r * nu2) / ((1 + c.nu) * d),
        A12=c.E * (c.nu + r * nu2) / ((1 + c.nu) * d),
        A13=c.E * c.nu_axial / d,
        A33=c.E_axial * (1 - c.nu) / d,
        A44=c.G_axial,
    )


def quartic_coefficients(m: StiffnessModuli) -> tuple[float, float, float]:
    """Coefficients ``(a, b, c)`` of ``a s^2 - b s + c = 0`` with ``s = gamma^2``."""
    a = m.A11 * m.A44
    b = m.A11 * m.A33 - m.A13 * (m.A13 + 2 * m.A44)
    c = m.A33 * m.A44
    return a, b, c


def gamma_roots(m: StiffnessModuli) -> tuple[float, float]:
    """Return ``(gamma1, gamma2)``, ``gamma1 > gamma2 > 0``.

    The quartic is solved as a quadratic in ``gamma^2`` in closed form.
    Raises ``DegenerateRoots`` for equal (isotropic) or non-real roots.
    """
    a, b, c = quartic_coefficients(m)
    disc = b * b - 4 * a * c
    if disc <= _DISC_RTOL * b * b:
        raise DegenerateRoots(
            f"characteristic roots are equal or complex (discriminant {disc:.3e})",
        )
    if b <= 0:
        raise DegenerateRoots("characteristic roots gamma^2 are negative")
    s1 = (b + math.sqrt(disc)) / (2 * a)
    s2 = c / (a * s1)
    for s in (s1, s2):
        residual = a * s * s - b * s + c
        if abs(residual) > _RESIDUAL_RTOL * a * s * s:
            raise DegenerateRoots(f"quartic residual {residual:.3e} too large")
    return math.sqrt(s1), math.sqrt(s2)


def material_params(m: StiffnessModuli) -> MaterialParams:
    """Derive ``H``, ``m1``, ``m2``, ``g1``, ``g2`` from the stiffness moduli."""
    gamma1, gamma2 = gamma_roots(m)
    shear = m.A13 + m.A44
    if shear == 0:
        raise DegenerateRoots("A13 + A44 vanishes; m1 and m2 are undefined")
    m1 = (m.A11 * gamma1**2 - m.A44) / shear
    if m1 == 0:
        raise DegenerateRoots("m1 vanishes")
    spread = gamma1 - gamma2
    # m1 m2 = 1
    return MaterialParams(
        gamma1=gamma1,
        gamma2=gamma2,
        m1=m1,
        m2=1 / m1,
        H=(gamma1 + gamma2) * m.A11 / (2 * math.pi * (m.A11 * m.A33 - m.A13**2)),
        g1=gamma1 / spread,
        g2=gamma2 / spread,
    )


def theta_of(material: Material) -> float:
    """Contact modulus of a layer made of *material*."""
    if isinstance(material, IsotropicConstants):
        return material.theta
    return 1 / (2 * math.pi * material.H)


def _resolve(
    material: EngineeringConstants | IsotropicConstants | MaterialParams,
) -> Material:
    if isinstance(material, EngineeringConstants):
        return material_params(stiffness_from_engineering(material))
    return material


def build_layer_system(
    layer: EngineeringConstants | IsotropicConstants | MaterialParams,
    substrate: EngineeringConstants | IsotropicConstants | MaterialParams,
    h: float,
) -> LayerSystem:
    """Compose the layer/substrate pair for thickness *h*.

    Isotropic inputs stay isotropic so that the kernel can take the
    isotropic path; the error message names the material that failed.
    """
    if not h > 0:
        raise InvalidModuli(f"layer thickness h must be positive, got {h}")
    resolved: dict[str, Material] = {}
    for role, material in (("layer", layer), ("substrate", substrate)):
        try:
            resolved[role] = _resolve(material)
        except (StabilityViolation, InvalidModuli, DegenerateRoots) as exc:
            raise type(exc)(f"{role}: {exc}") from exc
    return LayerSystem(
        layer=resolved["layer"],
        substrate=resolved["substrate"],
        h=h,
        theta=theta_of(resolved["layer"]),
    )
