"""Shared test utilities."""

from __future__ import annotations

import pathlib

import numpy as np
from hypothesis import assume
from hypothesis import strategies as st
from numpy.typing import ArrayLike, NDArray

from layerdent.kernel import AsymptoticConstants
from layerdent.materials import EngineeringConstants, IsotropicConstants, LayerSystem

LAYER = EngineeringConstants(E=10.0, E_axial=20.0, nu=0.2, nu_axial=0.25, G_axial=5.0)
SUBSTRATE = EngineeringConstants(E=50.0, E_axial=30.0, nu=0.3, nu_axial=0.2, G_axial=15.0)

SYNTHETIC = AsymptoticConstants.from_values((-0.5, 0.3))
ZERO = AsymptoticConstants.from_values((0.0, 0.0))


class ZeroKernel:
    """Kernel with ``L(u) = 1``: a homogeneous half-space."""

    def deficit(self, u: ArrayLike) -> NDArray[np.float64]:
        return np.zeros_like(np.asarray(u, dtype=float))


class ExponentialKernel:
    """``1 - L(u) = amplitude * exp(-rate * u)``, with moments in closed form."""

    def __init__(self, amplitude: float = 1.0, rate: float = 2.0) -> None:
        self.amplitude = amplitude
        self.rate = rate

    def deficit(self, u: ArrayLike) -> NDArray[np.float64]:
        return self.amplitude * np.exp(-self.rate * np.asarray(u, dtype=float))


def unit_system(h: float = 1.0, theta: float = 1.0) -> LayerSystem:
    """A layer system with chosen ``h`` and ``theta``; the materials are placeholders."""
    material = IsotropicConstants(E=2 * theta, nu=0.0)
    return LayerSystem(layer=material, substrate=material, h=h, theta=theta)


_TI_MATERIALS = """
[layer.engineering]
E = 10.0
E_axial = 20.0
nu = 0.2
nu_axial = 0.25
G_axial = 5.0

[substrate.engineering]
E = 50.0
E_axial = 30.0
nu = 0.3
nu_axial = 0.2
G_axial = 15.0
"""


def write_config(
    tmp_path: pathlib.Path,
    *,
    indenter: str = 'kind = "paraboloid"\nR = 1.0',
    sweep: str = 'variable = "a"\nmin = 0.01\nmax = 0.1\ncount = 4',
    kernel: str = "a0 = -0.5\na1 = 0.3",
    materials: str = _TI_MATERIALS,
    h: float = 1.0,
    extra: str = "",
) -> pathlib.Path:
    """Write a TOML run configuration and return its path."""
    sections = [f"h = {h}", extra, materials]
    if kernel:
        sections.append(f"[kernel]\n{kernel}")
    if indenter:
        sections.append(f"[indenter]\n{indenter}")
    if sweep:
        sections.append(f"[sweep]\n{sweep}")
    path = tmp_path / "run.toml"
    path.write_text("\n\n".join(sections) + "\n", encoding="utf-8")
    return path


@st.composite
def engineering_constants(draw: st.DrawFn) -> EngineeringConstants:
    """Transversely isotropic constants kept away from the stability boundary."""
    E = draw(st.floats(1.0, 100.0))
    E_axial = draw(st.floats(1.0, 100.0))
    nu = draw(st.floats(-0.5, 0.45))
    nu_axial = draw(st.floats(0.0, 0.45))
    G_axial = draw(st.floats(0.5, 50.0))
    assume(1 - nu - 2 * (E / E_axial) * nu_axial**2 > 0.05)
    return EngineeringConstants(E=E, E_axial=E_axial, nu=nu, nu_axial=nu_axial, G_axial=G_axial)
