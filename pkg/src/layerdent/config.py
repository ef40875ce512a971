"""Run configuration: a TOML file validated into immutable pydantic models."""

from __future__ import annotations

import math
import pathlib
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from typing import Literal

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from layerdent.errors import ConfigError
from layerdent.kernel import IsotropicKernelCoeffs
from layerdent.materials import (
    EngineeringConstants,
    IsotropicConstants,
    LayerSystem,
    MaterialParams,
    build_layer_system,
)
from layerdent.powerlaw import FlatPunch, PowerLawShape

DEFAULT_PATH = pathlib.Path("layerdent.toml")
MAX_ORDER = 3


class _Block(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True, populate_by_name=True)


class EngineeringBlock(_Block):
    E: float
    E_axial: float
    nu: float
    nu_axial: float
    G_axial: float


class IsotropicBlock(_Block):
    E: float
    nu: float


class ParamsBlock(_Block):
    gamma1: float
    gamma2: float
    m1: float
    H: float


class MaterialBlock(_Block):
    """Exactly one of the three material representations."""

    engineering: EngineeringBlock | None = None
    isotropic: IsotropicBlock | None = None
    params: ParamsBlock | None = None

    @model_validator(mode="after")
    def _one_representation(self) -> MaterialBlock:
        given = [n for n in ("engineering", "isotropic", "params") if getattr(self, n) is not None]
        if len(given) != 1:
            raise ValueError(
                f"give exactly one of engineering, isotropic, params (got {given or 'none'})",
            )
        return self

    @property
    def is_isotropic(self) -> bool:
        return self.isotropic is not None

    def build(self) -> EngineeringConstants | IsotropicConstants | MaterialParams:
        if self.engineering is not None:
            return EngineeringConstants(**self.engineering.model_dump())
        if self.isotropic is not None:
            return IsotropicConstants(**self.isotropic.model_dump())
        assert self.params is not None
        return MaterialParams.from_roots(**self.params.model_dump())


class KernelBlock(_Block):
    d1: float | None = None
    d2: float | None = None
    d3: float | None = None
    order: int = Field(default=1, ge=0, le=MAX_ORDER)
    a0: float | None = None
    a1: float | None = None

    @model_validator(mode="after")
    def _complete_groups(self) -> KernelBlock:
        d = (self.d1, self.d2, self.d3)
        if any(v is not None for v in d) and any(v is None for v in d):
            raise ValueError("isotropic kernel needs all of d1, d2, d3")
        if (self.a0 is None) != (self.a1 is None):
            raise ValueError("constant override needs both a0 and a1")
        return self

    @property
    def isotropic_coeffs(self) -> IsotropicKernelCoeffs | None:
        if self.d1 is None:
            return None
        return IsotropicKernelCoeffs(d1=self.d1, d2=self.d2, d3=self.d3)  # type: ignore[arg-type]

    @property
    def has_override(self) -> bool:
        return self.a0 is not None


_KIND_PARAMS = {
    "powerlaw": ("lam", "A"),
    "cone": ("angle",),
    "paraboloid": ("R",),
    "hemisphere": ("R",),
    "flatpunch": ("radius",),
}


class IndenterBlock(_Block):
    kind: Literal["powerlaw", "cone", "paraboloid", "hemisphere", "flatpunch"]
    lam: float | None = Field(default=None, alias="lambda")
    A: float | None = None
    angle: float | None = None
    R: float | None = None
    radius: float | None = None

    @model_validator(mode="after")
    def _params_for_kind(self) -> IndenterBlock:
        needed = _KIND_PARAMS[self.kind]
        for name in needed:
            value = getattr(self, name)
            if value is None:
                raise ValueError(f"indenter kind {self.kind!r} needs {name}")
            if not value > 0:
                raise ValueError(f"indenter {name} must be positive, got {value}")
        extra = [
            n for n in ("lam", "A", "angle", "R", "radius")
            if n not in needed and getattr(self, n) is not None
        ]
        if extra:
            raise ValueError(f"indenter kind {self.kind!r} does not take {extra}")
        if self.kind == "powerlaw" and self.lam is not None and self.lam < 1:
            raise ValueError(f"lambda must be >= 1, got {self.lam}")
        if self.kind == "cone" and self.angle is not None and not self.angle < math.pi / 2:
            raise ValueError(f"cone angle must lie in (0, pi/2), got {self.angle}")
        return self

    def shape(self) -> PowerLawShape | FlatPunch | None:
        """Power-law shape or flat punch; ``None`` for the hemisphere."""
        if self.kind == "powerlaw":
            return PowerLawShape(lam=self.lam, A=self.A)  # type: ignore[arg-type]
        if self.kind == "cone":
            return PowerLawShape.cone(self.angle)  # type: ignore[arg-type]
        if self.kind == "paraboloid":
            return PowerLawShape.paraboloid(self.R)  # type: ignore[arg-type]
        if self.kind == "flatpunch":
            return FlatPunch(radius=self.radius)  # type: ignore[arg-type]
        return None


class SweepBlock(_Block):
    variable: Literal["w", "P", "a"]
    lo: float = Field(alias="min")
    hi: float = Field(alias="max")
    count: int = Field(default=11, ge=1)
    spacing: Literal["linear", "log"] = "linear"

    @model_validator(mode="after")
    def _ordered(self) -> SweepBlock:
        if self.count == 1 and self.lo > self.hi:
            raise ValueError(f"sweep min {self.lo} exceeds max {self.hi}")
        if self.count > 1 and not self.lo < self.hi:
            raise ValueError(f"sweep min {self.lo} must be below max {self.hi}")
        if not self.lo > 0:
            raise ValueError(f"sweep min must be positive, got {self.lo}")
        return self

    def values(self) -> NDArray[np.float64]:
        if self.count == 1:
            return np.array([self.lo])
        if self.spacing == "log":
            return np.geomspace(self.lo, self.hi, self.count)
        return np.linspace(self.lo, self.hi, self.count)


class TolerancesBlock(_Block):
    quad_tol: float = Field(default=1e-10, gt=0)
    root_tol: float = Field(default=1e-12, gt=0)


class OutputBlock(_Block):
    path: pathlib.Path | None = None
    format: Literal["csv", "json"] = "csv"


class RunConfig(_Block):
    """One batch run: materials, thickness, indenter, sweep and output."""

    layer: MaterialBlock
    substrate: MaterialBlock
    h: float = Field(gt=0)
    kernel: KernelBlock = KernelBlock()
    indenter: IndenterBlock | None = None
    sweep: SweepBlock | None = None
    tolerances: TolerancesBlock = TolerancesBlock()
    output: OutputBlock = OutputBlock()

    @model_validator(mode="after")
    def _isotropic_needs_kernel(self) -> RunConfig:
        isotropic = self.layer.is_isotropic or self.substrate.is_isotropic
        if isotropic and self.kernel.isotropic_coeffs is None and not self.kernel.has_override:
            raise ValueError("an isotropic material needs [kernel] d1, d2, d3 (or a0, a1)")
        return self

    def layer_system(self) -> LayerSystem:
        return build_layer_system(self.layer.build(), self.substrate.build(), self.h)


def _describe(exc: ValidationError) -> str:
    parts = []
    for err in exc.errors():
        loc = ".".join(str(p) for p in err["loc"]) or "<root>"
        parts.append(f"{loc}: {err['msg']}")
    return "; ".join(parts)


def parse_config(data: dict) -> RunConfig:
    """Validate an already-parsed mapping."""
    try:
        return RunConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigError(_describe(exc)) from exc


def load_config(path: pathlib.Path = DEFAULT_PATH) -> RunConfig:
    """Read and validate the TOML file at *path*."""
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        data = tomllib.loads(path.read_text(encoding="utf-8"))
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return parse_config(data)
