"""Tests for run configuration loading and validation."""

import math
import pathlib

import numpy as np
import pytest

from layerdent.config import load_config, parse_config
from layerdent.errors import ConfigError, StabilityViolation
from layerdent.kernel import IsotropicKernelCoeffs
from layerdent.materials import IsotropicConstants, MaterialParams
from layerdent.powerlaw import FlatPunch, PowerLawShape

from helpers import write_config

ISO_MATERIALS = """
[layer.isotropic]
E = 2.0
nu = 0.3

[substrate.isotropic]
E = 20.0
nu = 0.25
"""


def _minimal(**overrides) -> dict:
    data = {
        "h": 1.0,
        "layer": {"isotropic": {"E": 2.0, "nu": 0.3}},
        "substrate": {"isotropic": {"E": 20.0, "nu": 0.25}},
        "kernel": {"d1": 0.5, "d2": 0.0, "d3": 0.5},
    }
    data.update(overrides)
    return data


# --- load_config ---


class TestLoadConfig:
    def test_full_file(self, tmp_path: pathlib.Path) -> None:
        cfg = load_config(write_config(tmp_path))
        assert cfg.h == 1.0
        assert cfg.kernel.has_override
        assert cfg.indenter is not None and cfg.indenter.kind == "paraboloid"
        assert cfg.sweep is not None and cfg.sweep.variable == "a"
        assert cfg.output.format == "csv"
        assert cfg.tolerances.quad_tol == 1e-10

    def test_layer_system_from_engineering_constants(self, tmp_path: pathlib.Path) -> None:
        system = load_config(write_config(tmp_path, h=2.5)).layer_system()
        assert isinstance(system.layer, MaterialParams)
        assert system.h == 2.5

    def test_missing_file(self, tmp_path: pathlib.Path) -> None:
        with pytest.raises(ConfigError, match="not found"):
            load_config(tmp_path / "absent.toml")

    def test_malformed_toml(self, tmp_path: pathlib.Path) -> None:
        path = tmp_path / "bad.toml"
        path.write_text("h = [1.0\n", encoding="utf-8")
        with pytest.raises(ConfigError, match="bad.toml"):
            load_config(path)

    def test_unknown_key_names_location(self, tmp_path: pathlib.Path) -> None:
        path = write_config(tmp_path, indenter='kind = "paraboloid"\nR = 1.0\nradius = 2.0')
        with pytest.raises(ConfigError, match="indenter"):
            load_config(path)

    def test_misspelled_section(self, tmp_path: pathlib.Path) -> None:
        path = write_config(tmp_path, extra="[tolerance]\nquad_tol = 1e-8")
        with pytest.raises(ConfigError, match="tolerance"):
            load_config(path)

    def test_output_block(self, tmp_path: pathlib.Path) -> None:
        path = write_config(tmp_path, sweep="", extra='[output]\npath = "out.json"\nformat = "json"')
        cfg = load_config(path)
        assert cfg.output.path == pathlib.Path("out.json")
        assert cfg.output.format == "json"
        assert cfg.sweep is None


# --- materials ---


class TestMaterialBlock:
    def test_isotropic_materials_with_kernel(self, tmp_path: pathlib.Path) -> None:
        cfg = load_config(write_config(tmp_path, materials=ISO_MATERIALS, kernel="d1 = 0.5\nd2 = 0.0\nd3 = 0.5"))
        assert cfg.layer.is_isotropic
        assert cfg.kernel.isotropic_coeffs == IsotropicKernelCoeffs(0.5, 0.0, 0.5)
        system = cfg.layer_system()
        assert isinstance(system.layer, IsotropicConstants)
        assert system.theta == pytest.approx(2.0 / (2 * (1 - 0.09)))

    def test_isotropic_without_kernel_is_rejected(self, tmp_path: pathlib.Path) -> None:
        with pytest.raises(ConfigError, match="d1, d2, d3"):
            load_config(write_config(tmp_path, materials=ISO_MATERIALS, kernel=""))

    def test_isotropic_with_override_is_accepted(self) -> None:
        cfg = parse_config(_minimal(kernel={"a0": -0.5, "a1": 0.3}))
        assert cfg.kernel.isotropic_coeffs is None
        assert cfg.kernel.has_override

    def test_two_representations(self) -> None:
        layer = {"isotropic": {"E": 2.0, "nu": 0.3}, "params": {"gamma1": 2.0, "gamma2": 1.0, "m1": 3.0, "H": 0.1}}
        with pytest.raises(ConfigError, match="exactly one"):
            parse_config(_minimal(layer=layer))

    def test_no_representation(self) -> None:
        with pytest.raises(ConfigError, match="layer"):
            parse_config(_minimal(layer={}))

    def test_params_block(self) -> None:
        layer = {"params": {"gamma1": 2.0, "gamma2": 1.0, "m1": 3.0, "H": 0.1}}
        cfg = parse_config(_minimal(layer=layer))
        built = cfg.layer.build()
        assert isinstance(built, MaterialParams)
        assert built.m2 == pytest.approx(1 / 3)

    def test_unstable_constants_fail_on_build(self) -> None:
        cfg = parse_config(_minimal(layer={"isotropic": {"E": -1.0, "nu": 0.3}}))
        with pytest.raises(StabilityViolation):
            cfg.layer_system()

    def test_nonpositive_thickness(self) -> None:
        with pytest.raises(ConfigError, match="h"):
            parse_config(_minimal(h=0.0))


# --- kernel ---


class TestKernelBlock:
    def test_partial_d_coefficients(self) -> None:
        with pytest.raises(ConfigError, match="all of d1, d2, d3"):
            parse_config(_minimal(kernel={"d1": 0.5, "d2": 0.0}))

    def test_partial_override(self) -> None:
        with pytest.raises(ConfigError, match="both a0 and a1"):
            parse_config(_minimal(kernel={"d1": 0.5, "d2": 0.0, "d3": 0.5, "a0": 1.0}))

    @pytest.mark.parametrize("order", [-1, 4])
    def test_order_range(self, order: int) -> None:
        with pytest.raises(ConfigError, match="order"):
            parse_config(_minimal(kernel={"d1": 0.5, "d2": 0.0, "d3": 0.5, "order": order}))


# --- indenter ---


class TestIndenterBlock:
    def test_power_law_uses_lambda_key(self) -> None:
        cfg = parse_config(_minimal(indenter={"kind": "powerlaw", "lambda": 1.5, "A": 2.0}))
        assert cfg.indenter is not None
        assert cfg.indenter.shape() == PowerLawShape(1.5, 2.0)

    def test_named_shapes(self) -> None:
        cone = parse_config(_minimal(indenter={"kind": "cone", "angle": math.pi / 4})).indenter
        paraboloid = parse_config(_minimal(indenter={"kind": "paraboloid", "R": 2.0})).indenter
        punch = parse_config(_minimal(indenter={"kind": "flatpunch", "radius": 0.1})).indenter
        hemi = parse_config(_minimal(indenter={"kind": "hemisphere", "R": 0.5})).indenter
        assert cone.shape().lam == 1.0
        assert paraboloid.shape() == PowerLawShape.paraboloid(2.0)
        assert punch.shape() == FlatPunch(0.1)
        assert hemi.shape() is None

    def test_missing_parameter(self) -> None:
        with pytest.raises(ConfigError, match="needs R"):
            parse_config(_minimal(indenter={"kind": "hemisphere"}))

    def test_parameter_for_other_kind(self) -> None:
        with pytest.raises(ConfigError, match="does not take"):
            parse_config(_minimal(indenter={"kind": "cone", "angle": 0.5, "R": 1.0}))

    def test_unknown_kind(self) -> None:
        with pytest.raises(ConfigError, match="indenter.kind"):
            parse_config(_minimal(indenter={"kind": "pyramid"}))

    @pytest.mark.parametrize(
        "indenter",
        [
            {"kind": "powerlaw", "lambda": 0.5, "A": 1.0},
            {"kind": "cone", "angle": 2.0},
            {"kind": "paraboloid", "R": -1.0},
        ],
    )
    def test_out_of_range(self, indenter: dict) -> None:
        with pytest.raises(ConfigError):
            parse_config(_minimal(indenter=indenter))


# --- sweep ---


class TestSweepBlock:
    def test_linear_values(self) -> None:
        cfg = parse_config(_minimal(sweep={"variable": "w", "min": 0.1, "max": 0.5, "count": 5}))
        np.testing.assert_allclose(cfg.sweep.values(), [0.1, 0.2, 0.3, 0.4, 0.5])

    def test_log_values(self) -> None:
        sweep = {"variable": "P", "min": 1e-3, "max": 1e-1, "count": 3, "spacing": "log"}
        cfg = parse_config(_minimal(sweep=sweep))
        np.testing.assert_allclose(cfg.sweep.values(), [1e-3, 1e-2, 1e-1], rtol=1e-14)

    def test_single_point(self) -> None:
        cfg = parse_config(_minimal(sweep={"variable": "a", "min": 0.2, "max": 0.2, "count": 1}))
        assert list(cfg.sweep.values()) == [0.2]

    def test_reversed_range(self) -> None:
        with pytest.raises(ConfigError, match="below max"):
            parse_config(_minimal(sweep={"variable": "a", "min": 0.5, "max": 0.1}))

    def test_nonpositive_min(self) -> None:
        with pytest.raises(ConfigError, match="positive"):
            parse_config(_minimal(sweep={"variable": "a", "min": 0.0, "max": 0.1}))

    def test_unknown_variable(self) -> None:
        with pytest.raises(ConfigError, match="sweep.variable"):
            parse_config(_minimal(sweep={"variable": "eps", "min": 0.1, "max": 0.2}))

    def test_zero_count(self) -> None:
        with pytest.raises(ConfigError, match="count"):
            parse_config(_minimal(sweep={"variable": "a", "min": 0.1, "max": 0.2, "count": 0}))

    def test_config_error_is_value_error(self) -> None:
        with pytest.raises(ValueError):
            parse_config(_minimal(sweep={"variable": "a", "min": 0.1, "max": 0.2, "count": 0}))
