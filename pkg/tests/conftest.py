"""Shared test fixtures."""

import pytest

from layerdent.kernel import AsymptoticConstants, KernelModel, asymptotic_constants, build_kernel_ti
from layerdent.materials import LayerSystem, build_layer_system

from helpers import LAYER, SUBSTRATE


@pytest.fixture(scope="session")
def ti_system() -> LayerSystem:
    return build_layer_system(LAYER, SUBSTRATE, 1.0)


@pytest.fixture(scope="session")
def ti_kernel(ti_system: LayerSystem) -> KernelModel:
    return build_kernel_ti(ti_system)


@pytest.fixture(scope="session")
def ti_constants(ti_kernel: KernelModel) -> AsymptoticConstants:
    return asymptotic_constants(ti_kernel, order=1)
