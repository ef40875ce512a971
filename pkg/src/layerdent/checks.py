"""Self-consistency checks run by ``layerdent validate``.

Each check compares a closed-form relation with an independent numerical
evaluation from :mod:`layerdent.oracle`; order checks halve the small
parameter and look at how fast the discrepancy shrinks.
"""

from __future__ import annotations

import logging
import math
import warnings
from collections.abc import Callable, Iterable
from dataclasses import dataclass

import numpy as np

from layerdent import hemisphere, oracle, powerlaw
from layerdent.errors import LayerdentError, SmallContactWarning
from layerdent.kernel import AsymptoticConstants, Kernel
from layerdent.materials import LayerSystem

logger = logging.getLogger(__name__)

EXACT_LEVEL = 1e-13
ROUNDTRIP_RATIO = (20.0, 45.0)
S0_RATIO = (10.0, 25.0)
S2TILDE_RATIO = (20.0, 45.0)
S4_RATIO = (3.0, 5.0)
ENGLAND_MIN_RATIO = 20.0
DEFAULT_LAMBDAS = (1.0, 1.5, 2.0, 3.0)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _ratio_check(
    name: str, coarse: float, fine: float, bounds: tuple[float, float | None],
) -> CheckResult:
    if coarse < EXACT_LEVEL and fine < EXACT_LEVEL:
        return CheckResult(name, True, f"exact to {max(coarse, fine):.1e}")
    ratio = coarse / fine if fine > 0 else math.inf
    lo, hi = bounds
    passed = ratio >= lo and (hi is None or ratio <= hi)
    span = f"[{lo:g}, {hi:g}]" if hi is not None else f">= {lo:g}"
    return CheckResult(
        name, passed, f"residuals {coarse:.3e} -> {fine:.3e}, ratio {ratio:.2f} (want {span})",
    )


# --- kernel truncations ---


def check_zero_argument(kernel: Kernel, consts: AsymptoticConstants, tol: float) -> CheckResult:
    value = oracle.quad_S0(0.0, 0.0, kernel, tol=tol)
    diff = abs(value - consts.a0)
    limit = 1e-8 * max(1.0, abs(consts.a0))
    return CheckResult("S0(0, 0) = a0", diff <= limit, f"|diff| = {diff:.3e}")


def check_truncations(
    kernel: Kernel, consts: AsymptoticConstants, tol: float,
) -> list[CheckResult]:
    """Two-term truncations of ``S0``, ``S~2``, ``S4`` shrink at their expected orders."""
    a0, a1 = consts.a0, consts.a1

    def errors(point: float) -> tuple[float, float, float]:
        s = a = point
        return (
            abs(oracle.quad_S0(s, a, kernel, tol=tol) - (a0 + a1 * (s * s + 2 * a * a))),
            abs(oracle.quad_S2tilde(s, a, kernel, tol=tol) + 4 / 3 * a1 * a**3),
            abs(oracle.quad_S4(s, a, kernel, tol=tol) - a0 / 3),
        )

    coarse, fine = errors(0.1), errors(0.05)
    return [
        _ratio_check("S0 truncation order", coarse[0], fine[0], S0_RATIO),
        _ratio_check("S~2 truncation order", coarse[1], fine[1], S2TILDE_RATIO),
        _ratio_check("S4 truncation order", coarse[2], fine[2], S4_RATIO),
    ]


# --- power-law round trips ---


def roundtrip_residuals(
    shape: powerlaw.PowerLawShape,
    system: LayerSystem,
    consts: AsymptoticConstants,
    eps: float,
    inverse_consts: AsymptoticConstants | None = None,
) -> tuple[float, float]:
    """Relative ``w -> a -> w`` and ``w -> P -> w`` residuals at ``a = eps h``.

    *inverse_consts* feeds the closed inversions; it defaults to *consts*.
    """
    inv = inverse_consts or consts
    w_star = powerlaw.parametric_state(eps * system.h, shape, system, consts).w
    a = powerlaw.radius_from_displacement(w_star, shape, system, inv)
    w_radius = powerlaw.parametric_state(a, shape, system, consts).w
    P = powerlaw.force_from_displacement(w_star, shape, system, inv)
    w_force = powerlaw.displacement_from_force(P, shape, system, inv)
    return abs(w_radius - w_star) / w_star, abs(w_force - w_star) / w_star


def check_roundtrips(
    shape: powerlaw.PowerLawShape,
    system: LayerSystem,
    consts: AsymptoticConstants,
    inverse_consts: AsymptoticConstants | None = None,
) -> list[CheckResult]:
    coarse = roundtrip_residuals(shape, system, consts, 0.1, inverse_consts)
    fine = roundtrip_residuals(shape, system, consts, 0.05, inverse_consts)
    tag = f"lambda={shape.lam:g}"
    return [
        _ratio_check(f"w->a->w order ({tag})", coarse[0], fine[0], ROUNDTRIP_RATIO),
        _ratio_check(f"w->P->w order ({tag})", coarse[1], fine[1], ROUNDTRIP_RATIO),
    ]


def check_stiffness(
    shape: powerlaw.PowerLawShape, system: LayerSystem, consts: AsymptoticConstants,
) -> CheckResult:
    a = 0.1 * system.h

    def curve(x: float) -> tuple[float, float]:
        state = powerlaw.parametric_state(x, shape, system, consts)
        return state.P, state.w

    numeric = oracle.finite_diff_stiffness(curve, a, 1e-3 * a)
    closed = powerlaw.stiffness_rational(a, shape, system, consts)
    rel = abs(numeric - closed) / abs(closed)
    return CheckResult(
        f"dP/dw vs finite difference (lambda={shape.lam:g})", rel <= 1e-7, f"rel diff {rel:.3e}",
    )


def check_general_shape(
    shape: powerlaw.PowerLawShape, system: LayerSystem, consts: AsymptoticConstants,
) -> CheckResult:
    profile = oracle.power_law_profile(shape.lam, shape.A)
    worst = 0.0
    for eps in (0.05, 0.2):
        a = eps * system.h
        P, w = oracle.exact_general_relations(a, profile, system, consts)
        state = powerlaw.parametric_state(a, shape, system, consts)
        worst = max(worst, abs(P - state.P) / abs(state.P), abs(w - state.w) / abs(state.w))
    return CheckResult(
        f"general-shape quadrature (lambda={shape.lam:g})", worst <= 1e-9, f"max rel diff {worst:.3e}",
    )


# --- hemisphere ---


def check_alpha0_residuals(tol: float = 1e-12) -> CheckResult:
    worst = 0.0
    for target in np.geomspace(1e-4, 2.0, 9):
        root = hemisphere.alpha0_from_force(float(target), 1.0, 1.0, tol=tol)
        shape_value = hemisphere.hemi_shape_integrals(root)[1] * 4
        worst = max(worst, abs(shape_value - target) / max(1.0, target))
    return CheckResult("hemisphere root residual", bool(worst <= tol), f"max residual {worst:.3e}")


def check_hemisphere_general_shape(
    R: float, system: LayerSystem, consts: AsymptoticConstants,
) -> CheckResult:
    profile = oracle.hemisphere_profile(R)
    mu = R / system.h
    worst = 0.0
    for alpha in (0.1, 0.5, 0.9):
        P, w = oracle.exact_general_relations(alpha * R, profile, system, consts)
        P_h, w_h = hemisphere.hemi_parametric(alpha, mu, system.theta, R, consts)
        worst = max(worst, abs(P - P_h) / abs(P_h), abs(w - w_h) / abs(w_h))
    return CheckResult("hemisphere identities", worst <= 1e-9, f"max rel diff {worst:.3e}")


def england_residual(alpha: float, mu: float, consts: AsymptoticConstants) -> float:
    """Relative displacement error of the ``mu`` expansion at the force of contact ratio *alpha*."""
    P, w_exact = hemisphere.hemi_parametric(alpha, mu, 1.0, 1.0, consts)
    state = hemisphere.hemisphere_from_force(P, 1.0, 1.0, mu, consts)
    return abs(state.w - w_exact) / w_exact


def check_england_order(consts: AsymptoticConstants, alpha: float = 0.3) -> CheckResult:
    return _ratio_check(
        "England expansion order",
        england_residual(alpha, 0.2, consts),
        england_residual(alpha, 0.1, consts),
        (ENGLAND_MIN_RATIO, None),
    )


# --- suite ---


def _guarded(name: str, check: Callable[[], CheckResult | list[CheckResult]]) -> list[CheckResult]:
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", SmallContactWarning)
            result = check()
    except LayerdentError as exc:
        logger.info("check %s raised %s", name, exc)
        return [CheckResult(name, False, f"{type(exc).__name__}: {exc}")]
    return result if isinstance(result, list) else [result]


def run_checks(
    system: LayerSystem,
    kernel: Kernel | None,
    consts: AsymptoticConstants,
    *,
    shapes: Iterable[powerlaw.PowerLawShape] = (),
    hemisphere_radius: float | None = None,
    tol: float = 1e-12,
    root_tol: float = 1e-12,
) -> list[CheckResult]:
    """Run every applicable check; *kernel* is ``None`` when the constants were given directly.

    *tol* is the quadrature tolerance, *root_tol* the residual allowed at a root.
    """
    shapes = list(shapes) or [powerlaw.PowerLawShape(lam, 1.0) for lam in DEFAULT_LAMBDAS]
    results: list[CheckResult] = []
    if kernel is not None:
        results += _guarded("S0(0, 0) = a0", lambda: check_zero_argument(kernel, consts, tol))
        results += _guarded("truncations", lambda: check_truncations(kernel, consts, tol))
    for shape in shapes:
        results += _guarded("round trips", lambda s=shape: check_roundtrips(s, system, consts))
        results += _guarded("stiffness", lambda s=shape: check_stiffness(s, system, consts))
        results += _guarded("general shape", lambda s=shape: check_general_shape(s, system, consts))
    radius = hemisphere_radius if hemisphere_radius is not None else 0.2 * system.h
    results += _guarded("hemisphere roots", lambda: check_alpha0_residuals(root_tol))
    results += _guarded(
        "hemisphere identities", lambda: check_hemisphere_general_shape(radius, system, consts),
    )
    results += _guarded("England order", lambda: check_england_order(consts))
    for r in results:
        logger.info("%s: %s (%s)", r.name, "ok" if r.passed else "FAILED", r.detail)
    return results


def corrupt(consts: AsymptoticConstants, delta_a1: float) -> AsymptoticConstants:
    """Copy of *consts* with ``a1`` shifted; used to confirm the order checks can fail."""
    return AsymptoticConstants.from_values(
        (consts.a0, consts.a1 + delta_a1, *consts.a[2:]), consts.errors,
    )
