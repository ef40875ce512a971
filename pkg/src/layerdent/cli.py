"""CLI entry-point for layerdent."""

from __future__ import annotations

import argparse
import logging
import math
import pathlib
import sys
import warnings
from collections.abc import Callable
from typing import Any

from layerdent import checks, hemisphere, powerlaw
from layerdent.config import DEFAULT_PATH, RunConfig, load_config
from layerdent.errors import ConfigError, LayerdentError, NoBracket, SmallContactWarning
from layerdent.kernel import (
    AsymptoticConstants,
    Kernel,
    asymptotic_constants,
    build_kernel,
)
from layerdent.materials import IsotropicConstants, LayerSystem, MaterialParams
from layerdent.oracle import bracket_invert
from layerdent.output import write_table

logger = logging.getLogger(__name__)

EXIT_VALIDATION = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

_CURVE_COLUMNS = ("a", "w", "P", "eps", "varpi", "kappa", "dPdw", "valid")
_HEMI_LO = 1e-12
_HEMI_HI = 1 - 1e-6

Row = dict[str, Any]
Table = tuple[list[str], list[Row]]


def _parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--config", type=pathlib.Path, default=DEFAULT_PATH, help="TOML run configuration",
    )
    common.add_argument("--out", type=pathlib.Path, metavar="PATH", help="Write results here")
    common.add_argument("--format", choices=("csv", "json"), help="Output format")
    common.add_argument("--tol", type=float, help="Quadrature tolerance for the kernel constants")
    common.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG",
    )

    parser = argparse.ArgumentParser(
        description="Indentation of a bonded elastic layer: asymptotic force-displacement relations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("coeffs", parents=[common], help="Asymptotic constants and material parameters")
    sub.add_parser("curve", parents=[common], help="Force-displacement curve over the sweep")
    sub.add_parser("invert", parents=[common], help="Closed-form vs numerical force inversion")
    sub.add_parser("stiffness", parents=[common], help="Incremental stiffness over the sweep")
    sub.add_parser("validate", parents=[common], help="Run the self-consistency checks")
    return parser.parse_args(argv)


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(
        level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s", force=True,
    )
    logging.captureWarnings(True)


def _constants(
    cfg: RunConfig, system: LayerSystem, tol: float,
) -> tuple[Kernel | None, AsymptoticConstants]:
    """Kernel and its moment constants, or the configured override without a kernel."""
    if cfg.kernel.has_override:
        logger.info("using configured a0=%g a1=%g", cfg.kernel.a0, cfg.kernel.a1)
        return None, AsymptoticConstants.from_values((cfg.kernel.a0, cfg.kernel.a1))  # type: ignore[arg-type]
    kernel = build_kernel(system, cfg.kernel.isotropic_coeffs)
    consts = asymptotic_constants(kernel, cfg.kernel.order, tol=tol)
    logger.info("a0=%.12g a1=%.12g", consts.a0, consts.a1)
    return kernel, consts


# --- curve rows ---


def _failed_row(variable: str, value: float, exc: Exception) -> Row:
    logger.warning("%s=%g: %s", variable, value, exc)
    row: Row = {col: math.nan for col in _CURVE_COLUMNS}
    row.update({variable: value, "valid": False})
    return row


def _finish_row(
    variable: str, value: float, a: float, w: float, P: float, varpi: float, kappa: float,
    system: LayerSystem, consts: AsymptoticConstants,
) -> Row:
    eps = a / system.h
    return {
        variable: value,
        "a": a,
        "w": w,
        "P": P,
        "eps": eps,
        "varpi": varpi,
        "kappa": kappa,
        "dPdw": 4 * system.theta * a * powerlaw.kappa(math.inf, eps, consts),
        "valid": eps <= powerlaw.VALIDITY_EPS,
    }


def _powerlaw_row(
    variable: str, value: float, shape: powerlaw.PowerLawShape,
    system: LayerSystem, consts: AsymptoticConstants,
) -> Row:
    if variable == "a":
        state = powerlaw.parametric_state(value, shape, system, consts)
        a, w, P = value, state.w, state.P
    elif variable == "w":
        a = powerlaw.radius_from_displacement(value, shape, system, consts)
        w, P = value, powerlaw.force_from_displacement(value, shape, system, consts)
    else:
        a = powerlaw.radius_from_force(value, shape, system, consts)
        w, P = powerlaw.displacement_from_force(value, shape, system, consts), value
    F2 = powerlaw.shape_factors(shape.lam).F2
    varpi = (w / (shape.A * F2)) ** (1 / shape.lam) / system.h if w > 0 else math.nan
    kappa = powerlaw.kappa(shape.lam, a / system.h, consts)
    return _finish_row(variable, value, a, w, P, varpi, kappa, system, consts)


def _hemisphere_row(
    variable: str, value: float, R: float, system: LayerSystem, consts: AsymptoticConstants,
    root_tol: float,
) -> Row:
    mu = R / system.h
    theta = system.theta
    if variable == "a":
        a = value
        P, w = hemisphere.hemi_parametric(value / R, mu, theta, R, consts)
    elif variable == "P":
        state = hemisphere.hemisphere_from_force(value, theta, R, mu, consts, tol=root_tol)
        a, w, P = state.a, state.w, value
    else:
        alpha = bracket_invert(
            lambda x: hemisphere.hemi_parametric(x, mu, theta, R, consts)[1],
            value, _HEMI_LO, _HEMI_HI, tol=root_tol,
        )
        P, w = hemisphere.hemi_parametric(alpha, mu, theta, R, consts)
        a = alpha * R
    kappa = powerlaw.kappa(math.inf, a / system.h, consts)
    return _finish_row(variable, value, a, w, P, math.nan, kappa, system, consts)


def _flatpunch_row(
    variable: str, value: float, punch: powerlaw.FlatPunch,
    system: LayerSystem, consts: AsymptoticConstants,
) -> Row:
    a = punch.radius
    kappa = powerlaw.kappa(math.inf, a / system.h, consts)
    if variable == "w":
        w, P = value, powerlaw.flat_punch_force(a, value, system, consts)
    else:
        w, P = value / (4 * system.theta * a * kappa), value
    return _finish_row(variable, value, a, w, P, math.nan, kappa, system, consts)


def _row_builder(
    cfg: RunConfig, system: LayerSystem, consts: AsymptoticConstants,
) -> Callable[[str, float], Row]:
    if cfg.indenter is None or cfg.sweep is None:
        raise ConfigError("this command needs [indenter] and [sweep] sections")
    indenter = cfg.indenter
    shape = indenter.shape()
    if isinstance(shape, powerlaw.FlatPunch):
        if cfg.sweep.variable == "a":
            raise ConfigError("sweep.variable: a flat punch has a fixed radius; sweep w or P")
        return lambda var, v: _flatpunch_row(var, v, shape, system, consts)
    if shape is None:
        root_tol = cfg.tolerances.root_tol
        return lambda var, v: _hemisphere_row(var, v, indenter.R, system, consts, root_tol)  # type: ignore[arg-type]
    return lambda var, v: _powerlaw_row(var, v, shape, system, consts)


def _sweep_rows(
    cfg: RunConfig, system: LayerSystem, consts: AsymptoticConstants,
) -> tuple[str, list[Row]]:
    build = _row_builder(cfg, system, consts)
    assert cfg.sweep is not None
    variable = cfg.sweep.variable
    rows = []
    for value in cfg.sweep.values():
        try:
            rows.append(build(variable, float(value)))
        except (ValueError, NoBracket) as exc:
            rows.append(_failed_row(variable, float(value), exc))
    return variable, rows


# --- commands ---


def cmd_coeffs(cfg: RunConfig, system: LayerSystem, consts: AsymptoticConstants) -> Table:
    rows: list[Row] = [
        {"quantity": "theta", "value": system.theta},
        {"quantity": "h", "value": system.h},
    ]
    for m, value in enumerate(consts.a):
        rows.append({"quantity": f"a{m}", "value": value})
    rows += [{"quantity": "K0", "value": consts.K0}, {"quantity": "K1", "value": consts.K1}]
    for m, err in enumerate(consts.errors):
        rows.append({"quantity": f"a{m}_error", "value": err})
    for role, material in (("layer", system.layer), ("substrate", system.substrate)):
        if isinstance(material, MaterialParams):
            rows += [
                {"quantity": f"{role}_gamma1", "value": material.gamma1},
                {"quantity": f"{role}_gamma2", "value": material.gamma2},
                {"quantity": f"{role}_m1", "value": material.m1},
            ]
        elif isinstance(material, IsotropicConstants):
            rows.append({"quantity": f"{role}_theta", "value": material.theta})
    return ["quantity", "value"], rows


def cmd_curve(cfg: RunConfig, system: LayerSystem, consts: AsymptoticConstants) -> Table:
    variable, rows = _sweep_rows(cfg, system, consts)
    return [variable, *(c for c in _CURVE_COLUMNS if c != variable)], rows


def cmd_stiffness(cfg: RunConfig, system: LayerSystem, consts: AsymptoticConstants) -> Table:
    variable, curve = _sweep_rows(cfg, system, consts)
    rows = []
    for row in curve:
        a = row["a"]
        if math.isnan(a):
            rows.append({variable: row[variable], "valid": False})
            continue
        area = math.pi * a * a
        rows.append({
            variable: row[variable],
            "a": a,
            "area": area,
            "kappa": powerlaw.kappa(math.inf, a / system.h, consts),
            "dPdw": powerlaw.bash_stiffness(area, system, consts),
            "dPdw_halfspace": 4 * system.theta * a,
            "valid": row["valid"],
        })
    columns = [variable, *(c for c in ("a", "area", "kappa", "dPdw", "dPdw_halfspace", "valid") if c != variable)]
    return columns, rows


def _powerlaw_force_limit(shape: powerlaw.PowerLawShape, system: LayerSystem, consts: AsymptoticConstants) -> float:
    """Largest contact radius on which the parametric force is still increasing."""
    _, k = powerlaw.scaled_constants(consts.a0, consts.a1)
    eps = 1.0
    if k > 0:
        eps = min(eps, 0.9 * ((shape.lam + 1) / ((shape.lam + 4) * k)) ** (1 / 3))
    return eps * system.h


def _invert_row(cfg: RunConfig, P: float, system: LayerSystem, consts: AsymptoticConstants) -> Row:
    assert cfg.indenter is not None
    shape = cfg.indenter.shape()
    root_tol = cfg.tolerances.root_tol
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SmallContactWarning)
        if shape is None:
            R = cfg.indenter.R
            assert R is not None
            mu = R / system.h
            state = hemisphere.hemisphere_from_force(P, system.theta, R, mu, consts, tol=root_tol)
            a_closed, w_closed = state.a, state.w
            alpha = bracket_invert(
                lambda x: hemisphere.hemi_parametric(x, mu, system.theta, R, consts)[0],
                P, _HEMI_LO, _HEMI_HI, tol=root_tol,
            )
            a_num = alpha * R
            w_num = hemisphere.hemi_parametric(alpha, mu, system.theta, R, consts)[1]
        else:
            assert isinstance(shape, powerlaw.PowerLawShape)
            a_closed = powerlaw.radius_from_force(P, shape, system, consts)
            w_closed = powerlaw.displacement_from_force(P, shape, system, consts)
            a_num = bracket_invert(
                lambda a: powerlaw.parametric_state(a, shape, system, consts).P,
                P, 1e-12 * system.h, _powerlaw_force_limit(shape, system, consts), tol=root_tol,
            )
            w_num = powerlaw.parametric_state(a_num, shape, system, consts).w
    return {
        "P": P,
        "a_closed": a_closed,
        "a_numeric": a_num,
        "w_closed": w_closed,
        "w_numeric": w_num,
        "rel_diff": abs(w_closed - w_num) / abs(w_num),
    }


def cmd_invert(cfg: RunConfig, system: LayerSystem, consts: AsymptoticConstants) -> Table:
    if cfg.indenter is None or cfg.sweep is None:
        raise ConfigError("invert needs [indenter] and [sweep] sections")
    if cfg.sweep.variable != "P":
        raise ConfigError("sweep.variable: invert sweeps the force; set it to 'P'")
    if cfg.indenter.kind == "flatpunch":
        raise ConfigError("indenter.kind: flat punch force is linear in w; nothing to invert")
    columns = ["P", "a_closed", "a_numeric", "w_closed", "w_numeric", "rel_diff"]
    rows = []
    for P in cfg.sweep.values():
        try:
            rows.append(_invert_row(cfg, float(P), system, consts))
        except (ValueError, NoBracket) as exc:
            logger.warning("P=%g: %s", P, exc)
            rows.append({"P": float(P)})
    return columns, rows


def cmd_validate(
    cfg: RunConfig, system: LayerSystem, kernel: Kernel | None, consts: AsymptoticConstants,
) -> tuple[Table, bool]:
    shapes = []
    radius = None
    if cfg.indenter is not None:
        shape = cfg.indenter.shape()
        if isinstance(shape, powerlaw.PowerLawShape):
            shapes.append(shape)
        elif cfg.indenter.kind == "hemisphere":
            radius = cfg.indenter.R
    results = checks.run_checks(
        system, kernel, consts,
        shapes=shapes,
        hemisphere_radius=radius,
        root_tol=cfg.tolerances.root_tol,
    )
    rows = [{"check": r.name, "passed": r.passed, "detail": r.detail} for r in results]
    return (["check", "passed", "detail"], rows), all(r.passed for r in results)


def main(argv: list[str] | None = None) -> None:
    args = _parse_args(argv)
    _configure_logging(args.verbose)

    try:
        cfg = load_config(args.config)
        tol = args.tol if args.tol is not None else cfg.tolerances.quad_tol
        system = cfg.layer_system()
        kernel, consts = _constants(cfg, system, tol)
        passed = True
        if args.command == "coeffs":
            columns, rows = cmd_coeffs(cfg, system, consts)
        elif args.command == "curve":
            columns, rows = cmd_curve(cfg, system, consts)
        elif args.command == "invert":
            columns, rows = cmd_invert(cfg, system, consts)
        elif args.command == "stiffness":
            columns, rows = cmd_stiffness(cfg, system, consts)
        else:
            (columns, rows), passed = cmd_validate(cfg, system, kernel, consts)
    except (ConfigError, ValueError) as exc:
        print(f"Configuration error: {exc}", file=sys.stderr)
        sys.exit(EXIT_CONFIG)
    except (LayerdentError, ArithmeticError) as exc:
        print(f"Numerical failure: {exc}", file=sys.stderr)
        sys.exit(EXIT_NUMERIC)

    try:
        write_table(
            columns, rows, args.format or cfg.output.format, args.out or cfg.output.path,
        )
    except OSError as exc:
        print(f"Cannot write output: {exc}", file=sys.stderr)
        sys.exit(EXIT_CONFIG)
    if not passed:
        print("Validation failed.", file=sys.stderr)
        sys.exit(EXIT_VALIDATION)
