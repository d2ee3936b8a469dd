"""Cross-validation suite behind the ``verify`` CLI command.

Each check pits one computational path against an independent one:
closed forms against quadrature, the conformal boundary integral against
the disk closed form, the punctured-domain limit against the known
renormalized value, and the Picard fixed point against a descent-method
minimizer.  Checks are cheap enough to run in CI.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field

import numpy as np

from .canonical import VortexConfig
from .geom import ConformalDomain
from .micromag import ExternalField, minimize_g_descent, picard_solve
from .poisson import (GridSpec, LOG_SIN_INTEGRAL, LOG_SIN_SQUARED_INTEGRAL,
                      singular_quadrature_1d)
from .renorm import punctured_energy, w0_conformal, w0_disk

TWO_PI = 2.0 * np.pi


@dataclass
class CheckResult:
    name: str
    tags: tuple
    passed: bool
    measured: dict = dataclass_field(default_factory=dict)
    detail: str = ""


def check_logsin() -> CheckResult:
    v1 = singular_quadrature_1d("log_sin")
    v2 = singular_quadrature_1d("log_sin_squared")
    e1 = abs(v1 - LOG_SIN_INTEGRAL)
    e2 = abs(v2 - LOG_SIN_SQUARED_INTEGRAL)
    return CheckResult(
        name="logsin_integrals", tags=("quadrature",),
        passed=bool(e1 < 1e-6 and e2 < 1e-6),
        measured={"log_sin": v1, "log_sin_error": e1,
                  "log_sin_squared": v2, "log_sin_squared_error": e2},
        detail=f"log-sine integrals vs closed forms, errors {e1:.2e} / {e2:.2e}",
    )


def check_disk_reduction(n_configs: int = 20, nodes: int = 1024) -> CheckResult:
    rng = np.random.default_rng(2024)
    disk = ConformalDomain.disk()
    worst = 0.0
    for _ in range(n_configs):
        s1, s2 = rng.uniform(0.0, TWO_PI, size=2)
        if min(abs(s1 - s2), TWO_PI - abs(s1 - s2)) < 0.2:
            s2 = (s1 + np.pi) % TWO_PI
        config = VortexConfig.pair(s1, s2)
        worst = max(worst, abs(w0_conformal(disk, config, nodes) - w0_disk(config)))
    return CheckResult(
        name="disk_reduction", tags=("quadrature",),
        passed=bool(worst < 1e-6),
        measured={"max_error": worst, "configs": n_configs, "nodes": nodes},
        detail=f"conformal quadrature reduces to the disk closed form, worst {worst:.2e}",
    )


def check_punctured_ladder(grid: GridSpec = None) -> CheckResult:
    """Renormalized limit of the punctured Dirichlet integral.

    The evaluated integral carries the full |grad phi*|^2, whose
    renormalized limit is twice the half-energy closed form; the check
    extrapolates the rho ladder linearly and compares against
    2 * w0_disk.
    """
    grid = grid or GridSpec(128, 256)
    config = VortexConfig.pair(0.0, np.pi)
    rhos = (0.1, 0.05, 0.025)
    seq = [punctured_energy(config, rho, grid) - 2.0 * np.pi * np.log(1.0 / rho)
           for rho in rhos]
    monotone = seq[0] > seq[1] > seq[2]
    extrapolated = 2.0 * seq[2] - seq[1]
    target = 2.0 * w0_disk(config)
    err = abs(extrapolated - target)
    return CheckResult(
        name="punctured_ladder", tags=("punctured",),
        passed=bool(monotone and err < 2e-2),
        measured={"sequence": list(seq), "extrapolated": extrapolated,
                  "target": target, "error": err},
        detail=(f"ladder {['%.4f' % v for v in seq]} extrapolates to "
                f"{extrapolated:.4f} vs {target:.4f}"),
    )


def check_picard_oracle(grid: GridSpec = None) -> CheckResult:
    grid = grid or GridSpec(8, 16)
    config = VortexConfig.pair(0.5, 2.8)
    field = ExternalField((-0.01, 0.0))
    theta_p, report = picard_solve(config, field, grid)
    theta_g, iters, residual = minimize_g_descent(config, field, grid)
    diff = float(np.max(np.abs(theta_p.values - theta_g.values)))
    return CheckResult(
        name="picard_oracle", tags=("oracle",),
        passed=bool(report.converged and diff < 1e-6),
        measured={"max_diff": diff, "picard_iterations": report.iterations,
                  "descent_iterations": iters, "descent_residual": residual},
        detail=f"fixed point vs gradient descent, max-norm gap {diff:.2e}",
    )


ALL_CHECKS = (
    ("logsin_integrals", ("quadrature",), check_logsin),
    ("disk_reduction", ("quadrature",), check_disk_reduction),
    ("punctured_ladder", ("punctured",), check_punctured_ladder),
    ("picard_oracle", ("oracle",), check_picard_oracle),
)


def run_checks(only: str = ""):
    """Run the suite, optionally filtered by check name or tag."""
    results = []
    for name, tags, fn in ALL_CHECKS:
        if only and only not in name and only not in tags:
            continue
        results.append(fn())
    return results
