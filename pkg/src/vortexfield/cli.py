"""Command-line interface: minimize, landscape, field, verify.

Outputs are flat files (JSON summaries, CSV tables, optional static
SVG); every artifact embeds the fully resolved configuration so runs
are reproducible from their own output.  Numbers are written with
shortest round-trip formatting, so identical configurations produce
byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .canonical import VortexConfig
from .errors import ConvergenceError
from .geom import ConformalDomain
from .micromag import ExternalField, SampleSpec, magnetization_field, total_energy
from .optimize import NelderMeadOptions, energy_objective, landscape, nelder_mead
from .poisson import GridSpec
from .svgplot import heatmap_svg, quiver_svg
from .verify import run_checks

TWO_PI = 2.0 * np.pi


@dataclass
class RunConfig:
    domain: str = "disk"
    c: float = 0.2
    h: tuple = (0.0, 0.0)
    s: tuple = None
    s0: tuple = (0.5, 2.5)
    grid: tuple = (128, 256)
    landscape_n: int = 64
    tol: float = 1e-9
    max_iter: int = 50
    max_evals: int = 500
    w0_nodes: int = 2048
    samples: tuple = (16, 48)
    jitter: float = 0.0
    seed: int = 0
    out: str = "."
    svg: bool = False
    auto_min: bool = False
    only: str = ""

    def conformal_domain(self) -> ConformalDomain:
        if self.domain == "disk":
            return ConformalDomain.disk()
        return ConformalDomain.oval(self.c)

    def external_field(self) -> ExternalField:
        # the strong-field oval experiments exceed the default smallness
        # bound; trust an explicitly requested field and keep diagnostics
        norm = float(np.hypot(self.h[0], self.h[1]))
        return ExternalField(self.h, h_max=max(0.5, norm))

    def grid_spec(self) -> GridSpec:
        return GridSpec(self.grid[0], self.grid[1])

    def validate(self) -> None:
        if self.domain not in ("disk", "oval"):
            raise ValueError(f"unknown domain {self.domain!r}")
        self.conformal_domain()
        self.external_field()
        self.grid_spec()
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1 or self.max_evals < 3:
            raise ValueError("iteration budgets must be positive")
        if self.landscape_n < 16:
            raise ValueError("landscape resolution must be at least 16")
        if self.w0_nodes < 64 or self.w0_nodes & (self.w0_nodes - 1):
            raise ValueError("w0 nodes must be a power of two, at least 64")
        if self.s is not None:
            sep = abs(self.s[0] - self.s[1]) % TWO_PI
            if min(sep, TWO_PI - sep) < 1e-9:
                raise ValueError("vortex angles coincide (degenerate configuration)")


def _pair(text: str) -> tuple:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected two comma-separated values, got {text!r}")
    return (float(parts[0]), float(parts[1]))


def _int_pair(text: str) -> tuple:
    a, b = _pair(text)
    return (int(a), int(b))


def _json_safe(obj):
    if isinstance(obj, float):
        if np.isnan(obj):
            raise ValueError("refusing to emit NaN")
        if np.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    return obj


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(_json_safe(payload), indent=2, sort_keys=True) + "\n")


def _minimize_run(config: RunConfig):
    domain = config.conformal_domain()
    field = config.external_field()
    grid = config.grid_spec()
    objective = energy_objective(domain, field, grid, config.w0_nodes)
    opts = NelderMeadOptions(max_evals=config.max_evals)
    return nelder_mead(objective, config.s0, opts)


def cmd_minimize(config: RunConfig) -> int:
    result = _minimize_run(config)
    domain = config.conformal_domain()
    breakdown = total_energy(domain, VortexConfig.pair(*result.s_min),
                             config.external_field(), config.grid_spec(),
                             w0_nodes=config.w0_nodes, tol=config.tol,
                             max_iter=config.max_iter)
    positions = domain.forward(np.exp(1j * np.asarray(result.s_min)))
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_json(out / "summary.json", {
        "command": "minimize",
        "config": asdict(config),
        "converged": result.converged,
        "evaluations": result.evaluations,
        "s_min": list(result.s_min),
        "vortex_positions": [[float(p.real), float(p.imag)] for p in positions],
        "w0": breakdown.w0,
        "v_ext": breakdown.v_ext,
        "total": breakdown.total,
        "solver": breakdown.diagnostics,
        "optimizer": {
            "operations": result.state.operations,
            "best_history": result.state.best_history,
        },
    })
    return 0 if result.converged else 2


def cmd_landscape(config: RunConfig) -> int:
    scan = landscape(config.conformal_domain(), config.external_field(),
                     config.landscape_n, config.grid_spec(), config.w0_nodes)
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    n = scan.n
    lines = ["s1,s2,W"]
    for i in range(n):
        for j in range(n):
            lines.append(
                f"{scan.angle(i)!r},{scan.angle(j)!r},{float(scan.energies[i, j])!r}")
    (out / "landscape.csv").write_text("\n".join(lines) + "\n")
    _write_json(out / "landscape_summary.json", {
        "command": "landscape",
        "config": asdict(config),
        "min_index": list(scan.min_index),
        "min_s": [scan.angle(scan.min_index[0]), scan.angle(scan.min_index[1])],
        "min_value": scan.min_value,
        "failures": scan.failures,
    })
    if config.svg:
        (out / "landscape.svg").write_text(heatmap_svg(scan.energies))
    return 0


def cmd_field(config: RunConfig) -> int:
    if config.s is None and not config.auto_min:
        print("field requires --s s1,s2 or --auto-min", file=sys.stderr)
        return 1
    if config.s is not None:
        s = config.s
    else:
        result = _minimize_run(config)
        if not result.converged:
            print("auto-min did not converge within the evaluation budget",
                  file=sys.stderr)
            return 2
        s = result.s_min
    domain = config.conformal_domain()
    sample = SampleSpec(n_r=config.samples[0], n_t=config.samples[1],
                        jitter=config.jitter, seed=config.seed)
    field_out = magnetization_field(domain, VortexConfig.pair(*s),
                                    config.external_field(), config.grid_spec(),
                                    sample, tol=config.tol,
                                    max_iter=config.max_iter)
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    lines = ["x,y,mx,my"]
    for smp in field_out.samples:
        lines.append(f"{smp.x!r},{smp.y!r},{smp.mx!r},{smp.my!r}")
    (out / "field.csv").write_text("\n".join(lines) + "\n")
    _write_json(out / "field_summary.json", {
        "command": "field",
        "config": asdict(config),
        "s": list(s),
        "samples": len(field_out.samples),
        "skipped": field_out.skipped,
        "vortex_positions": [[v.real, v.imag] for v in field_out.vortex_positions],
    })
    if config.svg:
        boundary = domain.boundary_point(np.linspace(0.0, TWO_PI, 257))
        (out / "field.svg").write_text(
            quiver_svg(field_out.samples, field_out.vortex_positions, boundary))
    return 0


def cmd_verify(config: RunConfig) -> int:
    results = run_checks(only=config.only)
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status} {r.name}: {r.detail}")
    all_passed = all(r.passed for r in results) and bool(results)
    _write_json(out / "verify_report.json", {
        "command": "verify",
        "config": asdict(config),
        "all_passed": all_passed,
        "checks": [
            {"name": r.name, "tags": list(r.tags), "passed": r.passed,
             "measured": r.measured, "detail": r.detail}
            for r in results
        ],
    })
    return 0 if all_passed else 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vortexfield",
        description="Boundary-vortex positions and magnetization fields in "
                    "thin ferromagnetic films (unit disk and conformal ovals).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--domain", choices=("disk", "oval"), default="disk")
        p.add_argument("--c", type=float, default=0.2,
                       help="conformal coefficient of the oval family")
        p.add_argument("--h", type=_pair, default=(0.0, 0.0), metavar="H1,H2",
                       help="external field components")
        p.add_argument("--grid", type=_int_pair, default=(128, 256), metavar="NR,NT",
                       help="solver grid (radial, angular)")
        p.add_argument("--tol", type=float, default=1e-9,
                       help="fixed-point stopping tolerance (max-norm)")
        p.add_argument("--max-iter", type=int, default=50,
                       help="fixed-point iteration budget")
        p.add_argument("--w0-nodes", type=int, default=2048,
                       help="boundary quadrature nodes (power of two)")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--svg", action="store_true", help="emit static SVG plots")

    p_min = sub.add_parser("minimize", help="minimize the renormalized energy")
    common(p_min)
    p_min.add_argument("--s0", type=_pair, default=(0.5, 2.5), metavar="S1,S2",
                       help="initial angle pair for the simplex search")
    p_min.add_argument("--max-evals", type=int, default=500,
                       help="objective evaluation budget")

    p_land = sub.add_parser("landscape", help="scan the energy over angle pairs")
    common(p_land)
    p_land.add_argument("--landscape-n", type=int, default=64, metavar="N",
                        help="grid resolution per angle")

    p_field = sub.add_parser("field", help="sample the magnetization vector field")
    common(p_field)
    p_field.add_argument("--s", type=_pair, default=None, metavar="S1,S2",
                         help="vortex angles (skip the minimization)")
    p_field.add_argument("--s0", type=_pair, default=(0.5, 2.5), metavar="S1,S2")
    p_field.add_argument("--max-evals", type=int, default=500)
    p_field.add_argument("--auto-min", action="store_true",
                         help="locate vortices by minimization first")
    p_field.add_argument("--samples", type=_int_pair, default=(16, 48),
                         metavar="NR,NT", help="sample lattice resolution")
    p_field.add_argument("--jitter", type=float, default=0.0,
                         help="sample jitter as a fraction of one cell")
    p_field.add_argument("--seed", type=int, default=0,
                         help="random seed for sample jitter")

    p_ver = sub.add_parser("verify", help="run the cross-validation suite")
    common(p_ver)
    p_ver.add_argument("--only", default="", metavar="CHECK-SET",
                       help="restrict to checks matching this name or tag")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    config = RunConfig()
    for key in vars(config):
        if hasattr(args, key):
            setattr(config, key, getattr(args, key))
    config.validate()
    return config


COMMANDS = {
    "minimize": cmd_minimize,
    "landscape": cmd_landscape,
    "field": cmd_field,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
    except ValueError as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return 1
    try:
        return COMMANDS[args.command](config)
    except ConvergenceError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"output failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
