"""Minimization of the renormalized energy over vortex angles.

The search space is the two-torus of angle pairs (s_1, s_2).  A
Nelder-Mead simplex (reflect 1, expand 2, contract 1/2, shrink 1/2,
matching the classic fminsearch coefficients) drives the local search;
an exhaustive grid scan with one local refinement acts as the
brute-force oracle.  All simplex arithmetic happens in the minimal-image
chart centered at the current best vertex, so centroids and shrinks
never tear across the 0 / 2 pi seam; stored and reported angles are
always wrapped to [0, 2 pi).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dataclass_field

import numpy as np

from .canonical import VortexConfig
from .errors import ConvergenceError
from .geom import ConformalDomain
from .micromag import ExternalField, total_energy
from .poisson import GridSpec

TWO_PI = 2.0 * np.pi


def _wrap(s: np.ndarray) -> np.ndarray:
    return np.mod(s, TWO_PI)


def _torus_dist(a: np.ndarray, b: np.ndarray) -> float:
    d = np.abs(np.asarray(a) - np.asarray(b)) % TWO_PI
    return float(np.max(np.minimum(d, TWO_PI - d)))


def _chart(points, center):
    """Represent points in the chart (center - pi, center + pi]^2."""
    return [center + np.mod(p - center + np.pi, TWO_PI) - np.pi for p in points]


@dataclass
class NelderMeadOptions:
    step: float = 0.25          # initial simplex edge, radians
    xtol: float = 1e-6          # torus diameter tolerance
    ftol: float = 1e-6          # value spread tolerance
    max_evals: int = 500


@dataclass
class SimplexState:
    """Snapshot of the simplex trajectory, sorted best-first."""

    vertices: list = dataclass_field(default_factory=list)   # (angles, value)
    operations: dict = dataclass_field(default_factory=lambda: {
        "reflect": 0, "expand": 0, "contract": 0, "shrink": 0})
    best_history: list = dataclass_field(default_factory=list)

    def record(self, points, values):
        order = np.argsort(values, kind="stable")
        self.vertices = [(tuple(points[i]), float(values[i])) for i in order]
        best = float(values[order[0]])
        if not self.best_history or best < self.best_history[-1]:
            self.best_history.append(best)
        else:
            self.best_history.append(self.best_history[-1])


@dataclass
class NelderMeadResult:
    s_min: tuple
    value: float
    converged: bool
    evaluations: int
    state: SimplexState


def nelder_mead(objective, s0, opts: NelderMeadOptions = None) -> NelderMeadResult:
    """Minimize a 2 pi-periodic objective over angle pairs.

    Infinite objective values are legal and always rank worst, so the
    simplex escapes the degenerate diagonal by contraction and shrink.
    Convergence requires both the torus diameter of the simplex and the
    spread of its (finite) values to fall below their tolerances.
    """
    opts = opts or NelderMeadOptions()
    state = SimplexState()

    def f(p):
        return float(objective(_wrap(np.asarray(p, dtype=float))))

    s0 = _wrap(np.asarray(s0, dtype=float))
    points = [s0,
              _wrap(s0 + np.array([opts.step, 0.0])),
              _wrap(s0 + np.array([0.0, opts.step]))]
    values = [f(p) for p in points]
    evals = 3
    state.record(points, values)

    converged = False
    while evals < opts.max_evals:
        order = np.argsort(values, kind="stable")
        points = [points[i] for i in order]
        values = [values[i] for i in order]

        finite = [v for v in values if np.isfinite(v)]
        diam = max(_torus_dist(points[0], points[1]),
                   _torus_dist(points[0], points[2]))
        if (diam < opts.xtol and len(finite) == 3
                and finite[-1] - finite[0] < opts.ftol):
            converged = True
            break

        best, mid, worst = _chart(points, points[0])
        centroid = 0.5 * (best + mid)

        reflected = centroid + 1.0 * (centroid - worst)
        f_r = f(reflected); evals += 1
        if f_r < values[0]:
            expanded = centroid + 2.0 * (centroid - worst)
            f_e = f(expanded); evals += 1
            if f_e < f_r:
                points[2], values[2] = _wrap(expanded), f_e
                state.operations["expand"] += 1
            else:
                points[2], values[2] = _wrap(reflected), f_r
                state.operations["reflect"] += 1
        elif f_r < values[1]:
            points[2], values[2] = _wrap(reflected), f_r
            state.operations["reflect"] += 1
        else:
            if f_r < values[2]:
                contracted = centroid + 0.5 * (reflected - centroid)
            else:
                contracted = centroid + 0.5 * (worst - centroid)
            f_c = f(contracted); evals += 1
            if f_c < min(f_r, values[2]):
                points[2], values[2] = _wrap(contracted), f_c
                state.operations["contract"] += 1
            else:
                for i in (1, 2):
                    shrunk = best + 0.5 * (_chart([points[i]], points[0])[0] - best)
                    points[i] = _wrap(shrunk)
                    values[i] = f(points[i]); evals += 1
                state.operations["shrink"] += 1
        state.record(points, values)

    order = np.argsort(values, kind="stable")
    best_idx = order[0]
    return NelderMeadResult(
        s_min=tuple(_wrap(points[best_idx])),
        value=float(values[best_idx]),
        converged=converged,
        evaluations=evals,
        state=state,
    )


# ----------------------------------------------------------------------
# exhaustive landscape and oracle
# ----------------------------------------------------------------------

def worker_count() -> int:
    """Worker cap from VORTEXFIELD_THREADS; serial by default."""
    env = os.environ.get("VORTEXFIELD_THREADS", "")
    if env.strip():
        return max(1, int(env))
    return 1


def energy_objective(domain: ConformalDomain, field: ExternalField, grid: GridSpec,
                     w0_nodes: int = 2048):
    """Total-energy objective over angle pairs; +inf on degenerate pairs."""

    def objective(s) -> float:
        config = VortexConfig.pair(float(s[0]), float(s[1]))
        if config.is_degenerate:
            return float("inf")
        try:
            return total_energy(domain, config, field, grid,
                                w0_nodes=w0_nodes).total
        except ConvergenceError:
            return float("inf")
    return objective


@dataclass
class LandscapeGrid:
    """Energies on an n x n angle grid with the degenerate band at +inf."""

    n: int
    energies: np.ndarray
    failures: int
    min_index: tuple
    min_value: float

    def angle(self, i: int) -> float:
        return TWO_PI * i / self.n


def landscape(domain: ConformalDomain, field: ExternalField, n: int,
              grid: GridSpec, w0_nodes: int = 2048) -> LandscapeGrid:
    """Evaluate the energy on the n x n grid of angle pairs.

    Cells whose torus separation is below one cell width are marked
    +inf without evaluation (the energy diverges on the diagonal).
    Rows are evaluated independently, optionally by a thread pool; the
    result array is index-addressed, so the output is deterministic
    regardless of scheduling.
    """
    if n < 16:
        raise ValueError("landscape resolution must be at least 16")
    objective = energy_objective(domain, field, grid, w0_nodes)
    energies = np.full((n, n), np.inf)
    failures = np.zeros(n, dtype=int)

    def fill_row(i: int):
        s1 = TWO_PI * i / n
        for j in range(n):
            s2 = TWO_PI * j / n
            sep = abs(s1 - s2) % TWO_PI
            sep = min(sep, TWO_PI - sep)
            if sep < TWO_PI / n:
                continue
            v = objective((s1, s2))
            if not np.isfinite(v):
                failures[i] += 1
            energies[i, j] = v

    workers = worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(fill_row, range(n)))
    else:
        for i in range(n):
            fill_row(i)

    flat = int(np.argmin(energies))  # row-major; lowest index wins ties
    idx = (flat // n, flat % n)
    return LandscapeGrid(n=n, energies=energies, failures=int(failures.sum()),
                         min_index=idx, min_value=float(energies[idx]))


def grid_oracle(domain: ConformalDomain, field: ExternalField, n: int,
                grid: GridSpec, w0_nodes: int = 2048, refine: int = 10):
    """Exhaustive argmin over the landscape, refined once around the winner.

    The refinement rescans a one-coarse-cell neighborhood with a step
    ``refine`` times finer.  Returns ``(s_min, value)``.
    """
    if n < 32:
        raise ValueError("oracle resolution must be at least 32")
    scan = landscape(domain, field, n, grid, w0_nodes)
    i, j = scan.min_index
    s_best = np.array([scan.angle(i), scan.angle(j)])
    v_best = scan.min_value

    objective = energy_objective(domain, field, grid, w0_nodes)
    step = TWO_PI / n / refine
    guard = step  # keep refined probes off the degenerate diagonal
    s_ref = s_best.copy()
    for di in range(-refine, refine + 1):
        for dj in range(-refine, refine + 1):
            s = _wrap(s_best + np.array([di * step, dj * step]))
            sep = abs(s[0] - s[1]) % TWO_PI
            sep = min(sep, TWO_PI - sep)
            if sep < guard:
                continue
            v = objective(s)
            if v < v_best:
                v_best = v
                s_ref = s
    return tuple(s_ref), float(v_best)
