"""Unperturbed renormalized energy and the field functional it perturbs.

Three evaluators of the vortex interaction energy live here:

* ``w0_disk``: the closed form -pi log|a_1 - a_2| on the unit disk.
* ``w0_conformal``: the boundary-integral formula on a conformal image,
  with the log-kernel handled by singularity subtraction against the
  mean-value identity  int_{|z|=1} log|z - a| dH^1 = 0  for |a| = 1.
* ``punctured_energy``: the Dirichlet integral of grad phi* over the
  disk minus small exclusion disks around the vortices, by adaptive
  midpoint quadrature.  Its renormalized limit carries twice the energy
  of the closed form above; see the module tests for the ladder.

The functional g_functional(theta) = int (1/2)|grad theta|^2
- h . (e^{i theta} M) is the external-field correction being minimized
by the fixed-point solver in :mod:`vortexfield.micromag`.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field

import numpy as np

from .canonical import VortexConfig, canonical_map_disk
from .errors import ConfigurationError
from .geom import ConformalDomain
from .poisson import GridSpec, PolarField, gradient_energy, integrate_disk

TWO_PI = 2.0 * np.pi


@dataclass
class EnergyBreakdown:
    """Total renormalized energy split into its two summands."""

    w0: float
    v_ext: float
    diagnostics: dict = dataclass_field(default_factory=dict)

    @property
    def total(self) -> float:
        return self.w0 + self.v_ext


def w0_disk(config: VortexConfig) -> float:
    """Unperturbed renormalized energy -pi log|a_1 - a_2| on the disk.

    Returns +inf for coincident vortex angles (the energy blows up as
    the vortices merge); raises for anything but a two-vortex pair.
    """
    if config.n != 2 or config.multiplicities != (1, 1):
        raise ConfigurationError("the closed form covers two degree-one vortices")
    s1, s2 = config.angles
    sep = 2.0 * abs(np.sin(0.5 * (s1 - s2)))
    if sep < 1e-15:
        return float("inf")
    return float(-np.pi * np.log(sep))


def _subtracted_log_integral(domain: ConformalDomain, t: np.ndarray, f: np.ndarray,
                             s: float) -> float:
    """Trapezoid value of int f(t) log|e^{it} - e^{is}| dt after subtraction.

    Both the constant f(s) and the odd term f'(s) sin(t - s) have exact
    integral zero against the log kernel on the period, so subtracting
    them changes nothing analytically while making the integrand C^1 at
    the vortex; the node at t = s (if any) contributes zero.
    """
    dt = t[1] - t[0]
    fs = float(domain.curvature_speed(np.asarray([s]))[0])
    h = 1e-5
    fprime = float(
        (domain.curvature_speed(np.asarray([s + h]))[0]
         - domain.curvature_speed(np.asarray([s - h]))[0]) / (2.0 * h)
    )
    g = f - fs - fprime * np.sin(t - s)
    dist = np.abs(np.exp(1j * t) - np.exp(1j * s))
    safe = dist > 1e-14
    logk = np.zeros_like(dist)
    logk[safe] = np.log(dist[safe])
    return float(np.sum(g * logk) * dt)


def w0_conformal(domain: ConformalDomain, config: VortexConfig, nodes: int = 2048) -> float:
    """Unperturbed renormalized energy on a conformal image of the disk.

    Evaluates

        -pi log|a_1 - a_2|
        + (1/2) int_{|z|=1} kappa(Phi(z)) |Phi'(z)|
              (log|z - a_1| + log|z - a_2| + log|Phi'(z)|) dH^1

    by the periodic trapezoid rule with log-kernel subtraction.  On the
    disk the correction integrand vanishes identically and the closed
    form is recovered exactly.
    """
    if nodes < 64 or (nodes & (nodes - 1)) != 0:
        raise ValueError("nodes must be a power of two, at least 64")
    if config.n != 2 or config.multiplicities != (1, 1):
        raise ConfigurationError("the oval formula covers two degree-one vortices")
    base = w0_disk(config)
    if not np.isfinite(base):
        return base
    if domain.is_disk:
        return base

    t = TWO_PI * np.arange(nodes) / nodes
    dt = TWO_PI / nodes
    z = np.exp(1j * t)
    f = domain.curvature_speed(t)
    correction = float(np.sum(f * np.log(np.abs(domain.dforward(z)))) * dt)
    for s in config.angles:
        correction += _subtracted_log_integral(domain, t, f, s)
    return base + 0.5 * correction


def punctured_energy(config: VortexConfig, rho: float, grid: GridSpec,
                     refine_radius_factor: float = 4.0) -> float:
    """Dirichlet integral of grad phi* over the disk minus vortex disks.

    Midpoint quadrature on the polar grid, with cells near any vortex
    recursively split until their diameter is below rho / 8; a (sub)cell
    contributes iff its center lies outside every exclusion disk
    B_rho(a_j).  Requires 2 rho to be smaller than the minimal vortex
    separation so the exclusion disks stay disjoint.
    """
    from .canonical import grad_phistar

    positions = config.positions
    sep = np.inf
    for i in range(len(positions)):
        for j in range(i + 1, len(positions)):
            sep = min(sep, abs(positions[i] - positions[j]))
    if not (0.0 < rho < 0.5 * sep):
        raise ValueError("rho must be positive and below half the vortex separation")

    def integrand(x: np.ndarray) -> np.ndarray:
        gx, gy = grad_phistar(config, x)
        return gx * gx + gy * gy

    def dist_to_vortices(x: np.ndarray) -> np.ndarray:
        d = np.full(x.shape, np.inf)
        for a in positions:
            d = np.minimum(d, np.abs(x - a))
        return d

    R, T = grid.mesh()
    R = R.ravel()
    T = T.ravel()
    DR = np.full(R.shape, grid.dr)
    DT = np.full(T.shape, grid.dt)

    total = 0.0
    stack = [(R, T, DR, DT)]
    target = rho / 8.0
    while stack:
        Rc, Tc, DRc, DTc = stack.pop()
        if Rc.size == 0:
            continue
        x = Rc * np.exp(1j * Tc)
        d = dist_to_vortices(x)
        diam = np.hypot(DRc, Rc * DTc)
        # cells far from every vortex integrate at base resolution
        coarse_ok = d > refine_radius_factor * rho + 0.5 * diam
        leaf = coarse_ok | (diam < target)
        keep = leaf & (d > rho)
        if np.any(keep):
            total += float(np.sum(integrand(x[keep]) * Rc[keep] * DRc[keep] * DTc[keep]))
        split = ~leaf
        if np.any(split):
            Rs, Ts, DRs, DTs = Rc[split], Tc[split], DRc[split], DTc[split]
            quads = []
            for i_off in (-0.25, 0.25):
                for j_off in (-0.25, 0.25):
                    quads.append((Rs + i_off * DRs, Ts + j_off * DTs,
                                  0.5 * DRs, 0.5 * DTs))
            stack.append((np.concatenate([q[0] for q in quads]),
                          np.concatenate([q[1] for q in quads]),
                          np.concatenate([q[2] for q in quads]),
                          np.concatenate([q[3] for q in quads])))
    return total


def g_functional(config: VortexConfig, theta: PolarField, h) -> float:
    """G(a; theta) = int (1/2)|grad theta|^2 - h . (e^{i theta} M(x; a)) dx.

    The complex product e^{i theta} M is read as an R^2 vector dotted
    with h.  ``theta`` must be Dirichlet-tagged (it represents an
    H^1_0 candidate).
    """
    if not theta.dirichlet:
        raise ValueError("g_functional requires a Dirichlet-tagged theta")
    h1, h2 = float(h[0]), float(h[1])
    kinetic = gradient_energy(theta)
    m = canonical_map_disk(config, theta.grid.nodes_complex())
    rotated = np.exp(1j * theta.values) * m
    coupling = PolarField(theta.grid, h1 * rotated.real + h2 * rotated.imag,
                          dirichlet=False)
    return kinetic - integrate_disk(coupling)
