"""Complex-plane geometry for the unit disk and its conformal oval images.

The oval family is the one-parameter conformal map

    Phi(z) = z / (1 - c z^2),   0 <= c < 1/2,

with explicit inverse Psi(w) = (-1 + sqrt(1 + 4 c w^2)) / (2 c w).  For
c < 1/2 the derivative Phi'(z) = (1 + c z^2) / (1 - c z^2)^2 never
vanishes on the closed disk, so Phi is a conformal diffeomorphism onto
its image.  All boundary quantities (speed, curvature) are evaluated
analytically from Phi' and Phi''.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

# slack for |z| <= 1 membership tests
_BOUNDARY_TOL = 1e-12


@dataclass(frozen=True)
class ConformalDomain:
    """The unit disk (``kind="disk"``) or the oval image of it.

    Parameters
    ----------
    kind : str
        Either ``"disk"`` or ``"conformal"``.
    c : float
        Coefficient of the map family z / (1 - c z^2); must satisfy
        0 <= c < 1/2 so the map stays conformal on the closed disk.
        Ignored for the disk.
    """

    kind: str = "disk"
    c: float = 0.0

    def __post_init__(self):
        if self.kind not in ("disk", "conformal"):
            raise ValueError(f"unknown domain kind {self.kind!r}")
        if self.kind == "conformal" and not (0.0 <= self.c < 0.5):
            raise ValueError(f"conformal coefficient must be in [0, 0.5), got {self.c}")

    @staticmethod
    def disk() -> "ConformalDomain":
        return ConformalDomain(kind="disk", c=0.0)

    @staticmethod
    def oval(c: float = 0.2) -> "ConformalDomain":
        return ConformalDomain(kind="conformal", c=c)

    @property
    def is_disk(self) -> bool:
        return self.kind == "disk" or self.c == 0.0

    # ------------------------------------------------------------------
    # forward / inverse maps
    # ------------------------------------------------------------------
    def forward(self, z):
        """Phi(z) for z in the closed unit disk.

        Accepts complex scalars or arrays; raises :class:`DomainError`
        when |z| exceeds 1 beyond tolerance.
        """
        z = np.asarray(z, dtype=complex)
        if np.any(np.abs(z) > 1.0 + _BOUNDARY_TOL):
            raise DomainError("forward map evaluated outside the closed unit disk")
        if self.is_disk:
            return z + 0.0
        return z / (1.0 - self.c * z * z)

    def inverse(self, w):
        """Psi(w), the inverse of :meth:`forward`.

        The square root takes its principal branch; the branch point
        sits at |w| = 1/(2 sqrt(c)), strictly outside the closed image
        of the disk for every c < 1/2.  Psi(0) = 0 by continuity.
        """
        w = np.asarray(w, dtype=complex)
        if self.is_disk:
            z = w + 0.0
        else:
            c = self.c
            z = np.empty_like(w)
            small = np.abs(w) < 1e-14
            z[small] = 0.0
            ws = w[~small]
            z[~small] = (-1.0 + np.sqrt(1.0 + 4.0 * c * ws * ws)) / (2.0 * c * ws)
        if np.any(np.abs(z) > 1.0 + 1e-9):
            raise DomainError("inverse map produced |z| > 1; point outside the domain")
        return z

    def dforward(self, z):
        """Phi'(z)."""
        z = np.asarray(z, dtype=complex)
        if self.is_disk:
            return np.ones_like(z)
        q = 1.0 - self.c * z * z
        return (1.0 + self.c * z * z) / (q * q)

    def d2forward(self, z):
        """Phi''(z)."""
        z = np.asarray(z, dtype=complex)
        if self.is_disk:
            return np.zeros_like(z)
        q = 1.0 - self.c * z * z
        return 2.0 * self.c * z * (3.0 + self.c * z * z) / (q * q * q)

    # ------------------------------------------------------------------
    # boundary curve gamma(t) = Phi(e^{it})
    # ------------------------------------------------------------------
    def boundary_point(self, t):
        return self.forward(np.exp(1j * np.asarray(t, dtype=float)))

    def boundary_velocity(self, t):
        """gamma'(t) = i e^{it} Phi'(e^{it})."""
        z = np.exp(1j * np.asarray(t, dtype=float))
        return 1j * z * self.dforward(z)

    def boundary_speed(self, t):
        return np.abs(self.boundary_velocity(t))

    def boundary_curvature(self, t):
        """Signed curvature of the boundary at parameter t.

        Computed from the analytic derivatives of the parametrization:
        kappa = Im(conj(gamma') gamma'') / |gamma'|^3.  Positive for a
        counterclockwise convex arc; identically 1 on the disk.
        """
        z = np.exp(1j * np.asarray(t, dtype=float))
        g1 = 1j * z * self.dforward(z)
        speed = np.abs(g1)
        if np.any(speed < 1e-14):
            raise DomainError("degenerate boundary parametrization (|gamma'| ~ 0)")
        g2 = -z * z * self.d2forward(z) - z * self.dforward(z)
        return np.imag(np.conj(g1) * g2) / speed**3

    def curvature_speed(self, t):
        """kappa(t) |gamma'(t)|, the total-turning density.

        Simplifies to 1 + Re(z Phi''(z)/Phi'(z)) with z = e^{it}; its
        integral over a period is exactly 2 pi (Gauss-Bonnet) because
        Phi' has no zeros inside the disk.
        """
        z = np.exp(1j * np.asarray(t, dtype=float))
        if self.is_disk:
            return np.ones_like(np.asarray(t, dtype=float))
        return 1.0 + np.real(z * self.d2forward(z) / self.dforward(z))

    def outward_normal(self, t):
        """Unit outward normal at gamma(t), as a complex number."""
        v = self.boundary_velocity(t)
        return -1j * v / np.abs(v)
