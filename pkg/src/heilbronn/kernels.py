"""Radial mollifier used by the smoothed incidence counts.

The base bump chi is radial with value 1 on a plateau, a C^2 quintic join
down to 0, and unit total mass in the ambient dimension; the outer radius is
solved numerically so the mass constraint holds with the plateau pinned at
half the outer radius.  The smoothing kernel eta is the convolution of chi at
scale w with chi at scale w/2; because everything is radial, eta reduces to a
1D table, and the integral of eta along an infinite line reduces to a 1D
profile of the point-line distance.  All tables are built once per dimension
and cached.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq


def _smoothstep_down(u: np.ndarray) -> np.ndarray:
    """C^2 monotone join: 1 at u=0, 0 at u=1, flat at both ends."""
    u = np.clip(u, 0.0, 1.0)
    return 1.0 - (10 * u**3 - 15 * u**4 + 6 * u**5)


def _sphere_surface(dim: int) -> float:
    return 2 * np.pi if dim == 2 else 4 * np.pi


@dataclass(frozen=True)
class BumpProfile:
    """Radial bump chi and derived kernel tables for one ambient dimension."""

    dim: int
    plateau_radius: float
    support_radius: float
    eta_grid: np.ndarray       # radii t for the eta table (scale w=1)
    eta_values: np.ndarray     # eta_1(t)
    line_grid: np.ndarray      # distances tau for the line-integral profile
    line_values: np.ndarray    # G(tau) = integral of eta_1 along a line at distance tau
    eta_mass: float            # numerically integrated total mass of eta_1

    def chi(self, r) -> np.ndarray:
        """Radial value of the base bump at |x| = r (scale 1)."""
        r = np.asarray(r, dtype=float)
        u = (r - self.plateau_radius) / (self.support_radius - self.plateau_radius)
        out = _smoothstep_down(u)
        return np.where(r <= self.plateau_radius, 1.0, np.where(r >= self.support_radius, 0.0, out))

    def eta(self, t) -> np.ndarray:
        """Radial value of eta_1 at |x| = t."""
        return np.interp(np.asarray(t, dtype=float), self.eta_grid, self.eta_values,
                         left=self.eta_values[0], right=0.0)

    def line_profile(self, tau) -> np.ndarray:
        """G(tau): integral of eta_1 over an infinite line at distance tau from 0."""
        return np.interp(np.asarray(tau, dtype=float), self.line_grid, self.line_values,
                         left=self.line_values[0], right=0.0)

    @property
    def eta_support(self) -> float:
        """Support radius of eta_1 (equals 1.5x the chi support)."""
        return 1.5 * self.support_radius


def _chi_mass(R: float, dim: int) -> float:
    r = np.linspace(0.0, R, 4001)
    u = (r - R / 2.0) / (R / 2.0)
    vals = np.where(r <= R / 2.0, 1.0, _smoothstep_down(u))
    integrand = vals * r ** (dim - 1)
    return _sphere_surface(dim) * float(np.trapezoid(integrand, r))


def _build_profile(dim: int) -> BumpProfile:
    if dim not in (2, 3):
        raise ValueError("dimension must be 2 or 3")
    R = brentq(lambda s: _chi_mass(s, dim) - 1.0, 0.2, 1.9, xtol=1e-13)
    r1 = R / 2.0

    def chi(r):
        u = (r - r1) / (R - r1)
        return np.where(r <= r1, 1.0, np.where(r >= R, 0.0, _smoothstep_down(u)))

    # eta_1(t) = int chi(|y|) * 2^d chi(2|t e1 - y|) dy, reduced by symmetry.
    from scipy.integrate import simpson

    support = 1.5 * R
    tgrid = np.linspace(0.0, support * 1.02, 321)
    na, nb = 321, 201
    a = np.linspace(-R, support + R / 2, na)
    if dim == 3:
        rho = np.linspace(0.0, R, nb)
        A, Rho = np.meshgrid(a, rho, indexing="ij")
        first = chi(np.sqrt(A**2 + Rho**2))
        ring = 2 * np.pi * Rho
        vals = np.empty_like(tgrid)
        for i, t in enumerate(tgrid):
            second = chi(2.0 * np.sqrt((t - A) ** 2 + Rho**2)) * 8.0
            vals[i] = simpson(simpson(first * second * ring, x=rho, axis=1), x=a)
    else:
        b = np.linspace(0.0, R, nb)
        A, Bm = np.meshgrid(a, b, indexing="ij")
        first = chi(np.sqrt(A**2 + Bm**2))
        vals = np.empty_like(tgrid)
        for i, t in enumerate(tgrid):
            second = chi(2.0 * np.sqrt((t - A) ** 2 + Bm**2)) * 4.0
            vals[i] = 2.0 * simpson(simpson(first * second, x=b, axis=1), x=a)

    mass = _sphere_surface(dim) * float(simpson(vals * tgrid ** (dim - 1), x=tgrid))

    # Line-integral profile G(tau) from the eta table.
    taugrid = np.linspace(0.0, support * 1.02, 481)
    sigma = np.linspace(0.0, support * 1.02, 2001)
    G = np.empty_like(taugrid)
    for i, tau in enumerate(taugrid):
        radii = np.sqrt(tau**2 + sigma**2)
        vals_line = np.interp(radii, tgrid, vals, right=0.0)
        G[i] = 2.0 * float(np.trapezoid(vals_line, sigma))

    tgrid.setflags(write=False)
    vals.setflags(write=False)
    taugrid.setflags(write=False)
    G.setflags(write=False)
    return BumpProfile(dim=dim, plateau_radius=r1, support_radius=R,
                       eta_grid=tgrid, eta_values=vals,
                       line_grid=taugrid, line_values=G, eta_mass=mass)


_PROFILES: dict[int, BumpProfile] = {}


def bump_profile(dim: int) -> BumpProfile:
    """Cached kernel tables for the given ambient dimension."""
    if dim not in _PROFILES:
        _PROFILES[dim] = _build_profile(dim)
    return _PROFILES[dim]


def eta_kernel(w: float, x, dim: int | None = None) -> float:
    """Value of the scale-w smoothing kernel at the point x.

    eta_w = chi_w * chi_{w/2} with chi_s(x) = s^{-d} chi(x/s); by scaling
    eta_w(x) = w^{-d} eta_1(x/w).
    """
    if w <= 0:
        raise ValueError("w must be positive")
    x = np.asarray(x, dtype=float)
    if dim is None:
        dim = x.shape[-1]
    prof = bump_profile(dim)
    r = np.linalg.norm(x, axis=-1) if x.ndim else float(abs(x))
    return float(prof.eta(r / w) / w**dim)


def line_pair_weight(w: float, dist, dim: int) -> np.ndarray:
    """Integral of eta_w along an infinite line at distance `dist` from the point.

    Equals w^{1-d} G(dist / w); vanishes once dist exceeds 1.5x the chi
    support times w (well inside the contractual 3w support bound).
    """
    prof = bump_profile(dim)
    dist = np.asarray(dist, dtype=float)
    return prof.line_profile(dist / w) * w ** (1 - dim)


def kernel_floor(dim: int) -> tuple[float, float]:
    """(c, floor) such that the normalized pair profile G(tau) >= floor for tau <= c."""
    prof = bump_profile(dim)
    c = 0.5
    return c, float(prof.line_profile(c))
