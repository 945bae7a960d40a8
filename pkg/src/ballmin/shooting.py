"""Independent oracle for the n = 2 free-boundary surface of revolution.

The surface with two boundary circles meeting the unit sphere orthogonally is
a catenoid about the axis through the two equatorial points. In waist units
the profile is rho(z) = c cosh(z/c); the free-boundary condition reduces to
u tanh u = 1 at the contact parameter u = z_rim / c. Everything downstream
(area, boundary length, contact angle) then has closed forms, and the area is
also integrated numerically so the two routes check each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .quadrature import adaptive_quad


@dataclass(frozen=True)
class CatenoidOracle:
    u_star: float  # contact parameter, root of u tanh u = 1
    waist: float  # c, waist radius
    rim_radius: float  # c cosh(u*)
    rim_offset: float  # c u*, axial distance of the rims
    area: float  # closed form
    area_quadrature: float  # independent integral
    boundary_length: float
    length_area_ratio: float  # exactly 2 for the free-boundary catenoid


def critical_catenoid() -> CatenoidOracle:
    u = brentq(lambda t: t * math.tanh(t) - 1.0, 1.0, 1.5, xtol=1e-15, rtol=8.9e-16)
    c = 1.0 / math.sqrt(math.cosh(u) ** 2 + u * u)
    area_cf = 2 * math.pi * c * c * (u + math.sinh(u) * math.cosh(u))

    def integrand(z: np.ndarray) -> np.ndarray:
        # rho sqrt(1 + rho'^2) = c cosh^2(z/c)
        return c * np.cosh(z / c) ** 2

    area_q, _ = adaptive_quad(integrand, -c * u, c * u, 1e-13)
    area_q *= 2 * math.pi
    length = 2 * (2 * math.pi * c * math.cosh(u))
    return CatenoidOracle(
        u_star=u,
        waist=c,
        rim_radius=c * math.cosh(u),
        rim_offset=c * u,
        area=area_cf,
        area_quadrature=area_q,
        boundary_length=length,
        length_area_ratio=length / (2 * area_cf),
    )
