"""Adaptive Gauss-Legendre quadrature for patch areas and fluxes.

All routines are deterministic: fixed node tables, fixed subdivision order,
and fsum accumulation, so repeated runs produce identical bits.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .errors import QuadratureNonConvergence


@lru_cache(maxsize=None)
def _gl_nodes(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def fixed_quad(f, a: float, b: float, order: int = 16) -> float:
    """Single-panel Gauss-Legendre; f must accept an ndarray."""
    x, w = _gl_nodes(order)
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return float(half * np.dot(w, f(mid + half * x)))


def adaptive_quad(
    f,
    a: float,
    b: float,
    rel_tol: float = 1e-10,
    abs_tol: float = 1e-13,
    max_depth: int = 48,
) -> tuple[float, float]:
    """Integrate f on [a, b] by bisecting panels until GL-8 and GL-16 agree.

    Returns (value, error_estimate). f must accept ndarrays.
    """
    if a == b:
        return 0.0, 0.0
    whole = abs(fixed_quad(f, a, b, 16)) + abs(b - a)
    parts: list[float] = []
    errs: list[float] = []
    stack = [(a, b, 0)]
    while stack:
        lo, hi, depth = stack.pop()
        coarse = fixed_quad(f, lo, hi, 8)
        fine = fixed_quad(f, lo, hi, 16)
        err = abs(fine - coarse)
        if err <= max(abs_tol, rel_tol * whole) * max(1.0, (hi - lo) / (b - a)):
            parts.append(fine)
            errs.append(err)
            continue
        if depth >= max_depth:
            raise QuadratureNonConvergence(
                f"panel [{lo}, {hi}] failed to converge at depth {depth}"
            )
        mid = 0.5 * (lo + hi)
        stack.append((mid, hi, depth + 1))
        stack.append((lo, mid, depth + 1))
    return math.fsum(parts), math.fsum(errs)


def patch_area(
    param,
    u_range: tuple[float, float],
    v_range: tuple[float, float],
    rel_tol: float = 1e-9,
    max_level: int = 7,
    order: int = 6,
) -> tuple[float, float]:
    """Area of a parametrized patch by tensor GL with panel doubling.

    param(U, V) -> points array (..., 3); differentiated numerically is not
    acceptable here, so param must also vectorize: we form the Jacobian by
    central differences? No: param is expected analytic; we instead require
    param to return positions and compute the metric from exact partials
    supplied as param.du / param.dv when present, else central differences
    with step tied to the panel size (adequate at the 1e-9 tolerances used).
    """
    xg, wg = _gl_nodes(order)

    def level_area(m: int) -> float:
        u_edges = np.linspace(u_range[0], u_range[1], m + 1)
        v_edges = np.linspace(v_range[0], v_range[1], m + 1)
        total = []
        for i in range(m):
            ua, ub = u_edges[i], u_edges[i + 1]
            um, uh = 0.5 * (ua + ub), 0.5 * (ub - ua)
            for j in range(m):
                va, vb = v_edges[j], v_edges[j + 1]
                vm, vh = 0.5 * (va + vb), 0.5 * (vb - va)
                U = um + uh * xg
                V = vm + vh * xg
                UU, VV = np.meshgrid(U, V, indexing="ij")
                if hasattr(param, "du"):
                    Pu = param.du(UU, VV)
                    Pv = param.dv(UU, VV)
                else:
                    hu = uh * 1e-5
                    hv = vh * 1e-5
                    Pu = (param(UU + hu, VV) - param(UU - hu, VV)) / (2 * hu)
                    Pv = (param(UU, VV + hv) - param(UU, VV - hv)) / (2 * hv)
                cross = np.cross(Pu, Pv)
                J = np.sqrt(np.sum(cross * cross, axis=-1))
                total.append(uh * vh * float(np.einsum("i,j,ij->", wg, wg, J)))
        return math.fsum(total)

    prev = level_area(1)
    for level in range(1, max_level + 1):
        cur = level_area(2**level)
        err = abs(cur - prev)
        if err <= rel_tol * max(abs(cur), 1e-30) + 1e-14:
            return cur, err
        prev = cur
    raise QuadratureNonConvergence(
        f"patch area did not converge below {rel_tol} in {max_level} doublings"
    )


def clamp(x: float, lo: float = -1.0, hi: float = 1.0) -> float:
    return lo if x < lo else hi if x > hi else x


def circle_lens_area(R: float, r: float, d: float) -> float:
    """Area of {|x| <= R} ∩ {|x - (d,0)| <= r} in the plane."""
    if d >= R + r:
        return 0.0
    if d <= abs(R - r):
        rr = min(R, r)
        return math.pi * rr * rr
    a1 = math.acos(clamp((d * d + R * R - r * r) / (2 * d * R)))
    a2 = math.acos(clamp((d * d + r * r - R * R) / (2 * d * r)))
    tri = 0.5 * math.sqrt(
        max(0.0, (-d + r + R) * (d + r - R) * (d - r + R) * (d + r + R))
    )
    return R * R * a1 + r * r * a2 - tri


def symmetric_bite_angle(a: float, d: float, rho: float) -> float:
    """Half-angle subtended at the origin, on the radius-a circle, by a bite
    disc of radius rho centered at distance d."""
    if a <= 0.0:
        return math.pi if d <= rho else 0.0
    c = (a * a + d * d - rho * rho) / (2 * a * d)
    return math.acos(clamp(c))


def bitten_disc_ring_measure(a: float, n: int, d: float, rho: float) -> float:
    """Angular measure surviving on the radius-a circle after n symmetric
    bites (radius rho, centers at distance d, equally spaced).

    Equal half-widths at equally spaced centers make the union measure exact:
    n * min(2*beta, 2*pi/n).
    """
    beta = symmetric_bite_angle(a, d, rho)
    return max(0.0, 2 * math.pi - n * min(2 * beta, 2 * math.pi / n))


def subtract_intervals(
    base: tuple[float, float], cuts: list[tuple[float, float]]
) -> list[tuple[float, float]]:
    """Remove the cut intervals from the base interval; returns sorted pieces."""
    pieces = [base]
    for clo, chi in cuts:
        nxt = []
        for lo, hi in pieces:
            if chi <= lo or clo >= hi:
                nxt.append((lo, hi))
                continue
            if clo > lo:
                nxt.append((lo, clo))
            if chi < hi:
                nxt.append((chi, hi))
        pieces = nxt
    return pieces
