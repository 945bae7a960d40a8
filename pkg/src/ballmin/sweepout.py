"""D_n-symmetric sweepout of the unit ball with certified area/volume bounds.

The family runs t in [0, 1]. Three stages, continuous at both junctions:

  main family (t >= t0): two horizontal discs at heights +-t with rim on the
  sphere, a puncture of radius eps(t) at each of the n equatorial directions,
  connected by n thin ribbon strips on the sphere;

  neck morph (t0/3 <= t < t0): each ribbon blends into a vertical cylinder
  wall around its equatorial point while the disc punctures grow;

  wedge collapse (0 < t < t0/3): punctures keep growing past the covering
  radius of the point set, eating the disc pair down to the bisector skeleton.

Areas and enclosed volumes are quadrature-certified; the demonstration-regime
bounds are checked on a grid and the small-t0 regime bound is proved exactly
in rational arithmetic (verify_area_bound_symbolic).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from .errors import ConfigError, DomainError, QuadratureNonConvergence, RegimeError
from .quadrature import (
    adaptive_quad,
    bitten_disc_ring_measure,
    circle_lens_area,
    clamp,
    patch_area,
    subtract_intervals,
    symmetric_bite_angle,
)

def cover_radius(n: int) -> float:
    """Planar covering radius of the n equatorial points over the unit disc:
    the max over the disc of the min distance to the points (attained at the
    centre for n >= 3, at the rim bisectors for n = 2, at both for n = 3).
    Bites of this radius eat the whole disc only in the limit."""
    return max(1.0, 2.0 * math.sin(math.pi / (2 * n)))


def equatorial_point(n: int, k: int) -> np.ndarray:
    phi = 2 * math.pi * k / n
    return np.array([math.cos(phi), math.sin(phi), 0.0])


def wall_radius_cap(n: int) -> float:
    """Neck wall radius at the morph/collapse junction; < sin(pi/n) always."""
    return min(0.35, 0.7 * math.sin(math.pi / n))


@dataclass(frozen=True)
class SweepoutConfig:
    n: int
    t0: float
    grid: tuple[float, ...]
    quad_tol: float = 1e-9
    regime: str = "demo"
    eps_profile: object = None  # optional custom map t -> eps(t)
    allow_illustrative: bool = False

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ConfigError(f"n must be at least 2, got {self.n}")
        if not (0.0 < self.t0 < 1.0):
            raise ConfigError(f"t0 must lie in (0, 1), got {self.t0}")
        if self.regime == "paper":
            if self.t0 >= math.exp(-8 * self.n):
                raise ConfigError(
                    f"small-t0 regime needs t0 < exp(-8n) = {math.exp(-8 * self.n):.3e}"
                )
        elif self.regime == "demo":
            if self.t0 > 0.2:
                raise ConfigError("demonstration regime caps t0 at 0.2")
        else:
            raise ConfigError(f"unknown regime {self.regime!r}")
        if self.quad_tol <= 0:
            raise ConfigError("quad_tol must be positive")
        g = tuple(float(t) for t in self.grid)
        if any(t < 0 or t > 1 for t in g) or list(g) != sorted(g):
            raise ConfigError("grid must be sorted within [0, 1]")
        object.__setattr__(self, "grid", g)
        if self.eps_profile is not None and not self.allow_illustrative:
            for t in g:
                if self.t0 <= t < 1 and self.eps_profile(t) > self.eps0 + 1e-15:
                    raise ConfigError(
                        "custom eps profile exceeds eps0; pass allow_illustrative"
                    )

    @property
    def eps0(self) -> float:
        return self.t0 / (2 * self.n)

    def eps(self, t: float) -> float:
        if self.eps_profile is not None:
            return float(self.eps_profile(t))
        if t >= 1.0:
            return 0.0
        return self.eps0 * (1.0 - t) / (1.0 - self.t0)


def default_grid(cfg_n: int, t0: float, points: int = 96) -> tuple[float, ...]:
    """Grid covering all three stages plus both degenerate endpoints."""
    del cfg_n
    lo = np.linspace(0.0, t0 / 3, 9)
    mid = np.linspace(t0 / 3, t0, 9)[1:]
    hi = np.linspace(t0, 1.0, max(8, points - 16))[1:]
    return tuple(float(t) for t in np.concatenate([lo, mid, hi]))


# ---------------------------------------------------------------------------
# patches


@dataclass(frozen=True)
class ScaledPuncturedDisc:
    """Horizontal disc at z = height, radius scale, with n symmetric bites
    (radius punct_radius, centers at distance punct_dist, azimuths phase+2pik/n)."""

    height: float
    scale: float
    n: int
    punct_radius: float
    punct_dist: float
    phase: float = 0.0

    def area(self, rel_tol: float = 1e-9) -> tuple[float, float]:
        R, d, rho, n = self.scale, self.punct_dist, self.punct_radius, self.n
        if R <= 0:
            return 0.0, 0.0
        if rho <= 0:
            return math.pi * R * R, 0.0

        def f(a: np.ndarray) -> np.ndarray:
            return np.array(
                [ai * bitten_disc_ring_measure(ai, n, d, rho) for ai in np.atleast_1d(a)]
            )

        pts = {0.0, R}
        pts.add(clamp(d - rho, 0.0, R))
        pts.add(clamp(d + rho, 0.0, R))
        s = rho * rho - d * d * math.sin(math.pi / n) ** 2
        if s >= 0:
            root = math.sqrt(s)
            c = d * math.cos(math.pi / n)
            pts.add(clamp(c - root, 0.0, R))
            pts.add(clamp(c + root, 0.0, R))
        cuts = sorted(pts)
        vals, errs = [], []
        for lo, hi in zip(cuts, cuts[1:]):
            if hi - lo < 1e-15:
                continue
            v, e = adaptive_quad(f, lo, hi, rel_tol)
            vals.append(v)
            errs.append(e)
        return math.fsum(vals), math.fsum(errs)

    def points(self, m: int = 24) -> np.ndarray:
        R, d, rho = self.scale, self.punct_dist, self.punct_radius
        if R <= 0:
            return np.zeros((0, 3))
        for mm in (m, 6 * m):  # densify once if the bites eat the coarse grid
            a = np.linspace(0, R, mm)[1:]
            th = np.linspace(0, 2 * math.pi, 4 * mm, endpoint=False) + self.phase
            A, T = np.meshgrid(a, th, indexing="ij")
            X, Y = A * np.cos(T), A * np.sin(T)
            keep = np.ones(A.shape, dtype=bool)
            for k in range(self.n):
                phi = self.phase + 2 * math.pi * k / self.n
                cx, cy = d * math.cos(phi), d * math.sin(phi)
                keep &= (X - cx) ** 2 + (Y - cy) ** 2 >= rho * rho
            if keep.any():
                return np.stack(
                    [X[keep], Y[keep], np.full(keep.sum(), self.height)], axis=1
                )
        return np.zeros((0, 3))


@dataclass(frozen=True)
class Ribbon:
    """Strip on the unit sphere around the k-th equatorial meridian:
    z in [-t, t], azimuth within half_width of the point's azimuth."""

    k: int
    n: int
    t: float
    half_width: float
    phase: float = 0.0

    @property
    def azimuth(self) -> float:
        return self.phase + 2 * math.pi * self.k / self.n

    def area(self, rel_tol: float = 1e-9) -> tuple[float, float]:
        # area element on the unit sphere in (z, phi) is exactly dz dphi
        del rel_tol
        return 2 * self.half_width * 2 * self.t, 0.0

    def area_by_quadrature(self, rel_tol: float = 1e-9) -> tuple[float, float]:
        phi0 = self.azimuth

        class P:
            @staticmethod
            def __call__(z, phi):
                r = np.sqrt(np.clip(1 - z * z, 0, None))
                return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=-1)

            @staticmethod
            def du(z, phi):
                r = np.sqrt(np.clip(1 - z * z, 1e-30, None))
                return np.stack([-z / r * np.cos(phi), -z / r * np.sin(phi), np.ones_like(z)], axis=-1)

            @staticmethod
            def dv(z, phi):
                r = np.sqrt(np.clip(1 - z * z, 0, None))
                return np.stack([-r * np.sin(phi), r * np.cos(phi), np.zeros_like(z)], axis=-1)

        return patch_area(
            P(), (-self.t, self.t), (phi0 - self.half_width, phi0 + self.half_width), rel_tol
        )

    def points(self, m: int = 24) -> np.ndarray:
        z = np.linspace(-self.t, self.t, m)
        phi = np.linspace(self.azimuth - self.half_width, self.azimuth + self.half_width, 7)
        Z, PH = np.meshgrid(z, phi, indexing="ij")
        r = np.sqrt(np.clip(1 - Z * Z, 0, None))
        return np.stack([r * np.cos(PH), r * np.sin(PH), Z], axis=-1).reshape(-1, 3)


@dataclass(frozen=True)
class CatenoidNeck:
    """Surface of revolution rho(z) = r cosh(sz)/cosh(sh) about the vertical
    axis through the k-th equatorial point, z in [-h, h], clipped to the ball
    (and optionally to the sibling bite columns). s = 0 gives a cylinder wall.

    blend in (0, 1] mixes the wall toward the spherical ribbon strip of
    half-width blend_halfwidth (blend 1 is exactly that strip); used by the
    morph stage so the family is continuous at t0.
    """

    k: int
    n: int
    r: float
    h: float
    s: float
    axis_dist: float = 1.0
    clip_ball: bool = True
    clip_siblings: bool = True
    blend: float = 0.0
    blend_halfwidth: float = 0.0
    phase: float = 0.0

    @property
    def azimuth(self) -> float:
        return self.phase + 2 * math.pi * self.k / self.n

    def profile(self, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        if self.s == 0.0:
            return np.full_like(z, self.r, dtype=float), np.zeros_like(z, dtype=float)
        ch = math.cosh(self.s * self.h)
        return self.r * np.cosh(self.s * z) / ch, self.r * self.s * np.sinh(self.s * z) / ch

    def ball_halfwidth(self, z: float, rho: float) -> float:
        d = self.axis_dist
        if not self.clip_ball:
            return math.pi
        q = (d * d + rho * rho + z * z - 1.0) / (2 * rho * d)
        return math.acos(clamp(q))

    def sibling_cuts(self, rho: float) -> list[tuple[float, float]]:
        if not self.clip_siblings or self.n < 2:
            return []
        d = self.axis_dist
        ck = d * np.array([math.cos(self.azimuth), math.sin(self.azimuth)])
        ihat = -ck / d
        jhat = np.array([-ihat[1], ihat[0]])
        cuts = []
        for j in range(self.n):
            if j == self.k:
                continue
            phij = self.phase + 2 * math.pi * j / self.n
            cj = d * np.array([math.cos(phij), math.sin(phij)])
            delta = cj - ck
            D = float(np.hypot(*delta))
            if D >= 2 * rho:
                continue
            gamma = math.atan2(float(delta @ jhat), float(delta @ ihat))
            w = math.acos(clamp(D / (2 * rho)))
            cuts.append((gamma - w, gamma + w))
        return cuts

    def _angular_pieces(self, z: float, rho: float) -> list[tuple[float, float]]:
        b = self.ball_halfwidth(z, rho)
        if b <= 0:
            return []
        return subtract_intervals((-b, b), self.sibling_cuts(rho))

    def area(self, rel_tol: float = 1e-9) -> tuple[float, float]:
        if self.blend > 0.0:
            return self._blended_area(rel_tol)

        def f(z: np.ndarray) -> np.ndarray:
            rho, drho = self.profile(z)
            out = np.empty_like(np.atleast_1d(z), dtype=float)
            zz = np.atleast_1d(z)
            for i, zi in enumerate(zz):
                pieces = self._angular_pieces(float(zi), float(rho.flat[i] if rho.ndim else rho))
                meas = math.fsum(hi - lo for lo, hi in pieces)
                out[i] = meas * rho.flat[i] * math.hypot(1.0, drho.flat[i])
            return out

        pts = {-self.h, self.h}
        span = 2 * self.r - self.r * self.r
        if self.clip_ball and span > 0:
            zc = math.sqrt(span)
            for v in (-zc, zc):
                if -self.h < v < self.h:
                    pts.add(v)
        for v in (-self.r, self.r):
            if -self.h < v < self.h:
                pts.add(v)
        cuts = sorted(pts)
        vals, errs = [], []
        for lo, hi in zip(cuts, cuts[1:]):
            if hi - lo < 1e-15:
                continue
            v, e = adaptive_quad(f, lo, hi, rel_tol)
            vals.append(v)
            errs.append(e)
        return math.fsum(vals), math.fsum(errs)

    def _wall_point(self, z: np.ndarray, sigma: np.ndarray) -> np.ndarray:
        rho, _ = self.profile(z)
        beta = np.array(
            [self.ball_halfwidth(float(zi), float(ri)) for zi, ri in zip(np.ravel(z), np.ravel(rho))]
        ).reshape(np.shape(z))
        alpha = sigma * beta
        phi = self.azimuth
        ck = self.axis_dist * np.array([math.cos(phi), math.sin(phi), 0.0])
        ihat = np.array([-math.cos(phi), -math.sin(phi), 0.0])
        jhat = np.array([math.sin(phi), -math.cos(phi), 0.0])
        dirv = (
            np.multiply.outer(np.cos(alpha), ihat)
            + np.multiply.outer(np.sin(alpha), jhat)
        )
        return ck + dirv * rho[..., None] + np.multiply.outer(z, np.array([0.0, 0.0, 1.0]))

    def _strip_point(self, z: np.ndarray, sigma: np.ndarray) -> np.ndarray:
        phi = self.azimuth + sigma * self.blend_halfwidth
        r = np.sqrt(np.clip(1 - z * z, 0, None))
        return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=-1)

    def _blend_param(self) -> "_BlendParam":
        return _BlendParam(self)

    def _blended_area(self, rel_tol: float) -> tuple[float, float]:
        return patch_area(self._blend_param(), (-self.h, self.h), (-1.0, 1.0), rel_tol)

    def points(self, m: int = 24) -> np.ndarray:
        z = np.linspace(-self.h, self.h, m)
        sig = np.linspace(-1, 1, m)
        Z, S = np.meshgrid(z, sig, indexing="ij")
        if self.blend > 0.0:
            P = (1 - self.blend) * self._wall_point(Z, S) + self.blend * self._strip_point(Z, S)
            return P.reshape(-1, 3)
        P = self._wall_point(Z, S).reshape(-1, 3)
        if self.clip_siblings and self.n >= 2:
            keep = np.ones(len(P), dtype=bool)
            for j in range(self.n):
                if j == self.k:
                    continue
                phij = self.phase + 2 * math.pi * j / self.n
                cj = self.axis_dist * np.array([math.cos(phij), math.sin(phij)])
                rhoz, _ = self.profile(P[:, 2])
                keep &= (P[:, 0] - cj[0]) ** 2 + (P[:, 1] - cj[1]) ** 2 >= rhoz * rhoz
            P = P[keep]
        return P


class _BlendParam:
    """Analytic parametrization (z, sigma) of a blended neck: convex mix of
    the ball-clipped wall (angle sigma * beta(z) around the inward direction)
    and the spherical strip (azimuth offset sigma * blend_halfwidth). Exact
    partials keep the area quadrature certifiable at tiny patch sizes."""

    def __init__(self, neck: CatenoidNeck) -> None:
        self.neck = neck
        phi = neck.azimuth
        self.ck = neck.axis_dist * np.array([math.cos(phi), math.sin(phi), 0.0])
        self.ihat = np.array([-math.cos(phi), -math.sin(phi), 0.0])
        self.jhat = np.array([math.sin(phi), -math.cos(phi), 0.0])
        self.zhat = np.array([0.0, 0.0, 1.0])

    def _wall_terms(self, z: np.ndarray):
        nk = self.neck
        d = nk.axis_dist
        rho, drho = nk.profile(z)
        q = (d * d + rho * rho + z * z - 1.0) / (2 * rho * d)
        qc = np.clip(q, -1.0, 1.0)
        beta = np.arccos(qc)
        dq = (rho * drho + z) / (rho * d) - q * drho / rho
        root = np.sqrt(np.clip(1.0 - qc * qc, 1e-30, None))
        dbeta = -dq / root
        return rho, drho, beta, dbeta

    def __call__(self, z: np.ndarray, sigma: np.ndarray):
        nk = self.neck
        w = nk.blend
        rho, _, beta, _ = self._wall_terms(z)
        alpha = sigma * beta
        dirv = np.multiply.outer(np.cos(alpha), self.ihat) + np.multiply.outer(
            np.sin(alpha), self.jhat
        )
        wall = self.ck + dirv * rho[..., None] + np.multiply.outer(z, self.zhat)
        phi = nk.azimuth + sigma * nk.blend_halfwidth
        r = np.sqrt(np.clip(1 - z * z, 0, None))
        strip = np.stack([r * np.cos(phi), r * np.sin(phi), np.broadcast_to(z, phi.shape)], axis=-1)
        return (1.0 - w) * wall + w * strip

    def du(self, z: np.ndarray, sigma: np.ndarray):
        nk = self.neck
        w = nk.blend
        rho, drho, beta, dbeta = self._wall_terms(z)
        alpha = sigma * beta
        dirv = np.multiply.outer(np.cos(alpha), self.ihat) + np.multiply.outer(
            np.sin(alpha), self.jhat
        )
        dirp = -np.multiply.outer(np.sin(alpha), self.ihat) + np.multiply.outer(
            np.cos(alpha), self.jhat
        )
        dwall = (
            dirv * drho[..., None]
            + dirp * (rho * sigma * dbeta)[..., None]
            + np.multiply.outer(np.ones_like(z), self.zhat)
        )
        phi = nk.azimuth + sigma * nk.blend_halfwidth
        r = np.sqrt(np.clip(1 - z * z, 1e-30, None))
        dstrip = np.stack(
            [-z / r * np.cos(phi), -z / r * np.sin(phi), np.ones_like(phi)], axis=-1
        )
        return (1.0 - w) * dwall + w * dstrip

    def dv(self, z: np.ndarray, sigma: np.ndarray):
        nk = self.neck
        w = nk.blend
        rho, _, beta, _ = self._wall_terms(z)
        alpha = sigma * beta
        dirp = -np.multiply.outer(np.sin(alpha), self.ihat) + np.multiply.outer(
            np.cos(alpha), self.jhat
        )
        dwall = dirp * (rho * beta)[..., None]
        phi = nk.azimuth + sigma * nk.blend_halfwidth
        r = np.sqrt(np.clip(1 - z * z, 0, None))
        dstrip = nk.blend_halfwidth * np.stack(
            [-r * np.sin(phi), r * np.cos(phi), np.zeros_like(phi)], axis=-1
        )
        return (1.0 - w) * dwall + w * dstrip


@dataclass(frozen=True)
class FlatDiscPair:
    """Two horizontal discs of radius r at heights +-h on the k-th point's
    vertical axis, clipped to the ball; the pinched-neck (s -> infinity) limit."""

    k: int
    n: int
    r: float
    h: float
    phase: float = 0.0

    def area(self, rel_tol: float = 1e-9) -> tuple[float, float]:
        del rel_tol
        planar = math.sqrt(max(0.0, 1.0 - self.h * self.h))
        return 2 * circle_lens_area(planar, self.r, 1.0), 0.0

    def points(self, m: int = 24) -> np.ndarray:
        phi = self.phase + 2 * math.pi * self.k / self.n
        c = np.array([math.cos(phi), math.sin(phi)])
        a = np.linspace(0, self.r, m)[1:]
        th = np.linspace(0, 2 * math.pi, 2 * m, endpoint=False)
        A, T = np.meshgrid(a, th, indexing="ij")
        X = c[0] + A * np.cos(T)
        Y = c[1] + A * np.sin(T)
        planar2 = 1.0 - self.h * self.h
        keep = X * X + Y * Y <= planar2
        top = np.stack([X[keep], Y[keep], np.full(keep.sum(), self.h)], axis=1)
        bot = top.copy()
        bot[:, 2] = -self.h
        return np.concatenate([top, bot])


@dataclass(frozen=True)
class Wedge:
    """Measure-zero skeleton: radial bisector segments (t = 0) or the
    meridian arcs through the equatorial points (t = 1)."""

    n: int
    meridian: bool = False
    phase: float = 0.0

    def area(self, rel_tol: float = 1e-9) -> tuple[float, float]:
        del rel_tol
        return 0.0, 0.0

    def points(self, m: int = 24) -> np.ndarray:
        out = []
        for k in range(self.n):
            if self.meridian:
                phi = self.phase + 2 * math.pi * k / self.n
                th = np.linspace(-math.pi / 2, math.pi / 2, 2 * m)
                out.append(
                    np.stack(
                        [np.cos(th) * math.cos(phi), np.cos(th) * math.sin(phi), np.sin(th)],
                        axis=1,
                    )
                )
            else:
                phi = self.phase + 2 * math.pi * (k + 0.5) / self.n
                a = np.linspace(0, 1, m)
                out.append(
                    np.stack([a * math.cos(phi), a * math.sin(phi), np.zeros_like(a)], axis=1)
                )
        return np.concatenate(out)


@dataclass(frozen=True)
class SweepoutSlice:
    t: float
    stage: str
    patches: tuple


# ---------------------------------------------------------------------------
# the family


def _morph_params(cfg: SweepoutConfig, t: float) -> tuple[float, float, float]:
    """(bite radius, bite center distance, blend weight) in the morph stage."""
    u = (3 * t / cfg.t0 - 1.0) / 2.0
    u = clamp(u, 0.0, 1.0)
    rb = wall_radius_cap(cfg.n)
    rho = cfg.eps0 + (1.0 - u) * (rb - cfg.eps0)
    scale = math.sqrt(max(0.0, 1.0 - t * t))
    d = u * scale + (1.0 - u)
    return rho, d, u


def _collapse_radius(cfg: SweepoutConfig, t: float) -> float:
    lam = clamp(3 * t / cfg.t0, 0.0, 1.0)
    rb = wall_radius_cap(cfg.n)
    return rb + (1.0 - lam) * (cover_radius(cfg.n) - rb)


def build_slice(cfg: SweepoutConfig, t: float) -> SweepoutSlice:
    if not (0.0 <= t <= 1.0):
        raise DomainError(f"slice parameter must lie in [0, 1], got {t}")
    n = cfg.n
    if t == 0.0:
        return SweepoutSlice(t, "wedge", (Wedge(n, meridian=False),))
    if t == 1.0:
        return SweepoutSlice(t, "degenerate", (Wedge(n, meridian=True),))
    scale = math.sqrt(1.0 - t * t)
    if t >= cfg.t0:
        eps = cfg.eps(t)
        discs = [
            ScaledPuncturedDisc(h, scale, n, eps, scale) for h in (t, -t)
        ]
        ribbons = [Ribbon(k, n, t, eps) for k in range(n)]
        return SweepoutSlice(t, "main", tuple(discs + ribbons))
    if t >= cfg.t0 / 3:
        rho, d, u = _morph_params(cfg, t)
        discs = [ScaledPuncturedDisc(h, scale, n, rho, d) for h in (t, -t)]
        necks = [
            CatenoidNeck(
                k, n, rho, t, 0.0, axis_dist=d, blend=u, blend_halfwidth=cfg.eps0
            )
            for k in range(n)
        ]
        return SweepoutSlice(t, "morph", tuple(discs + necks))
    rho = _collapse_radius(cfg, t)
    discs = [ScaledPuncturedDisc(h, scale, n, rho, 1.0) for h in (t, -t)]
    necks = [CatenoidNeck(k, n, rho, t, 0.0) for k in range(n)]
    return SweepoutSlice(t, "collapse", tuple(discs + necks))


def area(sl: SweepoutSlice, rel_tol: float = 1e-9) -> tuple[float, float]:
    vals, errs = [], []
    for p in sl.patches:
        v, e = p.area(rel_tol)
        vals.append(v)
        errs.append(e)
    return math.fsum(vals), math.fsum(errs)


def slice_points(sl: SweepoutSlice, m: int = 24) -> np.ndarray:
    pts = [p.points(m) for p in sl.patches]
    pts = [p for p in pts if len(p)]
    return np.concatenate(pts) if pts else np.zeros((0, 3))


def rotate_slice(sl: SweepoutSlice) -> SweepoutSlice:
    """Image of the slice under the z-rotation by 2pi/n (patch relabeling)."""
    out = []
    for p in sl.patches:
        if isinstance(p, (Ribbon, CatenoidNeck, FlatDiscPair)):
            out.append(replace(p, k=(p.k + 1) % p.n))
        elif isinstance(p, ScaledPuncturedDisc):
            out.append(replace(p, phase=p.phase + 2 * math.pi / p.n))
        else:
            out.append(p)
    return SweepoutSlice(sl.t, sl.stage, tuple(out))


def flip_slice(sl: SweepoutSlice) -> SweepoutSlice:
    """Image under the x-axis half-turn (z -> -z, azimuth -> -azimuth)."""
    out = []
    for p in sl.patches:
        if isinstance(p, ScaledPuncturedDisc):
            out.append(replace(p, height=-p.height, phase=-p.phase))
        elif isinstance(p, Ribbon):
            out.append(replace(p, k=(-p.k) % p.n, phase=-p.phase))
        elif isinstance(p, (CatenoidNeck, FlatDiscPair)):
            out.append(replace(p, k=(-p.k) % p.n, phase=-p.phase))
        else:
            out.append(p)
    return SweepoutSlice(sl.t, sl.stage, tuple(out))


# ---------------------------------------------------------------------------
# enclosed volume (divergence theorem) and its cross-section oracle


def _bite_params(cfg: SweepoutConfig, t: float) -> tuple[float, float]:
    """(bite radius, bite center distance) of the volume model at parameter t;
    radius 0 in the main family where the region is the exact slab."""
    if t >= cfg.t0:
        return 0.0, 1.0
    if t >= cfg.t0 / 3:
        rho, d, _ = _morph_params(cfg, t)
        return rho, d
    return _collapse_radius(cfg, t), 1.0


def _wall_flux(n: int, rho: float, d: float, t: float, rel_tol: float) -> float:
    """Flux integral of x . N over the n bite walls (N outward from the region)."""
    if rho <= 0.0 or t <= 0.0:
        return 0.0
    neck = CatenoidNeck(0, n, rho, t, 0.0, axis_dist=d)

    def f(z: np.ndarray) -> np.ndarray:
        out = np.empty(np.atleast_1d(z).shape, dtype=float)
        for i, zi in enumerate(np.atleast_1d(z)):
            pieces = neck._angular_pieces(float(zi), rho)
            out[i] = rho * math.fsum(
                d * (math.sin(hi) - math.sin(lo)) - rho * (hi - lo) for lo, hi in pieces
            )
        return out

    v, _ = adaptive_quad(f, -t, t, rel_tol)
    return n * v


def _zone_flux(n: int, rho: float, d: float, t: float, rel_tol: float) -> float:
    """Flux (= area, x.N = 1) of the spherical zone |z| <= t minus the parts
    eaten by the bite columns (vertical cylinders, z-independent radius)."""

    def f(z: np.ndarray) -> np.ndarray:
        zz = np.atleast_1d(z)
        out = np.empty(zz.shape, dtype=float)
        for i, zi in enumerate(zz):
            sig = math.sqrt(max(0.0, 1.0 - zi * zi))
            if rho <= 0.0:
                out[i] = 2 * math.pi
                continue
            out[i] = bitten_disc_ring_measure(sig, n, d, rho)
        return out

    pts = {-t, t}
    for contact in (d - rho, d + rho):
        if 0.0 < contact < 1.0:
            zc = math.sqrt(1.0 - contact * contact)
            for v in (-zc, zc):
                if -t < v < t:
                    pts.add(v)
    cuts = sorted(pts)
    vals = []
    for lo, hi in zip(cuts, cuts[1:]):
        v, _ = adaptive_quad(f, lo, hi, rel_tol)
        vals.append(v)
    return math.fsum(vals)


def enclosed_volume(cfg: SweepoutConfig, t: float, rel_tol: float = 1e-10) -> float:
    """Volume of the region the slice bounds (with the sphere), by the
    divergence theorem over discs, bite walls, and the spherical zone."""
    if not (0.0 <= t <= 1.0):
        raise DomainError(f"parameter must lie in [0, 1], got {t}")
    if t == 0.0:
        return 0.0
    rho, d = _bite_params(cfg, t)
    scale = math.sqrt(max(0.0, 1.0 - t * t))
    disc = ScaledPuncturedDisc(t, scale, cfg.n, rho, d)
    disc_area, _ = disc.area(rel_tol)
    flux = 2 * t * disc_area
    flux += _zone_flux(cfg.n, rho, d, t, rel_tol)
    flux += _wall_flux(cfg.n, rho, d, t, rel_tol)
    return flux / 3.0


def cross_section_volume(cfg: SweepoutConfig, t: float, rel_tol: float = 1e-9) -> float:
    """Oracle: the same region integrated as horizontal cross-sections."""
    if t <= 0.0:
        return 0.0
    rho, d = _bite_params(cfg, t)

    def section(z: float) -> float:
        sig = math.sqrt(max(0.0, 1.0 - z * z))
        a, _ = ScaledPuncturedDisc(z, sig, cfg.n, rho, d).area(max(rel_tol, 1e-8))
        return a

    def f(z: np.ndarray) -> np.ndarray:
        return np.array([section(float(zi)) for zi in np.atleast_1d(z)])

    v, _ = adaptive_quad(f, -t, t, rel_tol, abs_tol=1e-11)
    return v


def bisect_volume(cfg: SweepoutConfig, target: float, lo: float, hi: float, tol: float = 1e-10) -> float:
    flo = enclosed_volume(cfg, lo) - target
    fhi = enclosed_volume(cfg, hi) - target
    if flo > 0 or fhi < 0:
        raise DomainError("bisection bracket does not straddle the target volume")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if enclosed_volume(cfg, mid) - target <= 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# catenoid family scan


@dataclass(frozen=True)
class CatenoidScan:
    r: float
    h: float
    s_grid: tuple[float, ...]
    areas: tuple[float, ...]
    quad_errs: tuple[float, ...]
    argmax_s: float
    sup_area: float
    limit_area: float
    slack: float
    estimate_ok: bool


def catenoid_family_scan(
    r: float,
    h: float,
    s_grid,
    n: int = 2,
    regime: str = "demo",
    rel_tol: float = 1e-10,
) -> CatenoidScan:
    """Areas of the clipped revolution family at one equatorial point, and the
    check sup_s area <= pinched-limit area + 4 pi h^2 / (-log h)."""
    if not (0.0 < r < math.sin(math.pi / n)):
        raise RegimeError(f"need 0 < r < sin(pi/n) = {math.sin(math.pi / n):.4f}, got {r}")
    if regime == "paper":
        cap = math.exp(-8 * n)
        if not (0.0 < h < cap):
            raise RegimeError(f"small-h regime needs 0 < h < exp(-8n) = {cap:.3e}")
    elif regime == "demo":
        if not (0.0 < h <= 0.02):
            raise RegimeError("demonstration regime needs 0 < h <= 0.02")
        if r < 5 * h:
            raise RegimeError("demonstration regime needs r >= 5h")
    else:
        raise RegimeError(f"unknown regime {regime!r}")
    areas, errs = [], []
    for s in s_grid:
        a, e = CatenoidNeck(0, n, r, h, float(s), clip_siblings=False).area(rel_tol)
        areas.append(a)
        errs.append(e)
    sup_area = max(areas)
    arg = s_grid[areas.index(sup_area)]
    planar = math.sqrt(1.0 - h * h)
    limit = 2 * circle_lens_area(planar, r, 1.0)
    slack = 4 * math.pi * h * h / (-math.log(h))
    ok = sup_area <= limit + slack + 10 * (max(errs) + rel_tol * sup_area)
    return CatenoidScan(
        r=r,
        h=h,
        s_grid=tuple(float(s) for s in s_grid),
        areas=tuple(areas),
        quad_errs=tuple(errs),
        argmax_s=float(arg),
        sup_area=sup_area,
        limit_area=limit,
        slack=slack,
        estimate_ok=ok,
    )


# ---------------------------------------------------------------------------
# scan / width bracket


@dataclass(frozen=True)
class GridRecord:
    t: float
    stage: str
    area: float
    area_err: float
    volume: float
    ribbon_max: float
    ribbon_bound: float


@dataclass(frozen=True)
class WidthBracket:
    lower: float
    lower_err: float
    upper: float
    upper_err: float
    t_star: float
    records: tuple[GridRecord, ...]

    @property
    def upper_ok(self) -> bool:
        return self.upper < 2 * math.pi

    def lower_ok(self, tol: float = 5e-3) -> bool:
        return self.lower >= math.pi - tol


def scan_grid(cfg: SweepoutConfig, rel_tol: float | None = None) -> tuple[GridRecord, ...]:
    rel_tol = cfg.quad_tol if rel_tol is None else rel_tol
    out = []
    for t in cfg.grid:
        sl = build_slice(cfg, t)
        a, ae = area(sl, rel_tol)
        v = enclosed_volume(cfg, t)
        rmax = 0.0
        for p in sl.patches:
            if isinstance(p, Ribbon):
                rmax = max(rmax, p.area(rel_tol)[0])
        bound = 2 * math.pi * cfg.eps0 * t
        out.append(GridRecord(t, sl.stage, a, ae, v, rmax, bound))
    return tuple(out)


def width_bracket(cfg: SweepoutConfig, rel_tol: float | None = None) -> WidthBracket:
    interior = [t for t in cfg.grid if 0.0 < t < 1.0]
    if not interior:
        raise ConfigError("grid must contain interior samples bracketing the volume bisector")
    half = 2 * math.pi / 3
    vols = {t: enclosed_volume(cfg, t) for t in interior}
    if min(vols.values()) > half or max(vols.values()) < half:
        raise ConfigError("grid must bracket the volume bisector")
    records = scan_grid(cfg, rel_tol)
    upper_rec = max(records, key=lambda r: r.area)
    t_star = bisect_volume(cfg, half, min(interior), max(interior))
    sl = build_slice(cfg, t_star)
    lower, lower_err = area(sl, cfg.quad_tol if rel_tol is None else rel_tol)
    return WidthBracket(
        lower=lower,
        lower_err=lower_err,
        upper=upper_rec.area,
        upper_err=upper_rec.area_err,
        t_star=t_star,
        records=records,
    )


# ---------------------------------------------------------------------------
# exact small-t0 bound


def verify_area_bound_symbolic(t0: Fraction, n: int) -> dict:
    """Exact proof that 2(1 - t^2 + n eps0 t) <= 2 - t0^2 on [t0, 1] when
    eps0 = t0/(2n): the difference is 2t^2 - t0 t - t0^2 = 2(t - t0)(t + t0/2),
    nonnegative there since both factors are. All arithmetic is rational."""
    t0 = Fraction(t0)
    if not (0 < t0 < 1):
        raise DomainError("t0 must lie in (0, 1)")
    if n < 2:
        raise DomainError("n must be at least 2")
    n_eps0 = Fraction(t0, 2)  # n * (t0 / (2n)), exactly

    # difference polynomial (2 - t0^2) - 2(1 - t^2 + (n eps0) t), coefficients in t
    diff = {2: Fraction(2), 1: -2 * n_eps0, 0: -t0 * t0}
    # expansion of 2(t - t0)(t + t0/2)
    expand = {2: Fraction(2), 1: 2 * (t0 / 2 - t0), 0: -t0 * t0}
    identity_ok = diff == expand

    # factor signs on [t0, 1]
    f1_lo, f1_hi = t0 - t0, 1 - t0  # t - t0 at both endpoints
    f2_lo = t0 + t0 / 2
    factors_ok = f1_lo >= 0 and f1_hi >= 0 and f2_lo > 0

    endpoint_lo = 2 * t0 * t0 - t0 * t0 - t0 * t0
    endpoint_hi = 2 - t0 - t0 * t0
    return {
        "t0": str(t0),
        "n": n,
        "identity_coefficients": {k: str(v) for k, v in sorted(diff.items())},
        "identity_ok": identity_ok,
        "factor_signs_ok": factors_ok,
        "difference_at_t0": str(endpoint_lo),
        "difference_at_1": str(endpoint_hi),
        "proved": identity_ok and factors_ok and endpoint_lo == 0 and endpoint_hi > 0,
    }
