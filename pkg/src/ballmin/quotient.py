"""Cyclic symmetry of complexes: quotients and boundary-count arithmetic.

Actions must be rigid: simplicial automorphisms of exact order n whose
nontrivial powers fix isolated vertices only, with every vertex stabilizer
trivial or full. Under these hypotheses the orbit space is again a surface
complex and the Euler characteristics satisfy
chi(input) = n * chi(quotient) - i * (n - 1) with i the fixed-vertex count.
"""

from __future__ import annotations

from dataclasses import dataclass

from .complex import (
    SurfaceComplex,
    TopologyProfile,
    boundary_loops,
    classify,
)
from .errors import DomainError, MalformedComplex, NotAnAction, WildFixedSet


def admissible_boundary_counts(n: int) -> frozenset[int]:
    """Possible boundary-component counts in {2..n} for a genus-0 complex
    with a rigid order-n cyclic symmetry.

    Solved honestly from chi arithmetic: 2 - b = n(2 - b') - i(n - 1) with
    i in {0, 1, 2} axis points and b' >= 1 quotient loops.
    """
    return frozenset(b for b, _ in boundary_count_certificates(n))


def boundary_count_certificates(n: int) -> tuple[tuple[int, tuple[int, int]], ...]:
    """Each admissible b with its witness (fixed-point count i, quotient loops b')."""
    if n < 3:
        raise DomainError(f"cyclic order must be at least 3, got {n}")
    out = []
    for i in (0, 1, 2):
        for b_quot in range(1, n + 3):
            b = (b_quot - 2 + i) * n + (2 - i)
            if 2 <= b <= n:
                out.append((b, (i, b_quot)))
    return tuple(sorted(out))


@dataclass(frozen=True)
class CyclicAction:
    """A rigid simplicial Z_n action given by its generator permutation."""

    s: SurfaceComplex
    perm: dict[int, int]
    order: int

    def __post_init__(self) -> None:
        s, perm, n = self.s, self.perm, self.order
        if n < 2:
            raise NotAnAction(f"order must be at least 2, got {n}")
        vs = set(s.vertices)
        if set(perm) != vs or set(perm.values()) != vs:
            raise NotAnAction("permutation is not a bijection on the vertex set")
        tri_sets = {frozenset(t) for t in s.triangles}
        powers = self._powers()
        if any(powers[n][v] != v for v in vs):
            raise NotAnAction(f"permutation does not have order dividing {n}")
        for k in range(1, n):
            pk = powers[k]
            if all(pk[v] == v for v in vs):
                raise NotAnAction(f"permutation order divides {k}, not exactly {n}")
            for t in tri_sets:
                img = frozenset(pk[v] for v in t)
                if img not in tri_sets:
                    raise NotAnAction(f"power {k} maps triangle {tuple(sorted(t))} off the complex")
                if img == t:
                    raise WildFixedSet(f"power {k} fixes triangle {tuple(sorted(t))} setwise")
            for a, b in s.edges:
                if {pk[a], pk[b]} == {a, b}:
                    raise WildFixedSet(f"power {k} fixes edge ({a}, {b}) setwise")
        for v in vs:
            size = self._orbit_size(v)
            if size not in (1, n):
                raise WildFixedSet(f"vertex {v} has orbit size {size}: partial stabilizer")
        rep = self.orbit_representative()
        qtris = set()
        for a, b, c in s.triangles:
            key = frozenset((rep[a], rep[b], rep[c]))
            if len(key) != 3:
                raise NotAnAction(
                    f"triangle ({a}, {b}, {c}) meets a vertex orbit twice: action not rigid"
                )
            qtris.add(key)
        if len(s.triangles) != n * len(qtris):
            raise NotAnAction("distinct triangle orbits collide in the quotient")

    def _powers(self) -> dict[int, dict[int, int]]:
        out = {1: dict(self.perm)}
        for k in range(2, self.order + 1):
            out[k] = {v: self.perm[out[k - 1][v]] for v in self.perm}
        return out

    def _orbit_size(self, v: int) -> int:
        size, w = 1, self.perm[v]
        while w != v:
            size += 1
            w = self.perm[w]
        return size

    @property
    def fixed_vertices(self) -> tuple[int, ...]:
        return tuple(sorted(v for v in self.s.vertices if self.perm[v] == v))

    def orbit_representative(self) -> dict[int, int]:
        rep = {}
        for v in self.s.vertices:
            if v in rep:
                continue
            orbit = [v]
            w = self.perm[v]
            while w != v:
                orbit.append(w)
                w = self.perm[w]
            r = min(orbit)
            for u in orbit:
                rep[u] = r
        return rep

    def quotient(self) -> SurfaceComplex:
        rep = self.orbit_representative()
        qtris = {tuple(sorted((rep[a], rep[b], rep[c]))) for a, b, c in self.s.triangles}
        qverts = sorted({v for t in qtris for v in t})
        try:
            return SurfaceComplex(tuple(qverts), tuple(sorted(qtris)))
        except MalformedComplex as exc:
            raise NotAnAction(f"quotient is not a surface complex: {exc}") from exc


@dataclass(frozen=True)
class QuotientReport:
    order: int
    fixed_count: int
    chi_input: int
    chi_quotient: int
    rh_consistent: bool
    input_profile: TopologyProfile
    quotient_profile: TopologyProfile
    boundary_orbit_sizes: tuple[int, ...]

    @property
    def boundary_simply_transitive(self) -> bool:
        return self.boundary_orbit_sizes == (self.order,)


def verify_riemann_hurwitz(s: SurfaceComplex, perm: dict[int, int], order: int) -> QuotientReport:
    """Build the quotient and check the chi identity against the fixed count."""
    act = CyclicAction(s, perm, order)
    quot = act.quotient()
    p_in = classify(s)
    p_q = classify(quot)
    i = len(act.fixed_vertices)
    consistent = p_in.chi == order * p_q.chi - i * (order - 1)

    loops = boundary_loops(s)
    loop_sets = [frozenset(lp) for lp in loops]
    seen = set()
    orbit_sizes = []
    for li, ls in enumerate(loop_sets):
        if li in seen:
            continue
        size = 0
        cur = ls
        while True:
            idx = loop_sets.index(cur)
            if idx in seen:
                break
            seen.add(idx)
            size += 1
            cur = frozenset(perm[v] for v in cur)
        orbit_sizes.append(size)
    return QuotientReport(
        order=order,
        fixed_count=i,
        chi_input=p_in.chi,
        chi_quotient=p_q.chi,
        rh_consistent=consistent,
        input_profile=p_in,
        quotient_profile=p_q,
        boundary_orbit_sizes=tuple(sorted(orbit_sizes)),
    )


def symmetric_sphere(n: int, cols_per_sector: int = 3, rings: int = 4) -> tuple[SurfaceComplex, dict[int, int]]:
    """Globe mesh with poles on the axis and an order-n rotation permutation.

    cols_per_sector >= 3 keeps the quotient simplicial; rings >= 2.
    """
    if n < 2 or cols_per_sector < 3 or rings < 2:
        raise DomainError("need n >= 2, cols_per_sector >= 3, rings >= 2")
    L = n * cols_per_sector
    north, south = 0, 1
    vid = lambda r, j: 2 + (r - 1) * L + (j % L)
    tris = []
    for j in range(L):
        tris.append((north, vid(1, j), vid(1, j + 1)))
    for r in range(1, rings):
        for j in range(L):
            tris.append((vid(r, j), vid(r + 1, j), vid(r + 1, j + 1)))
            tris.append((vid(r, j), vid(r + 1, j + 1), vid(r, j + 1)))
    for j in range(L):
        tris.append((south, vid(rings, j + 1), vid(rings, j)))
    verts = tuple(range(2 + rings * L))
    perm = {north: north, south: south}
    for r in range(1, rings + 1):
        for j in range(L):
            perm[vid(r, j)] = vid(r, j + cols_per_sector)
    return SurfaceComplex(verts, tuple(tris)), perm


def symmetric_band(n: int, cols_per_sector: int = 3, rings: int = 2) -> tuple[SurfaceComplex, dict[int, int]]:
    """Annulus mesh with a free order-n rotation (axis avoided, i = 0)."""
    if n < 2 or cols_per_sector < 3 or rings < 1:
        raise DomainError("need n >= 2, cols_per_sector >= 3, rings >= 1")
    L = n * cols_per_sector
    vid = lambda r, j: r * L + (j % L)
    tris = []
    for r in range(rings):
        for j in range(L):
            tris.append((vid(r, j), vid(r + 1, j), vid(r + 1, j + 1)))
            tris.append((vid(r, j), vid(r + 1, j + 1), vid(r, j + 1)))
    verts = tuple(range((rings + 1) * L))
    perm = {}
    for r in range(rings + 1):
        for j in range(L):
            perm[vid(r, j)] = vid(r, j + cols_per_sector)
    return SurfaceComplex(verts, tuple(tris)), perm


def symmetric_punched_sphere(n: int, cols_per_sector: int = 3, rings: int = 4) -> tuple[SurfaceComplex, dict[int, int]]:
    """Genus-0 mesh with n boundary loops in one rotation orbit (i = 2)."""
    if rings < 3:
        raise DomainError("need rings >= 3 so the hole orbit avoids both poles")
    s, perm = symmetric_sphere(n, cols_per_sector, rings)
    L = n * cols_per_sector
    mid = max(2, rings // 2)
    vid = lambda r, j: 2 + (r - 1) * L + (j % L)
    removed = {
        frozenset((vid(mid, k * cols_per_sector), vid(mid + 1, k * cols_per_sector), vid(mid + 1, k * cols_per_sector + 1)))
        for k in range(n)
    }
    tris = tuple(t for t in s.triangles if frozenset(t) not in removed)
    if len(tris) != len(s.triangles) - n:
        raise DomainError("hole orbit not found; increase rings")
    return SurfaceComplex(s.vertices, tris), perm
