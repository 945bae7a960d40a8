"""Canonical meshes for every compact surface type, sized O(genus + boundary).

Construction: spheres are octahedra, handles come from connected sums with a
9-vertex grid torus, cross-caps from connected sums with the 6-vertex
projective plane, and boundary loops from punching triangles whose vertices
are interior. Connected sum identifies the boundary triangles vertex by
vertex, which keeps every link a single path or cycle without new vertices.
"""

from __future__ import annotations

from .complex import ComponentProfile, SurfaceComplex, boundary_vertices, split_triangle
from .errors import DomainError


def octahedron() -> SurfaceComplex:
    tris = (
        (0, 2, 4), (2, 1, 4), (1, 3, 4), (3, 0, 4),
        (2, 0, 5), (1, 2, 5), (3, 1, 5), (0, 3, 5),
    )
    return SurfaceComplex(tuple(range(6)), tris)


def torus_grid(rows: int = 3, cols: int = 3) -> SurfaceComplex:
    """Flat torus as an identified rows x cols grid; needs rows, cols >= 3."""
    if rows < 3 or cols < 3:
        raise DomainError("torus grid needs at least 3 rows and columns")
    vid = lambda i, j: (i % rows) * cols + (j % cols)
    tris = []
    for i in range(rows):
        for j in range(cols):
            tris.append((vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)))
            tris.append((vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)))
    return SurfaceComplex(tuple(range(rows * cols)), tuple(tris))


def projective_plane() -> SurfaceComplex:
    """Six-vertex projective plane (antipodal quotient of the icosahedron)."""
    tris = (
        (0, 1, 3), (0, 1, 4), (0, 2, 3), (0, 2, 5), (0, 4, 5),
        (1, 2, 4), (1, 2, 5), (1, 3, 5), (2, 3, 4), (3, 4, 5),
    )
    return SurfaceComplex(tuple(range(6)), tris)


def cylinder_strip(cols: int = 6) -> SurfaceComplex:
    """Annulus: two vertex rings of length cols, cols >= 4."""
    if cols < 4:
        raise DomainError("cylinder strip needs at least 4 columns")
    tris = []
    for i in range(cols):
        a, b = i, (i + 1) % cols
        tris.append((a, b, cols + a))
        tris.append((b, cols + b, cols + a))
    return SurfaceComplex(tuple(range(2 * cols)), tuple(tris))


def moebius_band(cols: int = 5) -> SurfaceComplex:
    """Moebius band: a strip of cols squares closed with a flip, cols >= 5."""
    if cols < 5:
        raise DomainError("moebius band needs at least 5 columns")
    # Columns i = 0..cols-1 with rows 0, 1; column cols is column 0 upside down.
    vid = lambda i, j: 2 * (i % cols) + ((1 - j) if i >= cols else j)
    tris = []
    for i in range(cols):
        a0, a1 = vid(i, 0), vid(i, 1)
        b0, b1 = vid(i + 1, 0), vid(i + 1, 1)
        tris.append((a0, b0, b1))
        tris.append((a0, b1, a1))
    return SurfaceComplex(tuple(range(2 * cols)), tuple(tris))


def relabel(s: SurfaceComplex, offset: int) -> SurfaceComplex:
    vs = tuple(v + offset for v in s.vertices)
    ts = tuple((a + offset, b + offset, c + offset) for a, b, c in s.triangles)
    return SurfaceComplex(vs, ts)


def disjoint_union(*parts: SurfaceComplex) -> SurfaceComplex:
    vs: list[int] = []
    ts: list[tuple[int, int, int]] = []
    offset = 0
    for p in parts:
        q = relabel(p, offset)
        vs.extend(q.vertices)
        ts.extend(q.triangles)
        offset = max(vs) + 1 if vs else 0
    return SurfaceComplex.build(vs, ts)


def connect_sum(s1: SurfaceComplex, s2: SurfaceComplex) -> SurfaceComplex:
    """Remove one triangle from each part and identify the boundary triples."""
    s2 = relabel(s2, max(s1.vertices) + 1)
    t1, t2 = s1.triangles[0], s2.triangles[0]
    ident = dict(zip(t2, t1))
    tris = list(s1.triangles[1:])
    for t in s2.triangles[1:]:
        tris.append(tuple(ident.get(v, v) for v in t))
    vs = [v for v in s1.vertices] + [v for v in s2.vertices if v not in ident]
    return SurfaceComplex.build(vs, tris)


def punch_hole(s: SurfaceComplex) -> SurfaceComplex:
    """Remove one triangle whose vertices are all interior, creating a loop.

    Prefers an existing triangle; when every triangle touches the boundary,
    three nested splits manufacture a fresh interior triangle first.
    """
    bdry = boundary_vertices(s)
    for t in s.triangles:
        if not (set(t) & bdry):
            tris = tuple(u for u in s.triangles if u != t)
            return SurfaceComplex(s.vertices, tris)
    t = s.triangles[0]
    s, m1 = split_triangle(s, t)
    a, b, c = t
    s, m2 = split_triangle(s, (a, b, m1))
    s, m3 = split_triangle(s, (b, m1, m2))
    tris = tuple(u for u in s.triangles if frozenset(u) != frozenset((m1, m2, m3)))
    return SurfaceComplex(s.vertices, tris)


def canonical_mesh(p: ComponentProfile) -> SurfaceComplex:
    """Connected canonical mesh realizing the profile exactly."""
    if p.orientable:
        s = octahedron()
        for _ in range(p.genus):
            s = connect_sum(s, torus_grid())
    else:
        s = projective_plane()
        for _ in range(p.genus - 1):
            s = connect_sum(s, projective_plane())
    for _ in range(p.boundary_count):
        s = punch_hole(s)
    return s


def canonical_union(profiles) -> SurfaceComplex:
    """Disjoint union of canonical meshes, one per profile."""
    return disjoint_union(*(canonical_mesh(p) for p in profiles))
