"""Abstract triangulated surface complexes and their exact classification.

A complex is a plain combinatorial object: vertex ids plus triangles given as
vertex triples. No embedding is assumed anywhere in this module. Genus of a
nonorientable component is cross-cap genus (Klein bottle has genus 2).
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ClosedComponentPresent, InternalError, MalformedComplex

Edge = tuple[int, int]
Triangle = tuple[int, int, int]


def _edge(a: int, b: int) -> Edge:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class SurfaceComplex:
    """Vertex ids and triangles; triangle tuples keep their given vertex order."""

    vertices: tuple[int, ...]
    triangles: tuple[Triangle, ...]

    def __post_init__(self) -> None:
        seen_v = set()
        for v in self.vertices:
            if not isinstance(v, int) or v < 0:
                raise MalformedComplex(f"vertex id {v!r} is not a nonnegative integer")
            if v in seen_v:
                raise MalformedComplex(f"vertex {v} listed twice")
            seen_v.add(v)
        seen_t = set()
        for t in self.triangles:
            if len(t) != 3 or len(set(t)) != 3:
                raise MalformedComplex(f"triangle {t} does not have three distinct vertices")
            for v in t:
                if v not in seen_v:
                    raise MalformedComplex(f"triangle {t} uses unknown vertex {v}")
            key = frozenset(t)
            if key in seen_t:
                raise MalformedComplex(f"triangle {tuple(sorted(t))} listed twice")
            seen_t.add(key)

    @staticmethod
    def build(vertices, triangles) -> "SurfaceComplex":
        """Normalize arbitrary iterables into a complex (vertices sorted)."""
        vs = tuple(sorted(int(v) for v in vertices))
        ts = tuple(tuple(int(v) for v in t) for t in triangles)
        return SurfaceComplex(vs, ts)

    @property
    def edges(self) -> tuple[Edge, ...]:
        out = set()
        for a, b, c in self.triangles:
            out.add(_edge(a, b))
            out.add(_edge(b, c))
            out.add(_edge(a, c))
        return tuple(sorted(out))

    def edge_triangles(self) -> dict[Edge, list[int]]:
        """Map each edge to the indices of its incident triangles."""
        emap: dict[Edge, list[int]] = defaultdict(list)
        for ti, (a, b, c) in enumerate(self.triangles):
            emap[_edge(a, b)].append(ti)
            emap[_edge(b, c)].append(ti)
            emap[_edge(a, c)].append(ti)
        return dict(emap)


@dataclass(frozen=True, order=True)
class ComponentProfile:
    """Homeomorphism type of one connected compact surface."""

    orientable: bool
    genus: int
    boundary_count: int

    def __post_init__(self) -> None:
        if self.genus < 0 or self.boundary_count < 0:
            raise InternalError(f"negative genus or boundary count in {self}")
        if not self.orientable and self.genus < 1:
            raise InternalError("nonorientable component needs cross-cap genus >= 1")

    @property
    def chi(self) -> int:
        if self.orientable:
            return 2 - 2 * self.genus - self.boundary_count
        return 2 - self.genus - self.boundary_count

    @property
    def beta1(self) -> int:
        g, b = self.genus, self.boundary_count
        if self.orientable:
            return 2 * g if b == 0 else 2 * g + b - 1
        return g - 1 if b == 0 else g + b - 1

    @property
    def genus_complexity(self) -> Fraction:
        if self.orientable:
            return Fraction(self.genus)
        return Fraction(self.genus - 1, 2)

    @property
    def boundary_complexity(self) -> int:
        return max(self.boundary_count - 1, 0)


@dataclass(frozen=True)
class TopologyProfile:
    """Classification of a (possibly empty, possibly disconnected) surface."""

    components: tuple[ComponentProfile, ...]
    chi: int = field(init=False)
    beta0: int = field(init=False)
    beta1: int = field(init=False)
    beta2: int = field(init=False)
    gsum: Fraction = field(init=False)
    bsum: int = field(init=False)

    def __post_init__(self) -> None:
        comps = self.components
        object.__setattr__(self, "chi", sum(c.chi for c in comps))
        object.__setattr__(self, "beta0", len(comps))
        object.__setattr__(self, "beta1", sum(c.beta1 for c in comps))
        object.__setattr__(
            self, "beta2", sum(1 for c in comps if c.orientable and c.boundary_count == 0)
        )
        object.__setattr__(
            self, "gsum", sum((c.genus_complexity for c in comps), Fraction(0))
        )
        object.__setattr__(self, "bsum", sum(c.boundary_complexity for c in comps))
        self._check_identities()

    def _check_identities(self) -> None:
        c_or = sum(1 for c in self.components if c.orientable)
        c_non = len(self.components) - c_or
        n_bdry_non = sum(
            1 for c in self.components if not c.orientable and c.boundary_count > 0
        )
        total_loops = sum(c.boundary_count for c in self.components)
        ok = (
            self.chi == self.beta0 - self.beta1 + self.beta2
            and self.beta1 == 2 * self.gsum + self.bsum + n_bdry_non
            and self.chi == 2 * c_or + c_non - 2 * self.gsum - total_loops
            and self.gsum >= 0
            and self.bsum >= 0
            and self.gsum.denominator in (1, 2)
        )
        if not ok:
            raise InternalError(f"inconsistent profile {self.components}")

    @property
    def boundary_loop_count(self) -> int:
        return sum(c.boundary_count for c in self.components)

    @property
    def orientable(self) -> bool:
        return all(c.orientable for c in self.components)


def complexities(profile: TopologyProfile) -> tuple[Fraction, int]:
    """Return the pair (genus complexity, boundary complexity) of a profile."""
    return profile.gsum, profile.bsum


def relative_h1_rank(profile: TopologyProfile) -> int:
    """Rank of first homology modulo the image of the boundary's first homology.

    Requires every component to have nonempty boundary; equals twice the genus
    complexity and is always an integer.
    """
    for c in profile.components:
        if c.boundary_count == 0:
            raise ClosedComponentPresent(f"component {c} has no boundary")
    rank = 2 * profile.gsum
    if rank.denominator != 1:
        raise InternalError("relative rank must be integral")
    return int(rank)


class _Analysis:
    """Shared worker: validation, components, orientability, boundary loops."""

    def __init__(self, s: SurfaceComplex) -> None:
        self.s = s
        self.emap = s.edge_triangles()
        self._validate()
        self.comp_tris: list[list[int]] = []
        self.comp_vertices: list[frozenset[int]] = []
        self._split_components()
        self.orient_flags, self.comp_orientable = self._orient()
        self.loops = self._boundary_loops()

    def _validate(self) -> None:
        for e, tris in self.emap.items():
            if len(tris) > 2:
                raise MalformedComplex(f"edge {e} lies in {len(tris)} triangles")
        used = set()
        for t in self.s.triangles:
            used.update(t)
        for v in self.s.vertices:
            if v not in used:
                raise MalformedComplex(f"vertex {v} lies in no triangle")
        # Link of each vertex must be a single path or cycle. Degrees are
        # already <= 2 after the edge check, so connectivity is all that is left.
        link: dict[int, list[Edge]] = defaultdict(list)
        for a, b, c in self.s.triangles:
            link[a].append(_edge(b, c))
            link[b].append(_edge(a, c))
            link[c].append(_edge(a, b))
        for v, ledges in link.items():
            adj: dict[int, list[int]] = defaultdict(list)
            for a, b in ledges:
                adj[a].append(b)
                adj[b].append(a)
            start = next(iter(adj))
            seen = {start}
            stack = [start]
            while stack:
                u = stack.pop()
                for w in adj[u]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            if len(seen) != len(adj):
                raise MalformedComplex(f"vertex {v} has a disconnected link")

    def _split_components(self) -> None:
        tri_adj: dict[int, list[int]] = defaultdict(list)
        for tris in self.emap.values():
            if len(tris) == 2:
                a, b = tris
                tri_adj[a].append(b)
                tri_adj[b].append(a)
        unseen = set(range(len(self.s.triangles)))
        comps: list[list[int]] = []
        while unseen:
            seed = min(unseen)
            block = [seed]
            unseen.discard(seed)
            stack = [seed]
            while stack:
                t = stack.pop()
                for u in tri_adj[t]:
                    if u in unseen:
                        unseen.discard(u)
                        block.append(u)
                        stack.append(u)
            comps.append(sorted(block))
        # Deterministic component order: by smallest vertex id.
        keyed = []
        for block in comps:
            vs = frozenset(v for ti in block for v in self.s.triangles[ti])
            keyed.append((min(vs), block, vs))
        keyed.sort(key=lambda kv: kv[0])
        self.comp_tris = [block for _, block, _ in keyed]
        self.comp_vertices = [vs for _, _, vs in keyed]

    def _orient(self) -> tuple[list[int], list[bool]]:
        """Propagate orientation flags; flag 1 means reverse the stored order."""
        flags = [0] * len(self.s.triangles)
        orientable: list[bool] = []
        tri_dir: list[dict[Edge, bool]] = []
        for a, b, c in self.s.triangles:
            # True when the stored orientation traverses the edge low-to-high.
            tri_dir.append(
                {_edge(a, b): a < b, _edge(b, c): b < c, _edge(c, a): c < a}
            )
        for block in self.comp_tris:
            ok = True
            seed = block[0]
            flags[seed] = 0
            seen = {seed}
            stack = [seed]
            while stack:
                t = stack.pop()
                for e in tri_dir[t]:
                    pair = self.emap[e]
                    if len(pair) != 2:
                        continue
                    u = pair[0] if pair[1] == t else pair[1]
                    # Consistent iff the shared edge is traversed oppositely.
                    agree = tri_dir[t][e] != tri_dir[u][e]
                    want = flags[t] if agree else 1 - flags[t]
                    if u in seen:
                        if flags[u] != want:
                            ok = False
                    else:
                        flags[u] = want
                        seen.add(u)
                        stack.append(u)
            orientable.append(ok)
        return flags, orientable

    def _boundary_loops(self) -> list[tuple[int, ...]]:
        bedges = [e for e, tris in self.emap.items() if len(tris) == 1]
        nbr: dict[int, list[int]] = defaultdict(list)
        for a, b in bedges:
            nbr[a].append(b)
            nbr[b].append(a)
        for v, ws in nbr.items():
            if len(ws) != 2:
                raise MalformedComplex(f"boundary vertex {v} has {len(ws)} boundary edges")
        loops: list[tuple[int, ...]] = []
        unseen = set(nbr)
        while unseen:
            start = min(unseen)
            prev = start
            cur = min(nbr[start])
            loop = [start]
            unseen.discard(start)
            while cur != start:
                loop.append(cur)
                unseen.discard(cur)
                a, b = nbr[cur]
                prev, cur = cur, (b if a == prev else a)
            loops.append(tuple(loop))
        loops.sort(key=lambda lp: lp[0])
        return loops

    def component_profiles(self) -> list[ComponentProfile]:
        out = []
        loop_owner = [
            next(i for i, vs in enumerate(self.comp_vertices) if lp[0] in vs)
            for lp in self.loops
        ]
        for ci, block in enumerate(self.comp_tris):
            vs = self.comp_vertices[ci]
            es = set()
            for ti in block:
                a, b, c = self.s.triangles[ti]
                es.update((_edge(a, b), _edge(b, c), _edge(a, c)))
            chi = len(vs) - len(es) + len(block)
            b_count = sum(1 for owner in loop_owner if owner == ci)
            if self.comp_orientable[ci]:
                g2 = 2 - chi - b_count
                if g2 < 0 or g2 % 2:
                    raise InternalError(f"component {ci}: chi={chi}, b={b_count} not orientable-consistent")
                out.append(ComponentProfile(True, g2 // 2, b_count))
            else:
                g = 2 - chi - b_count
                out.append(ComponentProfile(False, g, b_count))
        return out


def classify(s: SurfaceComplex) -> TopologyProfile:
    """Exact classification: components, orientability, genus, boundary loops."""
    if not s.triangles and not s.vertices:
        return TopologyProfile(())
    return TopologyProfile(tuple(_Analysis(s).component_profiles()))


def component_vertices(s: SurfaceComplex) -> tuple[frozenset[int], ...]:
    """Vertex sets of the components, in classification order."""
    if not s.triangles and not s.vertices:
        return ()
    return tuple(_Analysis(s).comp_vertices)


def boundary_loops(s: SurfaceComplex) -> tuple[tuple[int, ...], ...]:
    """Boundary loops as ordered vertex cycles, deterministically normalized."""
    if not s.triangles and not s.vertices:
        return ()
    return tuple(_Analysis(s).loops)


def boundary_vertices(s: SurfaceComplex) -> frozenset[int]:
    return frozenset(v for lp in boundary_loops(s) for v in lp)


def consistent_orientation(s: SurfaceComplex) -> tuple[Triangle, ...]:
    """Triangles reordered so shared edges are traversed oppositely.

    Raises MalformedComplex when some component is nonorientable. The returned
    orientation is deterministic but the global sign per component is arbitrary.
    """
    ana = _Analysis(s)
    if not all(ana.comp_orientable):
        raise MalformedComplex("complex has a nonorientable component")
    out = []
    for t, flag in zip(s.triangles, ana.orient_flags):
        a, b, c = t
        out.append((a, c, b) if flag else (a, b, c))
    return tuple(out)


def split_triangle(s: SurfaceComplex, tri: Triangle) -> tuple[SurfaceComplex, int]:
    """One barycentric split: replace tri by three triangles around a new vertex.

    Returns the refined complex and the new vertex id. Classification is
    unchanged; only this triangle is refined, neighbors are untouched.
    """
    key = frozenset(tri)
    found = None
    for t in s.triangles:
        if frozenset(t) == key:
            found = t
            break
    if found is None:
        raise MalformedComplex(f"triangle {tri} not in complex")
    m = max(s.vertices) + 1
    a, b, c = found
    tris = [t for t in s.triangles if frozenset(t) != key]
    tris.extend([(a, b, m), (b, c, m), (c, a, m)])
    return SurfaceComplex(s.vertices + (m,), tuple(tris)), m
