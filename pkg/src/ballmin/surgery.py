"""Combinatorial surgery: neck cuts, half-neck cuts, component drops.

A neck cut slices along a two-sided vertex-simple interior edge-cycle,
duplicates it, and caps both new loops with single-apex fans, so the Euler
characteristic rises by exactly 2. A half-neck cut slices along a
vertex-simple edge-path between two boundary vertices and leaves the cut
open, raising the characteristic by exactly 1. Curves must be edge-paths;
refine with split_triangle when a desired curve is not one.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction

import networkx as nx

from .complex import (
    SurfaceComplex,
    TopologyProfile,
    _edge,
    boundary_vertices,
    classify,
    component_vertices,
)
from .errors import BudgetExceeded, InvalidCurve, UnknownComponent


@dataclass(frozen=True)
class NeckMove:
    cycle: tuple[int, ...]

    kind = "neck"

    @property
    def length(self) -> int:
        return len(self.cycle)


@dataclass(frozen=True)
class HalfNeckMove:
    path: tuple[int, ...]

    kind = "halfneck"

    @property
    def length(self) -> int:
        return len(self.path) - 1


@dataclass(frozen=True)
class DropMove:
    components: tuple[int, ...]

    kind = "drop"

    @property
    def length(self) -> int:
        return 0


Move = NeckMove | HalfNeckMove | DropMove


def _ordered_link(s: SurfaceComplex, v: int) -> tuple[list[int], bool]:
    """Link of v as an ordered vertex list; True when it closes into a cycle."""
    ledges = []
    for a, b, c in s.triangles:
        if v == a:
            ledges.append((b, c))
        elif v == b:
            ledges.append((a, c))
        elif v == c:
            ledges.append((a, b))
    adj: dict[int, list[int]] = defaultdict(list)
    for a, b in ledges:
        adj[a].append(b)
        adj[b].append(a)
    ends = sorted(u for u, ws in adj.items() if len(ws) == 1)
    if ends:
        start, is_cycle = ends[0], False
    else:
        start, is_cycle = min(adj), True
    walk = [start]
    prev = None
    cur = start
    while True:
        nxts = [w for w in adj[cur] if w != prev]
        if not nxts:
            break
        # On a cycle both neighbors match at the start; pick deterministically.
        nxt = min(nxts) if prev is None else nxts[0]
        if is_cycle and nxt == start:
            break
        walk.append(nxt)
        prev, cur = cur, nxt
    return walk, is_cycle


def _arc_split(walk: list[int], is_cycle: bool, p: int, n: int) -> tuple[set, set]:
    """Split the link into two edge-arcs separated by link vertices p and n.

    Returns two sets of frozenset edges; each nonempty for valid curves.
    """
    edges = [frozenset((walk[i], walk[i + 1])) for i in range(len(walk) - 1)]
    if is_cycle:
        edges.append(frozenset((walk[-1], walk[0])))
    ip, inn = walk.index(p), walk.index(n)
    lo, hi = min(ip, inn), max(ip, inn)
    side_a = set(edges[lo:hi])
    side_b = set(edges[:lo]) | set(edges[hi:])
    return side_a, side_b


def _propagate_sides(
    s: SurfaceComplex,
    emap: dict,
    curve: tuple[int, ...],
    closed: bool,
) -> dict[tuple[int, int], int]:
    """Assign side labels to (triangle index, curve position) pairs.

    Walks the curve, matching arcs across each curve edge through its two
    incident triangles. Raises InvalidCurve when a closed curve is one-sided.
    """
    k = len(curve)
    tri_sets = [frozenset(t) for t in s.triangles]

    arcs: list[tuple[set, set]] = []
    for i, v in enumerate(curve):
        walk, is_cycle = _ordered_link(s, v)
        if closed:
            p, n = curve[(i - 1) % k], curve[(i + 1) % k]
        else:
            p = curve[i - 1] if i > 0 else None
            n = curve[i + 1] if i < k - 1 else None
        if p is None or n is None:
            # Path endpoint: split its link path at the single inner neighbor.
            inner = n if p is None else p
            if not is_cycle and (inner == walk[0] or inner == walk[-1]):
                raise InvalidCurve(
                    f"path edge at boundary vertex {v} runs along the boundary"
                )
            j = walk.index(inner)
            edges = [frozenset((walk[m], walk[m + 1])) for m in range(len(walk) - 1)]
            arcs.append((set(edges[:j]), set(edges[j:])))
        else:
            arcs.append(_arc_split(walk, is_cycle, p, n))

    def tri_side(ti: int, pos: int) -> int:
        v = curve[pos]
        others = frozenset(tri_sets[ti] - {v})
        a, b = arcs[pos]
        if others in a:
            return 0
        if others in b:
            return 1
        raise InvalidCurve(f"triangle {s.triangles[ti]} not adjacent to curve at {v}")

    # Label maps per position: maps raw side in {0,1} to a global label.
    relabel = [None] * k
    relabel[0] = (0, 1)
    steps = k if closed else k - 1
    for i in range(steps):
        j = (i + 1) % k
        e = _edge(curve[i], curve[j])
        tris = emap.get(e, ())
        if len(tris) != 2:
            raise InvalidCurve(f"curve edge {e} is not an interior edge")
        for ti in tris:
            lab = relabel[i][tri_side(ti, i)]
            raw_j = tri_side(ti, j)
            want = (lab, 1 - lab) if raw_j == 0 else (1 - lab, lab)
            if relabel[j] is None:
                relabel[j] = want
            elif relabel[j] != want:
                if j == 0:
                    raise InvalidCurve(f"cycle {curve} is one-sided")
                raise InvalidCurve(f"side propagation failed at vertex {curve[j]}")

    out: dict[tuple[int, int], int] = {}
    for pos, v in enumerate(curve):
        for ti, t in enumerate(tri_sets):
            if v in t:
                out[(ti, pos)] = relabel[pos][tri_side(ti, pos)]
    return out


def _check_curve_vertices(s: SurfaceComplex, curve: tuple[int, ...]) -> dict:
    vs = set(s.vertices)
    for v in curve:
        if v not in vs:
            raise InvalidCurve(f"curve vertex {v} not in complex")
    if len(set(curve)) != len(curve):
        raise InvalidCurve(f"curve {curve} is not vertex-simple")
    emap = s.edge_triangles()
    return emap


def cut_neck(s: SurfaceComplex, cycle: tuple[int, ...]) -> SurfaceComplex:
    """Cut along a two-sided interior edge-cycle and cap both sides."""
    cycle = tuple(cycle)
    if len(cycle) < 3:
        raise InvalidCurve(f"neck cycle {cycle} shorter than 3")
    emap = _check_curve_vertices(s, cycle)
    bdry = boundary_vertices(s)
    for v in cycle:
        if v in bdry:
            raise InvalidCurve(f"neck cycle touches boundary vertex {v}")
    k = len(cycle)
    for i in range(k):
        if _edge(cycle[i], cycle[(i + 1) % k]) not in emap:
            raise InvalidCurve(f"cycle pair ({cycle[i]}, {cycle[(i + 1) % k]}) is not an edge")
    sides = _propagate_sides(s, emap, cycle, closed=True)

    fresh = max(s.vertices) + 1
    primed = {v: fresh + i for i, v in enumerate(cycle)}
    pos_of = {v: i for i, v in enumerate(cycle)}
    new_tris = []
    for ti, t in enumerate(s.triangles):
        nt = []
        for v in t:
            if v in pos_of and sides[(ti, pos_of[v])] == 1:
                nt.append(primed[v])
            else:
                nt.append(v)
        new_tris.append(tuple(nt))
    apex0 = fresh + k
    apex1 = fresh + k + 1
    for i in range(k):
        a, b = cycle[i], cycle[(i + 1) % k]
        new_tris.append((a, b, apex0))
        new_tris.append((primed[b], primed[a], apex1))
    verts = s.vertices + tuple(primed[v] for v in cycle) + (apex0, apex1)
    return SurfaceComplex(verts, tuple(new_tris))


def cut_halfneck(s: SurfaceComplex, path: tuple[int, ...]) -> SurfaceComplex:
    """Cut along an edge-path between two boundary vertices; no caps."""
    path = tuple(path)
    if len(path) < 2:
        raise InvalidCurve(f"half-neck path {path} needs at least one edge")
    emap = _check_curve_vertices(s, path)
    bdry = boundary_vertices(s)
    if path[0] not in bdry or path[-1] not in bdry:
        raise InvalidCurve("half-neck endpoints must be boundary vertices")
    for v in path[1:-1]:
        if v in bdry:
            raise InvalidCurve(f"half-neck interior vertex {v} lies on the boundary")
    for i in range(len(path) - 1):
        e = _edge(path[i], path[i + 1])
        if e not in emap:
            raise InvalidCurve(f"path pair ({path[i]}, {path[i + 1]}) is not an edge")
        if len(emap[e]) != 2:
            raise InvalidCurve(f"path edge {e} is not an interior edge")
    sides = _propagate_sides(s, emap, path, closed=False)

    fresh = max(s.vertices) + 1
    primed = {v: fresh + i for i, v in enumerate(path)}
    pos_of = {v: i for i, v in enumerate(path)}
    new_tris = []
    for ti, t in enumerate(s.triangles):
        nt = []
        for v in t:
            if v in pos_of and sides[(ti, pos_of[v])] == 1:
                nt.append(primed[v])
            else:
                nt.append(v)
        new_tris.append(tuple(nt))
    verts = s.vertices + tuple(primed[v] for v in path)
    return SurfaceComplex(verts, tuple(new_tris))


def drop_components(s: SurfaceComplex, components: tuple[int, ...]) -> SurfaceComplex:
    """Discard the listed components (indices in classification order)."""
    comp_vs = component_vertices(s)
    for ci in components:
        if not (0 <= ci < len(comp_vs)):
            raise UnknownComponent(f"component index {ci} out of range 0..{len(comp_vs) - 1}")
    dropped = set()
    for ci in set(components):
        dropped |= comp_vs[ci]
    tris = tuple(t for t in s.triangles if t[0] not in dropped)
    verts = tuple(v for v in s.vertices if v not in dropped)
    return SurfaceComplex(verts, tris)


def apply_move(s: SurfaceComplex, move: Move) -> SurfaceComplex:
    if isinstance(move, NeckMove):
        return cut_neck(s, move.cycle)
    if isinstance(move, HalfNeckMove):
        return cut_halfneck(s, move.path)
    if isinstance(move, DropMove):
        return drop_components(s, move.components)
    raise InvalidCurve(f"unknown move {move!r}")


def apply_sequence(s: SurfaceComplex, moves) -> SurfaceComplex:
    for move in moves:
        s = apply_move(s, move)
    return s


@dataclass(frozen=True)
class SemicontinuityReport:
    """Model check of one before/after pair against the monotonicity battery.

    The orientable-case checks apply only when every input component is
    orientable; outside that hypothesis they are reported as None and do not
    count as failures.
    """

    chi_delta: int
    expected_chi_delta: int | None
    beta1_delta: int
    gsum_delta: Fraction
    components_delta: int
    orientable_components_delta: int
    nonorientable_components_delta: int
    orientable_input: bool
    orientability_preserved: bool | None
    bg_delta: Fraction | None

    @property
    def passed(self) -> bool:
        ok = (
            self.beta1_delta <= 0
            and self.gsum_delta <= 0
            and self.components_delta <= 1
            and self.orientable_components_delta <= 1
            and self.nonorientable_components_delta <= 1
        )
        if self.expected_chi_delta is not None:
            ok = ok and self.chi_delta == self.expected_chi_delta
        if self.orientable_input:
            ok = ok and bool(self.orientability_preserved) and self.bg_delta <= 0
        return ok


def check_semicontinuity(
    before: TopologyProfile, after: TopologyProfile, move: Move | None = None
) -> SemicontinuityReport:
    expected = None
    if isinstance(move, NeckMove):
        expected = 2
    elif isinstance(move, HalfNeckMove):
        expected = 1
    n_or_b = sum(1 for c in before.components if c.orientable)
    n_or_a = sum(1 for c in after.components if c.orientable)
    orientable_input = before.orientable
    return SemicontinuityReport(
        chi_delta=after.chi - before.chi,
        expected_chi_delta=expected,
        beta1_delta=after.beta1 - before.beta1,
        gsum_delta=after.gsum - before.gsum,
        components_delta=after.beta0 - before.beta0,
        orientable_components_delta=n_or_a - n_or_b,
        nonorientable_components_delta=(after.beta0 - n_or_a) - (before.beta0 - n_or_b),
        orientable_input=orientable_input,
        orientability_preserved=after.orientable if orientable_input else None,
        bg_delta=(
            (after.gsum + after.bsum) - (before.gsum + before.bsum)
            if orientable_input
            else None
        ),
    )


def _canonical_cycle(cyc: tuple[int, ...]) -> tuple[int, ...]:
    best = None
    k = len(cyc)
    for seq in (cyc, tuple(reversed(cyc))):
        for r in range(k):
            cand = seq[r:] + seq[:r]
            if best is None or cand < best:
                best = cand
    return best


def enumerate_moves(
    s: SurfaceComplex, max_len: int, budget: int = 200_000
) -> list[Move]:
    """All valid neck cycles and half-neck paths with at most max_len edges.

    Cycles are deduplicated up to rotation and reversal, paths up to reversal,
    and the result is sorted deterministically. One-sided cycles are excluded
    since they bound no annulus neighborhood.
    """
    emap = s.edge_triangles()
    bdry = boundary_vertices(s)
    interior = [v for v in s.vertices if v not in bdry]
    g_int = nx.Graph()
    g_int.add_nodes_from(interior)
    for (a, b), tris in emap.items():
        if len(tris) == 2 and a not in bdry and b not in bdry:
            g_int.add_edge(a, b)

    moves: list[Move] = []
    seen = set()
    if max_len >= 3:
        for cyc in nx.simple_cycles(g_int, length_bound=max_len):
            key = _canonical_cycle(tuple(cyc))
            if key in seen:
                continue
            seen.add(key)
            try:
                _propagate_sides(s, emap, key, closed=True)
            except InvalidCurve:
                continue
            moves.append(NeckMove(key))
            if len(moves) > budget:
                raise BudgetExceeded(f"more than {budget} moves at max_len={max_len}")

    # Half-neck paths: depth-first walks from each boundary vertex through
    # interior vertices, ending at any other boundary vertex.
    adj: dict[int, list[int]] = defaultdict(list)
    for (a, b), tris in emap.items():
        if len(tris) == 2:
            adj[a].append(b)
            adj[b].append(a)
    for ws in adj.values():
        ws.sort()
    seen_paths = set()
    for start in sorted(bdry):
        stack = [(start, (start,))]
        while stack:
            cur, path = stack.pop()
            for nxt in adj[cur]:
                if nxt in path:
                    continue
                if nxt in bdry:
                    if nxt != start:
                        cand = path + (nxt,)
                        key = min(cand, tuple(reversed(cand)))
                        if key not in seen_paths:
                            seen_paths.add(key)
                            moves.append(HalfNeckMove(key))
                            if len(moves) > budget:
                                raise BudgetExceeded(
                                    f"more than {budget} moves at max_len={max_len}"
                                )
                elif len(path) < max_len:
                    stack.append((nxt, path + (nxt,)))

    def sort_key(m: Move):
        seq = m.cycle if isinstance(m, NeckMove) else m.path
        return (m.kind, len(seq), seq)

    moves.sort(key=sort_key)
    return moves
