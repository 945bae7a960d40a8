"""Betti numbers from boundary-operator ranks, independent of classification.

Ranks are taken over GF(p) with p = 2^31 - 1. For a compact surface complex
the Smith normal form of each boundary operator has invariant factors 1 or 2
only, so any odd prime reproduces the rational ranks exactly while keeping
the elimination in overflow-free int64 arithmetic.
"""

from __future__ import annotations

import numpy as np

from .complex import SurfaceComplex, _edge

_P = 2**31 - 1


def _rank_mod_p(a: np.ndarray, p: int = _P) -> int:
    m = np.array(a, dtype=np.int64) % p
    rows, cols = m.shape
    rank = 0
    for col in range(cols):
        pivots = np.nonzero(m[rank:, col])[0]
        if pivots.size == 0:
            continue
        pr = rank + int(pivots[0])
        if pr != rank:
            m[[rank, pr]] = m[[pr, rank]]
        inv = pow(int(m[rank, col]), p - 2, p)
        m[rank] = (m[rank] * inv) % p
        below = m[rank + 1 :, col]
        nz = np.nonzero(below)[0]
        if nz.size:
            rs = rank + 1 + nz
            m[rs] = (m[rs] - m[rs, col][:, None] * m[rank][None, :]) % p
        rank += 1
        if rank == rows:
            break
    return rank


def betti_numbers(s: SurfaceComplex) -> tuple[int, int, int]:
    """(beta0, beta1, beta2) over the rationals."""
    verts = list(s.vertices)
    vidx = {v: i for i, v in enumerate(verts)}
    edges = list(s.edges)
    eidx = {e: i for i, e in enumerate(edges)}
    nv, ne, nt = len(verts), len(edges), len(s.triangles)
    if nv == 0:
        return (0, 0, 0)

    d1 = np.zeros((nv, ne), dtype=np.int64)
    for j, (a, b) in enumerate(edges):
        d1[vidx[a], j] = -1
        d1[vidx[b], j] = 1

    d2 = np.zeros((ne, nt), dtype=np.int64)
    for j, (a, b, c) in enumerate(s.triangles):
        for u, v in ((a, b), (b, c), (c, a)):
            sign = 1 if u < v else -1
            d2[eidx[_edge(u, v)], j] += sign

    r1 = _rank_mod_p(d1) if ne else 0
    r2 = _rank_mod_p(d2) if nt else 0
    beta0 = nv - r1
    beta1 = ne - r1 - r2
    beta2 = nt - r2
    return (beta0, beta1, beta2)
