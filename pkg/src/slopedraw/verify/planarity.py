"""Exact planarity checking of straight-line drawings.

Three stages: outward-rounded float boxes prune non-overlapping segment
pairs, a filtered float orientation test certifies most survivors disjoint,
and the remainder is decided with exact integer arithmetic on the dyadic
coordinates.  Shared endpoints (by vertex id) are the only contact allowed;
any touching, proper crossing or collinear overlap is a failure, as is a
duplicated vertex location.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .. import numerics as num
from . import _dispatch


@dataclass
class Crossing:
    kind: str  # duplicate-vertex | crossing | touch | overlap
    edge_a: Optional[tuple]
    edge_b: Optional[tuple]
    detail: str = ""


@dataclass
class PlanarityResult:
    ok: bool
    witness: Optional[Crossing] = None
    pairs_boxed: int = 0
    pairs_exact: int = 0


def check_planar(pos: dict, edges: list) -> PlanarityResult:
    """pos: vertex -> (mpf, mpf); edges: iterable of vertex pairs."""
    ids = sorted(pos)
    dy = {v: num.dyadic_point(pos[v]) for v in ids}

    seen = {}
    for v in ids:
        key = dy[v]
        if key in seen:
            return PlanarityResult(
                False, Crossing("duplicate-vertex", None, None, f"{seen[key]} == {v}")
            )
        seen[key] = v

    E = sorted(tuple(sorted(e)) for e in edges)
    for u, v in E:
        if num.point_eq(dy[u], dy[v]):
            return PlanarityResult(
                False, Crossing("overlap", (u, v), None, "zero-length edge")
            )

    ne = len(E)
    if ne < 2:
        return PlanarityResult(True)

    coords = np.empty((ne, 4), dtype=np.float64)
    minx = np.empty(ne)
    maxx = np.empty(ne)
    miny = np.empty(ne)
    maxy = np.empty(ne)
    for k, (u, v) in enumerate(E):
        (ux, uy), (vx, vy) = pos[u], pos[v]
        coords[k] = (float(ux), float(uy), float(vx), float(vy))
        minx[k] = num.float_down(ux if ux < vx else vx)
        maxx[k] = num.float_up(ux if ux > vx else vx)
        miny[k] = num.float_down(uy if uy < vy else vy)
        maxy[k] = num.float_up(uy if uy > vy else vy)

    boxed = _dispatch.sweep_pairs(minx, maxx, miny, maxy)

    shared_pairs = []  # (i, j, shared, other_a, other_b)
    plain_pairs = []
    for i, j in boxed:
        a, b = E[i], E[j]
        common = set(a) & set(b)
        if len(common) == 1:
            s = common.pop()
            oa = a[0] if a[1] == s else a[1]
            ob = b[0] if b[1] == s else b[1]
            shared_pairs.append((i, j, s, oa, ob))
        else:
            plain_pairs.append((i, j))

    pairs_exact = 0

    if plain_pairs:
        verdicts = _dispatch.disjoint_filter(coords, plain_pairs)
        for k, (i, j) in enumerate(plain_pairs):
            if verdicts[k]:
                continue
            pairs_exact += 1
            a, b = E[i], E[j]
            if num.segments_intersect(dy[a[0]], dy[a[1]], dy[b[0]], dy[b[1]]):
                return PlanarityResult(
                    False,
                    Crossing("crossing", a, b),
                    len(boxed),
                    pairs_exact,
                )

    if shared_pairs:
        fl = {v: (float(pos[v][0]), float(pos[v][1])) for v in ids}
        triples = np.array(
            [fl[s] + fl[oa] + fl[ob] for (_i, _j, s, oa, ob) in shared_pairs],
            dtype=np.float64,
        )
        signs = _dispatch.straddle_filter(triples)
        for k, (i, j, s, oa, ob) in enumerate(shared_pairs):
            if signs[k] != 0:
                continue
            pairs_exact += 1
            if num.orient(dy[s], dy[oa], dy[ob]) != 0:
                continue
            # collinear at the shared vertex: overlap iff same direction
            if _same_direction(dy[s], dy[oa], dy[ob]):
                return PlanarityResult(
                    False,
                    Crossing("overlap", E[i], E[j], f"collinear at {s}"),
                    len(boxed),
                    pairs_exact,
                )
    return PlanarityResult(True, None, len(boxed), pairs_exact)


def _same_direction(s, a, b) -> bool:
    """Collinear rays s->a and s->b point the same way (dot product > 0)."""
    dxa = num.dy_sub(a[0], s[0])
    dxb = num.dy_sub(b[0], s[0])
    dya = num.dy_sub(a[1], s[1])
    dyb = num.dy_sub(b[1], s[1])
    dot = num.dy_add(num.dy_mul(dxa, dxb), num.dy_mul(dya, dyb))
    return num.dy_sign(dot) > 0


def check_planar_bruteforce(pos: dict, edges: list) -> PlanarityResult:
    """Independent oracle: exact test on every segment pair, no filtering."""
    ids = sorted(pos)
    dy = {v: num.dyadic_point(pos[v]) for v in ids}
    seen = {}
    for v in ids:
        if dy[v] in seen:
            return PlanarityResult(
                False, Crossing("duplicate-vertex", None, None, f"{seen[dy[v]]} == {v}")
            )
        seen[dy[v]] = v
    E = sorted(tuple(sorted(e)) for e in edges)
    for i in range(len(E)):
        for j in range(i + 1, len(E)):
            a, b = E[i], E[j]
            common = set(a) & set(b)
            if len(common) == 1:
                s = common.pop()
                oa = a[0] if a[1] == s else a[1]
                ob = b[0] if b[1] == s else b[1]
                if num.orient(dy[s], dy[oa], dy[ob]) == 0 and _same_direction(
                    dy[s], dy[oa], dy[ob]
                ):
                    return PlanarityResult(False, Crossing("overlap", a, b))
            else:
                if num.segments_intersect(dy[a[0]], dy[a[1]], dy[b[0]], dy[b[1]]):
                    return PlanarityResult(False, Crossing("crossing", a, b))
    return PlanarityResult(True)


# -- segment-vs-drawing helpers used by the assembler -----------------------


def segment_clear(pos: dict, edges: list, p, q, allowed_endpoints=()) -> bool:
    """Would the open segment p-q cross or touch the drawing?

    The segment may share endpoints only with the vertices named in
    `allowed_endpoints` (it must end exactly at their positions)."""
    dyp = num.dyadic_point(p)
    dyq = num.dyadic_point(q)
    allowed = set(allowed_endpoints)
    dpos = {v: num.dyadic_point(pos[v]) for v in pos}
    for v, d in dpos.items():
        if num.point_eq(d, dyp) or num.point_eq(d, dyq):
            if v not in allowed:
                return False
            continue
        if num.on_segment(d, dyp, dyq):
            return False
    for u, v in edges:
        a, b = dpos[u], dpos[v]
        shared_u = u in allowed and (num.point_eq(a, dyp) or num.point_eq(a, dyq))
        shared_v = v in allowed and (num.point_eq(b, dyp) or num.point_eq(b, dyq))
        if shared_u or shared_v:
            s = a if shared_u else b
            other = b if shared_u else a
            tip = dyq if num.point_eq(s, dyp) else dyp
            if num.orient(s, other, tip) == 0 and _same_direction(s, other, tip):
                return False
            continue
        if num.segments_intersect(a, b, dyp, dyq):
            return False
    return True
