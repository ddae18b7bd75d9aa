"""Pure-Python fallback for the planarity broad phase.

Semantics must match the compiled kernels exactly: the same candidate pairs
in the same order, and filter verdicts that only ever err on the side of
"needs exact arithmetic".
"""

from __future__ import annotations

import numpy as np

# Error-bound constants for the filtered orientation sign of float inputs that
# are themselves nearest-roundings of exact dyadic coordinates.
#
#   D = (bx-ax)(cy-ay) - (by-ay)(cx-ax)
#
# Arithmetic error of the float evaluation is < 3.33e-16 * (|u1*v1|+|u2*v2|)
# (Shewchuk's ccwerrboundA); rounding the exact inputs to doubles perturbs D
# by at most ~8 eps M^2 + O(subnormal) with M the largest |coordinate|.  The
# constants below dominate both with a wide margin; an over-estimate merely
# sends a pair to the exact path.
CA = 8e-16
CB = 2e-15
CC = 1e-320


def sweep_pairs(minx, maxx, miny, maxy):
    """All index pairs (i < j) whose fattened boxes overlap, sorted."""
    n = len(minx)
    pairs = []
    if n <= 64:
        for i in range(n):
            for j in range(i + 1, n):
                if (
                    minx[i] <= maxx[j]
                    and minx[j] <= maxx[i]
                    and miny[i] <= maxy[j]
                    and miny[j] <= maxy[i]
                ):
                    pairs.append((i, j))
        return pairs
    order = np.argsort(minx, kind="stable")
    active = []
    for idx in order:
        idx = int(idx)
        x = minx[idx]
        active = [a for a in active if maxx[a] >= x]
        for a in active:
            if miny[idx] <= maxy[a] and miny[a] <= maxy[idx]:
                pairs.append((a, idx) if a < idx else (idx, a))
        active.append(idx)
    pairs.sort()
    return pairs


def orient_filtered(ax, ay, bx, by, cx, cy) -> int:
    """Sign of the orientation of the underlying exact points; 0 = uncertain."""
    u1 = bx - ax
    v1 = cy - ay
    u2 = by - ay
    v2 = cx - ax
    p = u1 * v1
    q = u2 * v2
    det = p - q
    m = max(abs(ax), abs(ay), abs(bx), abs(by), abs(cx), abs(cy))
    bound = CA * (abs(p) + abs(q)) + CB * m * m + CC
    if det > bound:
        return 1
    if det < -bound:
        return -1
    return 0


def disjoint_filter(coords, pairs):
    """verdict[k] = 1 when pair k is certainly disjoint, else 0.

    coords: float64 array (n_edges, 4) of (px, py, qx, qy); pairs: list of
    (i, j) edge-index pairs with no shared endpoint.
    """
    out = np.zeros(len(pairs), dtype=np.uint8)
    for k, (i, j) in enumerate(pairs):
        px, py, qx, qy = coords[i]
        rx, ry, sx, sy = coords[j]
        o1 = orient_filtered(px, py, qx, qy, rx, ry)
        o2 = orient_filtered(px, py, qx, qy, sx, sy)
        if o1 != 0 and o1 == o2:
            out[k] = 1
            continue
        o3 = orient_filtered(rx, ry, sx, sy, px, py)
        o4 = orient_filtered(rx, ry, sx, sy, qx, qy)
        if o3 != 0 and o3 == o4:
            out[k] = 1
    return out


def straddle_filter(triples):
    """verdict[k] = certified orientation sign of (s, a, b), 0 = uncertain.

    triples: float64 array (n, 6) of (sx, sy, ax, ay, bx, by).
    """
    out = np.zeros(len(triples), dtype=np.int8)
    for k in range(len(triples)):
        sx, sy, ax, ay, bx, by = triples[k]
        out[k] = orient_filtered(sx, sy, ax, ay, bx, by)
    return out
