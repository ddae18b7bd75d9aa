"""Extended-precision geometry shared by the drawing pipeline and the verifier.

All drawn coordinates are mpmath floats, i.e. exact dyadic rationals at the
active working precision.  Construction-side geometry (line intersections,
angles) rounds at that precision; verification-side predicates convert the
dyadics to integer mantissa/exponent pairs and decide signs exactly, so no
planarity or incidence question ever rests on an epsilon comparison.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from typing import Iterator

import mpmath
from mpmath import mpf

Point = tuple  # (mpf, mpf)
Dyadic = tuple  # (mantissa: int, exponent: int), value = mantissa * 2**exponent

DEFAULT_PREC_BITS = 240


@contextmanager
def precision_bits(bits: int) -> Iterator[None]:
    """Run a block at the given binary working precision."""
    old = mpmath.mp.prec
    mpmath.mp.prec = max(int(bits), 53)
    try:
        yield
    finally:
        mpmath.mp.prec = old


def job_precision(n_vertices: int) -> int:
    """Working precision for a drawing job.

    Triangle widths shrink by a bounded factor at every split of the
    recursion, and every split consumes at least one vertex, so a linear
    number of guard bits keeps distinct vertices at distinct dyadics.
    """
    return max(DEFAULT_PREC_BITS, 10 * n_vertices + 128)


def pt(x, y) -> Point:
    return (mpf(x), mpf(y))


def angle_of(p: Point, q: Point):
    """Slope angle of segment pq in [0, pi): the clockwise rotation that
    makes the supporting line horizontal."""
    dx = q[0] - p[0]
    dy = q[1] - p[1]
    if dx == 0 and dy == 0:
        raise ValueError("degenerate segment has no slope")
    a = mpmath.atan2(dy, dx)
    if a < 0:
        a += mpmath.pi
    if a >= mpmath.pi:
        a -= mpmath.pi
    return a


def direction(theta) -> Point:
    return (mpmath.cos(theta), mpmath.sin(theta))


def intersect_lines(p: Point, theta_p, q: Point, theta_q) -> Point:
    """Intersection of the line through p with slope angle theta_p and the
    line through q with slope angle theta_q.  Angles must differ mod pi."""
    dpx, dpy = direction(theta_p)
    dqx, dqy = direction(theta_q)
    den = dpx * dqy - dpy * dqx
    if den == 0:
        raise ValueError("parallel lines do not intersect")
    t = ((q[0] - p[0]) * dqy - (q[1] - p[1]) * dqx) / den
    return (p[0] + t * dpx, p[1] + t * dpy)


def intersect_with_horizontal(p: Point, theta, y) -> Point:
    """Intersection of the line through p at angle theta with the line y=const."""
    s = mpmath.sin(theta)
    if s == 0:
        raise ValueError("horizontal line does not cross y=const")
    t = (mpf(y) - p[1]) / s
    return (p[0] + t * mpmath.cos(theta), mpf(y))


def midpoint(p: Point, q: Point) -> Point:
    half = mpf(1) / 2
    return ((p[0] + q[0]) * half, (p[1] + q[1]) * half)


def lerp(p: Point, q: Point, t) -> Point:
    t = mpf(t)
    return (p[0] + (q[0] - p[0]) * t, p[1] + (q[1] - p[1]) * t)


def dist(p: Point, q: Point):
    return mpmath.hypot(q[0] - p[0], q[1] - p[1])


# ---------------------------------------------------------------------------
# Exact dyadic arithmetic (verification side)
# ---------------------------------------------------------------------------


def to_dyadic(x) -> Dyadic:
    """Exact (mantissa, exponent) of an mpf; mantissa carries the sign."""
    v = mpf(x)
    sign, man, exp, _bc = v._mpf_
    if man == 0:
        if exp != 0:  # inf/nan encode as man=0, exp!=0
            raise ValueError("non-finite coordinate")
        return (0, 0)
    return (-man if sign else man, exp)


def dyadic_point(p: Point) -> tuple:
    return (to_dyadic(p[0]), to_dyadic(p[1]))


def dy_add(a: Dyadic, b: Dyadic) -> Dyadic:
    ma, ea = a
    mb, eb = b
    if ma == 0:
        return b
    if mb == 0:
        return a
    if ea == eb:
        return (ma + mb, ea)
    if ea > eb:
        return ((ma << (ea - eb)) + mb, eb)
    return (ma + (mb << (eb - ea)), ea)


def dy_sub(a: Dyadic, b: Dyadic) -> Dyadic:
    ma, ea = a
    mb, eb = b
    if ma == 0:
        return (-mb, eb)
    if mb == 0:
        return a
    if ea == eb:
        return (ma - mb, ea)
    if ea > eb:
        return ((ma << (ea - eb)) - mb, eb)
    return (ma - (mb << (eb - ea)), ea)


def dy_mul(a: Dyadic, b: Dyadic) -> Dyadic:
    return (a[0] * b[0], a[1] + b[1])


def dy_sign(a: Dyadic) -> int:
    m = a[0]
    return (m > 0) - (m < 0)


def orient(pa, pb, pc) -> int:
    """Exact orientation of dyadic points: +1 counter-clockwise, -1 clockwise,
    0 collinear."""
    u1 = dy_sub(pb[0], pa[0])
    v1 = dy_sub(pc[1], pa[1])
    u2 = dy_sub(pb[1], pa[1])
    v2 = dy_sub(pc[0], pa[0])
    return dy_sign(dy_sub(dy_mul(u1, v1), dy_mul(u2, v2)))


def dy_cmp(a: Dyadic, b: Dyadic) -> int:
    return dy_sign(dy_sub(a, b))


def point_eq(p, q) -> bool:
    return dy_cmp(p[0], q[0]) == 0 and dy_cmp(p[1], q[1]) == 0


def on_segment(p, a, b) -> bool:
    """True iff dyadic point p lies on the closed segment ab (a != b)."""
    if orient(a, b, p) != 0:
        return False
    lox, hix = (a[0], b[0]) if dy_cmp(a[0], b[0]) <= 0 else (b[0], a[0])
    loy, hiy = (a[1], b[1]) if dy_cmp(a[1], b[1]) <= 0 else (b[1], a[1])
    return (
        dy_cmp(lox, p[0]) <= 0
        and dy_cmp(p[0], hix) <= 0
        and dy_cmp(loy, p[1]) <= 0
        and dy_cmp(p[1], hiy) <= 0
    )


def segments_intersect(p1, q1, p2, q2) -> bool:
    """Exact: do closed segments p1q1 and p2q2 share at least one point?

    Intended for segment pairs with four distinct endpoints; any contact at
    all (proper crossing, T-touch, collinear overlap) counts.
    """
    o1 = orient(p1, q1, p2)
    o2 = orient(p1, q1, q2)
    if (o1 > 0 and o2 > 0) or (o1 < 0 and o2 < 0):
        return False
    o3 = orient(p2, q2, p1)
    o4 = orient(p2, q2, q1)
    if (o3 > 0 and o4 > 0) or (o3 < 0 and o4 < 0):
        return False
    if o1 != 0 or o2 != 0 or o3 != 0 or o4 != 0:
        return True
    # All collinear: overlap iff the 1-d ranges meet.
    if dy_cmp(p1[0], q1[0]) != 0 or dy_cmp(p2[0], q2[0]) != 0:
        key = 0
    else:
        key = 1
    if dy_cmp(p1[key], q1[key]) > 0:
        lo1, hi1 = q1[key], p1[key]
    else:
        lo1, hi1 = p1[key], q1[key]
    if dy_cmp(p2[key], q2[key]) > 0:
        lo2, hi2 = q2[key], p2[key]
    else:
        lo2, hi2 = p2[key], q2[key]
    return dy_cmp(lo1, hi2) <= 0 and dy_cmp(lo2, hi1) <= 0


def triangle_orientation(a, b, c) -> int:
    o = orient(a, b, c)
    if o == 0:
        raise ValueError("degenerate triangle")
    return o


def point_in_triangle(p, a, b, c, strict: bool = True) -> bool:
    """Exact containment of dyadic p in triangle abc (strict = open interior)."""
    o = triangle_orientation(a, b, c)
    s1 = orient(a, b, p) * o
    s2 = orient(b, c, p) * o
    s3 = orient(c, a, p) * o
    if strict:
        return s1 > 0 and s2 > 0 and s3 > 0
    return s1 >= 0 and s2 >= 0 and s3 >= 0


# ---------------------------------------------------------------------------
# Outward-rounded float bounds (broad phase input)
# ---------------------------------------------------------------------------


def float_down(x) -> float:
    f = float(mpf(x))
    if mpf(f) > mpf(x):
        f = math.nextafter(f, -math.inf)
    return math.nextafter(f, -math.inf)


def float_up(x) -> float:
    f = float(mpf(x))
    if mpf(f) < mpf(x):
        f = math.nextafter(f, math.inf)
    return math.nextafter(f, math.inf)
