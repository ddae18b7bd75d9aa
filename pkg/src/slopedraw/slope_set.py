"""The bounded slope universe: black, orange, blue, magenta and red slopes.

All slopes are derived from one reference equilateral triangle with a
horizontal base split into 2*delta + 2 equispaced points.  Identities are
symbolic; the numeric angle table is only consumed by geometry.  Slope
equality downstream is always by identity, never by angle comparison.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import mpf

from . import numerics as num
from .errors import DegenerateParameters, NoIntersection

# Symbolic slope identities: ("black",), ("orange", i), ("blue", i),
# ("magl", i), ("magr", i), ("redc", i, j), ("redl", i, h), ("redr", h, j).
SlopeId = tuple

TAU_SLOPE = mpf("1e-9")  # angle separation guard for distinct identities


def slope_name(sid: SlopeId) -> str:
    kind = sid[0]
    if kind == "black":
        return "Black"
    if kind == "orange":
        return f"O({sid[1]})"
    if kind == "blue":
        return f"B({sid[1]})"
    if kind == "magl":
        return f"Ml({sid[1]})"
    if kind == "magr":
        return f"Mr({sid[1]})"
    if kind == "redc":
        return f"Rc({sid[1]},{sid[2]})"
    if kind == "redl":
        return f"Rl({sid[1]},{sid[2]})"
    if kind == "redr":
        return f"Rr({sid[1]},{sid[2]})"
    raise ValueError(f"unknown slope id {sid}")


@dataclass
class SlopeSet:
    delta: int
    delta_star: int
    angles: dict  # canonical SlopeId -> mpf angle in [0, pi)
    base_points: tuple  # u_0 .. u_{2*delta+1} along the reference base
    apex: tuple
    canonical_key: dict = None  # SlopeId -> representative id of its angle class

    def __len__(self) -> int:
        return len(self.angles)

    def rep(self, sid: SlopeId) -> SlopeId:
        """Representative of sid's exact-angle class (e.g. every Rc(i,i) and
        the middle blue slope are all vertical and share one representative)."""
        return self.canonical_key.get(sid, sid) if self.canonical_key else sid

    # -- canonical identities (magenta aliases resolve to blue) -------------

    def black(self) -> SlopeId:
        return ("black",)

    def orange(self, i: int) -> SlopeId:
        if not 1 <= i <= 2 * self.delta:
            raise ValueError(f"orange index {i} out of range")
        return ("orange", i)

    def blue(self, i: int) -> SlopeId:
        if not 0 <= i <= 2 * self.delta:
            raise ValueError(f"blue index {i} out of range")
        return ("blue", i)

    def magl(self, i: int) -> SlopeId:
        if not 1 <= i <= self.delta_star:
            raise ValueError(f"left-magenta index {i} out of range")
        return ("blue", 0) if i == self.delta_star else ("magl", i)

    def magr(self, i: int) -> SlopeId:
        if not 1 <= i <= self.delta_star:
            raise ValueError(f"right-magenta index {i} out of range")
        return ("blue", 2 * self.delta) if i == self.delta_star else ("magr", i)

    def redc(self, i: int, j: int) -> SlopeId:
        if not (2 <= i <= self.delta_star and 2 <= j <= self.delta_star):
            raise ValueError(f"central-red index ({i},{j}) out of range")
        return ("redc", i, j)

    def redl(self, i: int, h: int) -> SlopeId:
        if not (2 <= i <= self.delta_star and 1 <= h <= 2 * self.delta):
            raise ValueError(f"left-red index ({i},{h}) out of range")
        return ("redl", i, h)

    def redr(self, h: int, j: int) -> SlopeId:
        if not (1 <= h <= 2 * self.delta and 2 <= j <= self.delta_star):
            raise ValueError(f"right-red index ({h},{j}) out of range")
        return ("redr", h, j)

    # -- classification helpers ---------------------------------------------

    def is_left_magenta(self, sid: SlopeId) -> bool:
        return sid[0] == "magl" or sid == ("blue", 0)

    def is_right_magenta(self, sid: SlopeId) -> bool:
        return sid[0] == "magr" or sid == ("blue", 2 * self.delta)

    def is_orange(self, sid: SlopeId) -> bool:
        return sid[0] == "orange"

    def is_red(self, sid: SlopeId) -> bool:
        return sid[0] in ("redc", "redl", "redr")

    def magenta_index(self, sid: SlopeId) -> int:
        if sid[0] in ("magl", "magr"):
            return sid[1]
        if sid == ("blue", 0) or sid == ("blue", 2 * self.delta):
            return self.delta_star
        raise ValueError(f"{sid} is not magenta")

    def angle(self, sid: SlopeId):
        return self.angles[sid]


def _magl_angle(i: int, delta_star: int):
    return i * mpmath.pi / (3 * delta_star)


def build_slope_set(delta: int, delta_star: int) -> SlopeSet:
    """Construct the slope universe for a given maximum degree and maximum
    pertinent path-vertex degree.  Cardinality is
    delta_star**2 + 4*delta*delta_star + 1 after alias canonicalization."""
    if delta < 2 or delta_star < 2 or delta_star > delta:
        raise DegenerateParameters(
            f"need 2 <= delta_star <= delta, got delta={delta} delta_star={delta_star}"
        )
    n = 2 * delta + 1
    b = num.pt(0, 0)
    c = num.pt(1, 0)
    a = (mpf(1) / 2, mpmath.sqrt(3) / 2)
    us = tuple((mpf(i) / n, mpf(0)) for i in range(n + 1))
    side = mpf(1) / n

    angles = {("black",): mpf(0)}
    for i in range(1, 2 * delta + 1):
        angles[("orange", i)] = num.angle_of(a, us[i])
    vh = side * mpmath.sqrt(3) / 2
    for i in range(0, 2 * delta + 1):
        vi = ((us[i][0] + us[i + 1][0]) / 2, vh)
        angles[("blue", i)] = num.angle_of(a, vi)
    # closed forms where available; the geometric construction must agree
    third = mpmath.pi / 3
    assert abs(angles[("blue", 0)] - third) < mpf(2) ** (-mpmath.mp.prec + 16)
    assert abs(angles[("blue", 2 * delta)] - 2 * third) < mpf(2) ** (-mpmath.mp.prec + 16)
    angles[("blue", 0)] = third
    angles[("blue", 2 * delta)] = 2 * third
    for i in range(1, delta_star):
        angles[("magl", i)] = _magl_angle(i, delta_star)
        angles[("magr", i)] = mpmath.pi - _magl_angle(i, delta_star)

    ss = SlopeSet(delta, delta_star, angles, us, a)
    for i in range(2, delta_star + 1):
        for j in range(2, delta_star + 1):
            angles[("redc", i, j)] = red_central(i, j, ss)
        for h in range(1, 2 * delta + 1):
            angles[("redl", i, h)] = red_left(i, h, ss)
            angles[("redr", h, i)] = red_right(h, i, ss)

    expected = delta_star**2 + 4 * delta * delta_star + 1
    if len(angles) != expected:
        raise AssertionError(
            f"slope universe has {len(angles)} members, expected {expected}"
        )
    ss.canonical_key = _canonicalize_coincidences(angles)
    _check_separation(angles, ss.canonical_key)
    return ss


_KIND_PREFERENCE = {
    "blue": 0,
    "orange": 1,
    "magl": 2,
    "magr": 3,
    "black": 4,
    "redc": 5,
    "redl": 6,
    "redr": 7,
}


def _canonicalize_coincidences(angles: dict) -> dict:
    """Group identities whose angles coincide exactly (up to construction
    rounding) and snap each group onto one representative angle.

    The construction has true coincidences: every Rc(i,i) is vertical, and so
    is the middle blue slope.  The identity table keeps all members (the
    cardinality is counted over identities), but edges are always tagged with
    the group representative so that by-identity and by-angle counts agree.
    """
    snap_tol = mpf(2) ** (-(2 * mpmath.mp.prec) // 3)
    ordered = sorted(angles.items(), key=lambda kv: (kv[1], kv[0]))
    groups = []
    for sid, ang in ordered:
        if groups and ang - groups[-1][-1][1] <= snap_tol:
            groups[-1].append((sid, ang))
        else:
            groups.append([(sid, ang)])
    canon = {}
    for grp in groups:
        rep = min(grp, key=lambda kv: (_KIND_PREFERENCE[kv[0][0]], kv[0]))[0]
        for sid, _ang in grp:
            angles[sid] = angles[rep]
            if sid != rep:
                canon[sid] = rep
    return canon


def _check_separation(angles: dict, canon: dict) -> None:
    reps = {sid: ang for sid, ang in angles.items() if sid not in canon}
    ordered = sorted(reps.items(), key=lambda kv: kv[1])
    for (idx_a, ang_a), (idx_b, ang_b) in zip(ordered, ordered[1:]):
        if ang_b - ang_a <= TAU_SLOPE:
            raise AssertionError(
                f"slopes {idx_a} and {idx_b} are {ang_b - ang_a} apart"
            )
    wrap = ordered[0][1] + mpmath.pi - ordered[-1][1]
    if wrap <= TAU_SLOPE:
        raise AssertionError("slope table collides across the pi wrap")


def _mag_angle_of(ss: SlopeSet, index: int, left: bool):
    a = _magl_angle(index, ss.delta_star)
    return a if left else mpmath.pi - a


def red_central(i: int, j: int, ss: SlopeSet):
    """Slope of the segment from the apex of a magenta-sided triangle to the
    intersection of the two next-lower magenta lines through its base corners."""
    bp = num.pt(0, 0)
    cp = num.pt(1, 0)
    al = _mag_angle_of(ss, i, True)
    ar = _mag_angle_of(ss, j, False)
    apex = num.intersect_lines(bp, al, cp, ar)
    try:
        p_star = num.intersect_lines(
            bp, _mag_angle_of(ss, i - 1, True), cp, _mag_angle_of(ss, j - 1, False)
        )
    except ValueError as exc:
        raise NoIntersection(str(exc))
    return num.angle_of(apex, p_star)


def red_left(i: int, h: int, ss: SlopeSet, q=None):
    """Slope of q--p* in the left-red construction: q above the axis, p' and
    p'' the axis hits of the Ml(i) and O(h) lines through q, p* the meet of
    the Ml(i-1) line through p' with the B(2*delta) line through p''."""
    if q is None:
        q = ss.apex
    try:
        p1 = num.intersect_with_horizontal(q, _mag_angle_of(ss, i, True), 0)
        p2 = num.intersect_with_horizontal(q, ss.angles[("orange", h)], 0)
        p_star = num.intersect_lines(
            p1, _mag_angle_of(ss, i - 1, True), p2, ss.angles[("blue", 2 * ss.delta)]
        )
    except ValueError as exc:
        raise NoIntersection(str(exc))
    return num.angle_of(q, p_star)


def red_right(h: int, j: int, ss: SlopeSet, q=None):
    """Mirror of red_left: p' from the O(h) line, p'' from the Mr(j) line,
    p* the meet of the B(0) line through p' with the Mr(j-1) line through p''."""
    if q is None:
        q = ss.apex
    try:
        p1 = num.intersect_with_horizontal(q, ss.angles[("orange", h)], 0)
        p2 = num.intersect_with_horizontal(q, _mag_angle_of(ss, j, False), 0)
        p_star = num.intersect_lines(
            p1, ss.angles[("blue", 0)], p2, _mag_angle_of(ss, j - 1, False)
        )
    except ValueError as exc:
        raise NoIntersection(str(exc))
    return num.angle_of(q, p_star)
