"""Drawing container: vertex positions, per-edge slope keys, angle registry.

A slope key is either a symbolic member of the slope universe (a SlopeId
tuple such as ("orange", 3)), an aux-family member, or an extra slope
("extra", stage, seq) introduced by apex/bridge steps.  The registry maps
every key to its angle and enforces the separation discipline that makes
by-identity and by-angle slope counting agree:

* a new angle within REUSE_TOL of a registered key simply reuses that key
  (the realized angle stays within the fidelity tolerance of the key), and
* a new key must keep a gap of at least MIN_GAP from all registered keys,
  otherwise the construction step is asked to nudge its free parameter.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field

from mpmath import mpf

from .slope_set import TAU_SLOPE, SlopeSet, slope_name

REUSE_TOL = TAU_SLOPE / 4
MIN_GAP = 3 * TAU_SLOPE


class AngleCollision(Exception):
    """A fresh slope landed too close to (but not on) a registered one."""


def key_name(key) -> str:
    if key[0] == "extra":
        return f"X({key[1]},{key[2]})"
    if key[0] == "aux":
        return f"A({key[1]},{key[2]})"
    return slope_name(key)


class SlopeRegistry:
    def __init__(self):
        self.angle_of = {}
        self._sorted = []  # (angle, key), kept sorted by angle

    def seed_slope_set(self, ss: SlopeSet) -> None:
        for sid, ang in ss.angles.items():
            if sid not in self.angle_of:
                self._insert(sid, ang)

    def _insert(self, key, angle) -> None:
        self.angle_of[key] = angle
        bisect.insort(self._sorted, (angle, key))

    def nearest(self, angle):
        if not self._sorted:
            return None
        i = bisect.bisect_left(self._sorted, (angle, ("",)))
        best = None
        for j in (i - 1, i, i % len(self._sorted)):
            if 0 <= j < len(self._sorted):
                a, k = self._sorted[j]
                d = abs(a - angle)
                if best is None or d < best[0]:
                    best = (d, k, a)
        # wrap-around across pi
        import mpmath

        for j in (0, len(self._sorted) - 1):
            a, k = self._sorted[j]
            d = abs(abs(a - angle) - mpmath.pi)
            if d < best[0]:
                best = (d, k, a)
        return best

    def assign(self, angle, preferred_key):
        """Key for an edge drawn at `angle`; reuses a registered key when the
        angle matches one, registers `preferred_key` when it is genuinely new."""
        near = self.nearest(angle)
        if near is not None and near[0] <= REUSE_TOL:
            return near[1]
        if near is not None and near[0] < MIN_GAP:
            raise AngleCollision(
                f"angle {angle} is {near[0]} from {near[1]} (needs {MIN_GAP})"
            )
        if preferred_key in self.angle_of:
            raise AngleCollision(f"key {preferred_key} already bound")
        self._insert(preferred_key, mpf(angle))
        return preferred_key

    def require(self, key) -> None:
        if key not in self.angle_of:
            raise KeyError(f"slope key {key} not registered")


@dataclass
class NodeRecord:
    """Instrumentation for one SPQ node drawn inside its good triangle."""

    path: str  # tree path like "0.2.1"
    kind: str  # S | P | Q
    corners: tuple  # (a, b, c) points
    s_l: tuple
    s_r: tuple
    rho: str
    left_v: str
    right_v: str
    vertex_set: tuple
    left_path: tuple
    right_path: tuple
    deg_l: int
    deg_r: int
    has_left_edge: bool
    has_right_edge: bool


@dataclass
class Drawing:
    pos: dict = field(default_factory=dict)  # vertex -> (mpf, mpf)
    edge_key: dict = field(default_factory=dict)  # (u, v) sorted -> slope key
    registry: SlopeRegistry = field(default_factory=SlopeRegistry)
    instrumentation: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def place(self, v, p) -> None:
        if v in self.pos:
            old = self.pos[v]
            if old[0] != p[0] or old[1] != p[1]:
                raise AssertionError(f"vertex {v} placed twice at different points")
            return
        self.pos[v] = p

    def add_edge(self, u, v, key) -> None:
        self.registry.require(key)
        e = (u, v) if u < v else (v, u)
        if e in self.edge_key:
            if self.edge_key[e] != key:
                raise AssertionError(f"edge {e} tagged twice with different slopes")
            return
        self.edge_key[e] = key

    def remove_edge(self, u, v) -> None:
        e = (u, v) if u < v else (v, u)
        del self.edge_key[e]

    def remove_vertex(self, v) -> None:
        for e in [e for e in self.edge_key if v in e]:
            del self.edge_key[e]
        del self.pos[v]

    def edges(self) -> list:
        return sorted(self.edge_key)

    def used_keys(self) -> set:
        return set(self.edge_key.values())

    def segment(self, e):
        return self.pos[e[0]], self.pos[e[1]]
