"""Construction-independent verification of drawings and certificates.

Consumes only the Drawing (positions, edge slope keys, instrumentation
records) plus the declared slope universe; never the drawer's internals.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import mpmath
from mpmath import mpf

from .. import numerics as num
from ..drawing import Drawing
from ..slope_set import TAU_SLOPE, SlopeSet
from . import planarity

TAU_GEOM = mpf("1e-9")

_S_KINDS = ("black", "orange", "blue", "magl", "magr", "redc", "redl", "redr")


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class VerificationReport:
    planar: bool
    crossing: str = ""
    by_id: int = 0
    by_angle: int = 0
    histogram: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    budget: int = -1
    budget_ok: bool = True

    @property
    def ok(self) -> bool:
        return self.planar and all(c.ok for c in self.checks) and self.budget_ok

    def failed(self) -> list:
        out = [] if self.planar else [f"planar: {self.crossing}"]
        out += [f"{c.name}: {c.detail}" for c in self.checks if not c.ok]
        if not self.budget_ok:
            out.append(f"budget: {self.by_id} > {self.budget}")
        return out


def realized_angle(drawing: Drawing, e):
    p, q = drawing.segment(e)
    return num.angle_of(p, q)


def count_slopes(drawing: Drawing):
    """(by-identity count, by-angle cluster count, histogram by key name)."""
    by_id_keys = drawing.used_keys()
    angles = sorted(realized_angle(drawing, e) for e in drawing.edges())
    clusters = 0
    prev = None
    first = None
    for a in angles:
        if prev is None or a - prev > TAU_SLOPE:
            clusters += 1
            if first is None:
                first = a
        prev = a
    if clusters > 1 and first is not None and (first + mpmath.pi) - prev <= TAU_SLOPE:
        clusters -= 1
    hist = {}
    for e, k in sorted(drawing.edge_key.items()):
        hist[k] = hist.get(k, 0) + 1
    return len(by_id_keys), clusters, hist


def check_slope_fidelity(drawing: Drawing) -> CheckResult:
    for e in drawing.edges():
        k = drawing.edge_key[e]
        want = drawing.registry.angle_of[k]
        got = realized_angle(drawing, e)
        d = abs(got - want)
        if d > mpmath.pi / 2:
            d = abs(d - mpmath.pi)
        if d > TAU_SLOPE:
            return CheckResult(
                "slope-fidelity", False, f"edge {e} key {k}: off by {d}"
            )
    return CheckResult("slope-fidelity", True)


# ---------------------------------------------------------------------------
# Good-triangle and P.1-P.3 invariants from instrumentation records
# ---------------------------------------------------------------------------


def _check_good_record(rec, ss: SlopeSet):
    s_l, s_r = rec.s_l, rec.s_r
    if ss.is_orange(s_l) and ss.is_orange(s_r) and s_r[1] != s_l[1] + 1:
        return "G1"
    if rec.kind in ("S", "Q"):
        if not (
            ss.is_orange(s_l)
            or (ss.is_left_magenta(s_l) and ss.magenta_index(s_l) >= rec.deg_l)
        ):
            return "G2"
        if not (
            ss.is_orange(s_r)
            or (ss.is_right_magenta(s_r) and ss.magenta_index(s_r) >= rec.deg_r)
        ):
            return "G3"
    if (
        rec.kind == "S"
        and not rec.has_left_edge
        and not rec.has_right_edge
        and not (ss.is_orange(s_l) or ss.is_orange(s_r))
    ):
        return "G4"
    if rec.kind == "P":
        if not (ss.is_left_magenta(s_l) and ss.magenta_index(s_l) >= rec.deg_l):
            return "G5"
        if not (ss.is_right_magenta(s_r) and ss.magenta_index(s_r) >= rec.deg_r):
            return "G5"
    return None


def _inside_with_margin(p, tri, margin) -> bool:
    a, b, c = tri
    for p1, p2 in ((a, b), (b, c), (c, a)):
        ux, uy = p2[0] - p1[0], p2[1] - p1[1]
        vx, vy = p[0] - p1[0], p[1] - p1[1]
        cross = ux * vy - uy * vx
        side = mpmath.hypot(ux, uy)
        # a-b-c runs counter-clockwise (apex, bottom-left, bottom-right), so
        # interior points keep a non-negative cross product on every side
        if cross < -margin * side:
            return False
    return True


def check_p_invariants(drawing: Drawing, ss: SlopeSet, path_vertices) -> list:
    """P.1 slope membership, P.2 corner mapping and containment, P.3 path
    monotonicity, the red-slope exclusion at path vertices, and the
    good-triangle rules, per instrumentation record."""
    out = []
    pv = set(path_vertices)

    bad = None
    for e, k in sorted(drawing.edge_key.items()):
        if (e[0] in pv or e[1] in pv) and k[0] in ("redc", "redl", "redr"):
            bad = f"edge {e} incident to a path vertex uses red slope {k}"
            break
    out.append(CheckResult("remark-red", bad is None, bad or ""))

    p1_bad = None
    p2_bad = None
    p3_bad = None
    g_bad = None
    for rec in drawing.instrumentation:
        vs = set(rec.vertex_set)
        tri = rec.corners
        diam = num.dist(tri[1], tri[2])
        margin = TAU_GEOM * diam
        for e, k in drawing.edge_key.items():
            if e[0] in vs and e[1] in vs and k[0] not in _S_KINDS:
                p1_bad = p1_bad or f"node {rec.path}: edge {e} uses {k}"
        for vname, corner in (
            (rec.rho, tri[0]),
            (rec.left_v, tri[1]),
            (rec.right_v, tri[2]),
        ):
            if num.dist(drawing.pos[vname], corner) > margin:
                p2_bad = p2_bad or f"node {rec.path}: {vname} not at its corner"
        for v in vs:
            if not _inside_with_margin(drawing.pos[v], tri, margin):
                p2_bad = p2_bad or f"node {rec.path}: {v} escapes the triangle"
        err = _check_monotone(drawing, rec, ss)
        if err:
            p3_bad = p3_bad or f"node {rec.path}: {err}"
        g = _check_good_record(rec, ss)
        if g:
            g_bad = g_bad or f"node {rec.path}: violates {g} ({rec.s_l}, {rec.s_r})"
    out.append(CheckResult("P1-slopes", p1_bad is None, p1_bad or ""))
    out.append(CheckResult("P2-hull", p2_bad is None, p2_bad or ""))
    out.append(CheckResult("P3-monotone", p3_bad is None, p3_bad or ""))
    out.append(CheckResult("good-triangles", g_bad is None, g_bad or ""))
    return out


def _check_monotone(drawing, rec, ss):
    lp = rec.left_path
    if len(lp) >= 2:
        relax_last = ss.is_orange(rec.s_l)
        err = _monotone_run(drawing, lp, +1, relax_last)
        if err:
            return f"left path {lp}: {err}"
    rp = rec.right_path
    if len(rp) >= 2:
        relax_last = ss.is_orange(rec.s_r)
        err = _monotone_run(drawing, rp, -1, relax_last)
        if err:
            return f"right path {rp}: {err}"
    return None


def _monotone_run(drawing, path, xdir, relax_last):
    for i in range(len(path) - 1):
        p = drawing.pos[path[i]]
        q = drawing.pos[path[i + 1]]
        if relax_last and i == len(path) - 2:
            continue
        if xdir > 0 and not (q[0] > p[0] and q[1] >= p[1]):
            return f"edge {path[i]}-{path[i + 1]} breaks the up-right order"
        if xdir < 0 and not (q[0] < p[0] and q[1] >= p[1]):
            return f"edge {path[i]}-{path[i + 1]} breaks the up-left order"
    return None


# ---------------------------------------------------------------------------
# Full report
# ---------------------------------------------------------------------------


def verify_drawing(
    drawing: Drawing,
    ss: SlopeSet = None,
    path_vertices=None,
    budget: int = -1,
) -> VerificationReport:
    pres = planarity.check_planar(drawing.pos, drawing.edges())
    rep = VerificationReport(
        planar=pres.ok,
        crossing="" if pres.ok else f"{pres.witness.kind} {pres.witness.edge_a} {pres.witness.edge_b}",
    )
    rep.by_id, rep.by_angle, rep.histogram = count_slopes(drawing)
    rep.checks.append(
        CheckResult(
            "count-agreement",
            rep.by_id == rep.by_angle,
            f"by-id {rep.by_id} vs by-angle {rep.by_angle}",
        )
    )
    rep.checks.append(check_slope_fidelity(drawing))
    if ss is not None and path_vertices is not None and drawing.instrumentation:
        rep.checks.extend(check_p_invariants(drawing, ss, path_vertices))
    if budget >= 0:
        rep.budget = budget
        rep.budget_ok = rep.by_id <= budget
    return rep


# ---------------------------------------------------------------------------
# Tree-decomposition validator (independent of the constructive builder)
# ---------------------------------------------------------------------------


def validate_tree_decomposition(g, td) -> CheckResult:
    verts = set(g.vertices)
    covered = set()
    for b in td.bags:
        covered |= b
    if not verts <= covered:
        return CheckResult(
            "tree-decomposition", False, f"vertices missing: {sorted(verts - covered)}"
        )
    for u, v in g.edges():
        if not any(u in b and v in b for b in td.bags):
            return CheckResult("tree-decomposition", False, f"edge ({u},{v}) uncovered")
    nb = len(td.bags)
    if len(td.edges) != nb - 1:
        return CheckResult(
            "tree-decomposition", False, f"{nb} bags, {len(td.edges)} links: not a tree"
        )
    adj = {i: [] for i in range(nb)}
    for i, j in td.edges:
        adj[i].append(j)
        adj[j].append(i)
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    if len(seen) != nb:
        return CheckResult("tree-decomposition", False, "bag tree is disconnected")
    for v in verts:
        holding = [i for i in range(nb) if v in td.bags[i]]
        hs = set(holding)
        comp = {holding[0]}
        stack = [holding[0]]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y in hs and y not in comp:
                    comp.add(y)
                    stack.append(y)
        if comp != hs:
            return CheckResult(
                "tree-decomposition", False, f"bags holding {v} are not connected"
            )
    return CheckResult("tree-decomposition", True)
