"""Recursive drawing of almost-3-connected rooted path-trees in good triangles.

A triangle is good for an SPQ node when its base is horizontal and the side
slopes respect the five compatibility rules (both-orange sides consecutive,
S/Q sides orange or magenta of index at least the pertinent degree of the
corresponding path vertex, an S node missing both root edges keeps an orange
side, P nodes get magenta on both sides).  Each node places its root at the
apex, derives child triangles per its kind, and tags every edge with the
slope identity dictated by the case analysis; the realized angle is asserted
against the identity's table angle, so any case mix-up fails loudly.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import mpf

from . import numerics as num
from .drawing import Drawing, NodeRecord
from .errors import GoodTriangleUnderflow, TooManyChildren
from .slope_set import SlopeSet
from .spq import SpqNode, SpqTree, left_path, right_path

TAU_GEOM = mpf("1e-9")


@dataclass
class GoodTriangle:
    a: tuple  # apex
    b: tuple  # bottom-left
    c: tuple  # bottom-right
    s_l: tuple  # SlopeId of side a-b
    s_r: tuple  # SlopeId of side a-c


def equilateral_triangle(ss: SlopeSet, base_left=(0, 0), side=1) -> GoodTriangle:
    b = num.pt(*base_left)
    c = (b[0] + mpf(side), b[1])
    a = (b[0] + mpf(side) / 2, b[1] + mpf(side) * mpmath.sqrt(3) / 2)
    return GoodTriangle(a, b, c, ss.magl(ss.delta_star), ss.magr(ss.delta_star))


def check_good(tri: GoodTriangle, node: SpqNode, t: SpqTree, ss: SlopeSet):
    """Return None if the triangle is good for the node, else the violated rule."""
    s_l, s_r = tri.s_l, tri.s_r
    if ss.is_orange(s_l) and ss.is_orange(s_r) and s_r[1] != s_l[1] + 1:
        return "G1"
    deg_l = t.pertinent_degree(node, node.left_vertex(t.pt.path))
    deg_r = t.pertinent_degree(node, node.right_vertex(t.pt.path))
    if node.kind in ("S", "Q"):
        if not (
            ss.is_orange(s_l)
            or (ss.is_left_magenta(s_l) and ss.magenta_index(s_l) >= deg_l)
        ):
            return "G2"
        if not (
            ss.is_orange(s_r)
            or (ss.is_right_magenta(s_r) and ss.magenta_index(s_r) >= deg_r)
        ):
            return "G3"
    if (
        node.kind == "S"
        and not node.has_left_edge
        and not node.has_right_edge
        and not (ss.is_orange(s_l) or ss.is_orange(s_r))
    ):
        return "G4"
    if node.kind == "P":
        if not (ss.is_left_magenta(s_l) and ss.magenta_index(s_l) >= deg_l):
            return "G5"
        if not (ss.is_right_magenta(s_r) and ss.magenta_index(s_r) >= deg_r):
            return "G5"
    return None


def _assert_good(tri, node, t, ss):
    bad = check_good(tri, node, t, ss)
    if bad is not None:
        raise GoodTriangleUnderflow(
            f"triangle ({tri.s_l}, {tri.s_r}) violates {bad} at node {node.label}"
        )


def _record(drawing, t, node, tri):
    drawing.instrumentation.append(
        NodeRecord(
            path=node.label,
            kind=node.kind,
            corners=(tri.a, tri.b, tri.c),
            s_l=tri.s_l,
            s_r=tri.s_r,
            rho=node.rho,
            left_v=node.left_vertex(t.pt.path),
            right_v=node.right_vertex(t.pt.path),
            vertex_set=tuple(sorted(t.pertinent_vertices(node))),
            left_path=left_path(t, node),
            right_path=right_path(t, node),
            deg_l=t.pertinent_degree(node, node.left_vertex(t.pt.path)),
            deg_r=t.pertinent_degree(node, node.right_vertex(t.pt.path)),
            has_left_edge=node.has_left_edge,
            has_right_edge=node.has_right_edge,
        )
    )


def draw_path_tree(
    t: SpqTree, tri: GoodTriangle, ss: SlopeSet, drawing: Drawing = None
) -> Drawing:
    """Draw the whole path-tree inside a triangle good for the SPQ root."""
    if drawing is None:
        drawing = Drawing()
    drawing.registry.seed_slope_set(ss)
    _draw_node(t, t.root, tri, ss, drawing)
    return drawing


def _tag(drawing, ss, u, v, sid):
    drawing.add_edge(u, v, ss.rep(sid))


def _draw_node(t: SpqTree, node: SpqNode, tri: GoodTriangle, ss, drawing) -> None:
    _assert_good(tri, node, t, ss)
    _record(drawing, t, node, tri)
    path = t.pt.path
    lv, rv = node.left_vertex(path), node.right_vertex(path)
    drawing.place(lv, tri.b)
    drawing.place(rv, tri.c)
    if node.kind == "Q":
        drawing.place(node.rho, tri.a)
        if node.span[1] == node.span[0] + 1:
            _tag(drawing, ss, lv, rv, ss.black())
        if node.has_left_edge:
            _tag(drawing, ss, node.rho, lv, tri.s_l)
        if node.has_right_edge:
            _tag(drawing, ss, node.rho, rv, tri.s_r)
        return
    if node.kind == "S":
        _draw_s(t, node, tri, ss, drawing)
        return
    if node.kind == "P":
        _draw_p(t, node, tri, ss, drawing)
        return
    raise AssertionError(f"unknown node kind {node.kind}")


def _draw_s(t, node, tri, ss, drawing) -> None:
    child = node.children[0]
    s_l, s_r = tri.s_l, tri.s_r

    if ss.is_orange(s_l):
        new_l = ss.magl(ss.delta_star)
    else:
        i = ss.magenta_index(s_l)
        if node.has_left_edge:
            if i < 2:
                raise GoodTriangleUnderflow(
                    f"left magenta index {i} cannot decrease at node {node.label}"
                )
            new_l = ss.magl(i - 1)
        else:
            new_l = s_l
    if ss.is_orange(s_r):
        new_r = ss.magr(ss.delta_star)
    else:
        j = ss.magenta_index(s_r)
        if node.has_right_edge:
            if j < 2:
                raise GoodTriangleUnderflow(
                    f"right magenta index {j} cannot decrease at node {node.label}"
                )
            new_r = ss.magr(j - 1)
        else:
            new_r = s_r

    # the slope carried by the root-to-child-root edge, per case
    if ss.is_orange(s_l) and ss.is_orange(s_r):
        conn = ss.blue(s_l[1])
    elif ss.is_orange(s_l):
        j = ss.magenta_index(s_r)
        conn = ss.redr(s_l[1], j) if node.has_right_edge else ss.magr(j)
    elif ss.is_orange(s_r):
        i = ss.magenta_index(s_l)
        conn = ss.redl(i, s_r[1]) if node.has_left_edge else ss.magl(i)
    else:
        i, j = ss.magenta_index(s_l), ss.magenta_index(s_r)
        if node.has_left_edge and node.has_right_edge:
            conn = ss.redc(i, j)
        elif node.has_left_edge:
            conn = ss.magr(j)
        elif node.has_right_edge:
            conn = ss.magl(i)
        else:
            raise GoodTriangleUnderflow(
                f"S node {node.label} lacks both root edges with magenta sides"
            )

    apex = num.intersect_lines(tri.b, ss.angle(new_l), tri.c, ss.angle(new_r))
    if not (tri.b[1] < apex[1] < tri.a[1]):
        raise AssertionError(f"child apex degenerate at node {node.label}")
    realized = num.angle_of(apex, tri.a)
    table = ss.angle(conn)
    if abs(realized - table) > mpf(2) ** (-mpmath.mp.prec // 2):
        raise AssertionError(
            f"S-node case table mismatch at {node.label}: {conn} vs angle {realized}"
        )
    if num.dist(apex, tri.a) < TAU_GEOM * num.dist(tri.b, tri.c):
        drawing.meta["numeric_health_warnings"] = (
            drawing.meta.get("numeric_health_warnings", 0) + 1
        )
    _draw_node(t, child, GoodTriangle(apex, tri.b, tri.c, new_l, new_r), ss, drawing)
    drawing.place(node.rho, tri.a)
    _tag(drawing, ss, node.rho, child.rho, conn)
    path = t.pt.path
    if node.has_left_edge:
        _tag(drawing, ss, node.rho, node.left_vertex(path), s_l)
    if node.has_right_edge:
        _tag(drawing, ss, node.rho, node.right_vertex(path), s_r)


def _draw_p(t, node, tri, ss, drawing) -> None:
    kids = node.children
    k = len(kids)
    if k > 2 * ss.delta + 1:
        raise TooManyChildren(f"P node {node.label} has {k} children")
    drawing.place(node.rho, tri.a)
    base_y = tri.b[1]
    points = [tri.b]
    for i in range(1, k):
        points.append(
            num.intersect_with_horizontal(tri.a, ss.angle(ss.orange(i)), base_y)
        )
    points.append(tri.c)
    for i, kid in enumerate(kids, start=1):
        s_l = tri.s_l if i == 1 else ss.orange(i - 1)
        s_r = tri.s_r if i == k else ss.orange(i)
        sub = GoodTriangle(tri.a, points[i - 1], points[i], s_l, s_r)
        _draw_node(t, kid, sub, ss, drawing)
