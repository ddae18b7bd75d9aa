"""Subroutine drawers used by the top-level constructions.

* Partial 2-trees inside a nice isosceles triangle, anchored at one edge,
  with a slope family of size 4*delta + 1 depending only on the base angle
  and the degree bound.  Every block of the input is a series-parallel
  network; a parallel composition becomes a stack of "mountain" branches
  (rise from the left terminal at an ascending family angle, run along a
  horizontal line with the chain joints on it, descend into the right
  terminal), with compositions nested by scale.  Blocks hanging at cut
  vertices are drawn the same way inside small wedges.

* Arbitrary small planar graphs inside a fixed triangle via convex
  combination (Tutte) placement, after helper vertices make the graph
  3-connected without touching the anchored corners.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import mpmath
from mpmath import mpf

from . import graph_core as gc
from . import numerics as num
from .drawing import AngleCollision, Drawing
from .errors import (
    LinearSolveSingular,
    NotPartial2Tree,
    NotPlanarWithGivenOuterFace,
)

# ---------------------------------------------------------------------------
# Series-parallel structure
# ---------------------------------------------------------------------------


@dataclass
class SPNet:
    kind: str  # "edge" | "series" | "parallel"
    s: str
    t: str
    parts: tuple = ()

    def size(self) -> int:
        return 1 if self.kind == "edge" else sum(p.size() for p in self.parts)


def _reverse(n: SPNet) -> SPNet:
    if n.kind == "edge":
        return SPNet("edge", n.t, n.s)
    if n.kind == "series":
        return SPNet("series", n.t, n.s, tuple(_reverse(p) for p in reversed(n.parts)))
    return SPNet("parallel", n.t, n.s, tuple(_reverse(p) for p in n.parts))


def _series_merge(a: SPNet, b: SPNet) -> SPNet:
    parts = []
    for x in (a, b):
        parts.extend(x.parts if x.kind == "series" else (x,))
    return SPNet("series", a.s, b.t, tuple(parts))


def _parallel_merge(nets) -> SPNet:
    s, t = nets[0].s, nets[0].t
    branches = []
    for x in nets:
        branches.extend(x.parts if x.kind == "parallel" else (x,))
    branches.sort(key=_branch_order)
    return SPNet("parallel", s, t, tuple(branches))


def _branch_order(b: SPNet):
    # direct edge first, then mountains with at least one interior joint,
    # then two-part (apex) branches which are drawn outermost
    if b.kind == "edge":
        return (0, 0, b.s, b.t)
    rank = 2 if len(b.parts) == 2 else 1
    return (rank, b.size(), b.parts[0].t, b.s)


def parse_block(edges, s, t) -> SPNet:
    """Series-parallel parse of a 2-connected block (or bridge) w.r.t. the
    terminal edge (s, t), by series/parallel reduction."""
    nets = {}
    incid = {}
    next_id = 0
    for a, b in sorted(edges):
        nets[next_id] = SPNet("edge", a, b)
        incid.setdefault(a, set()).add(next_id)
        incid.setdefault(b, set()).add(next_id)
        next_id += 1
    changed = True
    while changed and len(nets) > 1:
        changed = False
        # parallel reduction
        by_pair = {}
        for i, n in sorted(nets.items()):
            by_pair.setdefault(frozenset((n.s, n.t)), []).append(i)
        for pair, ids in sorted(by_pair.items(), key=lambda kv: sorted(kv[0])):
            if len(ids) < 2:
                continue
            a = sorted(pair)[0]
            oriented = [
                nets[i] if nets[i].s == a else _reverse(nets[i]) for i in ids
            ]
            merged = _parallel_merge(oriented)
            for i in ids:
                n = nets.pop(i)
                incid[n.s].discard(i)
                incid[n.t].discard(i)
            nets[next_id] = merged
            incid[merged.s].add(next_id)
            incid[merged.t].add(next_id)
            next_id += 1
            changed = True
            break
        if changed:
            continue
        # series reduction at a degree-2 inner vertex
        for v in sorted(incid):
            if v in (s, t) or len(incid[v]) != 2:
                continue
            i1, i2 = sorted(incid[v])
            n1, n2 = nets[i1], nets[i2]
            if n1.t != v:
                n1 = _reverse(n1)
            if n2.s != v:
                n2 = _reverse(n2)
            if n1.s == n2.t and n1.s in (s, t):
                continue  # would swallow a terminal into a loop
            merged = _series_merge(n1, n2)
            for i in (i1, i2):
                n = nets.pop(i)
                incid[n.s].discard(i)
                incid[n.t].discard(i)
            incid[v] = set()
            nets[next_id] = merged
            incid[merged.s].add(next_id)
            incid[merged.t].add(next_id)
            next_id += 1
            changed = True
            break
    if len(nets) != 1:
        raise NotPartial2Tree("block does not reduce to a single series-parallel net")
    (net,) = nets.values()
    if net.s != s:
        net = _reverse(net)
    if net.s != s or net.t != t:
        raise NotPartial2Tree("block terminals do not match the anchor edge")
    return net


@dataclass
class P2TPlan:
    root: SPNet
    hangs: dict  # vertex -> list[SPNet], each hang rooted at that vertex


def build_plan(adj: dict, u, v) -> P2TPlan:
    if u not in adj or v not in adj[u]:
        raise NotPartial2Tree(f"anchor edge ({u},{v}) missing")
    comps = gc.biconnected_components(adj)
    anchor_edge = tuple(sorted((u, v)))
    root_idx = next(i for i, c in enumerate(comps) if anchor_edge in c)
    block_at = {}
    for i, c in enumerate(comps):
        for a, b in c:
            block_at.setdefault(a, set()).add(i)
            block_at.setdefault(b, set()).add(i)
    hangs = {}
    seen = {root_idx}
    root_net = parse_block(comps[root_idx], u, v)
    queue = [(root_idx, u)]
    order = 0
    while queue:
        bi, entry = queue.pop(0)
        verts = sorted({x for e in comps[bi] for x in e})
        for x in verts:
            for bj in sorted(block_at[x]):
                if bj in seen:
                    continue
                seen.add(bj)
                nbrs = sorted(
                    b if a == x else a for a, b in comps[bj] if x in (a, b)
                )
                y = nbrs[0]
                hangs.setdefault(x, []).append(parse_block(comps[bj], x, y))
                queue.append((bj, x))
        order += 1
    if len(seen) != len(comps):
        raise NotPartial2Tree("hanging blocks are not connected to the anchor block")
    return P2TPlan(root_net, hangs)


# ---------------------------------------------------------------------------
# Mountain geometry
# ---------------------------------------------------------------------------


class _Frame:
    """Local coordinates: anchor u at the origin, anchor v at (L, 0), the
    triangle apex on the +y side."""

    def __init__(self, p_u, p_v, apex):
        self.o = p_u
        dx, dy = p_v[0] - p_u[0], p_v[1] - p_u[1]
        ln = mpmath.hypot(dx, dy)
        self.d = (dx / ln, dy / ln)
        cross = dx * (apex[1] - p_u[1]) - dy * (apex[0] - p_u[0])
        side = 1 if cross > 0 else -1
        self.n = (-self.d[1] * side, self.d[0] * side)
        self.length = ln

    def to_global(self, p):
        x, y = p
        return (
            self.o[0] + x * self.d[0] + y * self.n[0],
            self.o[1] + x * self.d[1] + y * self.n[1],
        )


class _Mountain:
    """Branch geometry.

    Every non-edge branch of a parallel composition takes one fresh ascending
    slope slot at the left terminal and one fresh descending slot at the
    right terminal, and lives inside the triangle bounded by those two slot
    rays.  Slot counters only grow per vertex, so later structures anchored
    at the same vertex use strictly steeper rays and enclose earlier ones; a
    branch with one interior joint puts it at the ray apex, a longer branch
    runs its interior joints along a short horizontal chord just below the
    apex.  Bumps over chord segments are height-capped to half the gap to
    the next slot rays, which keeps nesting strict at every level.
    """

    def __init__(
        self, drawing: Drawing, frame: _Frame, beta, delta, stage: str, skip=frozenset()
    ):
        self.drawing = drawing
        self.frame = frame
        self.stage = stage
        self.skip = skip
        self.nlam = 2 * delta
        self.lam = [None] + [
            mpf(beta) * i / (2 * delta + 1) for i in range(1, self.nlam + 1)
        ]
        self.lam.append((self.lam[self.nlam] + mpf(beta)) / 2)  # virtual bound ray
        self.tan = [None] + [mpmath.tan(a) for a in self.lam[1:]]
        self.asc = {}
        self.desc = {}
        self.pos = {}  # local positions
        self.free_radius = {}
        self._seq = 0

    # slot allocation: a strictly increasing counter per vertex and side
    def take_asc(self, v) -> int:
        i = self.asc.get(v, 0) + 1
        if i > self.nlam:
            raise AssertionError(f"ascending slope slots exhausted at {v}")
        self.asc[v] = i
        return i

    def take_desc(self, v) -> int:
        i = self.desc.get(v, 0) + 1
        if i > self.nlam:
            raise AssertionError(f"descending slope slots exhausted at {v}")
        self.desc[v] = i
        return i

    def place(self, vertex, local, radius) -> None:
        if vertex in self.pos:
            return
        self.pos[vertex] = local
        self.free_radius[vertex] = radius
        self.drawing.place(vertex, self.frame.to_global(local))

    def edge(self, a, b) -> None:
        e = (a, b) if a < b else (b, a)
        if e in self.skip or e in self.drawing.edge_key:
            return
        ga = self.frame.to_global(self.pos[a])
        gb = self.frame.to_global(self.pos[b])
        ang = num.angle_of(ga, gb)
        seq = self.drawing.meta.setdefault("aux_seq", {})
        k = seq.get(self.stage, 0)
        key = self.drawing.registry.assign(ang, ("aux", self.stage, k))
        if key == ("aux", self.stage, k):
            seq[self.stage] = k + 1
        self.drawing.add_edge(a, b, key)

    def _ray_apex(self, ps, pt, a, d):
        return num.intersect_lines(ps, self.lam[a], pt, mpmath.pi - self.lam[d])

    # -- net drawing ---------------------------------------------------------

    def draw_net(self, net: SPNet) -> None:
        """Draw `net` between its already-placed terminals (left to right)."""
        if net.kind == "edge":
            self.edge(net.s, net.t)
            return
        assert net.kind == "parallel", "series networks only occur inside branches"
        ps = self.pos[net.s]
        pt = self.pos[net.t]
        assert ps[0] < pt[0], "net terminals must run left to right"
        branches = []
        for b in net.parts:
            if b.kind == "edge":
                self.edge(b.s, b.t)  # the direct edge lies on the base
            else:
                branches.append(b)
        prev_extent = ps[1] if ps[1] > pt[1] else pt[1]
        for br in branches:
            prev_extent = self._draw_branch(br, ps, pt, prev_extent)

    def _draw_branch(self, br: SPNet, ps, pt, prev_extent):
        """Returns an upper bound on the branch's vertical extent."""
        assert br.kind == "series" and len(br.parts) >= 2
        a = self.take_asc(br.s)
        d = self.take_desc(br.t)
        apex = self._ray_apex(ps, pt, a, d)
        apex_next = self._ray_apex(ps, pt, a + 1, d + 1)
        assert apex[1] > prev_extent, "branch apex does not clear earlier branches"
        bump_cap = (apex_next[1] - apex[1]) / 2
        parts = br.parts
        p = len(parts)
        if p == 2:
            joint = parts[0].t
            rad = min(num.dist(apex, ps), num.dist(apex, pt), bump_cap * 2) / 8
            self.place(joint, apex, rad)
            self._draw_side(parts[0])
            self._draw_side(parts[1])
            return apex[1]
        # interior joints run along a short horizontal chord below the apex
        n_mid = p - 2
        w_max = n_mid * bump_cap / (4 * self.tan[self.nlam])
        drop = min(
            (apex[1] - prev_extent) * 3 / 8,
            w_max / (1 / self.tan[a] + 1 / self.tan[d]),
        )
        yl = apex[1] - drop
        e1x = ps[0] + (yl - ps[1]) / self.tan[a]
        e2x = pt[0] - (yl - pt[1]) / self.tan[d]
        assert e1x < e2x, "branch chord collapsed"
        step = (e2x - e1x) / (p - 2)
        rad = min(step, bump_cap) / 4
        for k in range(p - 1):
            joint = parts[k].t
            self.place(joint, (e1x + step * k, yl), rad)
        self._draw_side(parts[0])
        self._draw_side(parts[-1])
        for k in range(1, p - 1):
            part = parts[k]
            if part.kind == "edge":
                self.edge(part.s, part.t)
            else:
                self.draw_net(part)
        return apex[1] + bump_cap

    def _draw_side(self, part: SPNet) -> None:
        """First or last chain component, over a slot-ray base segment."""
        if part.kind == "edge":
            self.edge(part.s, part.t)
            return
        if self.pos[part.s][0] > self.pos[part.t][0]:
            part = _reverse(part)
        self.draw_net(part)

    # -- hangs ----------------------------------------------------------------

    def draw_hangs(self, hangs: dict, right_anchor) -> None:
        pending = {v: list(ns) for v, ns in sorted(hangs.items())}
        while pending:
            ready = sorted(v for v in pending if v in self.pos)
            if not ready:
                raise AssertionError("hang host was never placed")
            for x in ready:
                for netx in pending.pop(x):
                    self._draw_hang(x, netx, right_anchor)

    def _draw_hang(self, x, netx: SPNet, right_anchor) -> None:
        r = self.free_radius[x] / 2
        if x == right_anchor:
            slot = self.take_desc(x)
            ang = mpmath.pi - self.lam[slot]
        else:
            slot = self.take_asc(x)
            ang = self.lam[slot]
        px = self.pos[x]
        y = netx.t
        py = (px[0] + r * mpmath.cos(ang) / 4, px[1] + r * mpmath.sin(ang) / 4)
        self.place(y, py, r / 16)
        if py[0] < px[0]:
            self.draw_net(_reverse(netx))
        else:
            self.draw_net(netx)


def draw_partial_2tree_in_triangle(
    adj: dict,
    anchor: tuple,
    p_u,
    p_v,
    apex,
    beta,
    delta: int,
    drawing: Drawing,
    stage: str,
    skip_edges=(),
) -> None:
    """Draw the connected partial 2-tree `adj` into `drawing`, with the anchor
    edge endpoints at p_u and p_v and everything inside the isosceles triangle
    (p_u, p_v, apex) whose base angles are beta.  Edges listed in skip_edges
    participate in the decomposition but are not emitted (virtual anchors)."""
    if gc._p2t_elimination(adj) is None:
        raise NotPartial2Tree("input has treewidth > 2")
    assert mpf(beta) < mpmath.pi / 3, "base angle too wide for the slope family"
    u, v = anchor
    plan = build_plan(adj, u, v)
    frame = _Frame(p_u, p_v, apex)
    skip = frozenset(tuple(sorted(e)) for e in skip_edges)
    mt = _Mountain(drawing, frame, mpf(beta), delta, stage, skip)
    L = frame.length
    mt.place(u, (mpf(0), mpf(0)), L / 4)
    mt.place(v, (L, mpf(0)), L / 4)
    mt.draw_net(plan.root)
    mt.draw_hangs(plan.hangs, right_anchor=v)


# ---------------------------------------------------------------------------
# Nice triangles
# ---------------------------------------------------------------------------


@dataclass
class NiceTriangle:
    base_u: str
    base_v: str
    p_u: tuple
    p_v: tuple
    apex: tuple
    beta: object


def erect_triangle(p_u, p_v, beta, side: int, height_scale=1) -> tuple:
    """Apex of the isosceles triangle over segment p_u p_v with base angles
    beta, on the left (+1) or right (-1) of the direction u -> v."""
    mid = num.midpoint(p_u, p_v)
    dx, dy = p_v[0] - p_u[0], p_v[1] - p_u[1]
    ln = mpmath.hypot(dx, dy)
    nx, ny = (-dy / ln * side, dx / ln * side)
    hh = ln / 2 * mpmath.tan(beta) * mpf(height_scale)
    return (mid[0] + nx * hh, mid[1] + ny * hh)


def triangle_is_nice(drawing: Drawing, tri: NiceTriangle, skip_edges=()) -> bool:
    """The triangle interior must meet no drawn edge except its base, and no
    drawn vertex other than its base endpoints.

    Vertices lying exactly on the open base segment are tolerated when all of
    their edges stay on the base line (subdivision points of a contracted
    chain that the base spans)."""
    a = num.dyadic_point(tri.apex)
    b = num.dyadic_point(tri.p_u)
    c = num.dyadic_point(tri.p_v)
    skip = {tuple(sorted(e)) for e in skip_edges}
    if tri.base_v is not None:
        skip.add(tuple(sorted((tri.base_u, tri.base_v))))
    dpos = {x: num.dyadic_point(drawing.pos[x]) for x in drawing.pos}
    on_base = set()
    for x, d in dpos.items():
        if num.point_eq(d, b) or num.point_eq(d, c):
            if x not in (tri.base_u, tri.base_v):
                return False
            continue
        if num.on_segment(d, b, c):
            for e in drawing.edges():
                if x in e:
                    other = dpos[e[1] if e[0] == x else e[0]]
                    if num.orient(b, c, other) != 0:
                        return False
            on_base.add(x)
            continue
        if num.point_in_triangle(d, a, b, c, strict=False):
            return False
    sides = [(b, a), (c, a)]
    for e in drawing.edges():
        if tuple(sorted(e)) in skip:
            continue
        if e[0] in on_base and e[1] in on_base:
            continue
        d0, d1 = dpos[e[0]], dpos[e[1]]
        if num.point_in_triangle(d0, a, b, c, strict=True) or num.point_in_triangle(
            d1, a, b, c, strict=True
        ):
            return False
        for s0, s1 in sides:
            if _seg_touch_except_corner(d0, d1, s0, s1):
                return False
        # crossing the base itself (entering from below)
        if not _shares_endpoint(d0, d1, b, c) and num.segments_intersect(d0, d1, b, c):
            return False
    return True


def _shares_endpoint(d0, d1, s0, s1) -> bool:
    return any(num.point_eq(x, y) for x in (d0, d1) for y in (s0, s1))


def _seg_touch_except_corner(d0, d1, s0, s1) -> bool:
    """Does segment d0-d1 touch segment s0-s1 anywhere except at a shared
    endpoint location?"""
    shared = [
        (x, y) for x in (d0, d1) for y in (s0, s1) if num.point_eq(x, y)
    ]
    if not shared:
        return num.segments_intersect(d0, d1, s0, s1)
    x, y = shared[0]
    other_d = d1 if num.point_eq(x, d0) else d0
    other_s = s1 if num.point_eq(y, s0) else s0
    o = num.orient(y, other_d, other_s)
    if o != 0:
        return False
    dxa = num.dy_sub(other_d[0], y[0])
    dxb = num.dy_sub(other_s[0], y[0])
    dya = num.dy_sub(other_d[1], y[1])
    dyb = num.dy_sub(other_s[1], y[1])
    dot = num.dy_add(num.dy_mul(dxa, dxb), num.dy_mul(dya, dyb))
    return num.dy_sign(dot) > 0


def triangles_disjoint(t1: NiceTriangle, t2: NiceTriangle) -> bool:
    """Closed triangles may share only common base-endpoint corners."""
    pts1 = [num.dyadic_point(p) for p in (t1.p_u, t1.p_v, t1.apex)]
    pts2 = [num.dyadic_point(p) for p in (t2.p_u, t2.p_v, t2.apex)]
    for i in range(3):
        a0, a1 = pts1[i], pts1[(i + 1) % 3]
        for j in range(3):
            b0, b1 = pts2[j], pts2[(j + 1) % 3]
            if _seg_touch_except_corner(a0, a1, b0, b1):
                return False
    for p in pts2:
        if num.point_in_triangle(p, *pts1, strict=True):
            return False
    for p in pts1:
        if num.point_in_triangle(p, *pts2, strict=True):
            return False
    return True


# ---------------------------------------------------------------------------
# Convex-combination (Tutte) placement in a triangle
# ---------------------------------------------------------------------------


def tutte_in_triangle(
    k: gc.PlaneGraph,
    anchors: dict,
    drawing: Drawing,
    stage: str,
    apex_point=None,
    skip_edges=(),
) -> None:
    """Draw the plane graph k inside a triangle.

    anchors maps two or three outer-face vertices to fixed points.  With
    three anchors the outer face of k must be exactly that triangle; with two
    anchors (which must be adjacent on the outer face), `apex_point` gives
    the free corner and a helper apex vertex is synthesized.  Helper vertices
    are added to make the graph internally 3-connected (biconnection inside
    pinched faces, then a star inside every inner face); they are discarded
    after the solve.
    """
    work = k
    helper_seq = [0]

    def fresh():
        helper_seq[0] += 1
        return f"__h{helper_seq[0]}"

    targets = dict(anchors)
    if len(anchors) == 2:
        (w, z) = _base_pair_on_outer(work, anchors)
        h = fresh()
        rot = dict(work.rotation)
        rw = list(rot[w])
        rw.insert(rw.index(z), h)
        rot[w] = tuple(rw)
        rz = list(rot[z])
        rz.insert(rz.index(w) + 1, h)
        rot[z] = tuple(rz)
        rot[h] = (z, w)
        work = gc.PlaneGraph(rot, gc.retrace_outer(rot, (w, h)))
        if set(work.outer) != {w, z, h}:
            raise NotPlanarWithGivenOuterFace("apex helper did not close the face")
        targets[h] = apex_point
    else:
        if set(work.outer) != set(anchors):
            raise NotPlanarWithGivenOuterFace(
                "outer face must consist of the three anchors"
            )
    work = _biconnect_with_helpers(work, fresh)
    work = _star_triangulate(work, fresh)
    if not gc.is_three_connected(work):
        raise NotPlanarWithGivenOuterFace("triangulated graph is not 3-connected")
    pos = _tutte_solve(work, targets)
    skip = frozenset(tuple(sorted(e)) for e in skip_edges)
    for v in k.vertices:
        drawing.place(v, pos[v])
    seq = drawing.meta.setdefault("extra_seq", {})
    for u, v in k.edges():
        e = (u, v) if u < v else (v, u)
        if e in skip or e in drawing.edge_key:
            continue
        ang = num.angle_of(pos[u], pos[v])
        kidx = seq.get(stage, 0)
        key = drawing.registry.assign(ang, ("extra", stage, kidx))
        if key == ("extra", stage, kidx):
            seq[stage] = kidx + 1
        drawing.add_edge(u, v, key)


def _base_pair_on_outer(g: gc.PlaneGraph, anchors) -> tuple:
    names = sorted(anchors)
    w0 = g.outer
    n = len(w0)
    for i in range(n):
        a, b = w0[i], w0[(i + 1) % n]
        if {a, b} == set(names):
            return (a, b)
    raise NotPlanarWithGivenOuterFace("anchors are not adjacent on the outer face")


def _biconnect_with_helpers(g: gc.PlaneGraph, fresh) -> gc.PlaneGraph:
    """Add degree-2 helper vertices inside pinched inner faces until every
    face walk is simple."""
    for _round in range(2 * g.n() + 4):
        outer_key = gc._cyclic_key(g.outer)
        target = None
        for f in g.faces():
            if gc._cyclic_key(f) == outer_key:
                continue
            seen = {}
            for idx, x in enumerate(f):
                if x in seen:
                    target = (f, seen[x], idx)
                    break
                seen[x] = idx
            if target:
                break
        if target is None:
            return g
        f, i, j = target
        m = len(f)
        a, b = f[(i + 1) % m], f[(j + 1) % m]
        x = f[i]
        y = fresh()
        rot = dict(g.rotation)
        ra = list(rot[a])
        ra.insert(ra.index(x), y)
        rot[a] = tuple(ra)
        rb = list(rot[b])
        rb.insert(rb.index(x), y)
        rot[b] = tuple(rb)
        rot[y] = (a, b)
        g = gc.PlaneGraph(rot, g.outer)
    raise NotPlanarWithGivenOuterFace("biconnection loop did not converge")


def _star_triangulate(g: gc.PlaneGraph, fresh) -> gc.PlaneGraph:
    outer_key = gc._cyclic_key(g.outer)
    rot = {v: list(ns) for v, ns in g.rotation.items()}
    for f in g.faces():
        if gc._cyclic_key(f) == outer_key or len(f) == 3:
            continue
        s = fresh()
        rot[s] = list(f)
        m = len(f)
        for idx, wv in enumerate(f):
            succ = f[(idx + 1) % m]
            pred = f[(idx - 1) % m]
            rv = rot[wv]
            rv.insert(rv.index(pred), s)
    g2 = gc.PlaneGraph({v: tuple(ns) for v, ns in rot.items()}, g.outer)
    return g2


def _tutte_solve(g: gc.PlaneGraph, targets: dict) -> dict:
    fixed = dict(targets)
    interior = [v for v in g.vertices if v not in fixed]
    if not interior:
        return fixed
    index = {v: i for i, v in enumerate(interior)}
    n = len(interior)
    A = mpmath.zeros(n, n)
    bx = mpmath.zeros(n, 1)
    by = mpmath.zeros(n, 1)
    for v in interior:
        i = index[v]
        ns = g.rotation[v]
        A[i, i] = len(ns)
        for u in ns:
            if u in fixed:
                bx[i] += fixed[u][0]
                by[i] += fixed[u][1]
            else:
                A[i, index[u]] -= 1
    try:
        xs = mpmath.lu_solve(A, bx)
        ys = mpmath.lu_solve(A, by)
    except ZeroDivisionError as exc:  # pragma: no cover - defensive
        raise LinearSolveSingular(str(exc))
    out = dict(fixed)
    for v in interior:
        out[v] = (xs[index[v]], ys[index[v]])
    return out
