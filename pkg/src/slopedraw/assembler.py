"""Top-level constructions: 3-/2-/1-connected cycle-trees, cycle-pseudotrees
(the reference-edge case machine) and nested pseudotrees.

All stages draw into one shared Drawing: the innermost 3-connected core is
drawn first (SPQ recursion in an equilateral triangle, or a direct convex
placement when the outer cycle is a triangle), contractions are undone by
subdividing host segments, the removed apex returns on a vertical ray above
the root, and flags re-attach inside nice triangles anchored on their cut
edges.  Every geometric free parameter (apex height, triangle base angles
and sizes, subdivision positions) is searched with exact checks, so a
returned drawing is planar by construction of the search, and the verifier
re-establishes it independently.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import mpf

from . import aux_draw, core_drawer, frames
from . import graph_core as gc
from . import numerics as num
from . import spq as spq_mod
from .drawing import Drawing
from .errors import (
    BadApexChoice,
    CaseRecursionOverflow,
    ConstructionFailure,
    DrawUnsupported,
    NotAlmost3Connected,
    NotOnPseudotreeCycle,
    NotThreeConnected,
)
from .slope_set import build_slope_set

MAX_CASE_DEPTH = 4


# ---------------------------------------------------------------------------
# Budgets (documented closed forms, asserted by the acceptance suite)
# ---------------------------------------------------------------------------


def budget_3connected(delta: int, delta_star: int) -> int:
    """Slope budget for a 3-connected cycle-tree: the universe plus the apex."""
    return delta_star * delta_star + 4 * delta * delta_star + 1 + delta


def budget_quadratic(delta: int) -> int:
    """Documented closed-form budget for cycle-pseudotrees, nested
    pseudotrees and 1-/2-connected cycle-trees: B(delta) = a*d^2 + b*d + c."""
    return 64 * delta * delta + 88 * delta + 32


def _stage_begin(drawing: Drawing):
    return len(drawing.registry.angle_of)


def _stage_end(drawing: Drawing, before: int, name: str, note: str = "") -> None:
    added = len(drawing.registry.angle_of) - before
    drawing.meta.setdefault("budget_stages", []).append((name, added, note))


# ---------------------------------------------------------------------------
# Shared geometry helpers
# ---------------------------------------------------------------------------


def resubdivide(drawing: Drawing, log) -> None:
    """Undo a contraction log inside the drawing: each contracted vertex
    returns to the midpoint of its host segment, splitting the host edge."""
    hosts = drawing.meta.setdefault("subdivision_host", {})
    for v, x, y in reversed(log):
        e = (x, y) if x < y else (y, x)
        key = drawing.edge_key[e]
        drawing.remove_edge(x, y)
        drawing.pos[v] = num.midpoint(drawing.pos[x], drawing.pos[y])
        drawing.add_edge(x, v, key)
        drawing.add_edge(v, y, key)
        hosts[v] = (x, y)


def _move_subdivision_vertex(drawing: Drawing, v, t) -> None:
    x, y = drawing.meta["subdivision_host"][v]
    drawing.pos[v] = num.lerp(drawing.pos[x], drawing.pos[y], t)


def _min_adjacent_angle(drawing: Drawing):
    """Smallest angle between two edges sharing an endpoint."""
    incident = {}
    for u, v in drawing.edges():
        incident.setdefault(u, []).append(v)
        incident.setdefault(v, []).append(u)
    best = mpmath.pi
    for x, nbrs in incident.items():
        if len(nbrs) < 2:
            continue
        px = drawing.pos[x]
        dirs = sorted(
            mpmath.atan2(drawing.pos[w][1] - px[1], drawing.pos[w][0] - px[0])
            for w in nbrs
        )
        for a, b in zip(dirs, dirs[1:]):
            best = min(best, b - a)
        best = min(best, dirs[0] + 2 * mpmath.pi - dirs[-1])
    return best


def _min_positive_slope(drawing: Drawing):
    best = None
    for e in drawing.edges():
        a = num.angle_of(*drawing.segment(e))
        if a > 0 and (best is None or a < best):
            best = a
    return best if best is not None else mpmath.pi / 3


def _bbox_diameter(drawing: Drawing):
    xs = [p[0] for p in drawing.pos.values()]
    ys = [p[1] for p in drawing.pos.values()]
    return mpmath.hypot(max(xs) - min(xs), max(ys) - min(ys)) or mpf(1)


def _registry_clear(drawing: Drawing, angles) -> bool:
    """True when none of the angles falls into a registry dead zone and the
    angles are pairwise either merged or separated."""
    from .drawing import MIN_GAP, REUSE_TOL

    for a in angles:
        near = drawing.registry.nearest(a)
        if near is not None and REUSE_TOL < near[0] < MIN_GAP:
            return False
    ss = sorted(angles)
    for a, b in zip(ss, ss[1:]):
        if REUSE_TOL < b - a < MIN_GAP:
            return False
    return True


def _assign_extra(drawing: Drawing, angle, stage: str):
    seq = drawing.meta.setdefault("extra_seq", {})
    k = seq.get(stage, 0)
    key = drawing.registry.assign(angle, ("extra", stage, k))
    if key == ("extra", stage, k):
        seq[stage] = k + 1
    return key


def insert_apex(drawing: Drawing, apex_v, neighbors, above, stage: str) -> None:
    """Place the removed cycle vertex on a vertical ray above `above`, high
    enough that all its edges clear the drawing, then tag them."""
    from .verify import planarity

    base = drawing.pos[above]
    h = _bbox_diameter(drawing)
    edges = drawing.edges()
    for attempt in range(220):
        q = (base[0], base[1] + h)
        ok = all(
            planarity.segment_clear(
                drawing.pos, edges, q, drawing.pos[nbr], allowed_endpoints=(nbr,)
            )
            for nbr in neighbors
        )
        if ok:
            angles = [num.angle_of(q, drawing.pos[nbr]) for nbr in neighbors]
            if _registry_clear(drawing, angles):
                break
            h = h * (1 + mpf(2) ** -12)
            continue
        h = h * 2
    else:
        raise ConstructionFailure("no apex height clears the drawing")
    drawing.place(apex_v, q)
    for nbr in neighbors:
        ang = num.angle_of(q, drawing.pos[nbr])
        drawing.add_edge(apex_v, nbr, _assign_extra(drawing, ang, stage))


# ---------------------------------------------------------------------------
# 3-connected cycle-trees
# ---------------------------------------------------------------------------


def draw_3connected_cycle_tree(
    g: gc.PlaneGraph,
    delta: int,
    drawing: Drawing = None,
    stage: str = "core",
    apex: str = None,
    rho: str = None,
):
    """Lemma-style construction: pick an apex cycle vertex, draw the exposed
    path-tree recursively inside an equilateral triangle, subdivide the
    contracted vertices back, and re-insert the apex above the root."""
    if drawing is None:
        drawing = Drawing()
    delta = max(delta, gc.degree_stats(g)[0])  # helper edges may raise degrees
    if len(g.outer) == 3:
        before = _stage_begin(drawing)
        _tutte_small(g, drawing, stage)
        _stage_end(drawing, before, f"{stage}-small", "outer cycle of length 3")
        drawing.meta.setdefault("delta_star", 2)
        return drawing
    candidates = [apex] if apex is not None else list(g.outer)
    last_error = None
    for cand in candidates:
        try:
            pt = spq_mod.build_path_tree(g, cand, rho)
            tree = spq_mod.build_spq(pt)
        except (BadApexChoice, NotAlmost3Connected) as exc:
            last_error = exc
            continue
        ds = spq_mod.delta_star(tree)
        dstar = max(ds.value, 2)
        ss = build_slope_set(delta, dstar)
        before = _stage_begin(drawing)
        tri = core_drawer.equilateral_triangle(ss)
        core_drawer.draw_path_tree(tree, tri, ss, drawing)
        _stage_end(drawing, before, f"{stage}-spq", f"delta*={dstar}")
        resubdivide(drawing, pt.contraction_log)
        before = _stage_begin(drawing)
        insert_apex(drawing, cand, g.rotation[cand], pt.root, f"{stage}-apex")
        _stage_end(drawing, before, f"{stage}-apex", f"deg={g.degree(cand)}")
        drawing.meta["delta_star"] = max(drawing.meta.get("delta_star", 2), dstar)
        drawing.meta.setdefault("slope_sets", []).append((delta, dstar))
        drawing.meta.setdefault("core", {}).update(
            {"apex": cand, "root": pt.root, "path": pt.path}
        )
        drawing.meta.setdefault("path_vertices", set()).update(pt.path)
        drawing.meta.setdefault("core_runs", []).append((tree, ss))
        return drawing
    raise NotThreeConnected(
        f"no apex admits the path-tree construction ({last_error})"
    )


def _tutte_small(g: gc.PlaneGraph, drawing: Drawing, stage: str) -> None:
    a, b, c = g.outer
    anchors = {}
    if a in drawing.pos and b in drawing.pos and c in drawing.pos:
        anchors = {a: drawing.pos[a], b: drawing.pos[b], c: drawing.pos[c]}
    else:
        anchors = {
            a: num.pt(0, 0),
            b: num.pt(1, 0),
            c: (mpf(1) / 2, mpmath.sqrt(3) / 2),
        }
    aux_draw.tutte_in_triangle(g, anchors, drawing, stage)


# ---------------------------------------------------------------------------
# Flag re-attachment
# ---------------------------------------------------------------------------


def _induced_adj_with_edge(source: gc.PlaneGraph, keep: frozenset, extra_edge=None):
    adj = {v: sorted(u for u in source.rotation[v] if u in keep) for v in keep}
    if extra_edge is not None:
        a, b = extra_edge
        if b not in adj[a]:
            adj[a] = sorted(adj[a] + [b])
            adj[b] = sorted(adj[b] + [a])
    return adj


def attach_wz_flags(
    drawing: Drawing, records, source: gc.PlaneGraph, delta: int, stage: str
) -> None:
    """Erect similar nice isosceles triangles on the (virtual) cut edges and
    fill each flag with the partial-2-tree drawer."""
    if not records:
        return
    alpha = _min_adjacent_angle(drawing)
    beta = min(alpha / 4, mpmath.pi / 5)
    before = _stage_begin(drawing)
    tris = _fit_triangles(
        drawing,
        [(r.w, r.z) for r in records],
        beta,
        shrink_angle=True,
    )
    for r, tri in zip(records, tris):
        adj = _induced_adj_with_edge(
            source, r.flag | {r.w, r.z}, extra_edge=(r.w, r.z)
        )
        aux_draw.draw_partial_2tree_in_triangle(
            adj,
            (r.w, r.z),
            drawing.pos[r.w],
            drawing.pos[r.z],
            tri.apex,
            tri.beta,
            delta,
            drawing,
            stage,
            skip_edges=((r.w, r.z),),
        )
    _stage_end(drawing, before, stage, f"{len(records)} flags, beta={mpmath.nstr(tris[0].beta, 6)}")


def attach_c_flags(
    drawing: Drawing, records, source: gc.PlaneGraph, delta: int, stage: str
) -> None:
    """Horizontal-base isosceles triangles with the cut vertex at the left
    base corner; flags drawn via a synthetic anchor edge to a dummy corner."""
    if not records:
        return
    alpha = _min_positive_slope(drawing)
    beta = min(alpha / 2, mpmath.pi / 5)
    before = _stage_begin(drawing)
    ell = _bbox_diameter(drawing) / 8
    placed = []
    for r in records:
        tri = _fit_c_triangle(drawing, placed, r.cut, beta, ell)
        placed.append(tri)
        dummy = f"__hang_{r.cut}"
        adj = _induced_adj_with_edge(source, r.flag | {r.cut})
        adj[dummy] = [r.cut]
        adj[r.cut] = sorted(adj[r.cut] + [dummy])
        aux_draw.draw_partial_2tree_in_triangle(
            adj,
            (r.cut, dummy),
            tri.p_u,
            tri.p_v,
            tri.apex,
            tri.beta,
            delta,
            drawing,
            stage,
            skip_edges=((r.cut, dummy),),
        )
        drawing.remove_vertex(dummy)
    _stage_end(drawing, before, stage, f"{len(records)} hangs")


def _fit_triangles(drawing, base_pairs, beta, shrink_angle):
    """One base angle for the whole family; per-edge side choice; shrink the
    angle until all triangles are nice and pairwise disjoint."""
    for _attempt in range(200):
        tris = []
        ok = True
        for u, v in base_pairs:
            tri = None
            for side in (1, -1):
                apex = aux_draw.erect_triangle(
                    drawing.pos[u], drawing.pos[v], beta, side
                )
                cand = aux_draw.NiceTriangle(
                    u, v, drawing.pos[u], drawing.pos[v], apex, beta
                )
                if aux_draw.triangle_is_nice(drawing, cand) and all(
                    aux_draw.triangles_disjoint(cand, t) for t in tris
                ):
                    tri = cand
                    break
            if tri is None:
                ok = False
                break
            tris.append(tri)
        if ok:
            return tris
        if not shrink_angle:
            raise ConstructionFailure("flag triangles cannot be placed")
        beta = beta / 2
    raise ConstructionFailure("flag triangle search did not converge")


def _fit_c_triangle(drawing, placed, c, beta, ell):
    """Horizontal-base triangle with left endpoint c, shrunk until nice."""
    pc = drawing.pos[c]
    for _attempt in range(300):
        for side in (1, -1):
            p_v = (pc[0] + ell, pc[1])
            apex = aux_draw.erect_triangle(pc, p_v, beta, side)
            cand = aux_draw.NiceTriangle(c, None, pc, p_v, apex, beta)
            if aux_draw.triangle_is_nice(drawing, cand) and all(
                aux_draw.triangles_disjoint(cand, t) for t in placed
            ):
                return cand
        ell = ell / 2
    raise ConstructionFailure(f"no nice hang triangle at {c}")


# ---------------------------------------------------------------------------
# 2- and 1-connected cycle-trees
# ---------------------------------------------------------------------------


def draw_connected_stack(
    g: gc.PlaneGraph,
    delta: int,
    drawing: Drawing = None,
    stage: str = "stack",
    protected=frozenset(),
):
    """Draw an irreducible connected cycle-tree (flags may be general partial
    2-trees): strip c-flags and (w,z)-flags to the 3-connected core, draw it,
    then unwind contractions and re-attach the flags."""
    if drawing is None:
        drawing = Drawing()
    fd = frames.build_frames(g, protected)
    core = fd.two_frame
    if len(core.outer) == 3:
        before = _stage_begin(drawing)
        _tutte_small(core, drawing, f"{stage}-small")
        _stage_end(drawing, before, f"{stage}-small")
        drawing.meta.setdefault("delta_star", 2)
        drawing.meta.setdefault("path_vertices", set()).update(core.outer)
    else:
        if not gc.is_three_connected(core):
            raise NotThreeConnected("2-frame is not 3-connected")
        draw_3connected_cycle_tree(core, delta, drawing, stage=f"{stage}-core")
    for i, (recs, log) in enumerate(reversed(fd.wz_rounds)):
        resubdivide(drawing, log)
        attach_wz_flags(drawing, recs, g, delta, f"{stage}-wz{i}")
    for i, (recs, log) in enumerate(reversed(fd.c_rounds)):
        resubdivide(drawing, log)
        attach_c_flags(drawing, recs, g, delta, f"{stage}-c{i}")
    for r in fd.all_wz_flags():
        if r.virtual:
            e = (r.w, r.z) if r.w < r.z else (r.z, r.w)
            if e in drawing.edge_key:
                drawing.remove_edge(*e)
    drawing.meta["frame_iterations"] = fd.iterations
    return drawing, fd


def draw_2connected(g: gc.PlaneGraph, delta: int = None, drawing: Drawing = None):
    """Irreducible 2-connected cycle-tree."""
    delta = delta or gc.degree_stats(g)[0]
    drawing, _fd = draw_connected_stack(g, delta, drawing, "two")
    return drawing


def draw_1connected(g: gc.PlaneGraph, delta: int = None, drawing: Drawing = None):
    """Connected cycle-tree; contracts first, takes the partial-2-tree route
    when a cut vertex lies on the outer cycle."""
    delta = delta or gc.degree_stats(g)[0]
    work, log = frames.contract(g)
    if drawing is None:
        drawing = Drawing()
    _recs, cycle_cuts = frames.cut_vertices_and_c_flags(work)
    if cycle_cuts:
        before = _stage_begin(drawing)
        _draw_partial_2tree_standalone(work, delta, drawing, "p2t")
        _stage_end(drawing, before, "p2t", "cycle-vertex cut: partial 2-tree route")
    else:
        draw_connected_stack(work, delta, drawing, "one")
    resubdivide(drawing, log)
    return drawing


def _draw_partial_2tree_standalone(
    g: gc.PlaneGraph, delta: int, drawing: Drawing, stage: str
) -> None:
    from .errors import NotPartial2Tree

    adj = {v: sorted(g.rotation[v]) for v in g.vertices}
    if gc._p2t_elimination(adj) is None:
        raise NotPartial2Tree("graph is not a partial 2-tree")
    u, v = g.edges()[0]
    beta = mpmath.pi / 5
    p_u, p_v = num.pt(0, 0), num.pt(1, 0)
    apex = aux_draw.erect_triangle(p_u, p_v, beta, 1)
    aux_draw.draw_partial_2tree_in_triangle(
        adj, (u, v), p_u, p_v, apex, beta, delta, drawing, stage
    )


# ---------------------------------------------------------------------------
# Cycle-pseudotrees: the reference-edge case machine
# ---------------------------------------------------------------------------


@dataclass
class CaseTag:
    tag: str  # A1 | A2 | A3 | A4 | B1 | B2 | B3 | C
    u: str
    v: str
    c: str = None  # cut vertex whose flag holds u (A cases)
    c2: str = None  # cut vertex whose flag holds v (A2)
    wz: tuple = None  # 2-cut whose flag holds u (B cases) or v (A3)
    wz2: tuple = None  # 2-cut whose flag holds v (B2)


def _case_analysis(h: gc.PlaneGraph, e):
    u, v = e
    cls = gc.classify(h)
    if cls.tag != "CyclePseudotree":
        raise DrawUnsupported(f"case machine needs a cycle-pseudotree, got {cls.tag}")
    kcycle = cls.witness_cycle
    on_cycle = any(
        {kcycle[i], kcycle[(i + 1) % len(kcycle)]} == {u, v}
        for i in range(len(kcycle))
    )
    if not on_cycle:
        raise NotOnPseudotreeCycle(f"({u},{v}) is not on the pseudotree cycle")
    g = gc.delete_edge(h, u, v)
    g, log0 = frames.contract(g, protected=frozenset((u, v)))
    fd = frames.build_frames(g, protected=frozenset((u, v)))
    return g, log0, fd


def _all_logs(log0, fd: frames.FlagDecomposition):
    logs = list(log0)
    for _recs, log in fd.c_rounds:
        logs.extend(log)
    for _recs, log in fd.wz_rounds:
        logs.extend(log)
    return logs


def _expand_flag(flag: frozenset, anchors: frozenset, logs) -> frozenset:
    """Pull contracted vertices back into a flag: a vertex re-subdivides into
    the flag when its host segment lies inside the flag (at least one host
    endpoint a flag member, the other a member or an anchor)."""
    full = set(flag)
    for t, x, y in reversed(logs):
        ends = {x, y}
        if ends & full and ends <= (full | anchors):
            full.add(t)
    return frozenset(full)


def _locate(fd: frames.FlagDecomposition, x):
    for recs, _log in fd.c_rounds:
        for r in recs:
            if x in r.flag:
                return ("c", r)
    for recs, _log in fd.wz_rounds:
        for r in recs:
            if x in r.flag:
                return ("wz", r)
    return ("frame", None)


def classify_reference_edge(h: gc.PlaneGraph, e) -> CaseTag:
    u, v = e
    _g, _log0, fd = _case_analysis(h, e)
    lu, lv = _locate(fd, u), _locate(fd, v)
    if lu[0] != "c" and lv[0] == "c":
        u, v = v, u
        lu, lv = lv, lu
    if lu[0] == "c":
        if lv[0] == "c" and lv[1] is lu[1]:
            return CaseTag("A1", u, v, c=lu[1].cut)
        if v == lu[1].cut:
            # the second endpoint is the cut vertex itself: the flag plus the
            # reference edge still hangs at it, so the base machinery applies
            return CaseTag("A1", u, v, c=lu[1].cut)
        if lv[0] == "c":
            return CaseTag("A2", u, v, c=lu[1].cut, c2=lv[1].cut)
        if lv[0] == "wz":
            return CaseTag("A3", u, v, c=lu[1].cut, wz=(lv[1].w, lv[1].z))
        return CaseTag("A4", u, v, c=lu[1].cut)
    if lu[0] != "wz" and lv[0] == "wz":
        u, v = v, u
        lu, lv = lv, lu
    if lu[0] == "wz":
        if lv[0] == "wz" and lv[1] is lu[1]:
            return CaseTag("B1", u, v, wz=(lu[1].w, lu[1].z))
        if v in (lu[1].w, lu[1].z):
            # second endpoint on the 2-cut itself: fill like the base case
            return CaseTag("B1", u, v, wz=(lu[1].w, lu[1].z))
        if lv[0] == "wz":
            return CaseTag(
                "B2", u, v, wz=(lu[1].w, lu[1].z), wz2=(lv[1].w, lv[1].z)
            )
        return CaseTag("B3", u, v, wz=(lu[1].w, lu[1].z))
    return CaseTag("C", u, v)


_CASE_RANK = {"A1": 0, "A2": 1, "A3": 2, "A4": 3, "B1": 4, "B2": 5, "B3": 6, "C": 7}


class _RerouteCase(Exception):
    """The chosen reference edge degenerates (its cycle collapses onto it);
    the machine retries with another cycle edge."""


def _pathological_edge(h: gc.PlaneGraph, e) -> bool:
    """A cycle edge whose endpoints keep a common degree-2 neighbor once the
    edge is removed cannot serve as the reference edge: the neighbor would
    contract onto the removed edge's own segment.  Only a triangle pseudotree
    cycle can produce this, and it always has a safe edge as well."""
    u, v = e
    common = h.nbr_set(u) & h.nbr_set(v)
    return any(h.degree(t) == 2 for t in common)


def _choose_reference_edge(h: gc.PlaneGraph, kcycle) -> tuple:
    """Cycle edge minimizing the expected case-machine depth."""
    best = None
    for i in range(len(kcycle)):
        e = tuple(sorted((kcycle[i], kcycle[(i + 1) % len(kcycle)])))
        if _pathological_edge(h, e):
            continue
        try:
            tag = classify_reference_edge(h, e).tag
        except Exception:
            continue
        rank = -_CASE_RANK[tag]
        if best is None or (rank, e) < best:
            best = (rank, e)
    if best is None:
        raise ConstructionFailure("no usable reference edge on the pseudotree cycle")
    return best[1]


def draw_cycle_pseudotree(
    h: gc.PlaneGraph,
    delta: int = None,
    drawing: Drawing = None,
    ref_edge: tuple = None,
    depth: int = 0,
):
    delta = delta or gc.degree_stats(h)[0]
    if drawing is None:
        drawing = Drawing()
    if depth > MAX_CASE_DEPTH:
        raise CaseRecursionOverflow(f"case recursion exceeded {MAX_CASE_DEPTH}")
    cls = gc.classify(h)
    if cls.tag in ("CycleTree", "Halin"):
        return draw_1connected(h, delta, drawing)
    if cls.tag != "CyclePseudotree":
        raise DrawUnsupported(f"expected a cycle-pseudotree, got {cls.tag}")
    rerouted = False
    if ref_edge is None or _pathological_edge(h, tuple(ref_edge)):
        rerouted = ref_edge is not None
        ref_edge = _choose_reference_edge(h, cls.witness_cycle)
    handlers = {
        "A1": _case_a1,
        "A2": _case_a_step,
        "A3": _case_a_step,
        "A4": _case_a_step,
        "B1": _case_b1,
        "B2": _case_b_step,
        "B3": _case_b_step,
        "C": _case_c,
    }
    tried = set()
    while True:
        tag = classify_reference_edge(h, tuple(ref_edge))
        trail = drawing.meta.setdefault("case_trail", [])
        if trail and not rerouted:
            prev = trail[-1]
            if _CASE_RANK[tag.tag] <= _CASE_RANK[prev]:
                raise CaseRecursionOverflow(
                    f"case tags did not descend: {prev} -> {tag.tag}"
                )
        trail.append(tag.tag)
        try:
            handlers[tag.tag](h, tag, delta, drawing, depth)
            return drawing
        except _RerouteCase:
            trail.pop()
            tried.add(tuple(sorted(ref_edge)))
            rerouted = True
            ref_edge = _next_reference_edge(h, cls.witness_cycle, tried)
            if ref_edge is None:
                raise ConstructionFailure(
                    "every reference edge on the pseudotree cycle degenerates"
                )


def _next_reference_edge(h, kcycle, tried):
    for i in range(len(kcycle)):
        e = tuple(sorted((kcycle[i], kcycle[(i + 1) % len(kcycle)])))
        if e in tried or _pathological_edge(h, e):
            continue
        return e
    return None


def _case_a1(h, tag: CaseTag, delta, drawing, depth) -> None:
    # both endpoints inside one c-flag: the flag plus the reference edge is a
    # pseudotree, so the plain 1-connected machinery applies unchanged
    work, log = frames.contract(h)
    draw_connected_stack(work, delta, drawing, f"a1d{depth}")
    resubdivide(drawing, log)


def _remove_and_bridge(h, drop: frozenset, a, b):
    """Remove a flag's vertices from h and insert the bridge edge (a, b) into
    the vacated region (if missing)."""
    rot = {
        x: tuple(u for u in ns if u not in drop)
        for x, ns in h.rotation.items()
        if x not in drop
    }
    work = gc.PlaneGraph(rot, h.outer)
    if work.has_edge(a, b):
        return work, False
    face = next(f for f in work.faces() if a in f and b in f)
    return gc.add_edge_in_face(work, a, b, face), True


def _case_a_step(h, tag: CaseTag, delta, drawing, depth) -> None:
    u, v, c = tag.u, tag.v, tag.c
    g = gc.delete_edge(h, u, v)
    _g2, log0, fd = _case_analysis(h, (tag.u, tag.v))
    rec = next(r for r in fd.all_c_flags() if u in r.flag and r.cut == c)
    full = _expand_flag(rec.flag, frozenset((c,)), _all_logs(log0, fd))
    hprime, added = _remove_and_bridge(g, full, c, v)
    sub = gc.classify(hprime)
    if sub.tag in ("CycleTree", "Halin"):
        draw_1connected(hprime, delta, drawing)
    else:
        draw_cycle_pseudotree(hprime, delta, drawing, ref_edge=(c, v), depth=depth + 1)
    before = _stage_begin(drawing)
    tris = _fit_triangles(drawing, [(c, v)], min(_min_adjacent_angle(drawing) / 4, mpmath.pi / 5), True)
    keep = full | {c, v}
    adj = _induced_adj_with_edge(h, keep, extra_edge=(c, v))
    aux_draw.draw_partial_2tree_in_triangle(
        adj,
        (c, v),
        drawing.pos[c],
        drawing.pos[v],
        tris[0].apex,
        tris[0].beta,
        delta,
        drawing,
        f"a-fill-d{depth}",
        skip_edges=((c, v),),
    )
    _stage_end(drawing, before, f"a-fill-d{depth}")
    if added and not h.has_edge(c, v):
        e = (c, v) if c < v else (v, c)
        if e in drawing.edge_key:
            drawing.remove_edge(*e)


def _case_b1(h, tag: CaseTag, delta, drawing, depth) -> None:
    u, v = tag.u, tag.v
    w, z = tag.wz
    g = gc.delete_edge(h, u, v)
    _g2, log0, fd = _case_analysis(h, (u, v))
    rec = next(r for r in fd.all_wz_flags() if u in r.flag)
    full = _expand_flag(rec.flag, frozenset((w, z)), _all_logs(log0, fd))
    hprime, _added = _remove_and_bridge(g, full, w, z)
    draw_1connected(hprime, delta, drawing)
    before = _stage_begin(drawing)
    beta = min(_min_adjacent_angle(drawing) / 4, mpmath.pi / 5)
    tris = _fit_triangles(drawing, [(w, z)], beta, True)
    keep = full | {w, z}
    k = _embedded_flag_graph(h, keep, (w, z))
    aux_draw.tutte_in_triangle(
        k,
        {w: drawing.pos[w], z: drawing.pos[z]},
        drawing,
        f"b1-fill-d{depth}",
        apex_point=tris[0].apex,
        skip_edges=((w, z),) if not h.has_edge(w, z) else (),
    )
    _stage_end(drawing, before, f"b1-fill-d{depth}")


def _case_b_step(h, tag: CaseTag, delta, drawing, depth) -> None:
    u, v = tag.u, tag.v
    w, z = tag.wz
    g = gc.delete_edge(h, u, v)
    _g2, log0, fd = _case_analysis(h, (u, v))
    logs = _all_logs(log0, fd)
    rec = next(r for r in fd.all_wz_flags() if u in r.flag)
    drop = set(_expand_flag(rec.flag, frozenset((w, z)), logs))
    vz = next(
        (r for r in fd.all_wz_flags() if {r.w, r.z} == {v, z}),
        None,
    )
    if vz is not None:
        drop |= _expand_flag(vz.flag, frozenset((v, z)), logs)
    work = gc.PlaneGraph(
        {
            x: tuple(t for t in ns if t not in drop)
            for x, ns in g.rotation.items()
            if x not in drop
        },
        g.outer,
    )
    added = []
    for a, b in ((w, v), (z, v), (w, z)):
        if not work.has_edge(a, b):
            face = next(f for f in work.faces() if a in f and b in f)
            work = gc.add_edge_in_face(work, a, b, face)
            added.append((a, b))
    sub = gc.classify(work)
    if sub.tag in ("CycleTree", "Halin"):
        draw_1connected(work, delta, drawing)
    else:
        draw_cycle_pseudotree(work, delta, drawing, ref_edge=(w, v), depth=depth + 1)
    # fill the helper triangle (w, v, z) with the flag material
    before = _stage_begin(drawing)
    keep = frozenset(drop) | {w, z, v}
    k = _embedded_triangle_graph(h, keep, w, v, z)
    aux_draw.tutte_in_triangle(
        k,
        {w: drawing.pos[w], v: drawing.pos[v], z: drawing.pos[z]},
        drawing,
        f"b-fill-d{depth}",
        skip_edges=tuple((a, b) for a, b in ((w, v), (z, v), (w, z)) if not h.has_edge(a, b)),
    )
    _stage_end(drawing, before, f"b-fill-d{depth}")
    for a, b in added:
        e = (a, b) if a < b else (b, a)
        if e in drawing.edge_key:
            drawing.remove_edge(*e)


def _embedded_flag_graph(h: gc.PlaneGraph, keep: frozenset, base) -> gc.PlaneGraph:
    """Plane subgraph induced on `keep`, with the base edge present and lying
    on the outer face."""
    w, z = base
    rot = {x: tuple(u for u in h.rotation[x] if u in keep) for x in keep}
    outer = None
    k0 = None
    if z in rot[w]:
        k0 = gc.PlaneGraph(rot, gc.retrace_outer(rot, (w, z)))
        return k0
    # insert the (virtual) base edge into a common face and keep it outer
    k0 = gc.PlaneGraph(rot, rot and tuple())
    faces = gc._trace_all_faces(rot)
    for f in faces:
        if w in f and z in f:
            walk = list(f)
            iw, iz = walk.index(w), walk.index(z)
            k1 = gc.PlaneGraph(rot, f)
            k1 = gc.add_edge_at(k1, w, walk[iw - 1], z, walk[iz - 1])
            k1 = gc.PlaneGraph(k1.rotation, gc.retrace_outer(k1.rotation, (w, z)))
            res = gc.validate_embedding(k1)
            if res.ok:
                return k1
    raise ConstructionFailure("cannot embed the flag with its base edge")


def _embedded_triangle_graph(h, keep, w, v, z) -> gc.PlaneGraph:
    """Plane subgraph induced on `keep` with helper edges (w,v), (z,v), (w,z)
    present and the triangle (w, v, z) as its outer face."""
    rot = {x: tuple(u for u in h.rotation[x] if u in keep) for x in keep}
    base = gc.PlaneGraph(rot, ())

    missing = [p for p in ((w, v), (z, v), (w, z)) if p[1] not in base.nbr_set(p[0])]

    def complete(graph: gc.PlaneGraph, todo):
        if not todo:
            for f in gc._trace_all_faces(graph.rotation):
                if len(f) == 3 and set(f) == {w, v, z}:
                    out = gc.PlaneGraph(graph.rotation, f)
                    if gc.validate_embedding(out).ok:
                        return out
            return None
        a, b = todo[0]
        for f in gc._trace_all_faces(graph.rotation):
            if a not in f or b not in f:
                continue
            walk = list(f)
            for ia in (i for i, x in enumerate(walk) if x == a):
                for ib in (i for i, x in enumerate(walk) if x == b):
                    try:
                        g2 = gc.add_edge_at(
                            graph, a, walk[ia - 1], b, walk[ib - 1]
                        )
                    except ValueError:
                        continue
                    if gc.validate_embedding(
                        gc.PlaneGraph(
                            g2.rotation,
                            gc.retrace_outer(g2.rotation, (a, b)),
                        )
                    ).ok:
                        out = complete(
                            gc.PlaneGraph(
                                g2.rotation,
                                gc.retrace_outer(g2.rotation, (a, b)),
                            ),
                            todo[1:],
                        )
                        if out is not None:
                            return out
        return None

    out = complete(base, missing)
    if out is None:
        raise ConstructionFailure("cannot embed the flag inside the helper triangle")
    return out


def _case_c(h, tag: CaseTag, delta, drawing, depth) -> None:
    u, v = tag.u, tag.v
    g = gc.delete_edge(h, u, v)
    g, log0 = frames.contract(g, protected=frozenset((u, v)))
    fd = frames.build_frames(g, protected=frozenset((u, v)))
    g2 = fd.two_frame
    if g2.has_edge(u, v):
        raise _RerouteCase("reference chain collapsed onto its own edge")
    if len(g2.outer) == 3:
        # small 2-frame (the partial-2-tree route of the case machine):
        # place the core plus the reference edge by convex combination
        small = gc.add_edge_in_face(g2, u, v)
        before = _stage_begin(drawing)
        _tutte_small(small, drawing, f"c-small-d{depth}")
        _stage_end(drawing, before, f"c-small-d{depth}")
        drawing.meta.setdefault("path_vertices", set()).update(g2.outer)
        _unwind_case_c(drawing, g, fd, log0, delta, depth)
        return
    # inner face of the 2-frame incident to both endpoints of the lost edge
    # (unique when the endpoints kept degree 3, else the two sides of their
    # chain both qualify and either supports the construction)
    outer_key = gc._cyclic_key(g2.outer)
    ext = g2.outer_set()
    gfaces = [
        f
        for f in g2.faces()
        if u in f and v in f and gc._cyclic_key(f) != outer_key
        and any(x in ext for x in f)
    ]
    if not gfaces:
        raise ConstructionFailure("no face holds both reference endpoints")
    gface = min(gfaces, key=gc._cyclic_key)
    dcands = sorted(x for x in gface if x in ext)
    free = [x for x in dcands if not g2.has_edge(u, x) and not g2.has_edge(v, x)]
    dvert = free[0] if free else dcands[0]
    work = g2
    helpers = []
    current = gface
    for a, b in ((u, dvert), (v, dvert)):
        if work.has_edge(a, b):
            continue
        walk = list(current)
        ia, ib = walk.index(a), walk.index(b)
        work = gc.add_edge_at(work, a, walk[ia - 1], b, walk[ib - 1])
        helpers.append((a, b))
        other = v if a == u else u
        current = next(
            f for f in work.faces() if other in f and dvert in f and a in f
        )
    if not gc.is_three_connected(work):
        raise ConstructionFailure("helper edges did not make the 2-frame 3-connected")
    # pick the apex w and the root per the tree path from u towards v
    tree_set = frozenset(x for x in work.vertices if x not in g2.outer_set())
    q_path = _tree_path(work, tree_set, u, v)
    x = q_path[1]
    if x == v:
        raise _RerouteCase("reference endpoints are adjacent in the frame tree")
    fcands = [
        f
        for f in work.faces()
        if any(
            (f[i], f[(i + 1) % len(f)]) in ((u, x), (x, u))
            for i in range(len(f))
        )
        and v not in f
    ]
    if not fcands:
        raise ConstructionFailure("no face of (u,x) avoids v")
    fwalk = list(fcands[0])
    # traverse from x away from u
    xi = [i for i, t in enumerate(fwalk) if t == x][0]
    step = 1 if fwalk[(xi + 1) % len(fwalk)] != u else -1
    wv = None
    rho = x
    i = xi
    prev = x
    while True:
        i = (i + step) % len(fwalk)
        t = fwalk[i]
        if t in ext:
            wv = t
            break
        prev = t
    rho = prev
    draw_3connected_cycle_tree(work, delta, drawing, stage=f"c-d{depth}", apex=wv, rho=rho)
    for a, b in helpers:
        if not h.has_edge(a, b):
            e = (a, b) if a < b else (b, a)
            if e in drawing.edge_key:
                drawing.remove_edge(*e)
    _draw_reference_edge(drawing, h, u, v, depth)
    _unwind_case_c(drawing, g, fd, log0, delta, depth)


def _unwind_case_c(drawing, g, fd, log0, delta, depth) -> None:
    for i, (recs, logw) in enumerate(reversed(fd.wz_rounds)):
        resubdivide(drawing, logw)
        attach_wz_flags(drawing, recs, g, delta, f"c-wz{i}-d{depth}")
    for i, (recs, logc) in enumerate(reversed(fd.c_rounds)):
        resubdivide(drawing, logc)
        attach_c_flags(drawing, recs, g, delta, f"c-c{i}-d{depth}")
    for r in fd.all_wz_flags():
        if r.virtual:
            e = (r.w, r.z) if r.w < r.z else (r.z, r.w)
            if e in drawing.edge_key:
                drawing.remove_edge(*e)
    resubdivide(drawing, log0)


def _tree_path(g: gc.PlaneGraph, tree_set: frozenset, u, v) -> list:
    prev = {u: None}
    stack = [u]
    while stack:
        x = stack.pop()
        if x == v:
            break
        for y in g.rotation[x]:
            if y in tree_set and y not in prev:
                prev[y] = x
                stack.append(y)
    if v not in prev:
        raise ConstructionFailure("no tree path between the reference endpoints")
    path = [v]
    while path[-1] != u:
        path.append(prev[path[-1]])
    return list(reversed(path))


def _slide_is_sound(drawing: Drawing, moved) -> bool:
    """Every edge incident to a moved vertex must still clear the drawing."""
    from .verify import planarity

    all_edges = drawing.edges()
    for x in moved:
        for e in all_edges:
            if x not in e:
                continue
            rest = [f for f in all_edges if f != e]
            if not planarity.segment_clear(
                drawing.pos,
                rest,
                drawing.pos[e[0]],
                drawing.pos[e[1]],
                allowed_endpoints=e,
            ):
                return False
    return True


def _draw_reference_edge(drawing: Drawing, h, u, v, depth) -> None:
    """Connect the reference endpoints with a straight segment, sliding
    subdivision vertices along their hosts if the direct segment is blocked."""
    from .verify import planarity

    before = _stage_begin(drawing)
    hosts = drawing.meta.get("subdivision_host", {})
    slid = [x for x in (u, v) if x in hosts]
    ts = [mpf(1) / 2]
    for k in range(2, 60):
        ts.append(mpf(2) ** -k)
    for t in ts:
        for x in slid:
            _move_subdivision_vertex(drawing, x, t)
        if slid and not _slide_is_sound(drawing, slid):
            continue
        edges = [e for e in drawing.edges() if u not in e and v not in e]
        pos_rest = {a: p for a, p in drawing.pos.items()}
        if planarity.segment_clear(
            pos_rest,
            edges,
            drawing.pos[u],
            drawing.pos[v],
            allowed_endpoints=(u, v),
        ) and _ref_edge_clears_incident(drawing, u, v):
            ang = num.angle_of(drawing.pos[u], drawing.pos[v])
            if _registry_clear(drawing, [ang]):
                drawing.add_edge(u, v, _assign_extra(drawing, ang, f"ref-d{depth}"))
                _stage_end(drawing, before, f"ref-d{depth}", "reference edge")
                return
        if not slid:
            break
    raise ConstructionFailure("reference edge cannot be drawn without crossings")


def _ref_edge_clears_incident(drawing: Drawing, u, v) -> bool:
    """The new segment u-v must not overlap the edges already incident to u
    or v (collinear same-direction contact)."""
    du = num.dyadic_point(drawing.pos[u])
    dv = num.dyadic_point(drawing.pos[v])
    for x, tip in ((u, dv), (v, du)):
        px = num.dyadic_point(drawing.pos[x])
        for e in drawing.edges():
            if x not in e:
                continue
            other = e[1] if e[0] == x else e[0]
            po = num.dyadic_point(drawing.pos[other])
            if num.orient(px, po, tip) == 0:
                from .verify.planarity import _same_direction

                if _same_direction(px, po, tip):
                    return False
    return True


# ---------------------------------------------------------------------------
# Nested pseudotrees
# ---------------------------------------------------------------------------


def draw_nested_pseudotree(
    g: gc.PlaneGraph, delta: int = None, drawing: Drawing = None
):
    """Draw the cycle-pseudotree core, then hang the outerplane components in
    nice triangles on their base edges, outside the core cycle."""
    delta = delta or gc.degree_stats(g)[0]
    cls = gc.classify(g)
    if cls.tag == "CyclePseudotree":
        return draw_cycle_pseudotree(g, delta, drawing)
    if cls.tag in ("CycleTree", "Halin"):
        return draw_1connected(g, delta, drawing)
    if cls.tag != "NestedPseudotree" or cls.nested is None:
        raise DrawUnsupported(f"cannot draw a {cls.tag} graph")
    nested = cls.nested
    keep = frozenset(nested.cycle) | frozenset(nested.pseudotree)
    cyc = nested.cycle
    core = gc.induced_plane_subgraph(g, keep, (cyc[1], cyc[0]))
    if frozenset(core.outer) != frozenset(cyc):
        core = gc.induced_plane_subgraph(g, keep, (cyc[0], cyc[1]))
    core_cls = gc.classify(core)
    if core_cls.tag in ("CycleTree", "Halin"):
        drawing = draw_1connected(core, delta, drawing)
    else:
        drawing = draw_cycle_pseudotree(core, delta, drawing)
    groups = {}
    for bu, bv, comp in nested.hangers:
        groups.setdefault((bu, bv), []).append(comp)
    before = _stage_begin(drawing)
    bases = sorted(groups)
    tris = _fit_outside_triangles(drawing, bases)
    for (bu, bv), tri in zip(bases, tris):
        parts = frozenset(x for comp in groups[(bu, bv)] for x in comp)
        adj = _induced_adj_with_edge(g, parts | {bu, bv})
        aux_draw.draw_partial_2tree_in_triangle(
            adj,
            (bu, bv),
            drawing.pos[bu],
            drawing.pos[bv],
            tri.apex,
            tri.beta,
            delta,
            drawing,
            "hangers",
            skip_edges=((bu, bv),),
        )
    _stage_end(drawing, before, "hangers", f"{len(bases)} base edges")
    return drawing


def _fit_outside_triangles(drawing: Drawing, bases):
    """Nice triangles on base edges, on the unbounded side of the drawing."""
    beta = min(_min_adjacent_angle(drawing) / 4, mpmath.pi / 5)
    return _fit_triangles(drawing, bases, beta, shrink_angle=True)


# ---------------------------------------------------------------------------
# Top-level dispatch
# ---------------------------------------------------------------------------


def draw(g: gc.PlaneGraph) -> Drawing:
    """Validate, classify, and run the pipeline for the detected class."""
    gc.require_valid(g)
    cls = gc.classify(g)
    delta, _degs = gc.degree_stats(g)
    n = g.n()
    with num.precision_bits(num.job_precision(n)):
        if cls.tag in ("Halin", "CycleTree"):
            drawing = draw_1connected(g, delta)
        elif cls.tag == "CyclePseudotree":
            drawing = draw_cycle_pseudotree(g, delta)
        elif cls.tag == "NestedPseudotree":
            drawing = draw_nested_pseudotree(g, delta)
        elif cls.tag == "Outerplane":
            drawing = Drawing()
            _draw_partial_2tree_standalone(g, delta, drawing, "outerplane")
        else:
            raise DrawUnsupported("class Other has no drawing pipeline")
        drawing.meta["class"] = cls.tag
        drawing.meta["delta"] = delta
        drawing.meta["precision_bits"] = num.job_precision(n)
        dstar = drawing.meta.get("delta_star", 2)
        if cls.tag in ("Halin",):
            drawing.meta["budget"] = budget_3connected(delta, dstar)
        elif cls.tag == "CycleTree" and gc.is_three_connected(g):
            drawing.meta["budget"] = budget_3connected(delta, dstar)
        else:
            drawing.meta["budget"] = budget_quadratic(delta)
        if "path_vertices" in drawing.meta:
            drawing.meta["path_vertices"] = sorted(drawing.meta["path_vertices"])
        if "case_trail" not in drawing.meta:
            drawing.meta["case_trail"] = []
    return drawing
