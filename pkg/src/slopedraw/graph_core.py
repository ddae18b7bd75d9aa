"""Plane-graph data model, validation, class recognition and tree decomposition.

A plane graph is given combinatorially: a rotation system (counter-clockwise
neighbor order around every vertex, as seen in a drawing) plus a distinguished
outer face.  Faces are traced with the predecessor rule: after entering v
along (u, v) the walk leaves along (v, w) where w precedes u in rotation(v).
This traces inner faces counter-clockwise and the outer face clockwise, so
"clockwise along the outer face" below always means "in outer-walk order".
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import InvalidEmbedding, WrongClass


class PlaneGraph:
    """Immutable embedded simple graph."""

    __slots__ = ("rotation", "outer", "_edges", "_nbr", "_faces")

    def __init__(self, rotation: dict, outer: Iterable[str]):
        self.rotation = {v: tuple(ns) for v, ns in rotation.items()}
        self.outer = tuple(outer)
        self._edges = None
        self._nbr = None
        self._faces = None

    # -- basic accessors ----------------------------------------------------

    @property
    def vertices(self) -> tuple:
        return tuple(sorted(self.rotation))

    def neighbors(self, v) -> tuple:
        return self.rotation[v]

    def nbr_set(self, v) -> frozenset:
        if self._nbr is None:
            self._nbr = {u: frozenset(ns) for u, ns in self.rotation.items()}
        return self._nbr[v]

    def degree(self, v) -> int:
        return len(self.rotation[v])

    def edges(self) -> tuple:
        if self._edges is None:
            es = set()
            for u, ns in self.rotation.items():
                for v in ns:
                    es.add((u, v) if u < v else (v, u))
            self._edges = tuple(sorted(es))
        return self._edges

    def has_edge(self, u, v) -> bool:
        return v in self.nbr_set(u)

    def n(self) -> int:
        return len(self.rotation)

    def m(self) -> int:
        return len(self.edges())

    def outer_set(self) -> frozenset:
        return frozenset(self.outer)

    def internal_vertices(self) -> tuple:
        ext = self.outer_set()
        return tuple(v for v in self.vertices if v not in ext)

    # -- faces ---------------------------------------------------------------

    def faces(self) -> tuple:
        """All faces as vertex walks, each directed edge used exactly once."""
        if self._faces is None:
            self._faces = tuple(_trace_all_faces(self.rotation))
        return self._faces

    def face_from(self, a, b) -> tuple:
        """The face walk containing the directed edge (a, b)."""
        return tuple(_trace_face(self.rotation, a, b))

    def __eq__(self, other):
        return (
            isinstance(other, PlaneGraph)
            and self.rotation == other.rotation
            and _cyclic_key(self.outer) == _cyclic_key(other.outer)
        )

    def __hash__(self):
        return hash((tuple(sorted(self.rotation.items())), _cyclic_key(self.outer)))

    def __repr__(self):
        return f"PlaneGraph(n={self.n()}, m={self.m()}, outer={self.outer})"


def _trace_face(rotation, a, b):
    walk = []
    u, v = a, b
    while True:
        walk.append(u)
        ns = rotation[v]
        i = ns.index(u)
        u, v = v, ns[(i - 1) % len(ns)]
        if (u, v) == (a, b):
            return walk


def _trace_all_faces(rotation):
    seen = set()
    faces = []
    for u in sorted(rotation):
        for v in rotation[u]:
            if (u, v) in seen:
                continue
            walk = _trace_face(rotation, u, v)
            faces.append(tuple(walk))
            for i in range(len(walk)):
                seen.add((walk[i], walk[(i + 1) % len(walk)]))
    return faces


def _cyclic_key(seq) -> tuple:
    """Canonical rotation of a cyclic sequence (orientation preserved)."""
    seq = tuple(seq)
    if not seq:
        return seq
    best = None
    for i in range(len(seq)):
        cand = seq[i:] + seq[:i]
        if best is None or cand < best:
            best = cand
    return best


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


@dataclass
class ValidationResult:
    ok: bool
    code: str = "ok"
    detail: str = ""


def validate_embedding(g: PlaneGraph) -> ValidationResult:
    """Check the PlaneGraph invariants; report the first violation."""
    for v, ns in g.rotation.items():
        if v in ns:
            return ValidationResult(False, "NonSimple", f"loop at {v}")
        if len(set(ns)) != len(ns):
            return ValidationResult(False, "NonSimple", f"repeated neighbor at {v}")
        for u in ns:
            if u not in g.rotation:
                return ValidationResult(False, "NonSimple", f"unknown neighbor {u} of {v}")
            if v not in g.rotation[u]:
                return ValidationResult(False, "NonSimple", f"asymmetric edge {v}-{u}")
    if not g.rotation:
        return ValidationResult(False, "Disconnected", "empty graph")
    comp = component_of(g, next(iter(sorted(g.rotation))))
    if len(comp) != g.n():
        return ValidationResult(False, "Disconnected", "graph is not connected")
    nfaces = len(g.faces())
    if g.n() - g.m() + nfaces != 2:
        return ValidationResult(
            False,
            "EulerMismatch",
            f"V={g.n()} E={g.m()} F={nfaces}: rotation system is not planar",
        )
    outer_key = _cyclic_key(g.outer)
    for f in g.faces():
        if _cyclic_key(f) == outer_key:
            return ValidationResult(True)
    return ValidationResult(False, "OuterFaceNotAFace", "outer_face is not a traced face")


def require_valid(g: PlaneGraph) -> None:
    res = validate_embedding(g)
    if not res.ok:
        raise InvalidEmbedding(f"{res.code}: {res.detail}")


# ---------------------------------------------------------------------------
# Elementary graph algorithms (shared by frames / spq / verify)
# ---------------------------------------------------------------------------


def component_of(g: PlaneGraph, start, removed: frozenset = frozenset()) -> set:
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for w in g.rotation[u]:
            if w not in seen and w not in removed:
                seen.add(w)
                stack.append(w)
    return seen


def components(g: PlaneGraph, removed: frozenset = frozenset()) -> list:
    todo = [v for v in g.vertices if v not in removed]
    out = []
    seen = set()
    for v in todo:
        if v in seen:
            continue
        comp = component_of(g, v, removed)
        seen |= comp
        out.append(comp)
    return out


def articulation_points(g: PlaneGraph) -> list:
    """Cut vertices, by iterative lowpoint DFS."""
    disc = {}
    low = {}
    parent = {}
    cuts = set()
    timer = 0
    for root in g.vertices:
        if root in disc:
            continue
        stack = [(root, iter(g.rotation[root]))]
        disc[root] = low[root] = timer
        timer += 1
        root_children = 0
        while stack:
            u, it = stack[-1]
            advanced = False
            for w in it:
                if w not in disc:
                    parent[w] = u
                    if u == root:
                        root_children += 1
                    disc[w] = low[w] = timer
                    timer += 1
                    stack.append((w, iter(g.rotation[w])))
                    advanced = True
                    break
                elif w != parent.get(u):
                    low[u] = min(low[u], disc[w])
            if not advanced:
                stack.pop()
                if stack:
                    p = stack[-1][0]
                    low[p] = min(low[p], low[u])
                    if p != root and low[u] >= disc[p]:
                        cuts.add(p)
        if root_children > 1:
            cuts.add(root)
    return sorted(cuts)


def is_biconnected(g: PlaneGraph) -> bool:
    return g.n() >= 3 and not articulation_points(g)


def biconnected_components(adj: dict) -> list:
    """Edge sets of the biconnected components of an adjacency-set graph."""
    disc = {}
    low = {}
    parent = {}
    comps = []
    estack = []
    timer = 0
    for root in sorted(adj):
        if root in disc:
            continue
        disc[root] = low[root] = timer
        timer += 1
        stack = [(root, iter(sorted(adj[root])))]
        while stack:
            u, it = stack[-1]
            advanced = False
            for w in it:
                if w not in disc:
                    parent[w] = u
                    estack.append((u, w))
                    disc[w] = low[w] = timer
                    timer += 1
                    stack.append((w, iter(sorted(adj[w]))))
                    advanced = True
                    break
                elif w != parent.get(u) and disc[w] < disc[u]:
                    estack.append((u, w))
                    low[u] = min(low[u], disc[w])
            if not advanced:
                stack.pop()
                if stack:
                    p = stack[-1][0]
                    low[p] = min(low[p], low[u])
                    if low[u] >= disc[p]:
                        comp = set()
                        while estack:
                            e = estack.pop()
                            comp.add(tuple(sorted(e)))
                            if e == (p, u):
                                break
                        if comp:
                            comps.append(comp)
        if estack:
            comps.append({tuple(sorted(e)) for e in estack})
            estack.clear()
    return comps


def two_cut_candidates(g: PlaneGraph) -> list:
    """Vertex pairs sharing a face.

    In an embedded 2-connected planar graph every separation pair lies on a
    common face, so this is a complete candidate set for 2-cuts.
    """
    pairs = set()
    for f in g.faces():
        fs = sorted(set(f))
        for i, u in enumerate(fs):
            for v in fs[i + 1 :]:
                pairs.add((u, v))
    return sorted(pairs)


def is_two_cut(g: PlaneGraph, u, v) -> bool:
    removed = frozenset((u, v))
    rest = [w for w in g.vertices if w not in removed]
    if len(rest) <= 1:
        return False
    comp = component_of(g, rest[0], removed)
    return len(comp) != len(rest)


def two_cuts(g: PlaneGraph) -> list:
    """All 2-cuts of an embedded 2-connected graph (face-candidate method)."""
    return [p for p in two_cut_candidates(g) if is_two_cut(g, *p)]


def two_cuts_bruteforce(g: PlaneGraph) -> list:
    """Oracle: every vertex pair, tested by removal.  For tests."""
    vs = g.vertices
    out = []
    for i, u in enumerate(vs):
        for v in vs[i + 1 :]:
            if is_two_cut(g, u, v):
                out.append((u, v))
    return out


def is_three_connected(g: PlaneGraph) -> bool:
    return g.n() >= 4 and is_biconnected(g) and not two_cuts(g)


def induced_adjacency(g: PlaneGraph, keep: frozenset) -> dict:
    return {v: [u for u in g.rotation[v] if u in keep] for v in keep}


def _adj_is_connected(adj: dict) -> bool:
    if not adj:
        return False
    start = next(iter(sorted(adj)))
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(adj)


def _adj_edge_count(adj: dict) -> int:
    return sum(len(ns) for ns in adj.values()) // 2


def is_tree_adj(adj: dict) -> bool:
    return bool(adj) and _adj_is_connected(adj) and _adj_edge_count(adj) == len(adj) - 1


def is_pseudotree_adj(adj: dict) -> bool:
    return bool(adj) and _adj_is_connected(adj) and _adj_edge_count(adj) <= len(adj)


def pseudotree_cycle(adj: dict) -> tuple:
    """The unique cycle of a pseudotree, as an ordered vertex tuple; () if a tree."""
    if _adj_edge_count(adj) == len(adj) - 1:
        return ()
    work = {v: set(ns) for v, ns in adj.items()}
    leaves = [v for v, ns in work.items() if len(ns) <= 1]
    while leaves:
        v = leaves.pop()
        for u in work[v]:
            work[u].discard(v)
            if len(work[u]) == 1:
                leaves.append(u)
        work[v] = set()
    core = sorted(v for v, ns in work.items() if ns)
    if not core:
        return ()
    order = [core[0]]
    prev = None
    while True:
        ns = sorted(work[order[-1]])
        nxt = ns[0] if ns[0] != prev else ns[1]
        if nxt == order[0]:
            return tuple(order)
        prev = order[-1]
        order.append(nxt)


def is_chordless_cycle_adj(adj: dict) -> bool:
    return (
        len(adj) >= 3
        and _adj_is_connected(adj)
        and all(len(ns) == 2 for ns in adj.values())
    )


def is_partial_2_tree_adj(adj: dict) -> bool:
    """Treewidth <= 2, by the degree-<=2 elimination reduction."""
    return _p2t_elimination(adj) is not None


def _p2t_elimination(adj: dict):
    """Eliminate degree-<=2 vertices; return the elimination order with fill
    neighborhoods, or None if the graph has treewidth > 2."""
    work = {v: set(ns) for v, ns in adj.items()}
    order = []
    active = set(work)
    while len(active) > 2:
        cand = sorted(v for v in active if len(work[v]) <= 2)
        if not cand:
            return None
        v = cand[0]
        ns = tuple(sorted(work[v]))
        order.append((v, ns))
        if len(ns) == 2:
            a, b = ns
            work[a].add(b)
            work[b].add(a)
        for u in ns:
            work[u].discard(v)
        active.discard(v)
        del work[v]
    order_tail = tuple(sorted(active))
    return order, order_tail


# ---------------------------------------------------------------------------
# Graph edits (all return new PlaneGraphs)
# ---------------------------------------------------------------------------


def retrace_outer(rotation: dict, hint: tuple) -> tuple:
    return tuple(_trace_face(rotation, hint[0], hint[1]))


def _outer_hint_avoiding(g: PlaneGraph, avoid: frozenset) -> tuple:
    w = g.outer
    for i in range(len(w)):
        a, b = w[i], w[(i + 1) % len(w)]
        if a not in avoid and b not in avoid:
            return (a, b)
    raise InvalidEmbedding("cannot find an outer-face hint edge")


def delete_vertex(g: PlaneGraph, v, outer_hint: Optional[tuple] = None) -> PlaneGraph:
    rot = {u: tuple(w for w in ns if w != v) for u, ns in g.rotation.items() if u != v}
    if v in g.outer_set():
        hint = outer_hint or _outer_hint_avoiding(g, frozenset([v]))
        outer = retrace_outer(rot, hint)
    else:
        outer = g.outer
    return PlaneGraph(rot, outer)


def delete_edge(g: PlaneGraph, u, v, outer_hint: Optional[tuple] = None) -> PlaneGraph:
    rot = dict(g.rotation)
    rot[u] = tuple(w for w in rot[u] if w != v)
    rot[v] = tuple(w for w in rot[v] if w != u)
    on_outer = any(
        {g.outer[i], g.outer[(i + 1) % len(g.outer)]} == {u, v}
        for i in range(len(g.outer))
    )
    if on_outer:
        if outer_hint is None:
            w = g.outer
            for i in range(len(w)):
                a, b = w[i], w[(i + 1) % len(w)]
                if {a, b} != {u, v}:
                    outer_hint = (a, b)
                    break
        outer = retrace_outer(rot, outer_hint)
    else:
        outer = g.outer
    return PlaneGraph(rot, outer)


def add_edge_at(g: PlaneGraph, u, before_u, v, before_v) -> PlaneGraph:
    """Insert edge (u, v) with v placed immediately before `before_u` in
    rotation(u) and u immediately before `before_v` in rotation(v).  The two
    corners must lie on one face for the result to stay plane (checked by
    validate, not here).  With corners (x, u, ...) and (p, v, ...) on a face
    walk, pass before_u=x and before_v=p to split that face."""
    rot = dict(g.rotation)
    ru = list(rot[u])
    ru.insert(ru.index(before_u), v)
    rot[u] = tuple(ru)
    rv = list(rot[v])
    rv.insert(rv.index(before_v), u)
    rot[v] = tuple(rv)
    return PlaneGraph(rot, g.outer)


def add_edge_in_face(g: PlaneGraph, u, v, face: Optional[tuple] = None) -> PlaneGraph:
    """Insert edge (u, v) inside an inner face containing both endpoints."""
    if face is None:
        outer_key = _cyclic_key(g.outer)
        face = next(
            f
            for f in g.faces()
            if u in f and v in f and _cyclic_key(f) != outer_key
        )
    walk = list(face)
    iu = walk.index(u)
    iv = walk.index(v)
    return add_edge_at(g, u, walk[iu - 1], v, walk[iv - 1])


def subdivide_edge(g: PlaneGraph, u, v, w) -> PlaneGraph:
    rot = dict(g.rotation)
    rot[u] = tuple(w if x == v else x for x in rot[u])
    rot[v] = tuple(w if x == u else x for x in rot[v])
    rot[w] = (u, v)
    outer = g.outer
    walk = list(outer)
    for i in range(len(walk)):
        a, b = walk[i], walk[(i + 1) % len(walk)]
        if {a, b} == {u, v}:
            outer = tuple(walk[: i + 1] + [w] + walk[i + 1 :])
            break
    return PlaneGraph(rot, outer)


def induced_plane_subgraph(g: PlaneGraph, keep: frozenset, outer_hint: tuple) -> PlaneGraph:
    rot = {v: tuple(u for u in g.rotation[v] if u in keep) for v in keep}
    return PlaneGraph(rot, retrace_outer(rot, outer_hint))


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------


@dataclass
class GraphClass:
    tag: str  # Halin | CycleTree | CyclePseudotree | NestedPseudotree | Outerplane | Other
    witness_internal: tuple = ()
    witness_cycle: tuple = ()  # cycle of the internal pseudotree, if any
    nested: Optional["NestedDecomposition"] = None


@dataclass
class NestedDecomposition:
    """Cycle-pseudotree core plus outerplane parts hanging off the core cycle."""

    cycle: tuple  # the chordless cycle C enclosing the pseudotree, in outer-walk order
    pseudotree: tuple  # vertices of P
    hangers: tuple = ()  # ((base_u, base_v, component_vertices), ...) in cycle order


def classify(g: PlaneGraph) -> GraphClass:
    require_valid(g)
    ext = g.outer_set()
    internal = tuple(v for v in g.vertices if v not in ext)
    if not internal:
        return GraphClass("Outerplane")
    int_adj = induced_adjacency(g, frozenset(internal))
    ext_adj = induced_adjacency(g, ext)
    ext_is_cycle = is_chordless_cycle_adj(ext_adj) and len(set(g.outer)) == len(g.outer)
    if ext_is_cycle and is_tree_adj(int_adj):
        if _is_halin(g, internal):
            return GraphClass("Halin", witness_internal=internal)
        return GraphClass("CycleTree", witness_internal=internal)
    if ext_is_cycle and is_pseudotree_adj(int_adj):
        return GraphClass(
            "CyclePseudotree",
            witness_internal=internal,
            witness_cycle=pseudotree_cycle(int_adj),
        )
    if is_pseudotree_adj(int_adj):
        nested = decompose_nested(g)
        if nested is not None:
            return GraphClass(
                "NestedPseudotree",
                witness_internal=internal,
                witness_cycle=pseudotree_cycle(int_adj),
                nested=nested,
            )
    return GraphClass("Other")


def _is_halin(g: PlaneGraph, internal) -> bool:
    # Removing the outer-cycle edges must leave a tree whose internal vertices
    # have degree >= 3 and whose leaves are exactly the cycle vertices.
    for c in g.outer:
        if len([u for u in g.rotation[c] if u in set(internal)]) != 1:
            return False
    for t in internal:
        if g.degree(t) < 3:
            return False
    return is_three_connected(g)


def decompose_nested(g: PlaneGraph) -> Optional[NestedDecomposition]:
    """Split a nested pseudotree into its cycle-pseudotree core and the
    outerplane components hanging off base edges of the core cycle."""
    ext = g.outer_set()
    p_vertices = frozenset(v for v in g.vertices if v not in ext)
    if not p_vertices:
        return None
    p_adj = induced_adjacency(g, p_vertices)
    if not is_pseudotree_adj(p_adj):
        return None
    out_rot = {v: tuple(u for u in g.rotation[v] if u in ext) for v in ext}
    # Identify the face of g[ext] whose region holds P: at every vertex with
    # P-neighbors, the P-edges occupy one contiguous block of the rotation;
    # the flanking external neighbors give a corner of that face.
    corner = None
    for x in sorted(ext):
        full = g.rotation[x]
        k = len(full)
        in_p = [u in p_vertices for u in full]
        if not any(in_p):
            continue
        if all(in_p):
            return None  # an external vertex adjacent only to P cannot happen
        blocks = sum(
            1 for i in range(k) if in_p[i] and not in_p[(i - 1) % k]
        )
        if blocks != 1:
            return None
        i = next(i for i in range(k) if in_p[i] and not in_p[(i - 1) % k])
        a = full[(i - 1) % k]
        j = i
        while in_p[j % k]:
            j += 1
        b = full[j % k]
        c = (a, x, b)
        if corner is None:
            corner = c
            cyc = _trace_face(out_rot, c[0], c[1])
        else:
            # every attachment corner must lie on the same face
            if not _corner_on_face(cyc, c):
                return None
    if corner is None:
        return None
    if len(set(cyc)) != len(cyc) or len(cyc) < 3:
        return None
    cycle = tuple(cyc)
    cyc_set = frozenset(cycle)
    cyc_adj = induced_adjacency(g, cyc_set)
    if not is_chordless_cycle_adj(cyc_adj):
        return None
    # every P-attachment must go to the cycle
    for v in sorted(p_vertices):
        for u in g.rotation[v]:
            if u not in p_vertices and u not in cyc_set:
                return None
    # components outside the core hang off one cycle vertex or one cycle edge
    rest = frozenset(ext - cyc_set)
    hangers = []
    if rest:
        rest_adj = {v: [u for u in g.rotation[v] if u in rest] for v in rest}
        seen = set()
        pos = {c: i for i, c in enumerate(cycle)}
        mlen = len(cycle)
        for v in sorted(rest):
            if v in seen:
                continue
            comp = _adj_component(rest_adj, v)
            seen |= comp
            attach = set()
            for w in comp:
                attach.update(u for u in g.rotation[w] if u in cyc_set)
            if not attach or len(attach) > 2:
                return None
            ats = sorted(attach, key=lambda c: pos[c])
            if len(ats) == 2:
                i, j = pos[ats[0]], pos[ats[1]]
                if (i + 1) % mlen == j:
                    base = (ats[0], ats[1])
                elif (j + 1) % mlen == i:
                    base = (ats[1], ats[0])
                else:
                    return None
            else:
                i = pos[ats[0]]
                base = (ats[0], cycle[(i + 1) % mlen])
            hangers.append((base[0], base[1], tuple(sorted(comp))))
    hangers.sort(key=lambda h: (h[0], h[1], h[2]))
    return NestedDecomposition(cycle, tuple(sorted(p_vertices)), tuple(hangers))


def _corner_on_face(face, corner) -> bool:
    a, x, b = corner
    k = len(face)
    for i in range(k):
        if face[i] == a and face[(i + 1) % k] == x and face[(i + 2) % k] == b:
            return True
    return False


def _adj_component(adj: dict, start) -> set:
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


# ---------------------------------------------------------------------------
# Degree statistics
# ---------------------------------------------------------------------------


def degree_stats(g: PlaneGraph):
    degs = {v: g.degree(v) for v in g.vertices}
    return max(degs.values()), degs


# ---------------------------------------------------------------------------
# Tree decomposition (constructive, width 3 for cycle-trees, 4 beyond)
# ---------------------------------------------------------------------------


@dataclass
class TreeDecomposition:
    bags: list = field(default_factory=list)  # list[frozenset]
    edges: list = field(default_factory=list)  # list[(i, j)] bag-tree edges

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def add_bag(self, vertices) -> int:
        self.bags.append(frozenset(vertices))
        return len(self.bags) - 1

    def link(self, i, j) -> None:
        self.edges.append((i, j))

    def find_bag_containing(self, vertices) -> int:
        want = frozenset(vertices)
        for i, b in enumerate(self.bags):
            if want <= b:
                return i
        raise AssertionError(f"no bag contains {sorted(want)}")


def tree_decomposition(g: PlaneGraph, cls: GraphClass) -> TreeDecomposition:
    if cls.tag in ("CycleTree", "Halin"):
        return _decompose_cycle_tree(tuple(g.outer), _full_adj(g))
    if cls.tag == "CyclePseudotree":
        return _decompose_cycle_pseudotree(tuple(g.outer), _full_adj(g), cls.witness_cycle)
    if cls.tag == "NestedPseudotree":
        nested = cls.nested or decompose_nested(g)
        if nested is None:
            raise WrongClass("nested decomposition failed")
        return _decompose_nested_pseudotree(g, nested)
    raise WrongClass(f"no decomposition for class {cls.tag}")


def _full_adj(g: PlaneGraph) -> dict:
    return {v: set(g.rotation[v]) for v in g.vertices}


def _decompose_cycle_pseudotree(cycle, adj, pcycle) -> TreeDecomposition:
    if not pcycle:
        return _decompose_cycle_tree(cycle, adj)
    u, v = sorted(
        min(
            (
                (pcycle[i], pcycle[(i + 1) % len(pcycle)])
                for i in range(len(pcycle))
            ),
            key=lambda e: tuple(sorted(e)),
        )
    )
    adj2 = {w: set(ns) for w, ns in adj.items()}
    adj2[u].discard(v)
    adj2[v].discard(u)
    td = _decompose_cycle_tree(cycle, adj2)
    _absorb_extra_edge(td, u, v)
    return td


def _absorb_extra_edge(td: TreeDecomposition, u, v) -> None:
    """Add u along the bag path from a u-bag to a v-bag (edge +1 width trick)."""
    src = next(i for i, b in enumerate(td.bags) if u in b)
    dst = next(i for i, b in enumerate(td.bags) if v in b)
    nbrs = {}
    for i, j in td.edges:
        nbrs.setdefault(i, []).append(j)
        nbrs.setdefault(j, []).append(i)
    prev = {src: None}
    stack = [src]
    while stack:
        x = stack.pop()
        if x == dst:
            break
        for y in nbrs.get(x, []):
            if y not in prev:
                prev[y] = x
                stack.append(y)
    path = []
    x = dst
    while x is not None:
        path.append(x)
        x = prev[x]
    for i in path:
        td.bags[i] = td.bags[i] | {u}


def _decompose_nested_pseudotree(g: PlaneGraph, nested: NestedDecomposition) -> TreeDecomposition:
    core_keep = frozenset(nested.cycle) | frozenset(nested.pseudotree)
    core_adj = {
        v: {u for u in g.rotation[v] if u in core_keep} for v in core_keep
    }
    p_adj = induced_adjacency(g, frozenset(nested.pseudotree))
    td = _decompose_cycle_pseudotree(nested.cycle, core_adj, pseudotree_cycle(p_adj))
    for base_u, base_v, comp in nested.hangers:
        keep = frozenset(comp) | {base_u, base_v}
        sub_adj = {v: {u for u in g.rotation[v] if u in keep} for v in keep}
        sub = _p2t_decomposition(sub_adj)
        if sub is None:
            raise WrongClass("hanging component is not a partial 2-tree")
        offset = len(td.bags)
        td.bags.extend(sub.bags)
        td.edges.extend((i + offset, j + offset) for i, j in sub.edges)
        anchor = td.find_bag_containing({base_u, base_v})
        local = offset + sub.find_bag_containing({base_u, base_v})
        td.link(anchor, local)
    return td


def _p2t_decomposition(adj: dict) -> Optional[TreeDecomposition]:
    res = _p2t_elimination(adj)
    if res is None:
        return None
    order, tail = res
    td = TreeDecomposition()
    root = td.add_bag(tail if tail else list(adj)[:1])
    for v, ns in reversed(order):
        i = td.add_bag(set(ns) | {v})
        if ns:
            td.link(i, td.find_bag_containing(ns))
        else:
            td.link(i, root)
    return td


def _decompose_cycle_tree(cycle, adj) -> TreeDecomposition:
    """Width-<=3 decomposition of a cycle-tree, following the inductive split
    at a tree edge with a 2-cut of external vertices."""
    cyc_set = set(cycle)
    internal = [v for v in adj if v not in cyc_set]
    # strip hanging trees first so that every internal subtree keeps a cycle
    # attachment (pendant internal vertices rejoin as width-1 bags)
    adj_core = {v: set(ns) for v, ns in adj.items()}
    stripped = []
    while True:
        pend = sorted(
            v
            for v in adj_core
            if v not in cyc_set and len(adj_core[v]) == 1
        )
        if not pend:
            break
        for v in pend:
            if len(adj_core[v]) != 1:
                continue
            (p,) = adj_core[v]
            stripped.append((v, p))
            adj_core[p].discard(v)
            del adj_core[v]
    td = _decompose_cycle_tree_core(tuple(cycle), adj_core)
    for v, p in reversed(stripped):
        i = td.add_bag({v, p})
        td.link(i, td.find_bag_containing({p}))
    return td


def _decompose_cycle_tree_core(cycle, adj) -> TreeDecomposition:
    if len(cycle) == 2:
        return _two_external_decomposition(cycle, adj)
    cyc_set = set(cycle)
    internal = sorted(v for v in adj if v not in cyc_set)
    tree_edges = sorted(
        (u, v)
        for u in internal
        for v in adj[u]
        if v not in cyc_set and u < v
    )
    if not tree_edges:
        return _fan_decomposition(cycle, internal)
    u, v = tree_edges[0]
    w, z = _find_splitting_pair(cycle, adj, u, v)
    comp_u = _component_without(adj, u, {w, z}, skip_edge=(u, v))
    comp_v = _component_without(adj, v, {w, z}, skip_edge=(u, v))
    td1 = _decompose_cycle_tree_core(*_split_part(cycle, adj, comp_u, u, w, z))
    td2 = _decompose_cycle_tree_core(*_split_part(cycle, adj, comp_v, v, w, z))
    td = TreeDecomposition()
    td.bags = list(td1.bags)
    td.edges = list(td1.edges)
    off = len(td.bags)
    td.bags.extend(td2.bags)
    td.edges.extend((i + off, j + off) for i, j in td2.edges)
    joint = td.add_bag({u, v, w, z})
    td.link(joint, td1.find_bag_containing({u, w, z}))
    td.link(joint, off + td2.find_bag_containing({v, w, z}))
    return td


def _two_external_decomposition(cycle, adj) -> TreeDecomposition:
    """Internal tree plus exactly two external vertices: put both externals
    in every bag of a tree decomposition of the internal tree."""
    w, z = cycle
    internal = sorted(x for x in adj if x not in (w, z))
    td = TreeDecomposition()
    if not internal:
        td.add_bag({w, z})
        return td
    root = internal[0]
    bag_of = {root: td.add_bag({root, w, z})}
    stack = [root]
    seen = {root}
    while stack:
        x = stack.pop()
        for y in sorted(adj[x]):
            if y in (w, z) or y in seen:
                continue
            seen.add(y)
            bag_of[y] = td.add_bag({y, x, w, z})
            td.link(bag_of[y], bag_of[x])
            stack.append(y)
    return td


def _fan_decomposition(cycle, internal) -> TreeDecomposition:
    td = TreeDecomposition()
    hub = internal[0] if internal else None
    m = len(cycle)
    if m == 3:
        bag = set(cycle) | ({hub} if hub else set())
        td.add_bag(bag)
        return td
    prev = None
    c0 = cycle[0]
    for i in range(1, m - 1):
        bag = {c0, cycle[i], cycle[i + 1]}
        if hub:
            bag.add(hub)
        b = td.add_bag(bag)
        if prev is not None:
            td.link(prev, b)
        prev = b
    return td


def _component_without(adj, start, removed, skip_edge=None) -> set:
    seen = {start}
    stack = [start]
    su, sv = skip_edge if skip_edge else (None, None)
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y in removed or y in seen:
                continue
            if (x == su and y == sv) or (x == sv and y == su):
                continue
            seen.add(y)
            stack.append(y)
    return seen


def _internal_side(adj, cyc_set, u, v) -> set:
    """Internal tree component of u once the tree edge (u, v) is cut."""
    seen = {u}
    stack = [u]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y in cyc_set or y in seen or (x == u and y == v):
                continue
            seen.add(y)
            stack.append(y)
    return seen


def _minimal_arc(indices, m):
    """(start, end) of the shortest cyclic arc covering all indices."""
    s = sorted(indices)
    if len(s) == 1:
        return s[0], s[0]
    best_gap, best_k = -1, 0
    for k in range(len(s)):
        gap = (s[(k + 1) % len(s)] - s[k]) % m
        if gap > best_gap:
            best_gap, best_k = gap, k
    return s[(best_k + 1) % len(s)], s[best_k]


def _find_splitting_pair(cycle, adj, u, v):
    """Two external vertices whose removal separates u from v in G - (u,v).

    Candidates come from the junction zones between the attachment arcs of the
    two tree sides; each candidate pair is verified by an explicit reachability
    check, with an exhaustive fallback for degenerate shapes.
    """
    cyc_set = set(cycle)
    side_u = _internal_side(adj, cyc_set, u, v)
    side_v = _internal_side(adj, cyc_set, v, u)
    att_u = {c for t in side_u for c in adj[t] if c in cyc_set}
    att_v = {c for t in side_v for c in adj[t] if c in cyc_set}
    pos = {c: i for i, c in enumerate(cycle)}
    m = len(cycle)
    cands = set(att_u & att_v)
    if att_u and att_v:
        su, eu = _minimal_arc([pos[c] for c in att_u], m)
        sv, ev = _minimal_arc([pos[c] for c in att_v], m)
        for i in (su, eu, sv, ev):
            cands.add(cycle[i])
            cands.add(cycle[(i - 1) % m])
            cands.add(cycle[(i + 1) % m])
    cand_list = sorted(cands)
    for i, w in enumerate(cand_list):
        for z in cand_list[i + 1 :]:
            if _separates(adj, u, v, w, z):
                return w, z
    ext = sorted(cyc_set)
    for i, w in enumerate(ext):
        for z in ext[i + 1 :]:
            if _separates(adj, u, v, w, z):
                return w, z
    raise AssertionError("no external splitting pair found (not a cycle-tree?)")


def _separates(adj, u, v, w, z) -> bool:
    if u in (w, z) or v in (w, z):
        return False
    comp = _component_without(adj, u, {w, z}, skip_edge=(u, v))
    return v not in comp


def _split_part(cycle, adj, comp, anchor, w, z):
    keep = set(comp) | {w, z}
    sub = {x: {y for y in adj[x] if y in keep} for x in keep}
    sub[w].update((z, anchor))
    sub[z].update((w, anchor))
    sub[anchor].update((w, z))
    pos = {c: i for i, c in enumerate(cycle)}
    m = len(cycle)
    comp_cyc = {c for c in cycle if c in comp}
    for step in (1, -1):
        arc = [w]
        i = pos[w]
        ok = True
        while True:
            i = (i + step) % m
            c = cycle[i]
            arc.append(c)
            if c == z:
                break
            if c not in comp:
                ok = False
                break
        if ok and comp_cyc <= set(arc):
            return tuple(arc), sub
    raise AssertionError("component's external vertices do not form an arc")
