"""Contraction preprocessing and the cut-vertex / 2-cut flag machinery.

A degree-2 vertex whose neighbors are non-adjacent contracts into a direct
edge; the log replays in reverse as subdivision.  Flags are the unions of
components hanging off a dominant cut vertex (c-flags) or a dominant 2-cut
made of one tree vertex and one cycle vertex ((w,z)-flags).  The 1-frame
strips c-flags, the 2-frame additionally strips (w,z)-flags behind virtual
edges; both interleave with contraction until a fixed point.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import graph_core as gc
from .errors import CycleTooShort, NotContractibleClass

CONTRACTIBLE_TAGS = ("CycleTree", "Halin", "CyclePseudotree")


@dataclass
class CFlagRecord:
    cut: str
    flag: frozenset  # flag vertices, excluding the cut vertex


@dataclass
class WZFlagRecord:
    w: str  # tree vertex
    z: str  # cycle vertex
    flag: frozenset  # flag vertices, excluding w and z
    virtual: bool  # True when the edge (w, z) was inserted


@dataclass
class FlagDecomposition:
    c_rounds: list = field(default_factory=list)  # [(records, contraction_log)]
    wz_rounds: list = field(default_factory=list)
    one_frame: object = None
    two_frame: object = None
    iterations: int = 0

    def all_c_flags(self):
        return [r for recs, _log in self.c_rounds for r in recs]

    def all_wz_flags(self):
        return [r for recs, _log in self.wz_rounds for r in recs]


# ---------------------------------------------------------------------------
# Contraction
# ---------------------------------------------------------------------------


def _contract_one(g: gc.PlaneGraph, v) -> gc.PlaneGraph:
    x, y = g.rotation[v]
    rot = {u: ns for u, ns in g.rotation.items() if u != v}
    rot[x] = tuple(y if t == v else t for t in rot[x])
    rot[y] = tuple(x if t == v else t for t in rot[y])
    outer = tuple(t for t in g.outer if t != v)
    return gc.PlaneGraph(rot, outer)


def contract(g: gc.PlaneGraph, protected=frozenset(), check_class: bool = True):
    """Contract all contractible vertices; returns (graph, log).

    A vertex contracts when it has degree 2, its neighbors are not adjacent,
    and the result is still one of the cycle-family classes (checked against
    the class of the input)."""
    if check_class:
        tag = gc.classify(g).tag
        if tag not in CONTRACTIBLE_TAGS:
            raise NotContractibleClass(f"cannot contract a {tag} graph")
    log = []
    work = g
    while True:
        cand = [
            v
            for v in work.vertices
            if v not in protected and work.degree(v) == 2
        ]
        progressed = False
        for v in sorted(cand):
            if v not in work.rotation or work.degree(v) != 2:
                continue
            x, y = work.rotation[v]
            if work.has_edge(x, y):
                continue
            candidate = _contract_one(work, v)
            if check_class and gc.classify(candidate).tag not in CONTRACTIBLE_TAGS:
                continue
            work = candidate
            log.append((v, x, y))
            progressed = True
        if not progressed:
            return work, tuple(log)


def subdivide_back(g: gc.PlaneGraph, log) -> gc.PlaneGraph:
    """Replay a contraction log in reverse (graph-level round trip)."""
    work = g
    for v, x, y in reversed(log):
        work = gc.subdivide_edge(work, x, y, v)
    return work


# ---------------------------------------------------------------------------
# c-flags
# ---------------------------------------------------------------------------


def cut_vertices_and_c_flags(g: gc.PlaneGraph):
    """Dominant tree-vertex cut vertices with their flags, plus the list of
    cycle-vertex cut vertices (handled separately by the caller)."""
    ext = g.outer_set()
    cuts = gc.articulation_points(g)
    cycle_cuts = [c for c in cuts if c in ext]
    tree_cuts = [c for c in cuts if c not in ext]
    records = []
    for c in tree_cuts:
        flag = set()
        for comp in gc.components(g, frozenset((c,))):
            if not (comp & ext):
                flag |= comp
        if flag:
            records.append(CFlagRecord(c, frozenset(flag)))
    flagged = {}
    for r in records:
        for v in r.flag:
            flagged[v] = r.cut
    dominant = [r for r in records if r.cut not in flagged]
    return dominant, cycle_cuts


def remove_c_flags(g: gc.PlaneGraph, records) -> gc.PlaneGraph:
    drop = set()
    for r in records:
        drop |= r.flag
    rot = {
        v: tuple(u for u in ns if u not in drop)
        for v, ns in g.rotation.items()
        if v not in drop
    }
    return gc.PlaneGraph(rot, g.outer)


# ---------------------------------------------------------------------------
# (w, z)-flags
# ---------------------------------------------------------------------------


def two_cuts_and_wz_flags(g1: gc.PlaneGraph, protected=frozenset()):
    """Dominant 2-cuts of a 2-connected irreducible cycle-tree, with flags.

    Every 2-cut must pair a tree vertex with a cycle vertex; the outer cycle
    must have length at least 4 (shorter cycles take the direct small-case
    route).  Cuts whose flag consists only of protected vertices are chain
    pieces kept from contraction, not real flags, and are skipped."""
    if len(g1.outer) < 4:
        raise CycleTooShort(f"outer cycle has {len(g1.outer)} vertices")
    ext = g1.outer_set()
    records = []
    for a, b in gc.two_cuts(g1):
        flag = set()
        for comp in gc.components(g1, frozenset((a, b))):
            if not (comp & ext):
                flag |= comp
        if not flag:
            continue
        in_a, in_b = a in ext, b in ext
        if in_a == in_b:
            if a in protected or b in protected or flag & protected:
                # chain piece kept from contraction around a protected vertex
                continue
            raise AssertionError(
                f"2-cut ({a},{b}) does not pair a tree vertex with a cycle vertex"
            )
        w, z = (b, a) if in_a else (a, b)
        records.append(WZFlagRecord(w, z, frozenset(flag), not g1.has_edge(w, z)))
    flagged = set()
    for r in records:
        flagged |= r.flag
    dominant = [r for r in records if r.w not in flagged]
    delta = max(g1.degree(v) for v in g1.vertices)
    for r in dominant:
        if len(r.flag) > 2 * delta + 2:
            raise AssertionError(
                f"({r.w},{r.z})-flag has {len(r.flag)} vertices (> 2*delta + 2)"
            )
    return dominant


def _contiguous_block(rot: tuple, members: set):
    """Indices of the contiguous cyclic block of `members` inside `rot`."""
    n = len(rot)
    idx = [i for i, x in enumerate(rot) if x in members]
    if not idx:
        return None
    if len(idx) == n:
        raise AssertionError("flag swallowed every neighbor")
    start = None
    for i in idx:
        if rot[(i - 1) % n] not in members:
            if start is not None:
                raise AssertionError("flag neighbors are not contiguous in rotation")
            start = i
    out = []
    i = start
    while rot[i] in members:
        out.append(i)
        i = (i + 1) % n
    if len(out) != len(idx):
        raise AssertionError("flag neighbors are not contiguous in rotation")
    return out


def remove_wz_flags(g: gc.PlaneGraph, records) -> gc.PlaneGraph:
    """Remove flags and insert virtual edges in the vacated rotation slots."""
    rot = {v: list(ns) for v, ns in g.rotation.items()}
    drop = set()
    for r in records:
        drop |= r.flag
    for r in records:
        for end, other in ((r.w, r.z), (r.z, r.w)):
            ns = rot[end]
            block = _contiguous_block(tuple(ns), r.flag)
            if block is None:
                continue
            block_set = set(block)
            out = []
            inserted = False
            for i, x in enumerate(ns):
                if i in block_set:
                    if r.virtual and not inserted:
                        out.append(other)  # virtual edge takes the vacated slot
                        inserted = True
                    continue
                out.append(x)
            rot[end] = out
    for v in drop:
        del rot[v]
    for v in rot:
        rot[v] = tuple(x for x in rot[v] if x not in drop)
    return gc.PlaneGraph({v: tuple(ns) for v, ns in rot.items()}, g.outer)


# ---------------------------------------------------------------------------
# Frame pipeline
# ---------------------------------------------------------------------------


def build_frames(g: gc.PlaneGraph, protected=frozenset()) -> FlagDecomposition:
    """Iterate flag removal and contraction to a fixed point.

    The input must already be irreducible (or carry protected vertices that
    may stay at degree 2).  one_frame strips dominant c-flags, two_frame
    additionally strips dominant (w,z)-flags behind virtual edges.
    """
    out = FlagDecomposition()
    work = g
    for _ in range(g.n() + 2):
        recs, _cycle_cuts = cut_vertices_and_c_flags(work)
        if not recs:
            break
        work = remove_c_flags(work, recs)
        work, log = contract(work, protected, check_class=False)
        out.c_rounds.append((recs, log))
        out.iterations += 1
    out.one_frame = work
    for _ in range(g.n() + 2):
        if len(work.outer) < 4:
            break
        recs = two_cuts_and_wz_flags(work, protected)
        if not recs:
            break
        work = remove_wz_flags(work, recs)
        work, log = contract(work, protected, check_class=False)
        out.wz_rounds.append((recs, log))
        out.iterations += 1
    out.two_frame = work
    return out
