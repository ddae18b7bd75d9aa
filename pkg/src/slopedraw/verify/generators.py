"""Seeded instance generators and small named fixtures.

Generators build a radial layout first (tree sectors nested inside the leaf
circle), derive the rotation system from coordinates, and then apply
combinatorial growth operations (subdivision, pendant trees, fans, an extra
pseudotree edge, outerplane hangers) that keep the embedding valid by
construction.  Every generated instance is validated and classified before
it is returned.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

from .. import graph_core as gc
from ..errors import Infeasible


# ---------------------------------------------------------------------------
# Layout -> plane graph
# ---------------------------------------------------------------------------


def plane_graph_from_layout(pos: dict, edges) -> gc.PlaneGraph:
    """Rotations by counter-clockwise angle order; the outer face is the
    unique traced face with negative (clockwise) signed area."""
    adj = {v: [] for v in pos}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    rot = {}
    for v, ns in adj.items():
        px, py = pos[v]
        rot[v] = tuple(
            sorted(ns, key=lambda u: math.atan2(pos[u][1] - py, pos[u][0] - px) % (2 * math.pi))
        )
    faces = gc._trace_all_faces(rot)
    outer = None
    for f in faces:
        area = 0.0
        for i in range(len(f)):
            x1, y1 = pos[f[i]]
            x2, y2 = pos[f[(i + 1) % len(f)]]
            area += x1 * y2 - x2 * y1
        if area < 0:
            if outer is not None:
                raise AssertionError("layout produced two clockwise faces")
            outer = f
    if outer is None:
        raise AssertionError("layout produced no clockwise face")
    return gc.PlaneGraph(rot, outer)


# ---------------------------------------------------------------------------
# Named fixtures
# ---------------------------------------------------------------------------


def triangle() -> gc.PlaneGraph:
    return gc.PlaneGraph(
        {"a": ("b", "c"), "b": ("c", "a"), "c": ("a", "b")}, ("b", "a", "c")
    )


def cycle(k: int) -> gc.PlaneGraph:
    cs = [f"c{i}" for i in range(k)]
    rot = {cs[i]: (cs[(i + 1) % k], cs[(i - 1) % k]) for i in range(k)}
    outer = tuple([cs[0]] + [cs[k - 1 - j] for j in range(k - 1)])
    return gc.PlaneGraph(rot, outer)


def wheel(k: int) -> gc.PlaneGraph:
    hub = "h"
    cs = [f"c{i}" for i in range(k)]
    rot = {hub: tuple(cs)}
    for i in range(k):
        rot[cs[i]] = (cs[(i + 1) % k], hub, cs[(i - 1) % k])
    outer = tuple([cs[0]] + [cs[k - 1 - j] for j in range(k - 1)])
    return gc.PlaneGraph(rot, outer)


def octahedron() -> gc.PlaneGraph:
    rot = {
        "o0": ("o1", "i0", "i2", "o2"),
        "o1": ("o2", "i1", "i0", "o0"),
        "o2": ("o0", "i2", "i1", "o1"),
        "i0": ("i2", "o0", "o1", "i1"),
        "i1": ("i2", "i0", "o1", "o2"),
        "i2": ("o0", "i0", "i1", "o2"),
    }
    return gc.PlaneGraph(rot, ("o0", "o2", "o1"))


def path_graph(k: int) -> gc.PlaneGraph:
    vs = [f"p{i}" for i in range(k)]
    rot = {}
    for i, v in enumerate(vs):
        ns = []
        if i > 0:
            ns.append(vs[i - 1])
        if i < k - 1:
            ns.append(vs[i + 1])
        rot[v] = tuple(ns)
    outer = tuple(vs + vs[-2:0:-1])
    return gc.PlaneGraph(rot, outer)


# ---------------------------------------------------------------------------
# Halin generator (radial tree layout)
# ---------------------------------------------------------------------------


def _grow_tree(n: int, delta: int, rng: random.Random):
    """Rooted tree with every internal degree in [3, delta], about n vertices
    in total once the leaves are counted."""
    children = {0: []}
    leaves = [0]
    total = 1
    while True:
        exp = [v for v in leaves if True]
        v = exp[rng.randrange(len(exp))]
        cap = delta if v != 0 else delta
        lo = 3 if v == 0 else 2
        hi = (delta if v == 0 else delta - 1)
        if total + lo > n and total >= 4:
            break
        k = rng.randint(lo, max(lo, min(hi, n - total)))
        ids = list(range(total, total + k))
        children[v] = ids
        for w in ids:
            children[w] = []
        leaves.remove(v)
        leaves.extend(ids)
        total += k
        if total >= n - 1:
            break
        # stop early sometimes to vary the shape
        if total >= 4 and rng.random() < 0.15:
            break
    return children


def gen_halin(n: int, delta: int, seed: int) -> gc.PlaneGraph:
    if delta < 3 or n < 4:
        raise Infeasible("Halin graphs need delta >= 3 and n >= 4")
    rng = random.Random(f"halin:{n}:{delta}:{seed}")
    if n <= 6:
        return wheel(min(n - 1, delta))
    children = _grow_tree(n, delta, rng)
    leaves = [v for v in _dfs_order(children) if not children[v]]
    if len(leaves) < 3:
        return wheel(max(3, min(n - 1, delta)))
    # rotations straight from the nested radial picture: children fan outward
    # in leaf order with the parent behind them, leaves see the cycle sideways
    parent = {}
    for v, ch in children.items():
        for w in ch:
            parent[w] = v
    L = len(leaves)
    nxt = {leaves[i]: leaves[(i + 1) % L] for i in range(L)}
    prv = {leaves[i]: leaves[(i - 1) % L] for i in range(L)}
    rot = {}
    name = lambda v: f"v{v}"
    for v, ch in children.items():
        if not ch:
            rot[name(v)] = (name(nxt[v]), name(parent[v]), name(prv[v]))
        elif v == 0:
            rot[name(v)] = tuple(name(w) for w in ch)
        else:
            rot[name(v)] = tuple(name(w) for w in ch) + (name(parent[v]),)
    outer = tuple([name(leaves[0])] + [name(leaves[L - 1 - j]) for j in range(L - 1)])
    g = gc.PlaneGraph(rot, outer)
    res = gc.validate_embedding(g)
    if not res.ok:
        raise AssertionError(f"halin rotations invalid: {res.code} {res.detail}")
    cls = gc.classify(g)
    if cls.tag != "Halin":
        raise AssertionError(f"halin generator produced {cls.tag}")
    return g


def _dfs_order(children) -> list:
    order = []
    stack = [0]
    while stack:
        v = stack.pop()
        order.append(v)
        stack.extend(reversed(children[v]))
    return order


# ---------------------------------------------------------------------------
# Cycle-trees and beyond (combinatorial growth on a Halin skeleton)
# ---------------------------------------------------------------------------


def _subdivide_random_edge(g, rng, counter, on_cycle: bool):
    ext = g.outer_set()
    cands = []
    for u, v in g.edges():
        both_ext = u in ext and v in ext
        if both_ext == on_cycle:
            if on_cycle or not (u in ext or v in ext):
                cands.append((u, v))
    if not cands:
        return g
    u, v = cands[rng.randrange(len(cands))]
    return gc.subdivide_edge(g, u, v, f"s{counter}")


def _add_pendant(g, rng, counter, delta):
    ext = g.outer_set()
    internal = [v for v in g.vertices if v not in ext and g.degree(v) < delta]
    if not internal:
        return g
    t = internal[rng.randrange(len(internal))]
    w = f"p{counter}"
    rot = dict(g.rotation)
    ns = list(rot[t])
    ns.insert(rng.randrange(len(ns)) if ns else 0, w)
    rot[t] = tuple(ns)
    rot[w] = (t,)
    return gc.PlaneGraph(rot, g.outer)


def _add_fan_vertex(g, rng, counter, delta):
    """New internal vertex adjacent to two consecutive cycle vertices."""
    ext = list(g.outer)
    tries = [rng.randrange(len(ext)) for _ in range(6)]
    for i in tries:
        a, b = ext[i], ext[(i + 1) % len(ext)]
        if g.degree(a) + 1 > delta or g.degree(b) + 1 > delta:
            continue
        inner = [
            f
            for f in g.faces()
            if gc._cyclic_key(f) != gc._cyclic_key(g.outer)
            and any(
                (f[k], f[(k + 1) % len(f)]) in ((a, b), (b, a))
                for k in range(len(f))
            )
        ]
        if not inner:
            continue
        w = f"f{counter}"
        f = inner[0]
        walk = list(f)
        for k in range(len(walk)):
            if {walk[k], walk[(k + 1) % len(walk)]} == {a, b}:
                first, second = walk[k], walk[(k + 1) % len(walk)]
                break
        rot = dict(g.rotation)
        # w sits inside face f between the corners at `first` and `second`
        rf = list(rot[first])
        rf.insert(rf.index(second), w)
        rot[first] = tuple(rf)
        rs = list(rot[second])
        rs.insert(rs.index(first) + 1, w)
        rot[second] = tuple(rs)
        rot[w] = (first, second)
        cand = gc.PlaneGraph(rot, g.outer)
        if gc.validate_embedding(cand).ok:
            return cand
    return g


def gen_cycle_tree(n: int, delta: int, seed: int) -> gc.PlaneGraph:
    if delta < 3 or n < 4:
        raise Infeasible("cycle-trees need delta >= 3 and n >= 4")
    rng = random.Random(f"cycle-tree:{n}:{delta}:{seed}")
    base = max(4, int(n * (0.5 + 0.3 * rng.random())))
    g = gen_halin(base, delta, seed)
    counter = 0
    guard = 0
    while g.n() < n and guard < 4 * n:
        guard += 1
        op = rng.random()
        counter += 1
        if op < 0.30:
            g = _subdivide_random_edge(g, rng, counter, on_cycle=True)
        elif op < 0.55:
            g = _subdivide_random_edge(g, rng, counter, on_cycle=False)
        elif op < 0.80:
            g = _add_pendant(g, rng, counter, delta)
        else:
            g = _add_fan_vertex(g, rng, counter, delta)
    cls = gc.classify(g)
    if cls.tag not in ("CycleTree", "Halin"):
        raise AssertionError(f"cycle-tree generator produced {cls.tag}")
    return g


def gen_three_connected_cycle_tree(n: int, delta: int, seed: int) -> gc.PlaneGraph:
    """Cycle-tree kept 3-connected: only fan vertices and attachment growth."""
    rng = random.Random(f"threeconn:{n}:{delta}:{seed}")
    g = gen_halin(max(4, n), delta, seed)
    if not gc.is_three_connected(g):
        raise AssertionError("halin generator lost 3-connectivity")
    return g


def gen_cycle_pseudotree(n: int, delta: int, seed: int, style: str = "auto") -> gc.PlaneGraph:
    rng = random.Random(f"pseudo:{n}:{delta}:{seed}:{style}")
    if style == "cyclecycle" or (style == "auto" and rng.random() < 0.3):
        return _gen_cycle_cycle(n, delta, rng)
    for attempt in range(20):
        g = gen_cycle_tree(max(5, n - 1), delta, seed + 1000 * attempt)
        ext = g.outer_set()
        # close a tree cycle: add an edge between two internal vertices on a
        # common inner face
        outer_key = gc._cyclic_key(g.outer)
        cands = []
        for f in g.faces():
            if gc._cyclic_key(f) == outer_key:
                continue
            ins = sorted({v for v in f if v not in ext})
            for i, a in enumerate(ins):
                for b in ins[i + 1 :]:
                    if not g.has_edge(a, b) and g.degree(a) < delta and g.degree(b) < delta:
                        cands.append((a, b, f))
        if not cands:
            continue
        a, b, f = cands[rng.randrange(len(cands))]
        g2 = gc.add_edge_in_face(g, a, b, f)
        if not gc.validate_embedding(g2).ok:
            continue
        cls = gc.classify(g2)
        if cls.tag == "CyclePseudotree":
            return g2
    return _gen_cycle_cycle(n, delta, rng)


def _gen_cycle_cycle(n: int, delta: int, rng: random.Random) -> gc.PlaneGraph:
    """Inner chordless cycle nested in an outer cycle, joined by planar spokes."""
    k = max(3, min(n // 2 - 1, 3 + rng.randrange(max(1, n // 3))))
    m = max(3, n - k)
    pos = {}
    edges = []
    outer = [f"c{i}" for i in range(m)]
    inner = [f"i{j}" for j in range(k)]
    for i, v in enumerate(outer):
        a = 2 * math.pi * i / m
        pos[v] = (math.cos(a), math.sin(a))
        edges.append((v, outer[(i + 1) % m]))
    for j, v in enumerate(inner):
        a = 2 * math.pi * (j + 0.25) / k
        pos[v] = (0.45 * math.cos(a), 0.45 * math.sin(a))
        edges.append((v, inner[(j + 1) % k]))
    # spokes: inner j takes a contiguous arc of outer vertices
    bounds = sorted(rng.sample(range(m), k)) if k <= m else list(range(k))
    deg = {v: 2 for v in pos}
    for j in range(k):
        lo = bounds[j]
        hi = bounds[(j + 1) % k] if j + 1 < k else bounds[0] + m
        arc = [outer[t % m] for t in range(lo, hi + 1)]
        for t, c in enumerate(arc):
            last = t == len(arc) - 1
            if deg[inner[j]] >= delta:
                break
            if last and j + 1 < k:
                break  # shared corner belongs to the next spoke fan
            if deg[c] >= delta:
                continue
            edges.append((inner[j], c))
            deg[inner[j]] += 1
            deg[c] += 1
        # angle of inner vertex: centre of its arc
        mid = (lo + (hi - lo) / 2) % m
        a = 2 * math.pi * mid / m
        pos[inner[j]] = (0.45 * math.cos(a), 0.45 * math.sin(a))
    g = plane_graph_from_layout(pos, edges)
    res = gc.validate_embedding(g)
    if not res.ok:
        raise AssertionError(f"cycle-cycle layout invalid: {res.code}")
    cls = gc.classify(g)
    if cls.tag != "CyclePseudotree":
        raise AssertionError(f"cycle-cycle generator produced {cls.tag}")
    return g


def gen_nested_pseudotree(n: int, delta: int, seed: int) -> gc.PlaneGraph:
    rng = random.Random(f"nested:{n}:{delta}:{seed}")
    core_n = max(6, int(n * 0.7))
    g = gen_cycle_pseudotree(core_n, delta, seed)
    counter = 0
    guard = 0
    while g.n() < n and guard < 3 * n:
        guard += 1
        g2 = _add_hanger(g, rng, counter, delta)
        counter += 1
        if g2 is not None:
            g = g2
    cls = gc.classify(g)
    if cls.tag == "CyclePseudotree" and g.n() < n + 2:
        # ensure at least one hanger so the class is properly nested
        for _ in range(20):
            g2 = _add_hanger(g, rng, counter, delta)
            counter += 1
            if g2 is not None and gc.classify(g2).tag == "NestedPseudotree":
                g = g2
                break
    cls = gc.classify(g)
    if cls.tag not in ("NestedPseudotree", "CyclePseudotree"):
        raise AssertionError(f"nested generator produced {cls.tag}")
    return g


def _add_hanger(g, rng, counter, delta):
    """Outerplane component on a base edge of the outer cycle, drawn outside."""
    w = list(g.outer)
    mlen = len(w)
    i = rng.randrange(mlen)
    a, b = w[i], w[(i + 1) % mlen]
    if not g.has_edge(a, b):
        return None
    style = rng.random()
    rot = dict(g.rotation)
    new = {}
    if style < 0.5 and g.degree(a) < delta and g.degree(b) < delta:
        # outside path from a to b with 1-3 interior vertices
        k = 1 + rng.randrange(3)
        names = [f"h{counter}_{t}" for t in range(k)]
        chain = [a] + names + [b]
        for t, v in enumerate(names):
            new[v] = (chain[t], chain[t + 2])
        # at a: the outside sector at the outer corner (prev, a, next=b)
        prev_a = w[i - 1]
        ra = list(rot[a])
        ra.insert(ra.index(prev_a), names[0])
        rot[a] = tuple(ra)
        nxt_b = w[(i + 2) % mlen]
        rb = list(rot[b])
        rb.insert(rb.index(a), names[-1])
        rot[b] = tuple(rb)
        for v, (x, y) in new.items():
            rot[v] = (x, y)
    elif g.degree(a) < delta:
        # pendant path outside at a
        k = 1 + rng.randrange(2)
        names = [f"h{counter}_{t}" for t in range(k)]
        chain = [a] + names
        prev_a = w[i - 1]
        ra = list(rot[a])
        ra.insert(ra.index(prev_a), names[0])
        rot[a] = tuple(ra)
        for t, v in enumerate(names):
            ns = [chain[t]] + ([chain[t + 2]] if t + 2 <= k else [])
            rot[v] = tuple(ns)
    else:
        return None
    rot2 = {v: tuple(ns) for v, ns in rot.items()}
    outer = gc.retrace_outer(rot2, (w[(i + 2) % mlen], w[(i + 3) % mlen]))
    cand = gc.PlaneGraph(rot2, outer)
    if not gc.validate_embedding(cand).ok:
        return None
    if gc.classify(cand).tag not in ("NestedPseudotree", "CyclePseudotree"):
        return None
    return cand


def gen_outerplane(n: int, delta: int, seed: int) -> gc.PlaneGraph:
    rng = random.Random(f"outer:{n}:{delta}:{seed}")
    g = cycle(max(3, n))
    # sprinkle non-crossing chords inside
    outer_key = gc._cyclic_key(g.outer)
    for _ in range(n):
        faces = [f for f in g.faces() if gc._cyclic_key(f) != outer_key and len(f) >= 4]
        if not faces:
            break
        f = faces[rng.randrange(len(faces))]
        k = len(f)
        i = rng.randrange(k)
        j = (i + 2 + rng.randrange(k - 3)) % k
        a, b = f[i], f[j]
        if a == b or g.has_edge(a, b):
            continue
        if g.degree(a) >= delta or g.degree(b) >= delta:
            continue
        g = gc.add_edge_in_face(g, a, b, f)
    return g


def generate(class_name: str, n: int, delta: int, seed: int) -> gc.PlaneGraph:
    """Deterministic per (class, n, delta, seed); the result always validates
    and classifies as requested."""
    builders = {
        "Halin": gen_halin,
        "CycleTree": gen_cycle_tree,
        "ThreeConnectedCycleTree": gen_three_connected_cycle_tree,
        "CyclePseudotree": gen_cycle_pseudotree,
        "CycleCycle": lambda n, d, s: gen_cycle_pseudotree(n, d, s, style="cyclecycle"),
        "NestedPseudotree": gen_nested_pseudotree,
        "Outerplane": gen_outerplane,
    }
    if class_name not in builders:
        raise Infeasible(f"unknown class {class_name}")
    return builders[class_name](n, delta, seed)
