"""Rooted path-trees and their SPQ decomposition.

A path-tree is a plane graph that one outer edge away from being a
cycle-tree: its outer boundary consists of the path (the would-be cycle arc)
plus the upper boundary formed by tree vertices.  The SPQ tree decomposes an
almost-3-connected rooted path-tree into series (S), parallel (P) and leaf
(Q) nodes whose pertinent graphs are induced subgraphs.

The decomposition rule is canonical: at every node, split the path span at
every path vertex that is not strictly inside the attachment span of any
subtree of the root (maximal split).  With this rule no P-node ever gets a
P-node child, and the tree is deterministic for a fixed input.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import graph_core as gc
from .errors import BadApexChoice, NotAlmost3Connected


@dataclass
class PathTree:
    graph: gc.PlaneGraph  # the contracted graph G*
    root: str
    left: str
    right: str
    path: tuple  # path vertices in order, path[0] == left, path[-1] == right
    tree_vertices: frozenset
    contraction_log: tuple = ()  # ((vertex, x, y), ...) in contraction order

    def path_index(self) -> dict:
        return {v: i for i, v in enumerate(self.path)}


@dataclass
class SpqNode:
    kind: str  # "S" | "P" | "Q"
    rho: str
    span: tuple  # (i, j) indices into the path
    tree_set: frozenset  # tree vertices of the pertinent graph, incl. rho
    has_left_edge: bool
    has_right_edge: bool
    children: list = field(default_factory=list)
    label: str = "0"

    def left_vertex(self, path):
        return path[self.span[0]]

    def right_vertex(self, path):
        return path[self.span[1]]


@dataclass
class SpqTree:
    pt: PathTree
    root: SpqNode

    def nodes(self):
        out = []
        stack = [self.root]
        while stack:
            n = stack.pop()
            out.append(n)
            stack.extend(reversed(n.children))
        return out

    def pertinent_vertices(self, node: SpqNode) -> frozenset:
        i, j = node.span
        return frozenset(self.pt.path[i : j + 1]) | node.tree_set

    def pertinent_degree(self, node: SpqNode, v) -> int:
        keep = self.pertinent_vertices(node)
        return sum(1 for u in self.pt.graph.rotation[v] if u in keep)

    def dump(self, node: Optional[SpqNode] = None, depth: int = 0) -> str:
        node = node or self.root
        i, j = node.span
        flags = ("L" if node.has_left_edge else "-") + (
            "R" if node.has_right_edge else "-"
        )
        line = "  " * depth + (
            f"{node.kind}[{node.label}] rho={node.rho} "
            f"span={self.pt.path[i]}..{self.pt.path[j]} flags={flags}"
        )
        return "\n".join(
            [line] + [self.dump(c, depth + 1) for c in node.children]
        )


# ---------------------------------------------------------------------------
# Path-tree extraction from a 3-connected cycle-tree
# ---------------------------------------------------------------------------


def exposed_path(g3: gc.PlaneGraph, apex) -> tuple:
    """The path that surfaces on the outer boundary when `apex` is removed,
    from the apex's clockwise predecessor to its successor."""
    w = list(g3.outer)
    k = w.index(apex)
    left = w[k - 1]
    right = w[(k + 1) % len(w)]
    gm = gc.delete_vertex(g3, apex)
    walk = list(gm.outer)
    li = walk.index(left)
    # walk the new outer face from `left` away from the old arc
    n = len(walk)
    prev_old = w[k - 2]  # the old-arc neighbor of `left`
    step = 1 if walk[(li + 1) % n] != prev_old else -1
    pi = [left]
    i = li
    while pi[-1] != right:
        i = (i + step) % n
        pi.append(walk[i])
    return tuple(pi)


def build_path_tree(g3: gc.PlaneGraph, apex, rho: Optional[str] = None) -> PathTree:
    """Remove `apex` from a 3-connected cycle-tree, contract the degree-2
    vertices that appear on the exposed path, and return the rooted path-tree.

    The root defaults to the first tree-vertex on the exposed path from the
    left end (which guarantees the root has an edge to the leftmost path
    vertex).  Raises BadApexChoice when a degree-2 vertex cannot be contracted
    because its neighbors are already adjacent.
    """
    w = list(g3.outer)
    if apex not in w:
        raise BadApexChoice(f"{apex} is not on the outer cycle")
    k = w.index(apex)
    left, right = w[k - 1], w[(k + 1) % len(w)]
    cycle_set = frozenset(w)
    pi = exposed_path(g3, apex)
    interior = [v for v in pi[1:-1]]
    if not any(v not in cycle_set for v in interior):
        raise BadApexChoice("exposed path contains no tree vertex")
    if rho is None:
        rho = next(v for v in interior if v not in cycle_set)
    elif rho not in interior:
        raise BadApexChoice(f"requested root {rho} does not lie on the exposed path")

    gm = gc.delete_vertex(g3, apex)
    log = []
    protected = {left, right, rho}
    while True:
        cand = sorted(
            v for v in gm.rotation if gm.degree(v) == 2 and v not in protected
        )
        if not cand:
            break
        progressed = False
        for v in cand:
            if v not in gm.rotation or gm.degree(v) != 2:
                continue
            x, y = gm.rotation[v]
            if gm.has_edge(x, y):
                raise BadApexChoice(
                    f"contraction of {v} blocked: {x} and {y} already adjacent"
                )
            rot = {u: ns for u, ns in gm.rotation.items() if u != v}
            rot[x] = tuple(y if t == v else t for t in rot[x])
            rot[y] = tuple(x if t == v else t for t in rot[y])
            outer = tuple(t for t in gm.outer if t != v)
            gm = gc.PlaneGraph(rot, outer)
            log.append((v, x, y))
            progressed = True
        if not progressed:
            break
    # the path is the old arc from `left` to `right`, avoiding the apex
    arc = w[k + 1 :] + w[:k]  # runs from `right` around to `left`
    path = tuple(v for v in reversed(arc) if v in gm.rotation)
    assert path[0] == left and path[-1] == right, (path, left, right)
    tree_vertices = frozenset(v for v in gm.rotation if v not in set(path))
    return PathTree(gm, rho, left, right, path, tree_vertices, tuple(log))


# ---------------------------------------------------------------------------
# SPQ construction
# ---------------------------------------------------------------------------


def build_spq(pt: PathTree) -> SpqTree:
    g = pt.graph
    pidx = pt.path_index()

    def tree_components(tree_set: frozenset, rho):
        rest = tree_set - {rho}
        comps = []
        seen = set()
        for v in sorted(rest):
            if v in seen:
                continue
            comp = set()
            stack = [v]
            while stack:
                x = stack.pop()
                if x in comp:
                    continue
                comp.add(x)
                for y in g.rotation[x]:
                    if y in rest and y not in comp:
                        stack.append(y)
            seen |= comp
            comps.append(frozenset(comp))
        return comps

    def attachments(comp: frozenset, lo: int, hi: int):
        att = set()
        for t in comp:
            for u in g.rotation[t]:
                if u in pidx and lo <= pidx[u] <= hi:
                    att.add(pidx[u])
        return sorted(att)

    def make(rho, tree_set: frozenset, lo: int, hi: int, label: str) -> SpqNode:
        has_l = g.has_edge(rho, pt.path[lo])
        has_r = g.has_edge(rho, pt.path[hi])
        if tree_set == frozenset((rho,)) and hi == lo + 1:
            return SpqNode("Q", rho, (lo, hi), tree_set, has_l, has_r, [], label)
        comps = tree_components(tree_set, rho)
        spans = []
        for comp in comps:
            att = attachments(comp, lo, hi)
            if len(att) < 2:
                raise NotAlmost3Connected(
                    f"subtree {sorted(comp)} attaches to fewer than two path vertices"
                )
            spans.append((att[0], att[-1], comp))
        covered = sorted(spans, key=lambda s: (s[0], s[1], tuple(sorted(s[2]))))
        splits = []
        for q in range(lo + 1, hi):
            if all(not (a < q < b) for a, b, _ in covered):
                splits.append(q)
        if not splits:
            if len(comps) != 1:
                raise NotAlmost3Connected(
                    f"root {rho} has {len(comps)} subtrees but no split point"
                )
            comp = comps[0]
            roots = sorted(v for v in comp if g.has_edge(rho, v))
            if len(roots) != 1:
                raise NotAlmost3Connected(
                    f"root {rho} has {len(roots)} tree children in one subtree"
                )
            child = make(roots[0], comp, lo, hi, label + ".0")
            return SpqNode("S", rho, (lo, hi), tree_set, has_l, has_r, [child], label)
        bounds = [lo] + splits + [hi]
        children = []
        for c, (a, b) in enumerate(zip(bounds, bounds[1:])):
            sub = frozenset().union(
                *[comp for s, e, comp in spans if a <= s and e <= b]
            ) if spans else frozenset()
            child_tree = frozenset((rho,)) | sub
            children.append(make(rho, child_tree, a, b, f"{label}.{c}"))
        node = SpqNode("P", rho, (lo, hi), tree_set, has_l, has_r, children, label)
        return node

    root = make(pt.root, pt.tree_vertices, 0, len(pt.path) - 1, "0")
    return SpqTree(pt, root)


def normalize(t: SpqTree) -> SpqTree:
    """Merge P-node children into P-node parents (pertinent graphs unchanged)."""

    def walk(node: SpqNode, label: str) -> SpqNode:
        kids = [walk(c, f"{label}.{i}") for i, c in enumerate(node.children)]
        if node.kind == "P":
            flat = []
            for k in kids:
                if k.kind == "P":
                    flat.extend(k.children)
                else:
                    flat.append(k)
            kids = [walk(k, f"{label}.{i}") for i, k in enumerate(flat)]
        return SpqNode(
            node.kind,
            node.rho,
            node.span,
            node.tree_set,
            node.has_left_edge,
            node.has_right_edge,
            kids,
            label,
        )

    return SpqTree(t.pt, walk(t.root, "0"))


@dataclass
class DeltaStar:
    value: int
    node_label: str
    vertex: str


def delta_star(t: SpqTree) -> DeltaStar:
    """Maximum pertinent degree over all nodes and path vertices."""
    best = None
    g = t.pt.graph
    for node in t.nodes():
        keep = t.pertinent_vertices(node)
        i, j = node.span
        for v in t.pt.path[i : j + 1]:
            d = sum(1 for u in g.rotation[v] if u in keep)
            if best is None or d > best.value or (
                d == best.value and (node.label, v) < (best.node_label, best.vertex)
            ):
                best = DeltaStar(d, node.label, v)
    return best


def left_path(t: SpqTree, node: SpqNode) -> tuple:
    """Outer-face path from the leftmost path vertex up to the node's root."""
    if node.has_left_edge:
        return (node.left_vertex(t.pt.path), node.rho)
    if node.kind == "Q":
        return ()
    if node.kind == "S":
        lp = left_path(t, node.children[0])
        return lp + (node.rho,) if lp else ()
    return left_path(t, node.children[0])


def right_path(t: SpqTree, node: SpqNode) -> tuple:
    if node.has_right_edge:
        return (node.right_vertex(t.pt.path), node.rho)
    if node.kind == "Q":
        return ()
    if node.kind == "S":
        rp = right_path(t, node.children[0])
        return rp + (node.rho,) if rp else ()
    return right_path(t, node.children[-1])
