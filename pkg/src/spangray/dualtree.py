"""Split duals of outerplane embeddings and the edge labelings they induce.

The split dual of a 2-connected outerplane embedding is obtained from the
plane dual by splitting the outer-face vertex into one degree-1 leaf per
outer-boundary edge; the result is a tree with exactly one node per inner
face, one leaf per boundary edge, and one edge per (non-loop) edge of the
primal graph.  Rooting that tree at a leaf orients it, and a depth-first
traversal that takes subtrees in ccw order assigns edge labels 1..m with
strong ordering properties around every face and every vertex.  Those
properties are what make class-restricted tie-breaking work in the greedy
spanning-tree generator, and this module also provides executable
checkers for them plus the constructive replacement exchange they imply.
"""

from __future__ import annotations

from dataclasses import dataclass

from .embedgraph import EdgeLabeling, EmbeddedGraph, MultiGraph
from .errors import CertificationError, GraphError, NotTwoConnectedError


def weak_dual(emb: EmbeddedGraph) -> MultiGraph:
    """Graph on the inner faces; one edge per primal edge separating two
    distinct inner faces."""
    inner = [f.id for f in emb.faces if not f.is_outer]
    node = {fid: i for i, fid in enumerate(inner)}
    edges = []
    for e in range(emb.graph.m):
        fs = emb.faces_of_edge(e)
        if len(fs) == 2 and fs[0] != fs[1] and emb.outer_face not in fs:
            edges.append((node[fs[0]], node[fs[1]]))
    return MultiGraph(len(inner), tuple(edges))


class SplitDual:
    """The split dual tree of an embedding.

    Nodes 0..k-1 are the inner faces (in face order); nodes k.. are the
    leaves, one per outer-boundary dart, numbered along the boundary
    walk.  The tree edge for primal edge ``e`` connects the nodes of the
    two faces bounding ``e``, a leaf standing in for the outer face.
    """

    def __init__(self, emb: EmbeddedGraph):
        self.emb = emb
        g = emb.graph
        inner = [f.id for f in emb.faces if not f.is_outer]
        self.inner_count = len(inner)
        self.inner_face_ids = tuple(inner)
        self._node_of_face = {fid: i for i, fid in enumerate(inner)}
        outer_darts = emb.faces[emb.outer_face].darts
        self.leaf_darts = tuple(outer_darts)
        self._leaf_of_dart = {d: self.inner_count + k for k, d in enumerate(outer_darts)}
        self.node_count = self.inner_count + len(outer_darts)

        def node_for(dart):
            fid = emb.left_face[dart]
            if fid == emb.outer_face:
                return self._leaf_of_dart[dart]
            return self._node_of_face[fid]

        ends: list[tuple[int, int] | None] = []
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.node_count)]
        for e, (u, v) in enumerate(g.edges):
            if u == v:
                ends.append(None)
                continue
            a, b = node_for((e, u)), node_for((e, v))
            ends.append((a, b))
            adj[a].append((e, b))
            adj[b].append((e, a))
        self.edge_ends = tuple(ends)
        self.adjacency = adj

        nonloop = sum(1 for x in ends if x is not None)
        seen = [False] * self.node_count
        if self.node_count:
            stack = [0]
            seen[0] = True
            while stack:
                x = stack.pop()
                for _, y in adj[x]:
                    if not seen[y]:
                        seen[y] = True
                        stack.append(y)
        if not all(seen) or nonloop != self.node_count - 1:
            raise NotTwoConnectedError(
                "split dual is not a tree; the graph is not 2-connected "
                "(decompose with blocks() first)")

    def is_leaf(self, node: int) -> bool:
        return node >= self.inner_count

    def leaf_edge(self, leaf: int) -> int:
        return self.leaf_darts[leaf - self.inner_count][0]

    def node_face(self, node: int) -> int:
        """Face id a node stands for; leaves map to the outer face."""
        if self.is_leaf(node):
            return self.emb.outer_face
        return self.inner_face_ids[node]

    def face_node(self, fid: int) -> int:
        return self._node_of_face[fid]

    def rotation_at(self, node: int) -> tuple[int, ...]:
        """Primal edges at an inner node in ccw order (= face boundary)."""
        return self.emb.faces[self.node_face(node)].edge_ids

    def leaves(self) -> tuple[int, ...]:
        return tuple(range(self.inner_count, self.node_count))

    def leaf_for_edge(self, e: int) -> int:
        """The leaf of outer-boundary edge ``e`` (unique for m >= 2)."""
        hits = [self.inner_count + k for k, (ee, _) in enumerate(self.leaf_darts) if ee == e]
        if not hits:
            raise GraphError(f"edge {e} does not bound the outer face")
        return hits[0]


def split_dual(emb: EmbeddedGraph) -> SplitDual:
    return SplitDual(emb)


def default_root_leaf(sd: SplitDual) -> int:
    """Leaf of the outer-boundary edge with the smallest endpoint pair
    (ties by edge id, then boundary position)."""
    best = None
    for k, (e, tail) in enumerate(sd.leaf_darts):
        u, v = sd.emb.graph.edges[e]
        key = (min(u, v), max(u, v), e, k)
        if best is None or key < best[0]:
            best = (key, sd.inner_count + k)
    if best is None:
        raise GraphError("embedding has no outer-boundary edges")
    return best[1]


class OrientedSplitDual:
    """A split dual rooted at a leaf, every edge oriented away from the root."""

    def __init__(self, sd: SplitDual, root: int):
        if not sd.is_leaf(root):
            raise GraphError(f"root {root} is not a leaf of the split dual")
        self.split = sd
        self.root = root
        tail = [-1] * sd.emb.graph.m
        head = [-1] * sd.emb.graph.m
        parent_edge = [-1] * sd.node_count
        seen = [False] * sd.node_count
        seen[root] = True
        stack = [root]
        while stack:
            x = stack.pop()
            for e, y in sd.adjacency[x]:
                if not seen[y]:
                    seen[y] = True
                    tail[e], head[e] = x, y
                    parent_edge[y] = e
                    stack.append(y)
        self.tail_of = tuple(tail)
        self.head_of = tuple(head)
        self.parent_edge = tuple(parent_edge)
        self._lobes: dict[int, tuple[frozenset[int], ...]] = {}

    @property
    def emb(self) -> EmbeddedGraph:
        return self.split.emb


def orient_split_dual(sd: SplitDual, root: int | None = None) -> OrientedSplitDual:
    if root is None:
        root = default_root_leaf(sd)
    return OrientedSplitDual(sd, root)


def dual_tree_labeling(osd: OrientedSplitDual) -> EdgeLabeling:
    """Label the edges 1..m by a depth-first walk from the root that takes
    the subtrees at each face node in ccw order, starting right after the
    incoming edge.  Loops, which have no dual edge, get the labels after
    all non-loop edges, in id order."""
    sd = osd.split
    g = sd.emb.graph
    label = [0] * g.m
    counter = [0]

    def descend(node: int, in_edge: int) -> None:
        if sd.is_leaf(node):
            return
        rot = sd.rotation_at(node)
        idx = rot.index(in_edge)
        t = len(rot)
        for k in range(1, t):
            e = rot[(idx + k) % t]
            counter[0] += 1
            label[e] = counter[0]
            descend(osd.head_of[e], e)

    root_edge = sd.adjacency[osd.root][0][0]
    counter[0] += 1
    label[root_edge] = counter[0]
    descend(osd.head_of[root_edge], root_edge)
    for e in g.loop_edges():
        counter[0] += 1
        label[e] = counter[0]
    if counter[0] != g.m:
        raise CertificationError("labeling walk did not cover every edge")
    return EdgeLabeling(tuple(label))


@dataclass(frozen=True)
class OrientedFace:
    """An inner face as the ccw dart sequence starting at the unique edge
    whose dual is oriented toward the face node; edge_ids[k] is walked
    from corner darts[k][1]."""

    face_id: int
    darts: tuple[tuple[int, int], ...]

    @property
    def edge_ids(self) -> tuple[int, ...]:
        return tuple(e for e, _ in self.darts)

    def corner(self, i: int) -> int:
        """Vertex where the i-th boundary edge starts (1-based)."""
        return self.darts[i - 1][1]


def oriented_faces(osd: OrientedSplitDual) -> tuple[OrientedFace, ...]:
    sd = osd.split
    out = []
    for node in range(sd.inner_count):
        fid = sd.node_face(node)
        boundary = sd.emb.faces[fid].darts
        inward = [i for i, (e, _) in enumerate(boundary) if osd.head_of[e] == node]
        if len(inward) != 1:
            raise CertificationError(f"face {fid} has {len(inward)} inward dual edges")
        i = inward[0]
        out.append(OrientedFace(fid, boundary[i:] + boundary[:i]))
    return tuple(out)


def lobe(osd: OrientedSplitDual, oface: OrientedFace, i: int) -> frozenset[int]:
    """Edges dual to the maximal subtree through the i-th boundary edge of
    the face (1-based), i.e. everything hanging off the face node on that
    side, the boundary edge included."""
    t = len(oface.edge_ids)
    if not 1 <= i <= t:
        raise GraphError(f"lobe index {i} out of range 1..{t}")
    cached = osd._lobes.get(oface.face_id)
    if cached is None:
        sd = osd.split
        node = sd.face_node(oface.face_id)
        parts = []
        for e in oface.edge_ids:
            # component of the dual tree minus the face node on e's side
            other = osd.head_of[e] if osd.tail_of[e] == node else osd.tail_of[e]
            found = {e}
            seen_nodes = {other}
            stack = [other]
            while stack:
                x = stack.pop()
                for f, y in sd.adjacency[x]:
                    if y == node or f in found:
                        continue
                    found.add(f)
                    if y not in seen_nodes:
                        seen_nodes.add(y)
                        stack.append(y)
            parts.append(frozenset(found))
        cached = tuple(parts)
        osd._lobes[oface.face_id] = cached
    return cached[i - 1]


@dataclass(frozen=True)
class IncidenceList:
    """Edges at a vertex in clockwise order (both ends bound the outer
    face), with a flag per edge: True when the oriented dual edge runs
    counterclockwise around the vertex."""

    vertex: int
    edges: tuple[int, ...]
    ccw_flags: tuple[bool, ...]


def incidence_list(osd: OrientedSplitDual, v: int) -> IncidenceList:
    emb = osd.emb
    sd = osd.split
    edges = tuple(reversed(emb.rotation[v]))
    flags = []
    for e in edges:
        # e' runs ccw around v iff it is oriented from the face on the cw
        # side of e at v to the face on the ccw side, and the ccw side is
        # the left face of the dart leaving v
        head_face = sd.node_face(osd.head_of[e])
        flags.append(head_face == emb.left_face[(e, v)])
    return IncidenceList(v, edges, tuple(flags))


@dataclass(frozen=True)
class CheckReport:
    ok: bool
    violations: tuple[str, ...]


def check_face_label_order(osd: OrientedSplitDual, labeling: EdgeLabeling) -> CheckReport:
    """Verify, for every inner face (e_1..e_t): labels strictly increase
    in ccw order, and every lobe at e_i (i >= 2) carries labels strictly
    between l(e_i) and l(e_{i+1}) (just above l(e_t) for the last)."""
    bad = []
    for of in oriented_faces(osd):
        labs = [labeling.label(e) for e in of.edge_ids]
        t = len(labs)
        for i in range(t - 1):
            if labs[i] >= labs[i + 1]:
                bad.append(f"face {of.face_id}: labels {labs} not increasing ccw")
                break
        for i in range(2, t + 1):
            li = labs[i - 1]
            upper = labs[i] if i < t else None
            for f in lobe(osd, of, i):
                lf = labeling.label(f)
                if f == of.edge_ids[i - 1]:
                    continue
                if lf <= li:
                    bad.append(f"face {of.face_id}: lobe {i} edge {f} label {lf} <= {li}")
                elif upper is not None and lf >= upper:
                    bad.append(f"face {of.face_id}: lobe {i} edge {f} label {lf} >= {upper}")
    return CheckReport(not bad, tuple(bad))


def check_vertex_label_chain(osd: OrientedSplitDual, labeling: EdgeLabeling) -> CheckReport:
    """Verify, for every vertex: the clockwise incidence list splits into
    ccw-edges followed by cw-edges, labels decreasing along the ccw block
    and increasing along the cw block, every ccw label below every cw
    label."""
    bad = []
    for v in range(osd.emb.graph.n):
        il = incidence_list(osd, v)
        if not il.edges:
            continue
        flags = il.ccw_flags
        i = flags.count(True)
        if flags != (True,) * i + (False,) * (len(flags) - i):
            bad.append(f"vertex {v}: flags {flags} are not ccw-block then cw-block")
            continue
        labs = [labeling.label(e) for e in il.edges]
        chain = list(reversed(labs[:i])) + labs[i:]
        if chain != sorted(chain) or len(set(chain)) != len(chain):
            bad.append(f"vertex {v}: labels {labs} with split {i} violate the chain order")
    return CheckReport(not bad, tuple(bad))


def _tree_path_edges(g: MultiGraph, tree_ids, s: int, goal: int) -> list[int]:
    """Edges on the unique s..goal path in the tree given by tree_ids."""
    adj: dict[int, list[tuple[int, int]]] = {}
    for e in tree_ids:
        u, v = g.edges[e]
        adj.setdefault(u, []).append((e, v))
        adj.setdefault(v, []).append((e, u))
    prev: dict[int, tuple[int, int]] = {s: (-1, -1)}
    stack = [s]
    while stack:
        x = stack.pop()
        if x == goal:
            break
        for e, y in adj.get(x, ()):
            if y not in prev:
                prev[y] = (e, x)
                stack.append(y)
    if goal not in prev:
        raise GraphError("endpoints not connected in the given tree")
    path = []
    x = goal
    while x != s:
        e, x = prev[x]
        path.append(e)
    return path


def alternative_pof_exchange(osd: OrientedSplitDual, labeling: EdgeLabeling,
                             tree_labels, exchange: tuple[int, int]) -> tuple[int, int]:
    """Given a valid exchange {e, f} (as labels, any order) for the
    spanning tree with the given labels, return a pof-exchange {d, f}
    with l(d) < l(f); on triangulations the result is a pivot-exchange.

    The replacement is constructed from the face alpha whose dual edge at
    f points away from it: if f is a tree edge, d is the face edge whose
    lobe contains e; otherwise d is the cycle edge next to f inside the
    lobe just before f on the face.
    """
    g = osd.emb.graph
    tree = frozenset(labeling.edge(l) for l in tree_labels)
    if hasattr(exchange, "pair"):
        exchange = exchange.pair()
    la, lb = exchange
    if la == lb:
        raise GraphError("exchange must involve two distinct labels")
    le, lf = (la, lb) if la < lb else (lb, la)
    e_id, f_id = labeling.edge(le), labeling.edge(lf)
    in_t = [e_id in tree, f_id in tree]
    if in_t[0] == in_t[1]:
        raise GraphError("exchange must swap a tree edge with a non-tree edge")

    if g.is_loop(e_id) or g.is_loop(f_id):
        raise GraphError("loops cannot take part in an exchange")
    node = osd.tail_of[f_id]
    sd = osd.split
    if sd.is_leaf(node):
        raise CertificationError("dual edge of the larger label starts at a leaf")
    ofaces = {of.face_id: of for of in oriented_faces(osd)}
    of = ofaces[sd.node_face(node)]
    i = of.edge_ids.index(f_id) + 1
    if i == 1:
        raise CertificationError("larger-label edge is the inward face edge")

    non_tree = e_id if f_id in tree else f_id
    u, w = g.edges[non_tree]
    cycle = set(_tree_path_edges(g, tree, u, w)) | {non_tree}

    if f_id in tree:
        j = next(k for k in range(1, len(of.edge_ids) + 1)
                 if e_id in lobe(osd, of, k))
        if j >= i:
            raise CertificationError("smaller edge not in a lobe before the larger one")
        d_id = of.edge_ids[j - 1]
    else:
        # the cycle enters f's face corner through the lobe just before f
        corner = of.corner(i)
        cands = [c for c in cycle
                 if c != f_id and corner in g.edges[c]]
        if len(cands) != 1:
            raise CertificationError(
                f"expected one cycle edge at the corner, got {sorted(cands)}")
        d_id = cands[0]
        if d_id not in lobe(osd, of, i - 1):
            raise CertificationError("corner cycle edge escapes the previous lobe")

    ld = labeling.label(d_id)
    if ld >= lf:
        raise CertificationError("replacement label is not smaller")
    new_tree = tree ^ {d_id, f_id}
    if not g.is_spanning_tree(new_tree):
        raise CertificationError("replacement exchange is not valid")
    du, dv = g.edges[d_id]
    fu, fw = g.edges[f_id]
    shares_vertex = len({du, dv} & {fu, fw}) > 0
    shares_face = bool(set(osd.emb.faces_of_edge(d_id)) & set(osd.emb.faces_of_edge(f_id)))
    if not (shares_vertex or shares_face):
        raise CertificationError("replacement exchange is neither pivot nor face")
    return (ld, lf)
