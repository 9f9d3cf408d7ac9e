"""Outerplane multigraphs: parsing, circle embeddings, face tracing, blocks.

Conventions used by the whole package:

* Vertices of an embedded graph sit on a circle in the counterclockwise
  (ccw) order given by ``outer_order``, and every edge is drawn inside
  the circle.  Parallel edges are drawn as nested arcs; at the endpoint
  with the smaller outer position the arcs appear in ascending edge-id
  order in the ccw rotation, and in descending order at the other end.
* ``rotation[v]`` lists the non-loop edges at ``v`` in ccw order around
  ``v``.  Because all neighbours lie on the circle, that order is simply
  increasing circular distance from ``v``'s position.
* Faces are traced so that the face interior lies on the left of its
  darts.  Inner faces therefore come out with ccw boundaries, while the
  outer face walks the boundary clockwise.
* Loops are accepted, flagged, and excluded from rotations, faces, and
  everything built on top of them.

A dart is a directed edge end, written ``(edge_id, tail_vertex)``; the
head is the other endpoint of the edge.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EmbeddingError, GraphError, ParseError


@dataclass(frozen=True)
class MultiGraph:
    """Undirected multigraph.  Edges are identified by their position in
    ``edges``, so parallel edges and loops stay distinct objects."""

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((int(u), int(v)) for u, v in self.edges))
        for e, (u, v) in enumerate(self.edges):
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge {e} endpoint out of range: ({u}, {v})")

    @property
    def m(self) -> int:
        return len(self.edges)

    def is_loop(self, e: int) -> bool:
        u, v = self.edges[e]
        return u == v

    def loop_edges(self) -> tuple[int, ...]:
        return tuple(e for e in range(self.m) if self.is_loop(e))

    def other_end(self, e: int, v: int) -> int:
        u, w = self.edges[e]
        if v == u:
            return w
        if v == w:
            return u
        raise GraphError(f"vertex {v} is not an endpoint of edge {e}")

    def adjacency(self) -> list[list[tuple[int, int]]]:
        """Per vertex, the incident non-loop edges as (edge_id, other_end)."""
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for e, (u, v) in enumerate(self.edges):
            if u != v:
                adj[u].append((e, v))
                adj[v].append((e, u))
        return adj

    def degree(self, v: int) -> int:
        """Number of non-loop edge ends at v."""
        return sum(1 for u, w in self.edges if u != w and (u == v or w == v))

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        adj = self.adjacency()
        seen = [False] * self.n
        seen[0] = True
        stack = [0]
        while stack:
            v = stack.pop()
            for _, w in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        return all(seen)

    def is_spanning_tree(self, edge_ids) -> bool:
        """True iff the given edge ids form a spanning tree of the graph."""
        ids = list(edge_ids)
        if len(ids) != self.n - 1 or len(set(ids)) != len(ids):
            return False
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in ids:
            u, v = self.edges[e]
            if u == v:
                return False
            ru, rv = find(u), find(v)
            if ru == rv:
                return False
            parent[ru] = rv
        return True


@dataclass(frozen=True)
class EdgeLabeling:
    """Bijection between edge ids and labels 1..m.

    ``label_of[e]`` is the label of edge ``e``; ``edge_of[k-1]`` is the
    edge carrying label ``k``.
    """

    label_of: tuple[int, ...]

    def __post_init__(self):
        m = len(self.label_of)
        if sorted(self.label_of) != list(range(1, m + 1)):
            raise GraphError("labeling is not a bijection onto 1..m")
        edge_of = [0] * m
        for e, lab in enumerate(self.label_of):
            edge_of[lab - 1] = e
        object.__setattr__(self, "edge_of", tuple(edge_of))

    @property
    def m(self) -> int:
        return len(self.label_of)

    def label(self, e: int) -> int:
        return self.label_of[e]

    def edge(self, lab: int) -> int:
        return self.edge_of[lab - 1]

    @classmethod
    def identity(cls, m: int) -> "EdgeLabeling":
        return cls(tuple(range(1, m + 1)))

    @classmethod
    def shuffled(cls, m: int, rng) -> "EdgeLabeling":
        labels = list(range(1, m + 1))
        rng.shuffle(labels)
        return cls(tuple(labels))


@dataclass(frozen=True)
class ParsedGraph:
    graph: MultiGraph
    outer: tuple[int, ...] | None
    directed: bool


def parse_graph(text: str) -> ParsedGraph:
    """Parse edge-list text.

    Format: first significant line ``n m``, then m lines ``u v`` with
    0-based endpoints.  Before the edge lines two optional header lines
    are recognised: ``directed`` and ``outer: v0 v1 ... v_{n-1}``.
    ``#`` starts a comment; blank lines are ignored.
    """
    graph_line = None
    outer = None
    directed = False
    edges: list[tuple[int, int]] = []
    n = m = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if graph_line is None:
            parts = line.split()
            if len(parts) != 2:
                raise ParseError("expected header 'n m'", lineno)
            try:
                n, m = int(parts[0]), int(parts[1])
            except ValueError:
                raise ParseError("expected integers in header 'n m'", lineno)
            if n < 0 or m < 0:
                raise ParseError("n and m must be nonnegative", lineno)
            graph_line = lineno
            continue
        if line == "directed":
            if edges:
                raise ParseError("'directed' must precede the edge lines", lineno)
            directed = True
            continue
        if line.startswith("outer:"):
            if edges:
                raise ParseError("'outer:' must precede the edge lines", lineno)
            try:
                outer = tuple(int(t) for t in line[len("outer:"):].split())
            except ValueError:
                raise ParseError("bad vertex in outer order", lineno)
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected edge line 'u v', got {line!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError("edge endpoints must be integers", lineno)
        if len(edges) >= m:
            raise ParseError("more edge lines than declared by header", lineno)
        edges.append((u, v))
    if graph_line is None:
        raise ParseError("empty input, expected header 'n m'")
    if len(edges) != m:
        raise ParseError(f"declared {m} edges but found {len(edges)}")
    try:
        g = MultiGraph(n, tuple(edges))
    except GraphError as exc:
        raise ParseError(str(exc))
    if outer is not None and sorted(outer) != list(range(n)):
        raise ParseError("outer order must list every vertex exactly once")
    return ParsedGraph(g, outer, directed)


@dataclass(frozen=True)
class Face:
    """One face of an embedding.  ``darts`` walks the boundary with the
    face interior on the left; each dart is (edge_id, tail_vertex)."""

    id: int
    darts: tuple[tuple[int, int], ...]
    is_outer: bool

    @property
    def length(self) -> int:
        return len(self.darts)

    @property
    def edge_ids(self) -> tuple[int, ...]:
        return tuple(e for e, _ in self.darts)


class EmbeddedGraph:
    """An outerplane embedding of a connected multigraph.

    Built by :func:`build_embedding`; carries the rotation system, the
    traced faces, and dart-to-face lookups.
    """

    def __init__(self, graph: MultiGraph, outer_order: tuple[int, ...],
                 rotation: tuple[tuple[int, ...], ...], faces: tuple[Face, ...],
                 outer_face: int, left_face: dict[tuple[int, int], int]):
        self.graph = graph
        self.outer_order = outer_order
        self.rotation = rotation
        self.faces = faces
        self.outer_face = outer_face
        self.left_face = left_face
        self.loop_edges = graph.loop_edges()
        pos = [0] * graph.n
        for i, v in enumerate(outer_order):
            pos[v] = i
        self._pos = tuple(pos)
        # per edge, the ids of the faces its two sides bound (once for loops: none)
        face_sets: list[tuple[int, ...]] = []
        for e, (u, v) in enumerate(graph.edges):
            if u == v:
                face_sets.append(())
            else:
                face_sets.append((left_face[(e, u)], left_face[(e, v)]))
        self._edge_faces = tuple(face_sets)

    def inner_faces(self) -> tuple[Face, ...]:
        return tuple(f for f in self.faces if not f.is_outer)

    def faces_of_edge(self, e: int) -> tuple[int, ...]:
        return self._edge_faces[e]

    def is_outer_edge(self, e: int) -> bool:
        return self.outer_face in self._edge_faces[e]

    def outer_walk(self) -> tuple[tuple[int, int], ...]:
        return self.faces[self.outer_face].darts

    def position(self, v: int) -> int:
        return self._pos[v]


def _check_crossings(g: MultiGraph, pos: list[int]) -> None:
    n = g.n
    chords = []
    for e, (u, v) in enumerate(g.edges):
        if u == v:
            continue
        a, b = pos[u], pos[v]
        chords.append((e, a, b))
    for i in range(len(chords)):
        e1, a, b = chords[i]
        span = (b - a) % n
        for j in range(i + 1, len(chords)):
            e2, c, d = chords[j]
            if c in (a, b) or d in (a, b):
                continue
            cin = 0 < (c - a) % n < span
            din = 0 < (d - a) % n < span
            if cin != din:
                raise EmbeddingError(
                    f"edges {e1} {g.edges[e1]} and {e2} {g.edges[e2]} cross "
                    f"under the given outer order")


def build_embedding(g: MultiGraph, outer_order) -> EmbeddedGraph:
    """Embed ``g`` with all vertices on the outer face in the given ccw order.

    Raises EmbeddingError if two edges would cross, GraphError if the
    graph is disconnected or the order is not a permutation of the
    vertices.
    """
    outer_order = tuple(outer_order)
    if sorted(outer_order) != list(range(g.n)):
        raise GraphError("outer order must list every vertex exactly once")
    if not g.is_connected():
        raise GraphError("graph is disconnected; embed components separately")
    pos = [0] * g.n
    for i, v in enumerate(outer_order):
        pos[v] = i
    _check_crossings(g, pos)
    n = g.n

    rotation: list[tuple[int, ...]] = []
    for v in range(n):
        ends = []
        for e, (a, b) in enumerate(g.edges):
            if a == b:
                continue
            if a == v or b == v:
                other = b if a == v else a
                # nested parallel arcs: ascending id at the low-position end
                nesting = e if pos[v] < pos[other] else -e
                ends.append(((pos[other] - pos[v]) % n, nesting, e))
        ends.sort()
        rotation.append(tuple(e for _, _, e in ends))

    # face tracing: successor of dart (e, t) is (f, head) where f precedes e
    # in the ccw rotation at head
    rot_index: dict[tuple[int, int], int] = {}
    for v in range(n):
        for i, e in enumerate(rotation[v]):
            rot_index[(e, v)] = i

    left_face: dict[tuple[int, int], int] = {}
    faces: list[Face] = []
    for e0, (u0, v0) in enumerate(g.edges):
        if u0 == v0:
            continue
        for t0 in (u0, v0):
            if (e0, t0) in left_face:
                continue
            fid = len(faces)
            walk = []
            e, t = e0, t0
            while (e, t) not in left_face:
                left_face[(e, t)] = fid
                walk.append((e, t))
                head = g.other_end(e, t)
                rot = rotation[head]
                idx = rot_index[(e, head)]
                e = rot[idx - 1]
                t = head
            faces.append(Face(fid, tuple(walk), False))

    if faces:
        # the outer face lies left of the last dart in the rotation at the
        # vertex of outer position 0 (that dart points most clockwise)
        v0 = outer_order[0]
        if not rotation[v0]:
            raise GraphError("vertex of outer position 0 has no non-loop edge")
        e_last = rotation[v0][-1]
        outer_id = left_face[(e_last, v0)]
        faces = [Face(f.id, f.darts, f.id == outer_id) for f in faces]
    else:
        # single vertex (possibly with loops): one outer face, empty boundary
        faces = [Face(0, (), True)]
        outer_id = 0

    nonloop = sum(1 for u, v in g.edges if u != v)
    if n - nonloop + len(faces) != 2:
        raise EmbeddingError("face count violates Euler's formula; embedding is broken")

    return EmbeddedGraph(g, outer_order, tuple(rotation), tuple(faces), outer_id, left_face)


def faces(emb: EmbeddedGraph) -> tuple[Face, ...]:
    """All faces of the embedding, the outer face flagged."""
    return emb.faces


def is_triangulation(emb: EmbeddedGraph, multi: bool = False) -> bool:
    """True iff every inner face is a triangle.

    With ``multi=True`` inner faces of length 2 (digons between parallel
    edges) are allowed as well, i.e. the test is length <= 3.
    """
    for f in emb.faces:
        if f.is_outer:
            continue
        if multi:
            if f.length > 3:
                return False
        else:
            if f.length != 3:
                return False
    return True


@dataclass(frozen=True)
class Block:
    """A biconnected component.  ``graph`` uses local vertex ids;
    ``vertices[i]`` and ``edge_ids[j]`` map back to the original graph."""

    graph: MultiGraph
    vertices: tuple[int, ...]
    edge_ids: tuple[int, ...]


def blocks(g: MultiGraph) -> list[Block]:
    """Biconnected components of ``g``.  Bridges become 2-vertex blocks;
    loops belong to no block.  Works per connected component."""
    adj = g.adjacency()
    disc = [0] * g.n
    low = [0] * g.n
    timer = [1]
    edge_stack: list[int] = []
    out: list[list[int]] = []

    def dfs(v: int, parent_edge: int) -> None:
        disc[v] = low[v] = timer[0]
        timer[0] += 1
        for e, w in adj[v]:
            if e == parent_edge:
                continue
            if disc[w] == 0:
                edge_stack.append(e)
                dfs(w, e)
                low[v] = min(low[v], low[w])
                if low[w] >= disc[v]:
                    comp = []
                    while True:
                        f = edge_stack.pop()
                        comp.append(f)
                        if f == e:
                            break
                    out.append(comp)
            elif disc[w] < disc[v]:
                edge_stack.append(e)
                low[v] = min(low[v], disc[w])

    import sys
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, g.n + 100))
    try:
        for v in range(g.n):
            if disc[v] == 0 and adj[v]:
                dfs(v, -1)
    finally:
        sys.setrecursionlimit(old)

    result = []
    for comp in out:
        comp_sorted = tuple(sorted(comp))
        verts = sorted({x for e in comp_sorted for x in g.edges[e]})
        local = {v: i for i, v in enumerate(verts)}
        ledges = tuple((local[g.edges[e][0]], local[g.edges[e][1]]) for e in comp_sorted)
        result.append(Block(MultiGraph(len(verts), ledges), tuple(verts), comp_sorted))
    return result
