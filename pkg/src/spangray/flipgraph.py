"""Flip graphs of spanning trees and arborescences, Hamilton search,
and the small-graph experiment sweeps.

The flip graph has one node per spanning tree and an edge for every
valid exchange; restrictions keep only exchanges of a given class.
Arborescence flip graphs connect arborescences differing in two arcs
with the same head.  The Hamilton solver is a deterministic
backtracker with a step budget, so "none" always means an exhaustive
search and "unknown" means the budget ran out.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass

from .counting import count_matrix_tree
from .embedgraph import EmbeddedGraph, MultiGraph, blocks, build_embedding
from .errors import CertificationError, GraphError
from .treegen import (Exchange, ExchangeClass, RESTRICTIONS, SpanningTree,
                      classify_exchange)


def enumerate_spanning_trees(g: MultiGraph) -> tuple[SpanningTree, ...]:
    """All spanning trees by recursive inclusion/exclusion over edge
    ids, under the identity labeling (label = id + 1).  Deterministic
    lexicographic order."""
    if g.m > 24:
        raise GraphError("guarded to m <= 24; use greedy_listing for larger graphs")
    n, m = g.n, g.m
    if n == 1:
        return (SpanningTree(m, 0),)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    out = []

    def rec(i: int, picked: int, mask: int):
        if picked == n - 1:
            out.append(SpanningTree(m, mask))
            return
        if m - i < n - 1 - picked:
            return
        u, v = g.edges[i]
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            rec(i + 1, picked + 1, mask | (1 << i))
            parent[ru] = ru
        rec(i + 1, picked, mask)

    rec(0, 0, 0)
    return tuple(out)


@dataclass(frozen=True)
class Arborescence:
    """Arc set (bitmask over arc ids) spanning a digraph away from root."""

    m: int
    root: int
    mask: int

    def arcs(self) -> frozenset[int]:
        return frozenset(i for i in range(self.m) if self.mask >> i & 1)

    def chi(self) -> str:
        return "".join("1" if self.mask >> i & 1 else "0" for i in range(self.m))


class DiGraph:
    """Directed multigraph; arcs are (tail, head) pairs by id."""

    def __init__(self, n: int, arcs):
        self.n = n
        self.arcs = tuple((int(t), int(h)) for t, h in arcs)
        for t, h in self.arcs:
            if not (0 <= t < n and 0 <= h < n):
                raise GraphError("arc endpoint out of range")

    @property
    def m(self) -> int:
        return len(self.arcs)

    def underlying(self) -> MultiGraph:
        """Simple undirected graph on the same vertices (arc directions
        and multiplicities collapsed)."""
        pairs = sorted({(min(t, h), max(t, h)) for t, h in self.arcs if t != h})
        return MultiGraph(self.n, tuple(pairs))


def enumerate_arborescences(d: DiGraph, root: int) -> tuple[Arborescence, ...]:
    """All arborescences oriented away from the root: pick one in-arc
    per non-root vertex, keep the choices where everything is reachable."""
    if not 0 <= root < d.n:
        raise GraphError("root out of range")
    if d.n == 1:
        return (Arborescence(d.m, root, 0),)
    in_arcs = [[] for _ in range(d.n)]
    for i, (t, h) in enumerate(d.arcs):
        if t != h:
            in_arcs[h].append(i)
    choices = [in_arcs[v] for v in range(d.n) if v != root]
    if any(not c for c in choices):
        return ()
    total = 1
    for c in choices:
        total *= len(c)
        if total > 10 ** 6:
            raise GraphError("too many in-arc combinations; reduce the digraph")
    out = []
    for combo in itertools.product(*choices):
        head_of = {}
        for i in combo:
            head_of[d.arcs[i][1]] = i
        seen = {root}
        stack = [root]
        arcs_by_tail = {}
        for i in combo:
            arcs_by_tail.setdefault(d.arcs[i][0], []).append(i)
        while stack:
            x = stack.pop()
            for i in arcs_by_tail.get(x, ()):
                h = d.arcs[i][1]
                if h not in seen:
                    seen.add(h)
                    stack.append(h)
        if len(seen) == d.n:
            mask = 0
            for i in combo:
                mask |= 1 << i
            out.append(Arborescence(d.m, root, mask))
    return tuple(out)


@dataclass(frozen=True)
class FlipGraph:
    """Nodes are trees (or arborescences); edges are permitted exchanges,
    labeled by the exchanged pair (smaller label first)."""

    nodes: tuple
    restriction: str
    adjacency: tuple[tuple[int, ...], ...]
    edge_labels: tuple[tuple[int, int, tuple[int, int]], ...]

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        return len(self.edge_labels)


def _pair_exchange(a: int, b: int) -> tuple[int, int] | None:
    """Labels (smaller, larger) if masks a, b differ by one swap."""
    diff = a ^ b
    lo = diff & a
    hi = diff & b
    if bin(lo).count("1") == 1 and bin(hi).count("1") == 1:
        return tuple(sorted((lo.bit_length(), hi.bit_length())))
    return None


def build_flip_graph(g, restriction: str = "any") -> FlipGraph:
    """Flip graph of all spanning trees under the identity labeling.
    Face-based restrictions need an EmbeddedGraph."""
    if restriction not in RESTRICTIONS:
        raise GraphError(f"unknown restriction {restriction!r}")
    if isinstance(g, EmbeddedGraph):
        emb, graph = g, g.graph
    else:
        emb, graph = None, g
    if restriction not in ("any", "pivot") and emb is None:
        raise GraphError(f"restriction {restriction!r} needs an embedding")
    from .embedgraph import EdgeLabeling
    identity = EdgeLabeling.identity(graph.m)
    nodes = enumerate_spanning_trees(graph)
    adjacency = [[] for _ in nodes]
    labels = []
    for i in range(len(nodes)):
        for j in range(i + 1, len(nodes)):
            pair = _pair_exchange(nodes[i].mask, nodes[j].mask)
            if pair is None:
                continue
            if restriction != "any":
                ex = Exchange(removed=pair[0], added=pair[1])
                if emb is not None:
                    cls = classify_exchange(emb, identity, ex)
                else:
                    eu, ev = graph.edges[pair[0] - 1]
                    fu, fv = graph.edges[pair[1] - 1]
                    cls = ExchangeClass(len({eu, ev} & {fu, fv}) > 0, False, False)
                if not cls.matches(restriction):
                    continue
            adjacency[i].append(j)
            adjacency[j].append(i)
            labels.append((i, j, pair))
    return FlipGraph(nodes, restriction,
                     tuple(tuple(sorted(x)) for x in adjacency), tuple(labels))


def arborescence_flip_graph(d: DiGraph, root: int) -> FlipGraph:
    """Nodes are the arborescences from the root; edges swap two arcs
    with the same head."""
    nodes = enumerate_arborescences(d, root)
    adjacency = [[] for _ in nodes]
    labels = []
    for i in range(len(nodes)):
        for j in range(i + 1, len(nodes)):
            diff = nodes[i].mask ^ nodes[j].mask
            if bin(diff).count("1") != 2:
                continue
            a, b = [k for k in range(d.m) if diff >> k & 1]
            if d.arcs[a][1] != d.arcs[b][1]:
                continue
            adjacency[i].append(j)
            adjacency[j].append(i)
            labels.append((i, j, (a + 1, b + 1)))
    return FlipGraph(nodes, "arc-exchange",
                     tuple(tuple(sorted(x)) for x in adjacency), tuple(labels))


@dataclass(frozen=True)
class HamiltonResult:
    status: str  # found | none | unknown
    order: tuple[int, ...] | None
    steps: int


def hamilton_path(fg: FlipGraph, cycle: bool = False,
                  forced_endpoints: tuple[int, int] | None = None,
                  budget: int = 2 * 10 ** 6) -> HamiltonResult:
    """Deterministic backtracking search for a Hamilton path or cycle.

    The budget counts node expansions, so identical inputs always give
    identical outcomes.  A single-node flip graph counts as having a
    trivial path and a trivial cycle.
    """
    n = fg.node_count
    if n == 0:
        raise GraphError("empty flip graph")
    if n == 1:
        return HamiltonResult("found", (0,), 0)
    if cycle and n == 2:
        # a cycle would repeat the single flip edge
        return HamiltonResult("none", None, 0)
    adj = [0] * n
    for i, nbrs in enumerate(fg.adjacency):
        for j in nbrs:
            adj[i] |= 1 << j
    if cycle and forced_endpoints is not None:
        raise GraphError("forced endpoints only apply to path search")
    if forced_endpoints is not None:
        a, b = forced_endpoints
        if a == b or not (0 <= a < n and 0 <= b < n):
            raise GraphError("forced endpoints must be two distinct nodes")

    if cycle:
        starts = [0]
        target_back = True
    else:
        # path search: a virtual node adjacent to everything (or to the
        # two forced endpoints) turns it into a cycle search
        virtual = n
        if forced_endpoints is None:
            vadj = (1 << n) - 1
        else:
            a, b = forced_endpoints
            vadj = (1 << a) | (1 << b)
        adj.append(vadj)
        for i in range(n):
            if vadj >> i & 1:
                adj[i] |= 1 << virtual
        n += 1
        starts = [virtual]
        target_back = True

    start = starts[0]
    # small graphs: exhaustive backtracking first ("none" needs it);
    # large graphs: rotation-extension first, backtracking as fallback
    if n <= 24:
        status, order, steps = _backtrack_cycle(adj, n, start, budget)
        if status == "unknown" and steps < budget:
            order, extra = _posa_cycle(adj, n, budget - steps)
            steps += extra
            status = "found" if order is not None else "unknown"
    else:
        order, steps = _posa_cycle(adj, n, budget // 2)
        if order is not None:
            status = "found"
        else:
            status, order, extra = _backtrack_cycle(adj, n, start, budget - steps)
            steps += extra
    if status != "found":
        return HamiltonResult(status, None, steps)
    for a, b in zip(order, order[1:] + (order[0],)):
        if not adj[a] >> b & 1:
            raise CertificationError("hamilton search produced a bad cycle")
    if cycle:
        return HamiltonResult("found", order, steps)
    # rotate the virtual node out and unroll the cycle into a path
    k = order.index(n - 1)
    return HamiltonResult("found", order[k + 1:] + order[:k], steps)


def _backtrack_cycle(adj, n: int, start: int, budget: int):
    """Exhaustive DFS for a Hamilton cycle; "none" means the whole
    space was searched within the budget."""
    full = (1 << n) - 1
    steps = 0
    path = [start]
    visited = 1 << start
    iters = [iter(_ordered_candidates(adj, start, visited, n))]
    while iters:
        if steps >= budget:
            return "unknown", None, steps
        nxt = next(iters[-1], None)
        if nxt is None:
            iters.pop()
            visited ^= 1 << path.pop()
            continue
        steps += 1
        cur = nxt
        visited |= 1 << cur
        path.append(cur)
        if visited == full:
            if adj[cur] >> start & 1:
                return "found", tuple(path), steps
            visited ^= 1 << path.pop()
            continue
        if _prunable(adj, visited, cur, start, n, full):
            visited ^= 1 << path.pop()
            continue
        iters.append(iter(_ordered_candidates(adj, cur, visited, n)))
    return "none", None, steps


def _posa_cycle(adj, n: int, budget: int):
    """Rotation-extension heuristic for a Hamilton cycle.  Choices come
    from a fixed linear congruential generator, so runs are repeatable.
    Returns (order, steps) with order None when the budget runs out."""
    if budget <= 0:
        return None, 0
    mask64 = (1 << 64) - 1
    state = 0x9E3779B97F4A7C15

    def rnd(k: int) -> int:
        nonlocal state
        state = (state * 6364136223846793005 + 1442695040888963407) & mask64
        return (state >> 33) % k

    def bits_of(x: int):
        out = []
        while x:
            b = x & -x
            out.append(b.bit_length() - 1)
            x ^= b
        return out

    steps = 0
    start = 0
    path = [start]
    visited = 1 << start
    pos = [-1] * n
    pos[start] = 0
    while steps < budget:
        steps += 1
        h = path[-1]
        ext = adj[h] & ~visited
        if ext:
            cands = bits_of(ext)
            v = cands[rnd(len(cands))]
            pos[v] = len(path)
            path.append(v)
            visited |= 1 << v
            continue
        if len(path) == n and adj[h] >> start & 1:
            return tuple(path), steps
        rot = adj[h] & visited & ~(1 << h)
        if len(path) >= 2:
            rot &= ~(1 << path[-2])
        cands = bits_of(rot)
        if not cands:
            start = rnd(n)
            path = [start]
            visited = 1 << start
            pos[start] = 0
            continue
        v = cands[rnd(len(cands))]
        i = pos[v]
        path[i + 1:] = path[:i:-1]
        for j in range(i + 1, len(path)):
            pos[path[j]] = j
    return None, steps


def _ordered_candidates(adj, cur: int, visited: int, n: int):
    free = adj[cur] & ~visited
    cands = []
    x = free
    while x:
        b = x & -x
        i = b.bit_length() - 1
        cands.append((bin(adj[i] & ~visited).count("1"), i))
        x ^= b
    cands.sort()
    return [i for _, i in cands]


def _prunable(adj, visited: int, cur: int, start: int, n: int, full: int) -> bool:
    """Sound cut-offs only: the remaining route runs cur -> all free
    nodes -> start, so every free node must be floodable from cur
    through free nodes and must keep two usable links."""
    free = full & ~visited
    if free == 0:
        return False
    comp = 0
    frontier = adj[cur] & free
    comp = frontier
    while frontier:
        nxt = 0
        x = frontier
        while x:
            b = x & -x
            i = b.bit_length() - 1
            nxt |= adj[i] & free & ~comp
            x ^= b
        frontier = nxt & ~comp
        comp |= nxt
    if comp != free:
        return True
    allowed = free | (1 << cur) | (1 << start)
    x = free
    while x:
        b = x & -x
        i = b.bit_length() - 1
        links = adj[i] & allowed
        if links & (links - 1) == 0:
            # fewer than two links: the node cannot be passed through
            return True
        x ^= b
    return False


def find_outerplane_order(g: MultiGraph) -> tuple[int, ...] | None:
    """A circular vertex order with no two edges interleaving, if one
    exists (i.e. an outerplane embedding witness)."""
    if not g.is_connected():
        return None
    n = g.n
    if n <= 3:
        return tuple(range(n))
    for rest in itertools.permutations(range(1, n)):
        order = (0,) + rest
        pos = [0] * n
        for i, v in enumerate(order):
            pos[v] = i
        if _interleave_free(g, pos, n):
            return order
    return None


def _interleave_free(g: MultiGraph, pos, n: int) -> bool:
    keyed = []
    for u, v in g.edges:
        if u != v:
            a, b = pos[u], pos[v]
            keyed.append((min(a, b), max(a, b)))
    for i in range(len(keyed)):
        a, b = keyed[i]
        for j in range(i + 1, len(keyed)):
            c, d = keyed[j]
            if len({a, b, c, d}) < 4:
                continue
            if (a < c < b) != (a < d < b):
                return False
    return True


def enumerate_small_graphs(n: int, filter: str = "all", dedup: bool = True):
    """All simple graphs on n labeled vertices (edge subsets of the
    complete graph), optionally filtered and deduplicated by the
    minimum encoding over all vertex permutations."""
    if n > 7:
        raise GraphError("guarded to n <= 7")
    if filter not in ("all", "2-connected", "outerplane"):
        raise GraphError(f"unknown filter {filter!r}")
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    perms = list(itertools.permutations(range(n))) if dedup else None
    seen = set()
    for bits in range(1 << len(pairs)):
        edges = tuple(pairs[k] for k in range(len(pairs)) if bits >> k & 1)
        g = MultiGraph(n, edges)
        if filter == "2-connected":
            if n >= 3:
                bl = blocks(g)
                if len(bl) != 1 or bl[0].graph.n != n:
                    continue
            elif g.m == 0 or not g.is_connected():
                continue
        elif filter == "outerplane":
            if not g.is_connected() or find_outerplane_order(g) is None:
                continue
        if dedup:
            canon = min(tuple(sorted((p[u], p[v]) if p[u] <= p[v] else (p[v], p[u])
                              for u, v in edges)) for p in perms)
            if canon in seen:
                continue
            seen.add(canon)
        yield g


def enumerate_small_digraphs(n: int, dedup: bool = True):
    """All digraphs on n labeled vertices without loops or repeated
    arcs (opposite arc pairs allowed), underlying graph 2-connected."""
    if n > 5:
        raise GraphError("guarded to n <= 5")
    arcs = [(i, j) for i in range(n) for j in range(n) if i != j]
    perms = list(itertools.permutations(range(n))) if dedup else None
    seen = set()
    for bits in range(1 << len(arcs)):
        chosen = tuple(arcs[k] for k in range(len(arcs)) if bits >> k & 1)
        d = DiGraph(n, chosen)
        und = d.underlying()
        if n >= 3:
            bl = blocks(und)
            if len(bl) != 1 or bl[0].graph.n != n:
                continue
        elif und.m == 0:
            continue
        if dedup:
            canon = min(tuple(sorted((p[t], p[h]) for t, h in chosen))
                        for p in perms)
            if canon in seen:
                continue
            seen.add(canon)
        yield d


@dataclass(frozen=True)
class ExperimentRecord:
    ident: str
    result: str  # cyclic | path | none | unknown
    millis: int

    def line(self, with_timings: bool = True) -> str:
        ms = self.millis if with_timings else 0
        return f"graph={self.ident} result={self.result} time={ms}"


@dataclass(frozen=True)
class ExperimentReport:
    kind: str
    records: tuple[ExperimentRecord, ...]
    discrepancies: tuple[str, ...]

    def render_lines(self, with_timings: bool = True):
        yield f"# experiment={self.kind} graphs={len(self.records)}"
        for r in self.records:
            yield r.line(with_timings)
        counts = {}
        for r in self.records:
            counts[r.result] = counts.get(r.result, 0) + 1
        summary = " ".join(f"{k}={counts[k]}" for k in sorted(counts))
        yield f"# summary {summary} discrepancies={len(self.discrepancies)}"


def _validate_certificate(fg: FlipGraph, order, cycle: bool) -> None:
    byset = {frozenset((i, j)) for i, j, _ in fg.edge_labels}
    seq = list(order) + ([order[0]] if cycle and len(order) > 1 else [])
    if sorted(order) != list(range(fg.node_count)):
        raise CertificationError("certificate does not visit every node once")
    for a, b in zip(seq, seq[1:]):
        if frozenset((a, b)) not in byset:
            raise CertificationError(f"certificate step {a}-{b} is not an edge")


def run_experiment(kind: str, max_n: int, budget: int = 2 * 10 ** 6,
                   on_record=None) -> ExperimentReport:
    """One of the three sweeps: "pivot" (2-connected simple graphs,
    pivot-restricted, Hamilton cycle), "paf" (connected outerplane
    simple graphs, paf-restricted, Hamilton cycle), "arborescence"
    (digraphs with 2-connected underlying graph, every root, Hamilton
    path).  A "none" result is a discrepancy with the expected claims.
    ``on_record`` is called with each ExperimentRecord as it is made.
    """
    records = []
    discrepancies = []

    def note(ident: str, result: str, t0: float):
        ms = int((time.perf_counter() - t0) * 1000)
        rec = ExperimentRecord(ident, result, ms)
        records.append(rec)
        if result == "none":
            discrepancies.append(ident)
        if on_record is not None:
            on_record(rec)

    if kind == "pivot" or kind == "paf":
        if max_n > 6:
            raise GraphError("experiment guarded to n <= 6")
        idx = 0
        for n in range(2, max_n + 1):
            flt = "2-connected" if kind == "pivot" else "outerplane"
            for g in enumerate_small_graphs(n, flt):
                t0 = time.perf_counter()
                if kind == "paf":
                    order = find_outerplane_order(g)
                    fg = build_flip_graph(build_embedding(g, order), "paf")
                else:
                    fg = build_flip_graph(g, "pivot")
                res = hamilton_path(fg, cycle=True, budget=budget)
                if res.status == "found":
                    _validate_certificate(fg, res.order, cycle=True)
                    note(str(idx), "cyclic", t0)
                else:
                    note(str(idx), res.status, t0)
                idx += 1
    elif kind == "arborescence":
        if max_n > 5:
            raise GraphError("experiment guarded to n <= 5")
        idx = 0
        for n in range(2, max_n + 1):
            for d in enumerate_small_digraphs(n):
                for root in range(n):
                    t0 = time.perf_counter()
                    arbs = enumerate_arborescences(d, root)
                    if not arbs:
                        continue
                    fg = arborescence_flip_graph(d, root)
                    res = hamilton_path(fg, cycle=False, budget=budget)
                    if res.status == "found":
                        _validate_certificate(fg, res.order, cycle=False)
                        note(f"{idx}r{root}", "path", t0)
                    else:
                        note(f"{idx}r{root}", res.status, t0)
                idx += 1
    else:
        raise GraphError(f"unknown experiment {kind!r}")
    return ExperimentReport(kind, tuple(records), tuple(discrepancies))


def to_dot(fg: FlipGraph) -> str:
    out = ["graph flip {"]
    for i, t in enumerate(fg.nodes):
        out.append(f'  t{i} [label="{t.chi()}"];')
    for i, j, (a, b) in fg.edge_labels:
        out.append(f'  t{i} -- t{j} [label="{{{a},{b}}}"];')
    out.append("}")
    return "\n".join(out)


def to_text(fg: FlipGraph) -> str:
    out = [f"nodes={fg.node_count} edges={fg.edge_count} restriction={fg.restriction}"]
    for i, t in enumerate(fg.nodes):
        out.append(f"{i}: {t.chi()}")
    for i, j, (a, b) in fg.edge_labels:
        out.append(f"{i} {j} {{{a},{b}}}")
    return "\n".join(out)
