"""Greedy generation of spanning-tree Gray codes.

The generator keeps a set of visited trees and repeatedly applies, among
all edge exchanges that lead to an unvisited tree, one that minimizes
the larger of the two edge labels; a tie-breaking rule picks among the
remaining candidates, which always share that larger edge.  Run this
way, the listing visits every spanning tree exactly once and is genlex
on the characteristic vectors (all trees sharing a suffix appear
consecutively), for every labeling, initial tree, and tie-breaking
rule.  With a dual-tree labeling of an outerplane graph, preferring
pivot exchanges (triangulations) or pivot-or-face exchanges (general
case) in ties yields Gray codes restricted to those exchange classes.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import counting
from .dualtree import dual_tree_labeling, orient_split_dual, split_dual
from .embedgraph import EdgeLabeling, EmbeddedGraph, MultiGraph
from .errors import CertificationError, GraphError


@dataclass(frozen=True)
class SpanningTree:
    """A spanning tree as a bitmask over edge labels; bit l-1 holds
    label l, so chi() prints label 1 leftmost."""

    m: int
    mask: int

    def labels(self) -> frozenset[int]:
        return frozenset(l for l in range(1, self.m + 1) if self.mask >> (l - 1) & 1)

    def chi(self) -> str:
        return "".join("1" if self.mask >> l & 1 else "0" for l in range(self.m))


@dataclass(frozen=True)
class Exchange:
    """One exchange step: the label leaving the tree and the one entering."""

    removed: int
    added: int

    @property
    def larger(self) -> int:
        return max(self.removed, self.added)

    @property
    def smaller(self) -> int:
        return min(self.removed, self.added)

    def pair(self) -> tuple[int, int]:
        return (self.smaller, self.larger)


@dataclass(frozen=True)
class ExchangeClass:
    """Classification flags of an exchange: common endpoint (pivot),
    common face with the outer face counted (face), common inner face."""

    pivot: bool
    face: bool
    face_inner: bool

    @property
    def paf(self) -> bool:
        return self.pivot and self.face

    @property
    def pof(self) -> bool:
        return self.pivot or self.face

    def matches(self, kind: str) -> bool:
        if kind == "any":
            return True
        if kind in ("pivot", "face", "face_inner", "paf", "pof"):
            return bool(getattr(self, kind))
        raise GraphError(f"unknown exchange class {kind!r}")


RESTRICTIONS = ("any", "pivot", "face", "face_inner", "paf", "pof")


def spanning_tree_from_labels(g: MultiGraph, labeling: EdgeLabeling, labels) -> SpanningTree:
    labels = set(labels)
    if not all(1 <= l <= g.m for l in labels):
        raise GraphError("labels out of range")
    ids = [labeling.edge(l) for l in labels]
    if not g.is_spanning_tree(ids):
        raise GraphError(f"labels {sorted(labels)} do not form a spanning tree")
    mask = 0
    for l in labels:
        mask |= 1 << (l - 1)
    return SpanningTree(g.m, mask)


def is_spanning_tree(g: MultiGraph, bits) -> bool:
    """bits: iterable of 0/1 per label position under the identity
    labeling, or a SpanningTree."""
    if isinstance(bits, SpanningTree):
        ids = [l - 1 for l in bits.labels()]
    else:
        bits = list(bits)
        if len(bits) != g.m:
            raise GraphError(f"expected {g.m} bits, got {len(bits)}")
        ids = [i for i, b in enumerate(bits) if b]
    return g.is_spanning_tree(ids)


def kruskal_tree(g: MultiGraph, labeling: EdgeLabeling) -> SpanningTree:
    """The spanning tree greedily built from the smallest labels."""
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    mask = 0
    picked = 0
    for l in range(1, g.m + 1):
        u, v = g.edges[labeling.edge(l)]
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            mask |= 1 << (l - 1)
            picked += 1
    if picked != g.n - 1:
        raise GraphError("graph is not connected; it has no spanning tree")
    return SpanningTree(g.m, mask)


def random_spanning_tree(g: MultiGraph, labeling: EdgeLabeling,
                         rng: random.Random) -> SpanningTree:
    order = list(range(1, g.m + 1))
    rng.shuffle(order)
    shuffled = EdgeLabeling(tuple(order[labeling.label(e) - 1] for e in range(g.m)))
    # kruskal over the shuffled order, then map back to real labels
    t = kruskal_tree(g, shuffled)
    mask = 0
    for l in t.labels():
        mask |= 1 << (labeling.label(shuffled.edge(l)) - 1)
    return SpanningTree(g.m, mask)


def _tree_adjacency(g: MultiGraph, labeling: EdgeLabeling, mask: int):
    adj = [[] for _ in range(g.n)]
    for l in range(1, g.m + 1):
        if mask >> (l - 1) & 1:
            u, v = g.edges[labeling.edge(l)]
            adj[u].append((v, l))
            adj[v].append((u, l))
    return adj


def _parents(n: int, adj) -> tuple[list, list, list]:
    parent_v = [-1] * n
    parent_l = [0] * n
    depth = [0] * n
    seen = [False] * n
    seen[0] = True
    stack = [0]
    while stack:
        x = stack.pop()
        for y, l in adj[x]:
            if not seen[y]:
                seen[y] = True
                parent_v[y] = x
                parent_l[y] = l
                depth[y] = depth[x] + 1
                stack.append(y)
    return parent_v, parent_l, depth


def _path_labels(u: int, v: int, parent_v, parent_l, depth) -> list[int]:
    out = []
    while depth[u] > depth[v]:
        out.append(parent_l[u])
        u = parent_v[u]
    while depth[v] > depth[u]:
        out.append(parent_l[v])
        v = parent_v[v]
    while u != v:
        out.append(parent_l[u])
        out.append(parent_l[v])
        u, v = parent_v[u], parent_v[v]
    return out


def valid_exchanges(g: MultiGraph, labeling: EdgeLabeling,
                    tree: SpanningTree) -> tuple[Exchange, ...]:
    """All valid exchanges of the tree, sorted by (larger, smaller)."""
    mask = tree.mask
    adj = _tree_adjacency(g, labeling, mask)
    parent_v, parent_l, depth = _parents(g.n, adj)
    out = []
    for f in range(1, g.m + 1):
        fe = labeling.edge(f)
        if mask >> (f - 1) & 1 or g.is_loop(fe):
            continue
        u, v = g.edges[fe]
        for e in _path_labels(u, v, parent_v, parent_l, depth):
            out.append(Exchange(removed=e, added=f))
    out.sort(key=lambda x: (x.larger, x.smaller))
    return tuple(out)


def classify_exchange(emb: EmbeddedGraph, labeling: EdgeLabeling,
                      exchange: Exchange) -> ExchangeClass:
    g = emb.graph
    a = labeling.edge(exchange.removed)
    b = labeling.edge(exchange.added)
    au, av = g.edges[a]
    bu, bv = g.edges[b]
    pivot = len({au, av} & {bu, bv}) > 0
    fa, fb = set(emb.faces_of_edge(a)), set(emb.faces_of_edge(b))
    common = fa & fb
    face = bool(common)
    face_inner = any(f != emb.outer_face for f in common)
    return ExchangeClass(pivot, face, face_inner)


@dataclass(frozen=True)
class TieContext:
    """What a tie-breaking rule gets to look at: the current tree and
    the candidate exchanges, all sharing the same larger label, sorted
    by increasing smaller label."""

    graph: MultiGraph
    labeling: EdgeLabeling
    embedding: EmbeddedGraph | None
    tree_mask: int
    candidates: tuple[Exchange, ...]

    def classify(self, exchange: Exchange) -> ExchangeClass:
        if self.embedding is None:
            raise GraphError("class-based tie-breaking needs an embedding")
        return classify_exchange(self.embedding, self.labeling, exchange)


def tiebreak_closest(ctx: TieContext) -> Exchange:
    """Pick the candidate with the maximum smaller label."""
    if not ctx.candidates:
        raise GraphError("empty tie set")
    return ctx.candidates[-1]


def tiebreak_prefer(kind: str, fallback=tiebreak_closest):
    """Rule that keeps only candidates of the given exchange class and
    applies the fallback among them.  An empty preferred set raises
    CertificationError: with a dual-tree labeling the theory guarantees
    a candidate of the preferred class in every tie."""
    if kind not in ("pivot", "face", "face_inner", "paf", "pof"):
        raise GraphError(f"unknown exchange class {kind!r}")

    def rule(ctx: TieContext) -> Exchange:
        if kind == "pivot":
            g = ctx.graph
            kept = []
            for x in ctx.candidates:
                au, av = g.edges[ctx.labeling.edge(x.removed)]
                bu, bv = g.edges[ctx.labeling.edge(x.added)]
                if len({au, av} & {bu, bv}) > 0:
                    kept.append(x)
        else:
            kept = [x for x in ctx.candidates if ctx.classify(x).matches(kind)]
        if not kept:
            raise CertificationError(
                f"no {kind} exchange in tie set {[x.pair() for x in ctx.candidates]}")
        return fallback(TieContext(ctx.graph, ctx.labeling, ctx.embedding,
                                   ctx.tree_mask, tuple(kept)))

    rule.kind = kind
    return rule


def tiebreak_random(rng: random.Random):
    def rule(ctx: TieContext) -> Exchange:
        if not ctx.candidates:
            raise GraphError("empty tie set")
        return ctx.candidates[rng.randrange(len(ctx.candidates))]

    return rule


@dataclass(frozen=True)
class Listing:
    graph: MultiGraph
    labeling: EdgeLabeling
    embedding: EmbeddedGraph | None
    trees: tuple[SpanningTree, ...]
    steps: tuple[tuple[Exchange, ExchangeClass | None], ...]
    truncated: bool
    complete: bool | None

    @property
    def initial(self) -> SpanningTree:
        return self.trees[0]

    def masks(self) -> list[int]:
        return [t.mask for t in self.trees]

    def render_lines(self):
        for i, t in enumerate(self.trees):
            yield t.chi()
            if i < len(self.steps):
                ex, cls = self.steps[i]
                line = f"- {ex.removed} + {ex.added}"
                if cls is not None:
                    flags = [k for k in ("pivot", "face", "face_inner")
                             if getattr(cls, k)]
                    line += " [" + ",".join(flags) + "]"
                yield line


def greedy_listing(g: MultiGraph, labeling: EdgeLabeling | None = None,
                   embedding: EmbeddedGraph | None = None,
                   initial: SpanningTree | None = None,
                   tiebreak=None, max_trees: int | None = None,
                   check: bool = True, classify: bool | None = None,
                   expected_count: int | None = None) -> Listing:
    """Run the greedy exchange walk until no unvisited tree is reachable.

    With check=True (and no truncation) the result is certified: the
    number of trees must match an independent count and the chi
    sequence must be genlex, else CertificationError.
    """
    if labeling is None:
        if embedding is not None:
            labeling = dual_tree_labeling(
                orient_split_dual(split_dual(embedding)))
        else:
            labeling = EdgeLabeling.identity(g.m)
    if labeling.m != g.m:
        raise GraphError("labeling size does not match the graph")
    if classify is None:
        classify = embedding is not None
    if classify and embedding is None:
        raise GraphError("classification needs an embedding")
    if tiebreak is None:
        tiebreak = tiebreak_closest
    if initial is None:
        initial = kruskal_tree(g, labeling)
    elif not isinstance(initial, SpanningTree):
        initial = spanning_tree_from_labels(g, labeling, initial)
    else:
        spanning_tree_from_labels(g, labeling, initial.labels())

    n, m = g.n, g.m
    ends = [None] * (m + 1)
    loop = [False] * (m + 1)
    for l in range(1, m + 1):
        e = labeling.edge(l)
        ends[l] = g.edges[e]
        loop[l] = g.is_loop(e)
    bit = [0] + [1 << (l - 1) for l in range(1, m + 1)]

    mask = initial.mask
    visited = {mask}
    trees = [mask]
    steps: list[tuple[Exchange, ExchangeClass | None]] = []
    adj = _tree_adjacency(g, labeling, mask)
    parent_v, parent_l, depth = _parents(n, adj)

    while max_trees is None or len(trees) < max_trees:
        chosen = None
        for f in range(1, m + 1):
            if loop[f]:
                continue
            fbit = bit[f]
            cands: list[Exchange] = []
            if mask & fbit:
                # removing f splits the tree; partners are the smaller
                # non-tree labels crossing the split
                u, v = ends[f]
                child = u if parent_l[u] == f else v
                side = bytearray(n)
                side[child] = 1
                stack = [child]
                while stack:
                    x = stack.pop()
                    for y, l in adj[x]:
                        if l != f and not side[y]:
                            side[y] = 1
                            stack.append(y)
                for e in range(1, f):
                    if mask & bit[e] or loop[e]:
                        continue
                    eu, ev = ends[e]
                    if side[eu] != side[ev]:
                        if mask ^ fbit ^ bit[e] not in visited:
                            cands.append(Exchange(removed=f, added=e))
            else:
                # adding f closes a cycle along the tree path between
                # its endpoints; partners are the smaller path labels
                u, v = ends[f]
                path = _path_labels(u, v, parent_v, parent_l, depth)
                smaller = sorted(e for e in path if e < f)
                for e in smaller:
                    if mask ^ fbit ^ bit[e] not in visited:
                        cands.append(Exchange(removed=e, added=f))
            if cands:
                ctx = TieContext(g, labeling, embedding, mask, tuple(cands))
                chosen = tiebreak(ctx)
                if chosen not in cands:
                    raise GraphError("tie-breaking rule left the tie set")
                if chosen.larger != f:
                    raise CertificationError("tie set mixes larger labels")
                break
        if chosen is None:
            break
        mask = mask ^ bit[chosen.removed] ^ bit[chosen.added]
        if mask in visited:
            raise CertificationError("exchange revisited a tree")
        visited.add(mask)
        trees.append(mask)
        cls = classify_exchange(embedding, labeling, chosen) if classify else None
        steps.append((chosen, cls))
        adj = _tree_adjacency(g, labeling, mask)
        parent_v, parent_l, depth = _parents(n, adj)

    truncated = max_trees is not None and len(trees) >= max_trees
    complete: bool | None = None
    if check:
        if not verify_genlex([SpanningTree(m, x) for x in trees]):
            raise CertificationError("listing is not genlex")
        if not truncated:
            want = expected_count if expected_count is not None \
                else counting.count_matrix_tree(g)
            if len(trees) != want:
                raise CertificationError(
                    f"generated {len(trees)} trees, independent count says {want}")
            complete = True
    elif not truncated and expected_count is not None:
        complete = len(trees) == expected_count

    return Listing(g, labeling, embedding,
                   tuple(SpanningTree(m, x) for x in trees),
                   tuple(steps), truncated, complete)


def verify_genlex(listing) -> bool:
    """True iff all bitstrings sharing a suffix appear consecutively.

    Recursive form: the last-coordinate column must read 0^a 1^b or
    1^a 0^b, and each constant block must be genlex one coordinate
    shorter.  Accepts a Listing, SpanningTree sequence, or mask list
    plus uniform m.
    """
    if isinstance(listing, Listing):
        masks, m = listing.masks(), listing.graph.m
    else:
        items = list(listing)
        if not items:
            return True
        if isinstance(items[0], SpanningTree):
            m = items[0].m
            masks = [t.mask for t in items]
        else:
            raise GraphError("need SpanningTree items; use verify_genlex_masks")
    return verify_genlex_masks(masks, m)


def verify_genlex_masks(masks, m: int) -> bool:
    spans = [(0, len(masks))]
    for pos in range(m - 1, -1, -1):
        b = 1 << pos
        nxt = []
        for lo, hi in spans:
            if hi - lo <= 1:
                continue
            flips = [i for i in range(lo + 1, hi)
                     if (masks[i] & b) != (masks[i - 1] & b)]
            if len(flips) > 1:
                return False
            if flips:
                nxt.append((lo, flips[0]))
                nxt.append((flips[0], hi))
            else:
                nxt.append((lo, hi))
        spans = nxt
        if not spans:
            break
    return True


@dataclass(frozen=True)
class GrayReport:
    ok: bool
    violations: tuple[str, ...]
    count: int
    expected: int | None


def verify_gray(listing: Listing, required_class: str = "any",
                expected_count: int | None = None) -> GrayReport:
    """Re-validate a listing: no repeats, completeness against an
    independent count, one exchange per consecutive pair, and the
    requested class for every step."""
    if required_class not in RESTRICTIONS:
        raise GraphError(f"unknown exchange class {required_class!r}")
    bad = []
    masks = listing.masks()
    lab = listing.labeling
    for i, x in enumerate(masks):
        ids = [lab.edge(p + 1) for p in range(listing.graph.m) if x >> p & 1]
        if not listing.graph.is_spanning_tree(ids):
            bad.append(f"tree {i} is not a spanning tree")
            break
    if len(set(masks)) != len(masks):
        seen = {}
        for i, x in enumerate(masks):
            if x in seen:
                bad.append(f"tree {i} repeats tree {seen[x]}")
                break
            seen[x] = i
    expected = expected_count
    if not listing.truncated:
        if expected is None:
            expected = counting.count_matrix_tree(listing.graph)
        if len(masks) != expected:
            bad.append(f"listing has {len(masks)} trees, count says {expected}")
    for i in range(1, len(masks)):
        diff = masks[i] ^ masks[i - 1]
        out_bits = diff & masks[i - 1]
        in_bits = diff & masks[i]
        if bin(out_bits).count("1") != 1 or bin(in_bits).count("1") != 1:
            bad.append(f"trees {i - 1},{i} do not differ in one exchange")
            continue
        ex = Exchange(removed=out_bits.bit_length(), added=in_bits.bit_length())
        if i - 1 < len(listing.steps):
            rec = listing.steps[i - 1][0]
            if rec != ex:
                bad.append(f"step {i - 1} records {rec.pair()}, trees differ by {ex.pair()}")
        if required_class != "any":
            if listing.embedding is None:
                raise GraphError("class verification needs an embedding")
            cls = classify_exchange(listing.embedding, listing.labeling, ex)
            if not cls.matches(required_class):
                bad.append(f"step {i - 1} exchange {ex.pair()} is not {required_class}")
    return GrayReport(not bad, tuple(bad), len(masks), expected)
