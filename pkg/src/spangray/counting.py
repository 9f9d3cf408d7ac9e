"""Exact spanning-tree counting and the Fibonacci extremal bound.

Two independent counters (Kirchhoff determinant and deletion-
contraction) serve as oracles for the generator.  The extremal checker
verifies t(G) <= f_{m+1} for outerplane multigraphs and the exact
characterization of equality: no loops, 2-connected, all inner faces of
length at most 3, weak dual a path, and every digon face sharing an
edge with the outer face.  All arithmetic is exact integer arithmetic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .dualtree import weak_dual
from .embedgraph import EmbeddedGraph, MultiGraph, blocks, build_embedding, is_triangulation
from .errors import CertificationError, GraphError

_fib = [0, 1]


def fib(k: int) -> int:
    if k < 0:
        raise GraphError("negative Fibonacci index")
    while len(_fib) <= k:
        _fib.append(_fib[-1] + _fib[-2])
    return _fib[k]


def count_matrix_tree(g: MultiGraph) -> int:
    """Number of spanning trees as a Laplacian minor determinant,
    fraction-free integer elimination (no floats)."""
    n = g.n
    if n == 1:
        return 1
    d = n - 1
    a = [[0] * d for _ in range(d)]
    for u, v in g.edges:
        if u == v:
            continue
        if u < d:
            a[u][u] += 1
        if v < d:
            a[v][v] += 1
        if u < d and v < d:
            a[u][v] -= 1
            a[v][u] -= 1
    sign = 1
    prev = 1
    for k in range(d - 1):
        if a[k][k] == 0:
            row = next((i for i in range(k + 1, d) if a[i][k] != 0), None)
            if row is None:
                return 0
            a[k], a[row] = a[row], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, d):
            aik = a[i][k]
            row_i = a[i]
            row_k = a[k]
            for j in range(k + 1, d):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = akk
    return sign * a[d - 1][d - 1]


def _compact_encode(n: int, edges) -> tuple:
    """Key for memoization: edges sorted, vertices renamed by first
    appearance (identical labeled graphs collide; cheap, not a full
    isomorphism canonical form)."""
    edges = sorted(tuple(sorted(e)) for e in edges)
    name: dict[int, int] = {}
    out = []
    for u, v in edges:
        for x in (u, v):
            if x not in name:
                name[x] = len(name)
        out.append((name[u], name[v]))
    return (n, tuple(sorted(out)))


def count_del_contract(g: MultiGraph) -> int:
    """Number of spanning trees by t(G) = t(G-e) + t(G/e), loops
    dropped on sight, memoized per invocation."""
    memo: dict[tuple, int] = {}

    def rec(n: int, edges: tuple) -> int:
        edges = tuple(e for e in edges if e[0] != e[1])
        if n == 1:
            return 1
        if len(edges) < n - 1:
            return 0
        key = _compact_encode(n, edges)
        hit = memo.get(key)
        if hit is not None:
            return hit
        u, v = edges[0]
        if u > v:
            u, v = v, u
        rest = edges[1:]
        merged = []
        for a, b in rest:
            a2 = u if a == v else (a - 1 if a > v else a)
            b2 = u if b == v else (b - 1 if b > v else b)
            merged.append((a2, b2))
        val = rec(n, rest) + rec(n - 1, tuple(merged))
        memo[key] = val
        return val

    return rec(g.n, tuple(g.edges))


def count_bruteforce(g: MultiGraph) -> int:
    """Oracle: test every (n-1)-subset of edges.  Guarded to small m."""
    if g.m > 20:
        raise GraphError("brute-force counting guarded to m <= 20")
    if g.n == 1:
        return 1
    hits = 0
    for sub in itertools.combinations(range(g.m), g.n - 1):
        if g.is_spanning_tree(sub):
            hits += 1
    return hits


def _is_path_graph(g: MultiGraph) -> bool:
    if g.n <= 1:
        return g.m == 0
    if g.m != g.n - 1 or not g.is_connected():
        return False
    return all(g.degree(v) <= 2 for v in range(g.n))


@dataclass(frozen=True)
class FibBoundReport:
    count: int
    edges: int
    bound: int
    equality: bool
    predicate: bool
    certified: bool

    def line(self) -> str:
        yn = lambda b: "yes" if b else "no"
        return (f"t={self.count} bound=f_{self.edges + 1}={self.bound} "
                f"equality={yn(self.equality)} predicate={yn(self.predicate)}")


def check_fib_bound(emb: EmbeddedGraph) -> FibBoundReport:
    """Verify t(G) <= f_{m+1} and, for loopless graphs, that equality
    holds exactly when the structural predicate does.

    The equality characterization is stated for loopless multigraphs;
    with loops present the report still carries both facts but the
    equivalence is not asserted (certified=False).
    """
    g = emb.graph
    t = count_matrix_tree(g)
    bound = fib(g.m + 1)
    if t > bound:
        raise CertificationError(f"t={t} exceeds f_{g.m + 1}={bound}")
    loopless = not g.loop_edges()
    if g.n == 1:
        two_connected = g.m == 0
    else:
        bl = blocks(g)
        two_connected = len(bl) == 1 and bl[0].graph.n == g.n
    digons_outer = True
    for f in emb.faces:
        if not f.is_outer and f.length == 2:
            if not any(emb.is_outer_edge(e) for e in f.edge_ids):
                digons_outer = False
                break
    predicate = (loopless and two_connected
                 and is_triangulation(emb, multi=True)
                 and _is_path_graph(weak_dual(emb))
                 and digons_outer)
    equality = t == bound
    if loopless and equality != predicate:
        raise CertificationError(
            f"equality={equality} but structural predicate={predicate} "
            f"(t={t}, m={g.m})")
    return FibBoundReport(t, g.m, bound, equality, predicate, loopless)


def check_fib_product(i: int, j: int) -> bool:
    """Verify f_i * f_j <= f_{i+j-1} with equality iff i=1 or j=1."""
    if i < 1 or j < 1:
        raise GraphError("indices must be >= 1")
    prod = fib(i) * fib(j)
    bound = fib(i + j - 1)
    if prod > bound:
        raise CertificationError(f"f_{i}*f_{j}={prod} exceeds f_{i + j - 1}={bound}")
    if (prod == bound) != (i == 1 or j == 1):
        raise CertificationError(f"equality characterization fails at i={i}, j={j}")
    return True


def extremal_family(k: int, digon_ends: int = 0) -> EmbeddedGraph:
    """A spanning-tree-maximizing outerplane multigraph: a strip of k
    inner faces whose weak dual is a path, with the requested number of
    end faces turned into digons (the rest are triangles).  Satisfies
    t(G) = f_{m+1}."""
    if k < 1:
        raise GraphError("need at least one inner face")
    if not 0 <= digon_ends <= 2:
        raise GraphError("digon_ends must be 0, 1, or 2")
    if digon_ends > k:
        raise GraphError("more end digons than faces")
    triangles = k - digon_ends
    if triangles == 0:
        # all faces digons: a bundle of k+1 parallel edges
        return build_embedding(MultiGraph(2, tuple((0, 1) for _ in range(k + 1))), (0, 1))
    # fan: hub 0, rim 1..triangles+1, spokes interleaved with rim edges
    rim = triangles + 1
    edges = [(0, 1)]
    if digon_ends >= 1:
        edges.append((0, 1))
    for i in range(1, rim):
        edges.append((i, i + 1))
        edges.append((0, i + 1))
    if digon_ends == 2:
        edges.append((0, rim))
    g = MultiGraph(rim + 1, tuple(edges))
    return build_embedding(g, tuple(range(rim + 1)))


def _dihedral_min(n: int, bound: tuple, chords: tuple) -> tuple:
    """Canonical encoding of a polygon configuration under rotation and
    reflection of the hull positions."""
    best = None
    for refl in (False, True):
        for r in range(n):
            if refl:
                b = tuple(bound[(r - 1 - i) % n] for i in range(n))
                ch = sorted(((min((r - i) % n, (r - j) % n),
                              max((r - i) % n, (r - j) % n)), c)
                            for (i, j), c in chords)
            else:
                b = tuple(bound[(i + r) % n] for i in range(n))
                ch = sorted(((min((i - r) % n, (j - r) % n),
                              max((i - r) % n, (j - r) % n)), c)
                            for (i, j), c in chords)
            enc = (b, tuple(ch))
            if best is None or enc < best:
                best = enc
    return best


def _chord_sets(n: int):
    """Non-crossing sets of polygon diagonals (as position pairs)."""
    diags = [(i, j) for i in range(n) for j in range(i + 2, n)
             if not (i == 0 and j == n - 1)]

    def crosses(a, b):
        (i, j), (k, l) = a, b
        if len({i, j, k, l}) < 4:
            return False
        return (i < k < j) != (i < l < j)

    sets = [[]]
    for d in diags:
        new = []
        for s in sets:
            if all(not crosses(d, x) for x in s):
                new.append(s + [d])
        sets.extend(new)
    return sets


def _compositions(total: int, parts: int, minimum: int):
    """All tuples of length `parts` with entries >= minimum summing to total."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(minimum, total - minimum * (parts - 1) + 1):
        for rest in _compositions(total - first, parts - 1, minimum):
            yield (first,) + rest


def enumerate_outerplane(max_m: int, triangulations_only: bool = False,
                         simple: bool = False):
    """All 2-connected loopless outerplane multigraphs with at most
    max_m edges, one embedding per isomorphism class.

    Parameterized directly: hull cycle of n >= 2 vertices with per-side
    edge multiplicities, plus a non-crossing multiset of chords;
    configurations deduplicated by a canonical form over the 2n hull
    symmetries (the hull cycle of a 2-connected outerplane multigraph
    is unique, so this is isomorphism dedup).  Yields EmbeddedGraph.
    """
    if max_m < 1:
        return
    # n = 2: bundles of parallel edges (single edge included)
    for c in range(1, max_m + 1):
        if simple and c > 1:
            break
        g = MultiGraph(2, tuple((0, 1) for _ in range(c)))
        emb = build_embedding(g, (0, 1))
        if not triangulations_only or is_triangulation(emb, multi=True):
            yield emb
    for n in range(3, max_m + 1):
        chord_budget = max_m - n  # boundary needs at least one edge per side
        for chord_set in _chord_sets(n):
            if len(chord_set) > chord_budget:
                continue
            max_c = 1 if simple else chord_budget
            for c_mult in _compositions_upto(len(chord_set), max_c, chord_budget):
                boundary_budget = max_m - sum(c_mult)
                max_b = 1 if simple else boundary_budget
                for b_mult in _boundary_multiplicities(n, boundary_budget, max_b):
                    chords = tuple(zip(chord_set, c_mult))
                    if _dihedral_min(n, b_mult, chords) != (b_mult, tuple(
                            sorted((tuple(d), c) for d, c in chords))):
                        continue
                    edges = []
                    for i in range(n):
                        edges.extend([(i, (i + 1) % n)] * b_mult[i])
                    for (i, j), c in chords:
                        edges.extend([(i, j)] * c)
                    g = MultiGraph(n, tuple(edges))
                    emb = build_embedding(g, tuple(range(n)))
                    if triangulations_only and not is_triangulation(emb, multi=True):
                        continue
                    yield emb


def _compositions_upto(parts: int, max_each: int, budget: int):
    """Multiplicity vectors (each 1..max_each) for the chords, total <= budget."""
    if parts == 0:
        yield ()
        return
    for first in range(1, min(max_each, budget - (parts - 1)) + 1):
        for rest in _compositions_upto(parts - 1, max_each, budget - first):
            yield (first,) + rest


def _boundary_multiplicities(n: int, room: int, max_each: int):
    """Hull-side multiplicities (each >= 1), total <= room."""
    for total in range(n, room + 1):
        for comp in _compositions(total, n, 1):
            if all(x <= max_each for x in comp):
                yield comp
