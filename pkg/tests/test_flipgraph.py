"""Flip graphs, Hamilton search, arborescences, small-graph sweeps."""

import itertools

import pytest

from conftest import (bundle_graph, complete_graph, cycle_graph,
                      diamond_embedding, diamond_graph, fan_embedding,
                      fan_graph, k33_graph)
from spangray.counting import count_matrix_tree
from spangray.embedgraph import MultiGraph, build_embedding
from spangray.errors import CertificationError, GraphError
from spangray.flipgraph import (Arborescence, DiGraph, FlipGraph,
                                arborescence_flip_graph, build_flip_graph,
                                enumerate_arborescences,
                                enumerate_small_digraphs,
                                enumerate_small_graphs,
                                enumerate_spanning_trees,
                                find_outerplane_order, hamilton_path,
                                run_experiment, to_dot, to_text)
from spangray.treegen import greedy_listing


def make_flip(n, edges):
    """Bare flip graph for solver tests."""
    adj = [[] for _ in range(n)]
    labels = []
    for i, j in edges:
        adj[i].append(j)
        adj[j].append(i)
        labels.append((i, j, (1, 2)))

    class Node:
        def chi(self):
            return "x"

    return FlipGraph(tuple(Node() for _ in range(n)), "any",
                     tuple(tuple(sorted(a)) for a in adj), tuple(labels))


def petersen_flip():
    edges = ([(i, (i + 1) % 5) for i in range(5)]
             + [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
             + [(i, 5 + i) for i in range(5)])
    return make_flip(10, edges)


def has_minor(g, h_edges, h_n):
    """Brute minor test: try all ways to map branch sets."""
    from itertools import combinations
    adj = [set() for _ in range(g.n)]
    for u, v in g.edges:
        if u != v:
            adj[u].add(v)
            adj[v].add(u)

    def connected(part):
        part = set(part)
        stack = [next(iter(part))]
        seen = {stack[0]}
        while stack:
            x = stack.pop()
            for y in adj[x] & part:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return seen == part

    verts = range(g.n)
    for assign in itertools.product(range(h_n + 1), repeat=g.n):
        parts = [[v for v in verts if assign[v] == k + 1] for k in range(h_n)]
        if any(not p for p in parts):
            continue
        if any(not connected(p) for p in parts):
            continue
        ok = True
        for a, b in h_edges:
            if not any(w in adj[u] for u in parts[a] for w in parts[b]):
                ok = False
                break
        if ok:
            return True
    return False


def outerplanar_by_minors(g):
    k4 = [(i, j) for i in range(4) for j in range(i + 1, 4)]
    k23 = [(i, j) for i in range(2) for j in range(2, 5)]
    return not has_minor(g, k4, 4) and not has_minor(g, k23, 5)


class TestEnumerateTrees:
    def test_counts_match_kirchhoff(self):
        for g in (fan_graph(), diamond_graph(), cycle_graph(5),
                  bundle_graph(4), complete_graph(4), k33_graph()):
            assert len(enumerate_spanning_trees(g)) == count_matrix_tree(g)

    def test_all_distinct_trees(self):
        seen = set()
        for t in enumerate_spanning_trees(fan_graph()):
            assert t.mask not in seen
            seen.add(t.mask)

    def test_guard_suggests_generator(self):
        g = bundle_graph(25)
        with pytest.raises(GraphError, match="greedy_listing"):
            enumerate_spanning_trees(g)


class TestBuildFlipGraph:
    def test_diamond_pivot_drops_disjoint_pairs(self, diamond):
        fg_any = build_flip_graph(diamond, "any")
        fg_piv = build_flip_graph(diamond, "pivot")
        assert fg_any.node_count == 8
        assert fg_any.edge_count == 18
        assert fg_piv.edge_count == 16
        dropped = ({l for *_, l in fg_any.edge_labels}
                   - {l for *_, l in fg_piv.edge_labels})
        assert dropped == {(1, 4), (2, 5)}

    def test_restriction_monotonicity(self, fan_emb, diamond_emb):
        for emb in (fan_emb, diamond_emb):
            sets = {r: {(i, j) for i, j, _ in
                        build_flip_graph(emb, r).edge_labels}
                    for r in ("any", "pivot", "face", "face_inner",
                              "paf", "pof")}
            assert sets["paf"] <= sets["pivot"] <= sets["pof"] <= sets["any"]
            assert sets["paf"] <= sets["face"] <= sets["pof"]
            assert sets["face_inner"] <= sets["face"]

    def test_face_restriction_needs_embedding(self, diamond):
        with pytest.raises(GraphError):
            build_flip_graph(diamond, "face")

    def test_unknown_restriction(self, diamond):
        with pytest.raises(GraphError):
            build_flip_graph(diamond, "bogus")

    def test_listing_is_flip_path(self, fan, fan_emb):
        fg = build_flip_graph(fan_emb, "pivot")
        index = {t.mask: i for i, t in enumerate(fg.nodes)}
        from spangray.treegen import tiebreak_prefer
        listing = greedy_listing(fan, embedding=fan_emb,
                                 tiebreak=tiebreak_prefer("pivot"))
        byset = {frozenset((i, j)) for i, j, _ in fg.edge_labels}
        walk = [index[x] for x in listing.masks()]
        assert len(set(walk)) == fg.node_count
        for a, b in zip(walk, walk[1:]):
            assert frozenset((a, b)) in byset


class TestHamilton:
    def test_cycle_graph(self):
        fg = make_flip(20, [(i, (i + 1) % 20) for i in range(20)])
        r = hamilton_path(fg, cycle=True)
        assert r.status == "found" and len(r.order) == 20

    def test_petersen_no_cycle(self):
        r = hamilton_path(petersen_flip(), cycle=True)
        assert r.status == "none"

    def test_petersen_has_path(self):
        r = hamilton_path(petersen_flip(), cycle=False)
        assert r.status == "found"

    def test_forced_endpoints(self):
        fg = make_flip(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
        r = hamilton_path(fg, forced_endpoints=(1, 2))
        assert r.status == "found"
        assert {r.order[0], r.order[-1]} == {1, 2}
        # adjacent corners cannot be the two ends of a 4-cycle path
        r = hamilton_path(make_flip(4, [(0, 1), (1, 2), (2, 3)]),
                          forced_endpoints=(0, 1))
        assert r.status == "none"

    def test_trivial_sizes(self):
        one = make_flip(1, [])
        assert hamilton_path(one, cycle=True).status == "found"
        assert hamilton_path(one, cycle=False).order == (0,)
        two = make_flip(2, [(0, 1)])
        assert hamilton_path(two, cycle=True).status == "none"
        assert hamilton_path(two, cycle=False).status == "found"

    def test_budget_unknown(self):
        k5 = complete_graph(5)
        fg = build_flip_graph(k5, "pivot")
        r = hamilton_path(fg, cycle=True, budget=10)
        assert r.status == "unknown"

    def test_dense_found_and_deterministic(self):
        k5 = complete_graph(5)
        fg = build_flip_graph(k5, "pivot")
        r1 = hamilton_path(fg, cycle=True)
        r2 = hamilton_path(fg, cycle=True)
        assert r1.status == "found"
        assert r1.order == r2.order and r1.steps == r2.steps

    def test_disconnected_none(self):
        fg = make_flip(4, [(0, 1), (2, 3)])
        assert hamilton_path(fg, cycle=False).status == "none"


class TestArborescences:
    def bidirected(self, n):
        return DiGraph(n, tuple((a, b) for a in range(n)
                                for b in range(n) if a != b))

    def test_cayley(self):
        for n in (3, 4, 5):
            d = self.bidirected(n)
            for r in range(n):
                assert len(enumerate_arborescences(d, r)) == n ** (n - 2)

    def test_arcs_away_from_root(self):
        d = DiGraph(3, ((0, 1), (1, 2), (2, 0), (1, 0)))
        arbs = enumerate_arborescences(d, 0)
        assert len(arbs) == 1
        assert arbs[0].arcs() == frozenset({0, 1})

    def test_unreachable_gives_none(self):
        d = DiGraph(3, ((0, 1), (0, 2)))
        assert enumerate_arborescences(d, 1) == ()

    def test_flip_adjacency_same_head(self):
        d = self.bidirected(4)
        fg = arborescence_flip_graph(d, 0)
        assert fg.node_count == 16
        for i, j, _ in fg.edge_labels:
            diff = fg.nodes[i].mask ^ fg.nodes[j].mask
            a, b = [k for k in range(d.m) if diff >> k & 1]
            assert d.arcs[a][1] == d.arcs[b][1]

    def test_k4_hamilton_path(self):
        fg = arborescence_flip_graph(self.bidirected(4), 0)
        assert hamilton_path(fg, cycle=False).status == "found"


class TestSmallGraphs:
    def test_two_connected_counts(self):
        for n, want in ((3, 1), (4, 3), (5, 10)):
            assert sum(1 for _ in enumerate_small_graphs(n, "2-connected")) == want

    def test_all_count_n4(self):
        assert sum(1 for _ in enumerate_small_graphs(4, "all")) == 11

    def test_no_dedup_streams_everything(self):
        assert sum(1 for _ in enumerate_small_graphs(3, "all", dedup=False)) == 8

    def test_outerplane_matches_minor_oracle(self):
        for n in (3, 4, 5):
            mine = [g for g in enumerate_small_graphs(n, "all")
                    if g.is_connected()]
            by_order = [g for g in mine if find_outerplane_order(g) is not None]
            by_minor = [g for g in mine if outerplanar_by_minors(g)]
            assert len(by_order) == len(by_minor)
            got = sum(1 for _ in enumerate_small_graphs(n, "outerplane"))
            assert got == len(by_order)

    def test_guard(self):
        with pytest.raises(GraphError):
            list(enumerate_small_graphs(8))

    def test_digraph_counts(self):
        assert sum(1 for _ in enumerate_small_digraphs(3)) == 7
        assert sum(1 for _ in enumerate_small_digraphs(4)) == 129


class TestFindOuterOrder:
    def test_positive(self, diamond):
        order = find_outerplane_order(diamond)
        assert order is not None
        build_embedding(diamond, order)

    def test_negative(self):
        assert find_outerplane_order(complete_graph(4)) is None
        assert find_outerplane_order(
            MultiGraph(5, ((0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)))) is None

    def test_disconnected(self):
        assert find_outerplane_order(MultiGraph(3, ((0, 1),))) is None


class TestExperiments:
    def test_pivot_small_all_cyclic(self):
        rep = run_experiment("pivot", 4)
        assert rep.discrepancies == ()
        assert {r.result for r in rep.records} == {"cyclic"}

    def test_paf_small_all_cyclic(self):
        rep = run_experiment("paf", 4)
        assert rep.discrepancies == ()
        assert {r.result for r in rep.records} == {"cyclic"}
        assert len(rep.records) == 8  # 1 + 2 + 5 connected outerplane classes

    def test_arborescence_small_all_paths(self):
        rep = run_experiment("arborescence", 3)
        assert rep.discrepancies == ()
        assert {r.result for r in rep.records} == {"path"}

    def test_record_format(self):
        rep = run_experiment("paf", 3)
        import re
        for line in rep.render_lines(with_timings=False):
            if not line.startswith("#"):
                assert re.fullmatch(
                    r"graph=\S+ result=(cyclic|path|none|unknown) time=0", line)

    def test_streaming_callback(self):
        got = []
        run_experiment("paf", 3, on_record=got.append)
        assert [r.ident for r in got] == ["0", "1", "2"]

    def test_bad_kind(self):
        with pytest.raises(GraphError):
            run_experiment("nope", 3)

    def test_guards(self):
        with pytest.raises(GraphError):
            run_experiment("pivot", 7)
        with pytest.raises(GraphError):
            run_experiment("arborescence", 6)


class TestExport:
    def test_dot(self):
        fg = build_flip_graph(cycle_graph(3), "any")
        dot = to_dot(fg)
        assert dot.startswith("graph flip {")
        assert 't0 [label="110"];' in dot
        assert dot.strip().endswith("}")

    def test_text(self):
        fg = build_flip_graph(cycle_graph(3), "any")
        txt = to_text(fg).splitlines()
        assert txt[0] == "nodes=3 edges=3 restriction=any"
        assert txt[1] == "0: 110"


@pytest.mark.slow
class TestSixVertexExperiments:
    """The full published ranges; minutes of runtime."""

    def test_pivot_n6(self):
        rep = run_experiment("pivot", 6, budget=8 * 10 ** 6)
        assert rep.discrepancies == ()

    def test_paf_n6(self):
        rep = run_experiment("paf", 6, budget=8 * 10 ** 6)
        assert rep.discrepancies == ()

    def test_arborescence_n5(self):
        rep = run_experiment("arborescence", 5, budget=8 * 10 ** 6)
        assert rep.discrepancies == ()
