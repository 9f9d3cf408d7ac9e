"""Command line front end.

Subcommands: label (print the dual-tree edge labeling), gen (generate
a listing), verify (re-check a listing file), count (spanning tree
counts), experiment (small-graph sweeps), flip (export a flip graph).

Exit codes: 0 success, 1 verification failure, 2 bad input or usage.
All output is deterministic; experiment timings can be zeroed with
--no-timings to make runs byte-identical.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field

from . import counting, flipgraph, treegen
from .dualtree import (default_root_leaf, dual_tree_labeling,
                       orient_split_dual, split_dual)
from .embedgraph import (EdgeLabeling, EmbeddedGraph, MultiGraph, ParsedGraph,
                         blocks, build_embedding, parse_graph)
from .errors import CertificationError, GraphError, ParseError


@dataclass
class RunConfig:
    """Parsed invocation; one field per option across subcommands."""

    command: str
    path: str | None = None
    listing_path: str | None = None
    root_edge: int | None = None
    tiebreak: str = "closest"
    initial: str | None = None
    max_trees: int | None = None
    klass: str = "any"
    expect_complete: bool = False
    fib: bool = False
    per_block: bool = False
    kind: str | None = None
    max_n: int = 4
    budget: int = 2 * 10 ** 6
    out: str | None = None
    no_timings: bool = False
    restriction: str = "any"
    fmt: str = "text"
    root_vertex: int | None = None


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}")


def _load(path: str) -> ParsedGraph:
    return parse_graph(_read(path))


def _embed(parsed: ParsedGraph) -> EmbeddedGraph:
    """Embedding from the file's outer order, or a searched one."""
    g = parsed.graph
    if parsed.outer is not None:
        return build_embedding(g, parsed.outer)
    if g.n > 9:
        raise GraphError("no 'outer:' line and graph too large to search "
                         "for an outerplane order")
    order = flipgraph.find_outerplane_order(g)
    if order is None:
        raise GraphError("graph has no outerplane embedding")
    return build_embedding(g, order)


def _labeling_for(emb: EmbeddedGraph, root_edge: int | None):
    sd = split_dual(emb)
    if root_edge is None:
        root = default_root_leaf(sd)
    else:
        if not 0 <= root_edge < emb.graph.m:
            raise GraphError(f"--root edge id {root_edge} out of range")
        root = sd.leaf_for_edge(root_edge)
    osd = orient_split_dual(sd, root)
    return sd, osd, dual_tree_labeling(osd)


def _root_line(sd, root: int, g: MultiGraph) -> str:
    e, tail = sd.leaf_darts[root - sd.inner_count]
    return f"root: dart ({tail},{g.other_end(e, tail)}) of edge {e}"


def cmd_label(cfg: RunConfig, out) -> int:
    parsed = _load(cfg.path)
    if parsed.directed:
        raise GraphError("label expects an undirected graph")
    g = parsed.graph
    if cfg.per_block:
        return _label_per_block(parsed, out)
    emb = _embed(parsed)
    sd, osd, labeling = _labeling_for(emb, cfg.root_edge)
    print(_root_line(sd, osd.root, g), file=out)
    for e in range(g.m):
        u, v = g.edges[e]
        print(f"edge ({u},{v}) [id {e}] -> label {labeling.label(e)}", file=out)
    return 0


def _label_per_block(parsed: ParsedGraph, out) -> int:
    g = parsed.graph
    if parsed.outer is not None:
        gpos = {v: i for i, v in enumerate(parsed.outer)}
    else:
        gpos = None
    for b_idx, bl in enumerate(blocks(g)):
        if gpos is not None:
            order = tuple(sorted(range(bl.graph.n),
                                 key=lambda lv: gpos[bl.vertices[lv]]))
        else:
            order = flipgraph.find_outerplane_order(bl.graph)
            if order is None:
                raise GraphError(f"block {b_idx} has no outerplane embedding")
        emb = build_embedding(bl.graph, order)
        sd, osd, labeling = _labeling_for(emb, None)
        print(f"block {b_idx}: vertices {','.join(map(str, bl.vertices))}",
              file=out)
        le, ltail = sd.leaf_darts[osd.root - sd.inner_count]
        gu = bl.vertices[ltail]
        gv = bl.vertices[bl.graph.other_end(le, ltail)]
        print(f"  root: dart ({gu},{gv}) of edge {bl.edge_ids[le]}", file=out)
        for le in range(bl.graph.m):
            lu, lv = bl.graph.edges[le]
            print(f"  edge ({bl.vertices[lu]},{bl.vertices[lv]}) "
                  f"[id {bl.edge_ids[le]}] -> label {labeling.label(le)}",
                  file=out)
    for e in g.loop_edges():
        v = g.edges[e][0]
        print(f"loop ({v},{v}) [id {e}] -> unlabeled", file=out)
    return 0


_TIEBREAKS = ("closest", "prefer-pivot", "prefer-face", "prefer-face-inner",
              "prefer-paf", "prefer-pof")


def _tiebreak_rule(name: str):
    if name == "closest":
        return treegen.tiebreak_closest
    kind = name[len("prefer-"):].replace("-", "_")
    return treegen.tiebreak_prefer(kind)


def cmd_gen(cfg: RunConfig, out) -> int:
    parsed = _load(cfg.path)
    if parsed.directed:
        raise GraphError("gen expects an undirected graph")
    g = parsed.graph
    emb = _embed(parsed)
    sd, osd, labeling = _labeling_for(emb, cfg.root_edge)
    initial = None
    if cfg.initial is not None:
        try:
            labels = [int(t) for t in cfg.initial.split(",") if t.strip()]
        except ValueError:
            raise GraphError("--initial expects comma-separated labels")
        initial = treegen.spanning_tree_from_labels(g, labeling, labels)
    listing = treegen.greedy_listing(
        g, labeling=labeling, embedding=emb, initial=initial,
        tiebreak=_tiebreak_rule(cfg.tiebreak), max_trees=cfg.max_trees,
        check=True, classify=True)
    for line in listing.render_lines():
        print(line, file=out)
    classes = [c for _, c in listing.steps]
    flags = {
        "all-pivot": all(c.pivot for c in classes),
        "all-face": all(c.face for c in classes),
        "all-paf": all(c.paf for c in classes),
        "all-pof": all(c.pof for c in classes),
    }
    expected = counting.count_matrix_tree(g)
    complete = "yes" if len(listing.trees) == expected else "no"
    parts = [f"# trees={len(listing.trees)}", f"expected={expected}",
             f"complete={complete}", "genlex=yes"]
    parts += [f"{k}={'yes' if v else 'no'}" for k, v in flags.items()]
    print(" ".join(parts), file=out)
    return 0


def parse_listing(text: str, g: MultiGraph, labeling: EdgeLabeling,
                  embedding: EmbeddedGraph | None,
                  assume_complete: bool) -> treegen.Listing:
    """Read back the cmd_gen format: chi lines alternating with
    "- <removed> + <added> [classes]" step lines; "#" lines ignored."""
    masks: list[int] = []
    steps: list[tuple[treegen.Exchange, None]] = []
    m = g.m
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("-"):
            if not masks or len(steps) != len(masks) - 1:
                raise ParseError("step line without a preceding tree", lineno)
            parts = line.split()
            if len(parts) not in (4, 5) or parts[0] != "-" or parts[2] != "+":
                raise ParseError(f"bad step line {line!r}", lineno)
            try:
                removed, added = int(parts[1]), int(parts[3])
            except ValueError:
                raise ParseError("step labels must be integers", lineno)
            if not (1 <= removed <= m and 1 <= added <= m):
                raise ParseError("step label out of range", lineno)
            steps.append((treegen.Exchange(removed, added), None))
        else:
            if masks and len(steps) != len(masks):
                raise ParseError("tree line without a step line", lineno)
            if len(line) != m or set(line) - {"0", "1"}:
                raise ParseError(f"expected {m} bits, got {line!r}", lineno)
            mask = 0
            for i, ch in enumerate(line):
                if ch == "1":
                    mask |= 1 << i
            masks.append(mask)
    if not masks:
        raise ParseError("listing contains no trees")
    if len(steps) != len(masks) - 1:
        raise ParseError("trailing step line without a following tree")
    trees = tuple(treegen.SpanningTree(m, x) for x in masks)
    return treegen.Listing(g, labeling, embedding, trees, tuple(steps),
                           truncated=not assume_complete,
                           complete=assume_complete or None)


def cmd_verify(cfg: RunConfig, out) -> int:
    parsed = _load(cfg.path)
    if parsed.directed:
        raise GraphError("verify expects an undirected graph")
    g = parsed.graph
    emb = _embed(parsed)
    sd, osd, labeling = _labeling_for(emb, cfg.root_edge)
    listing = parse_listing(_read(cfg.listing_path), g, labeling, emb,
                            cfg.expect_complete)
    genlex_ok = treegen.verify_genlex(listing)
    print(f"genlex: {'ok' if genlex_ok else 'FAIL'}", file=out)
    rep = treegen.verify_gray(listing, required_class=cfg.klass)
    if rep.ok:
        print(f"exchanges: ok class={cfg.klass} trees={rep.count}"
              + (f" expected={rep.expected}" if rep.expected is not None else ""),
              file=out)
    else:
        for v in rep.violations:
            print(f"exchanges: FAIL {v}", file=out)
    return 0 if genlex_ok and rep.ok else 1


def cmd_count(cfg: RunConfig, out) -> int:
    parsed = _load(cfg.path)
    if parsed.directed:
        raise GraphError("count expects an undirected graph")
    g = parsed.graph
    t1 = counting.count_matrix_tree(g)
    t2 = counting.count_del_contract(g)
    print(f"t(matrix-tree)={t1}", file=out)
    print(f"t(deletion-contraction)={t2}", file=out)
    if t1 != t2:
        print("count mismatch between methods", file=out)
        return 1
    if cfg.fib:
        emb = _embed(parsed)
        rep = counting.check_fib_bound(emb)
        print(rep.line(), file=out)
    return 0


def cmd_experiment(cfg: RunConfig, out) -> int:
    if cfg.kind not in ("pivot", "paf", "arborescence"):
        raise GraphError(f"unknown experiment kind {cfg.kind!r}")
    lines: list[str] = []
    with_t = not cfg.no_timings

    def on_record(rec):
        line = rec.line(with_t)
        if cfg.out is None:
            print(line, file=out)
        else:
            lines.append(line)

    header = f"# experiment={cfg.kind} max-n={cfg.max_n} budget={cfg.budget}"
    if cfg.out is None:
        print(header, file=out)
    else:
        lines.append(header)
    report = flipgraph.run_experiment(cfg.kind, cfg.max_n, cfg.budget,
                                      on_record=on_record)
    counts: dict[str, int] = {}
    for r in report.records:
        counts[r.result] = counts.get(r.result, 0) + 1
    summary = " ".join(f"{k}={counts[k]}" for k in sorted(counts))
    tail = (f"# summary {summary} discrepancies={len(report.discrepancies)}")
    if cfg.out is None:
        print(tail, file=out)
    else:
        lines.append(tail)
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
        print(tail, file=out)
    return 1 if report.discrepancies else 0


def cmd_flip(cfg: RunConfig, out) -> int:
    parsed = _load(cfg.path)
    if parsed.directed:
        if cfg.root_vertex is None:
            raise GraphError("directed input needs --root-vertex")
        d = flipgraph.DiGraph(parsed.graph.n, parsed.graph.edges)
        fg = flipgraph.arborescence_flip_graph(d, cfg.root_vertex)
    else:
        if cfg.restriction in ("any", "pivot") and parsed.outer is None:
            fg = flipgraph.build_flip_graph(parsed.graph, cfg.restriction)
        else:
            fg = flipgraph.build_flip_graph(_embed(parsed), cfg.restriction)
    text = (flipgraph.to_dot(fg) if cfg.fmt == "dot" else flipgraph.to_text(fg))
    if cfg.out is None:
        print(text, file=out)
    else:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return 0


_COMMANDS = {
    "label": cmd_label,
    "gen": cmd_gen,
    "verify": cmd_verify,
    "count": cmd_count,
    "experiment": cmd_experiment,
    "flip": cmd_flip,
}


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="spangray",
        description="Gray codes of spanning trees of outerplane graphs")
    sub = p.add_subparsers(dest="command", required=True)

    lab = sub.add_parser("label", help="print the dual-tree edge labeling")
    lab.add_argument("path")
    lab.add_argument("--root", type=int, default=None, metavar="EDGE",
                     help="outer edge id whose dart roots the dual tree")
    lab.add_argument("--per-block", action="store_true",
                     help="label each biconnected block separately")

    gen = sub.add_parser("gen", help="generate a spanning tree listing")
    gen.add_argument("path")
    gen.add_argument("--root", type=int, default=None, metavar="EDGE")
    gen.add_argument("--tiebreak", choices=_TIEBREAKS, default="closest")
    gen.add_argument("--initial", default=None, metavar="LABELS",
                     help="comma-separated labels of the initial tree")
    gen.add_argument("--max-trees", type=int, default=None)

    ver = sub.add_parser("verify", help="re-check a listing file")
    ver.add_argument("path", help="graph file")
    ver.add_argument("listing", help="listing file as written by gen")
    ver.add_argument("--root", type=int, default=None, metavar="EDGE")
    ver.add_argument("--class", dest="klass", choices=treegen.RESTRICTIONS,
                     default="any")
    ver.add_argument("--expect-complete", action="store_true",
                     help="also require the listing to cover every tree")

    cnt = sub.add_parser("count", help="spanning tree counts")
    cnt.add_argument("path")
    cnt.add_argument("--fib", action="store_true",
                     help="also report the Fibonacci bound")

    exp = sub.add_parser("experiment", help="small-graph Hamilton sweeps")
    exp.add_argument("--kind", choices=("pivot", "paf", "arborescence"),
                     required=True)
    exp.add_argument("--max-n", type=int, required=True)
    exp.add_argument("--budget", type=int, default=2 * 10 ** 6)
    exp.add_argument("--out", default=None)
    exp.add_argument("--no-timings", action="store_true",
                     help="print time=0 so runs are byte-identical")

    flp = sub.add_parser("flip", help="export a flip graph")
    flp.add_argument("path")
    flp.add_argument("--restriction", choices=treegen.RESTRICTIONS,
                     default="any")
    flp.add_argument("--format", dest="fmt", choices=("dot", "text"),
                     default="text")
    flp.add_argument("--root-vertex", type=int, default=None,
                     help="root for arborescences of a directed input")
    flp.add_argument("--out", default=None)
    return p


def _config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command)
    cfg.path = getattr(args, "path", None)
    cfg.listing_path = getattr(args, "listing", None)
    cfg.root_edge = getattr(args, "root", None)
    cfg.tiebreak = getattr(args, "tiebreak", "closest")
    cfg.initial = getattr(args, "initial", None)
    cfg.max_trees = getattr(args, "max_trees", None)
    cfg.klass = getattr(args, "klass", "any")
    cfg.expect_complete = getattr(args, "expect_complete", False)
    cfg.fib = getattr(args, "fib", False)
    cfg.per_block = getattr(args, "per_block", False)
    cfg.kind = getattr(args, "kind", None)
    cfg.max_n = getattr(args, "max_n", 4)
    cfg.budget = getattr(args, "budget", 2 * 10 ** 6)
    cfg.out = getattr(args, "out", None)
    cfg.no_timings = getattr(args, "no_timings", False)
    cfg.restriction = getattr(args, "restriction", "any")
    cfg.fmt = getattr(args, "fmt", "text")
    cfg.root_vertex = getattr(args, "root_vertex", None)
    return cfg


def entry(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = _build_parser()
    args = parser.parse_args(argv)
    cfg = _config(args)
    try:
        return _COMMANDS[cfg.command](cfg, out)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CertificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 1
    except GraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(entry())
