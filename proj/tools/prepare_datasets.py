#!/usr/bin/env python3
"""Convert public benchmark networks into the edge-list / label-file format.

Writes <name>.tsv (sender<TAB>receiver) and <name>.lbl (node<TAB>class) into
the output directory, which is what `sbsn` and the acceptance harness read.

    prepare_datasets.py linqs  --content cora/cora.content --cites cora/cora.cites --name cora --out data
    prepare_datasets.py linqs  --content citeseer/citeseer.content --cites citeseer/citeseer.cites --name citeseer --out data
    prepare_datasets.py adjnoun --gml adjnoun/adjnoun.gml --out data

LINQS .cites files list "<cited> <citing>"; the edge is written citing -> cited.
Labels are only written for nodes that take part in at least one interaction,
because isolated nodes are not part of the network.
"""

import argparse
import re
import sys
from pathlib import Path


def write_outputs(out_dir, name, edges, labels):
    out_dir.mkdir(parents=True, exist_ok=True)
    seen = set()
    with open(out_dir / f"{name}.tsv", "w") as f:
        for s, r in edges:
            f.write(f"{s}\t{r}\n")
            seen.update((s, r))
    kept = 0
    with open(out_dir / f"{name}.lbl", "w") as f:
        for node, cls in labels.items():
            if node in seen:
                f.write(f"{node}\t{cls}\n")
                kept += 1
    print(
        f"{name}: {len(seen)} nodes, {len(edges)} interactions, "
        f"{kept} labelled ({len(labels) - kept} isolated labelled nodes dropped)",
        file=sys.stderr,
    )


def check_name(token, path):
    if any(ch.isspace() for ch in token) or token.startswith("#"):
        sys.exit(f"{path}: node name {token!r} cannot be written to an edge list")
    return token


def linqs(args):
    labels = {}
    with open(args.content) as f:
        for line in f:
            parts = line.split()
            if parts:
                labels[check_name(parts[0], args.content)] = parts[-1]
    edges = []
    with open(args.cites) as f:
        for line in f:
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 2:
                sys.exit(f"{args.cites}: expected two ids per line, got {line!r}")
            cited, citing = (check_name(p, args.cites) for p in parts)
            edges.append((citing, cited))
    write_outputs(Path(args.out), args.name, edges, labels)


def adjnoun(args):
    import networkx as nx

    text = re.sub(r"(?m)^\s*(directed|multigraph)\s+\d+\s*$", "", Path(args.gml).read_text())
    # Parse as a directed multigraph so every edge keeps its source/target
    # orientation from the file and repeated edges are not merged.
    head, sep, rest = text.partition("graph")
    if not sep:
        sys.exit(f"{args.gml}: no graph block")
    bracket = rest.index("[") + 1
    text = head + sep + rest[:bracket] + "\n  directed 1\n  multigraph 1" + rest[bracket:]
    graph = nx.parse_gml(text, label="label")
    classes = {0: "adjective", 1: "noun"}
    labels = {check_name(n, args.gml): classes[d["value"]] for n, d in graph.nodes(data=True)}
    edges = [(s, t) for s, t, _ in graph.edges(keys=True)]
    write_outputs(Path(args.out), args.name, edges, labels)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("linqs", help="LINQS .content/.cites citation network")
    p.add_argument("--content", required=True)
    p.add_argument("--cites", required=True)
    p.add_argument("--name", required=True)
    p.add_argument("--out", default="data")
    p.set_defaults(run=linqs)

    p = sub.add_parser("adjnoun", help="adjective/noun adjacency network (GML)")
    p.add_argument("--gml", required=True)
    p.add_argument("--name", default="words")
    p.add_argument("--out", default="data")
    p.set_defaults(run=adjnoun)

    args = parser.parse_args()
    args.run(args)


if __name__ == "__main__":
    main()
