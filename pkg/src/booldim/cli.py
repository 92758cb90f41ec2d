"""Command-line interface.

Exit codes: 0 ok, 2 usage (bad arguments or ids), 3 validation (input
files that do not parse or decompositions that are not valid),
4 verification mismatch.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import generators, oracle, reach, report
from .bp import (ColorDetector, GREEN, RED, color_detect_build, color_detect_eval, order_bits,
                 set_membership_build, set_membership_decode)
from .errors import BooldimError, IdOutOfRange, InvalidDecomposition, NTooSmall
from .poset import parse_poset, write_poset
from .realizer import (build_realizer, deserialize, paper_bound, query, serialize,
                       standard_example_realizer)
from .treedec import cover_graph, heuristic_decompose, parse_td, validate, write_td
from .trees import RootedTree

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_MISMATCH = 0, 2, 3, 4


class UsageError(Exception):
    pass


def _emit(args, payload: dict, text: str):
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _read(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_td(path):
    return parse_td(_read(path)) if path else None


# -- subcommands -------------------------------------------------------------

def cmd_gen(args):
    kind, n = args.kind, args.n
    if kind == "digraph":
        G = reach.gen_random_digraph(n, args.k, args.seed)
        text = reach.write_digraph(G)
        if args.out:
            Path(f"{args.out}.dg").write_text(text)
        else:
            sys.stdout.write(text)
        return EXIT_OK
    makers = {
        "standard": lambda: generators.gen_standard_example(n),
        "kelly": lambda: generators.gen_kelly(n),
        "random-tw": lambda: generators.gen_random_bounded_tw(n, args.k, args.seed),
        "chain": lambda: generators.gen_chain(n),
        "antichain": lambda: generators.gen_antichain(n),
        "forest": lambda: generators.gen_random_forest(n, args.seed),
    }
    try:
        out = makers[kind]()
    except NTooSmall as exc:
        raise UsageError(str(exc)) from None
    comments = [f"{kind} n={n}" + (f" k={args.k} seed={args.seed}" if kind == "random-tw" else "")]
    text = write_poset(out.poset, comments)
    if args.out:
        Path(f"{args.out}.poset").write_text(text)
        if out.decomposition is not None:
            Path(f"{args.out}.td").write_text(write_td(out.decomposition))
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_decompose(args):
    P = parse_poset(_read(args.poset))
    G = cover_graph(P)
    if args.td:
        rep = validate(G, parse_td(_read(args.td)))
        _emit(args, {"ok": rep.ok, "width": rep.width, "summary": rep.summary()}, rep.summary())
        return EXIT_OK if rep.ok else EXIT_INVALID
    text = write_td(heuristic_decompose(G))
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_build(args):
    P = parse_poset(_read(args.poset))
    R = build_realizer(P, _load_td(args.td), break_rule=args.break_rule, exits=args.exits)
    Path(args.out).write_bytes(serialize(R))
    m = R.metadata
    stats = {"n": P.n, "k": R.k, "dag_vertices": m["dag_vertices"],
             "realized_signatures": m["realized_signatures"], "permutations": len(R.permutations),
             "paper_bound": str(paper_bound(R.k))}
    _emit(args, stats,
          f"n={P.n} k={R.k} |D|={m['dag_vertices']} signatures={m['realized_signatures']} "
          f"permutations={len(R.permutations)} bound={report.magnitude(paper_bound(R.k))}")
    return EXIT_OK


def cmd_query(args):
    R = deserialize(Path(args.realizer).read_bytes())
    try:
        ans = query(R, args.x, args.y)
    except IdOutOfRange as exc:
        raise UsageError(str(exc)) from None
    _emit(args, {"x": args.x, "y": args.y, "leq": ans}, "1" if ans else "0")
    return EXIT_OK


def cmd_verify(args):
    P = parse_poset(_read(args.poset))
    R = deserialize(Path(args.realizer).read_bytes())
    if R.n != P.n:
        raise UsageError(f"realizer is for {R.n} elements, poset has {P.n}")
    rep = oracle.verify_all_pairs(P, R, instance=str(args.poset))
    if args.json:
        print(rep.to_json())
    else:
        print(rep.summary())
        for x, y, exp, got in rep.mismatches[:10]:
            print(f"  ({x}, {y}): expected {int(exp)} got {int(got)}")
    return EXIT_OK if rep.passed else EXIT_MISMATCH


def cmd_label(args):
    G = reach.parse_digraph(_read(args.digraph))
    scheme = reach.build_labels(G, parse_td(_read(args.td)) if args.td else None)
    Path(args.out).write_text(reach.export_labels(scheme))
    Path(args.descriptor).write_bytes(reach.dump_descriptor(scheme.descriptor))
    d = len(scheme.realizer.permutations)
    _emit(args, {"vertices": G.n, "components": scheme.realizer.n, "permutations": d,
                 "bits_per_label": scheme.bits_per_label},
          f"vertices={G.n} components={scheme.realizer.n} permutations={d} "
          f"bits_per_label={scheme.bits_per_label}")
    return EXIT_OK


def cmd_decode(args):
    desc = reach.load_descriptor(Path(args.descriptor).read_bytes())
    dec = reach.Decoder(desc)
    try:
        l1, l2 = (reach.hex_to_label(h, dec.bits) for h in (args.label1, args.label2))
    except ValueError:
        raise UsageError("labels must be hexadecimal") from None
    ans = dec(l1, l2)
    _emit(args, {"reachable": ans}, "1" if ans else "0")
    return EXIT_OK


def _parse_range(text: str) -> list[int]:
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return list(range(int(lo), int(hi) + 1))
        return [int(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"bad range {text!r}; use 3..10 or 3,5,7") from None


def cmd_stats(args):
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    for fam in args.family:
        try:
            rows += report.collect(fam, _parse_range(args.n), k=args.k, seed=args.seed)
        except NTooSmall as exc:
            raise UsageError(str(exc)) from None
    sep = "\t" if args.tsv else ","
    table = report.write_table(rows, out_dir / ("stats.tsv" if args.tsv else "stats.csv"), sep)
    fig = report.plot_counts(rows, out_dir / "permutations.png")
    if args.json:
        print(json.dumps({"table": str(table), "figure": str(fig),
                          "rows": [r.__dict__ for r in rows]}, sort_keys=True))
    else:
        sys.stdout.write(table.read_text())
        print(f"wrote {table} and {fig}")
    return EXIT_OK if all(r.verified for r in rows) else EXIT_MISMATCH


def _selftest_checks(seed: int):
    rng = random.Random(seed)
    # set membership over a small ground set
    V = list(range(1, 7))
    for mask in range(1 << len(V)):
        C = {v for v in V if mask >> (v - 1) & 1}
        perms = set_membership_build(V, C)
        for x in V:
            for y in V:
                if x != y and set_membership_decode(order_bits(perms, x, y)) != (x in C, y in C):
                    yield "set-membership", f"C={sorted(C)} ({x}, {y})"
    # color detection on random trees
    for _ in range(60):
        n = rng.randint(2, 25)
        parent = {1: None}
        for v in range(2, n + 1):
            parent[v] = rng.randrange(1, v)
        T = RootedTree.from_parent(1, parent, order_key=lambda v: rng.random())
        colors = {e: rng.choice((RED, GREEN, None)) for e in T.edges()}
        colors = {e: c for e, c in colors.items() if c}
        cd: ColorDetector = color_detect_build(T, colors)
        for x in T.nodes:
            for y in T.nodes:
                m = T.meet(x, y)
                for side, end in (("x", x), ("y", y)):
                    if m == end:
                        continue
                    bits = order_bits(cd.perms, x, y)
                    if color_detect_eval(bits, side) != oracle.path_scan_color_oracle(
                            T.parent, colors, x, y, side):
                        yield "color-detection", f"tree n={n} ({x}, {y}) side {side}"
    # realizers
    corpus = [("standard-4", 5, standard_example_realizer(5), generators.gen_standard_example(5))]
    for n in (3, 5):
        out = generators.gen_kelly(n)
        corpus.append(("kelly", n, build_realizer(out.poset, out.decomposition), out))
    for s in range(10):
        out = generators.gen_random_bounded_tw(8 + 3 * s, 1 + s % 3, seed + s)
        corpus.append(("random-tw", s, build_realizer(out.poset, out.decomposition), out))
    for name, n, R, out in corpus:
        if not oracle.verify_all_pairs(out.poset, R).passed:
            yield "realizer", f"{name} {n}"
    # labels
    for s in range(5):
        G = reach.gen_random_digraph(30, 2, seed + s)
        scheme = reach.build_labels(G)
        truth = oracle.reachability(G.n, G.arcs)
        dec = reach.Decoder(scheme.descriptor)
        for u in range(1, G.n + 1):
            for v in range(1, G.n + 1):
                if dec(scheme.labels[u], scheme.labels[v]) != truth[u - 1, v - 1]:
                    yield "labels", f"digraph seed {seed + s} ({u}, {v})"


def cmd_selftest(args):
    failures = list(_selftest_checks(args.seed))
    if args.json:
        print(json.dumps({"passed": not failures, "failures": failures[:50]}))
    else:
        for area, what in failures[:50]:
            print(f"FAIL {area}: {what}")
        print("selftest passed" if not failures else f"selftest: {len(failures)} failures")
    return EXIT_OK if not failures else EXIT_MISMATCH


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable output")
    ap = argparse.ArgumentParser(prog="booldim", description=__doc__.splitlines()[0])
    ap.add_argument("--json", action="store_true", help="machine-readable output")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("gen", parents=[common], help="generate a poset (or digraph)")
    p.add_argument("kind", choices=["standard", "kelly", "random-tw", "chain", "antichain",
                                    "forest", "digraph"])
    p.add_argument("n", type=int)
    p.add_argument("k", type=int, nargs="?", default=2)
    p.add_argument("seed", type=int, nargs="?", default=0)
    p.add_argument("-o", "--out", help="output prefix (writes PREFIX.poset and PREFIX.td)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("decompose", parents=[common],
                       help="min-fill decomposition of the cover graph, or validate --td")
    p.add_argument("poset")
    p.add_argument("--td", help="validate this decomposition instead of computing one")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("build", parents=[common], help="build a realizer")
    p.add_argument("poset")
    p.add_argument("--td")
    p.add_argument("-o", "--out", required=True)
    p.add_argument("--break-rule", choices=["chain", "node"], default="chain")
    p.add_argument("--exits", choices=["all", "leaves"], default="all")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("query", parents=[common], help="answer x <= y from a realizer file")
    p.add_argument("realizer")
    p.add_argument("x", type=int)
    p.add_argument("y", type=int)
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("verify", parents=[common], help="check a realizer on all pairs")
    p.add_argument("poset")
    p.add_argument("realizer")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("label", parents=[common], help="reachability labels for a digraph")
    p.add_argument("digraph")
    p.add_argument("--td", help="decomposition of the condensation's cover graph")
    p.add_argument("-o", "--out", required=True, help="label file (<v> <hex> per line)")
    p.add_argument("--descriptor", required=True, help="decoder descriptor (JSON)")
    p.set_defaults(func=cmd_label)

    p = sub.add_parser("decode", parents=[common], help="is label2's vertex reachable from label1's")
    p.add_argument("descriptor")
    p.add_argument("label1")
    p.add_argument("label2")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("stats", parents=[common], help="size table and figure over a family")
    p.add_argument("--family", action="append", choices=report.FAMILIES)
    p.add_argument("--n", default="3..10", help="sizes, as 3..10 or 3,5,7")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tsv", action="store_true")
    p.add_argument("--out-dir", default="stats")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("selftest", parents=[common], help="seeded oracle checks")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_selftest)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.cmd == "stats" and not args.family:
        args.family = ["kelly"]
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvalidDecomposition as exc:
        print(f"error: {exc}", file=sys.stderr)
        for line in exc.report.summary().splitlines():
            print(f"  {line}", file=sys.stderr)
        return EXIT_INVALID
    except (BooldimError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
