"""Reachability labels for digraphs.

Directed cycles are contracted, the condensation is read as a poset, and
every vertex is labelled with the positions of its component in the
realizer's permutations (fixed-width big-endian fields). Two labels give
the order bits, and the realizer's program answers "is v reachable from u".
"""
from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass

import networkx as nx
import numpy as np

from .errors import CorruptPayload, IdOutOfRange, InconsistentHeader, LengthMismatch, TDSyntaxError
from .poset import Poset, make_poset
from .realizer import Realizer, build_realizer, from_json, to_json
from .treedec import TreeDecomposition

LABEL_FORMAT = "booldim-labels"
LABEL_VERSION = 1


@dataclass(frozen=True)
class Digraph:
    n: int
    arcs: frozenset

    @classmethod
    def from_arcs(cls, n: int, arcs) -> "Digraph":
        arcs = frozenset((int(u), int(v)) for u, v in arcs)
        for u, v in arcs:
            if not (1 <= u <= n and 1 <= v <= n):
                raise IdOutOfRange(f"arc ({u}, {v}) outside 1..{n}")
        return cls(n, arcs)


def parse_digraph(text: str) -> Digraph:
    n = m = None
    arcs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None or len(parts) != 4 or parts[1] != "digraph":
                raise TDSyntaxError(lineno, "expected 'p digraph <n> <m>'")
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise TDSyntaxError(lineno, "non-integer header field") from None
            continue
        if n is None:
            raise TDSyntaxError(lineno, "arc before header")
        if len(parts) != 2:
            raise TDSyntaxError(lineno, "expected '<u> <v>'")
        try:
            arcs.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise TDSyntaxError(lineno, "non-integer vertex id") from None
    if n is None:
        raise TDSyntaxError(0, "missing header")
    if len(arcs) != m:
        raise InconsistentHeader(f"header announces {m} arcs, found {len(arcs)}")
    return Digraph.from_arcs(n, arcs)


def write_digraph(G: Digraph) -> str:
    arcs = sorted(G.arcs)
    return "".join([f"p digraph {G.n} {len(arcs)}\n"] + [f"{u} {v}\n" for u, v in arcs])


def _nx(G: Digraph) -> nx.DiGraph:
    H = nx.DiGraph()
    H.add_nodes_from(range(1, G.n + 1))
    H.add_edges_from((u, v) for u, v in G.arcs if u != v)
    return H


def condense_scc(G: Digraph) -> tuple[Digraph, dict[int, int]]:
    """Contract strongly connected components; components are numbered
    1..n' by their smallest vertex."""
    sccs = sorted((sorted(c) for c in nx.strongly_connected_components(_nx(G))), key=lambda c: c[0])
    comp = {v: i for i, c in enumerate(sccs, 1) for v in c}
    arcs = {(comp[u], comp[v]) for u, v in G.arcs if comp[u] != comp[v]}
    return Digraph(len(sccs), frozenset(arcs)), comp


def digraph_to_poset(dag: Digraph) -> Poset:
    """x <= y iff there is a directed path from x to y."""
    return make_poset(dag.n, [(u, v) for u, v in dag.arcs if u != v])


def field_width(n_components: int) -> int:
    return math.ceil(math.log2(n_components)) if n_components > 1 else 0


@dataclass
class LabelScheme:
    labels: dict[int, str]
    descriptor: dict
    bits_per_label: int
    realizer: Realizer


def build_labels(G: Digraph, T: TreeDecomposition | None = None) -> LabelScheme:
    dag, comp = condense_scc(G)
    R = build_realizer(digraph_to_poset(dag), T)
    w = field_width(dag.n)
    fields = {c: "".join(format(int(R.positions[i, c]), f"0{w}b") if w else ""
                         for i in range(len(R.permutations)))
              for c in range(1, dag.n + 1)}
    labels = {v: fields[comp[v]] for v in range(1, G.n + 1)}
    bits = w * len(R.permutations)
    desc = {
        "format": LABEL_FORMAT,
        "version": LABEL_VERSION,
        "bits_per_label": bits,
        "field_width": w,
        "fields": len(R.permutations),
        "components": {str(v): comp[v] for v in range(1, G.n + 1)},
        "realizer": to_json(R),
    }
    return LabelScheme(labels, desc, bits, R)


class Decoder:
    """Answers reachability from two labels using only the descriptor."""

    def __init__(self, desc: dict):
        try:
            if desc.get("format") != LABEL_FORMAT:
                raise CorruptPayload("not a label descriptor")
            self.width = int(desc["field_width"])
            self.fields = int(desc["fields"])
            self.bits = int(desc["bits_per_label"])
            self.program = from_json(desc["realizer"]).program
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise CorruptPayload(f"malformed descriptor: {exc}") from None
        if self.bits != self.width * self.fields:
            raise CorruptPayload("bits_per_label disagrees with the field layout")

    def positions(self, label: str) -> list[int]:
        if len(label) != self.bits:
            raise LengthMismatch(f"label has {len(label)} bits, expected {self.bits}")
        w = self.width
        if w == 0:
            return [0] * self.fields
        return [int(label[i * w:(i + 1) * w], 2) for i in range(self.fields)]

    def __call__(self, l1: str, l2: str) -> bool:
        p1, p2 = self.positions(l1), self.positions(l2)
        return self.program.evaluate([a <= b for a, b in zip(p1, p2)])

    def batch(self, pairs) -> np.ndarray:
        cache = {}

        def pos(label):
            if label not in cache:
                cache[label] = self.positions(label)
            return cache[label]

        left = np.array([pos(a) for a, _ in pairs], dtype=np.int64).reshape(len(pairs), self.fields)
        right = np.array([pos(b) for _, b in pairs], dtype=np.int64).reshape(len(pairs), self.fields)
        return self.program.evaluate_batch(left <= right)


def decode(l1: str, l2: str, desc) -> bool:
    dec = desc if isinstance(desc, Decoder) else Decoder(desc)
    return dec(l1, l2)


def label_to_hex(label: str) -> str:
    if not label:
        return "0"
    return format(int(label, 2), f"0{math.ceil(len(label) / 4)}x")


def hex_to_label(text: str, bits: int) -> str:
    value = int(text, 16)
    if value >> bits:
        raise LengthMismatch(f"hex label {text} does not fit in {bits} bits")
    return format(value, f"0{bits}b") if bits else ""


def export_labels(scheme: LabelScheme) -> str:
    return "".join(f"{v} {label_to_hex(scheme.labels[v])}\n" for v in sorted(scheme.labels))


def import_labels(text: str, bits: int) -> dict[int, str]:
    out = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        v, h = line.split()
        out[int(v)] = hex_to_label(h, bits)
    return out


def dump_descriptor(desc: dict) -> bytes:
    return json.dumps(desc, sort_keys=True, separators=(",", ":")).encode() + b"\n"


def load_descriptor(data: bytes) -> dict:
    try:
        doc = json.loads(data)
    except (ValueError, UnicodeDecodeError) as exc:
        raise CorruptPayload(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise CorruptPayload("top level is not an object")
    return doc


def gen_random_digraph(n: int, k: int, seed: int) -> Digraph:
    """Random digraph on about ``n`` vertices whose condensation has a cover
    graph of tree-width at most ``k``.

    A random bounded-width poset supplies the condensation; some of its
    elements are blown up into directed cycles, and a few transitive arcs
    and self-loops are sprinkled in (neither changes reachability).
    """
    from .generators import gen_random_bounded_tw

    rng = random.Random(seed)
    base_n = max(1, n * 2 // 3)
    P = gen_random_bounded_tw(base_n, k, seed).poset
    members: dict[int, list[int]] = {}
    nxt = 1
    budget = n - base_n
    for z in range(1, base_n + 1):
        size = 1
        if budget > 0 and rng.random() < 0.3:
            size = 1 + min(budget, rng.randint(1, 3))
            budget -= size - 1
        members[z] = list(range(nxt, nxt + size))
        nxt += size
    arcs = set()
    for vs in members.values():
        if len(vs) > 1:
            arcs.update(zip(vs, vs[1:] + vs[:1]))
    for u, v in P.covers:
        arcs.add((rng.choice(members[u]), rng.choice(members[v])))
    order = np.argwhere(P.closure)
    for x, y in order[: len(order) // 4]:
        if rng.random() < 0.3:
            arcs.add((rng.choice(members[x + 1]), rng.choice(members[y + 1])))
    total = nxt - 1
    for _ in range(rng.randint(0, 2)):
        v = rng.randint(1, total)
        arcs.add((v, v))
    return Digraph.from_arcs(total, arcs)
