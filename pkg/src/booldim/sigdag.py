"""The comparison-vector DAG over a normalized tree-decomposition.

Each element ``z`` is compared, at every tree node ``t`` in the subtree
hanging from ``root_of(z)``, against the representatives of the ``k+1``
greedy colors in the bag of ``t``. The resulting vectors are the vertices
of ``D`` at ``t``; following one element from a node to a child gives the
edges. Vectors are strings over ``<``, ``>``, ``|`` (incomparable), ``=``
and ``*`` (no representative).
"""
from __future__ import annotations

import sys
from dataclasses import dataclass, field

from .errors import ColorMismatch, LemmaViolation, NotAPath, PreconditionViolated
from .poset import Poset
from .treedec import NormalizedDecomposition

LT, GT, INCOMP, EQ, STAR = "<", ">", "|", "=", "*"


# -- element coloring ------------------------------------------------------

def greedy_color(P: Poset, N: NormalizedDecomposition) -> dict[int, int]:
    """Least color not used in the element's root bag, elements taken by
    depth of their root node (ties by left-to-right DFS rank)."""
    rank = {t: i for i, t in enumerate(N.tree.preorder())}
    order = sorted(P.elements(), key=lambda z: (N.tree.depth[N.root_of[z]], rank[N.root_of[z]]))
    color: dict[int, int] = {}
    for z in order:
        used = {color[w] for w in N.bags[N.root_of[z]] if w in color}
        c = 1
        while c in used:
            c += 1
        color[z] = c
    return color


def rep_table(N: NormalizedDecomposition, color: dict[int, int], ncolors: int):
    table = {}
    for t, bag in N.bags.items():
        row = [None] * ncolors
        for z in bag:
            if z in color:
                row[color[z] - 1] = z
        table[t] = row
    return table


def rep(table, t: int, i: int):
    """Element of color ``i`` in the bag of ``t``, or None."""
    return table[t][i - 1]


def _compare(P: Poset, z: int, r) -> str:
    if r is None:
        return STAR
    if r == z:
        return EQ
    if P.closure[z - 1, r - 1]:
        return LT
    if P.closure[r - 1, z - 1]:
        return GT
    return INCOMP


def vec(P: Poset, N: NormalizedDecomposition, table, z: int, t: int) -> str:
    if not N.tree.is_ancestor(N.root_of[z], t):
        raise PreconditionViolated(f"root of {z} is not below node {t}")
    return sys.intern("".join(_compare(P, z, r) for r in table[t]))


# -- the DAG D -------------------------------------------------------------

@dataclass
class DagD:
    """Vertices are integer ids; ``node_of``/``key_of`` give (t, vector)."""

    node_of: list[int] = field(default_factory=list)
    key_of: list[str] = field(default_factory=list)
    at: dict[int, dict[str, int]] = field(default_factory=dict)
    out: list[dict[int, int]] = field(default_factory=list)
    inn: list[list[int]] = field(default_factory=list)
    witness: list[int] = field(default_factory=list)

    def __len__(self):
        return len(self.node_of)

    def vertices_at(self, t: int) -> list[int]:
        return list(self.at.get(t, {}).values())

    def edges(self):
        for d, targets in enumerate(self.out):
            for e in targets.values():
                yield d, e


def build_D(P: Poset, N: NormalizedDecomposition, color: dict[int, int]) -> DagD:
    ncolors = N.width + 1
    table = rep_table(N, color, ncolors)
    D = DagD(at={t: {} for t in N.tree.nodes})
    multi: dict[tuple[int, int], set[int]] = {}
    tree = N.tree
    for z in sorted(P.elements()):
        here = {}
        for t in tree.subtree(N.root_of[z]):
            key = sys.intern("".join(_compare(P, z, r) for r in table[t]))
            bucket = D.at[t]
            d = bucket.get(key)
            if d is None:
                d = len(D.node_of)
                bucket[key] = d
                D.node_of.append(t)
                D.key_of.append(key)
                D.out.append({})
                D.inn.append([])
                D.witness.append(z)
            here[t] = d
            p = tree.parent[t]
            if t != N.root_of[z]:
                multi.setdefault((here[p], t), set()).add(d)
    for (d, t), targets in multi.items():
        if len(targets) != 1:
            raise LemmaViolation(
                f"vertex ({D.node_of[d]}, {D.key_of[d]}) has {len(targets)} out-neighbours at {t}")
        e = next(iter(targets))
        D.out[d][t] = e
        D.inn[e].append(d)
    for d in range(len(D)):
        kids = tree.children[D.node_of[d]]
        if len(D.out[d]) != len(kids):
            missing = [t for t in kids if t not in D.out[d]]
            raise LemmaViolation(f"vertex {d} has no out-neighbour at {missing}")
    for lst in D.inn:
        lst.sort()
    return D


def check_unique_out_neighbor(D: DagD, N: NormalizedDecomposition) -> list[str]:
    """Every vertex at t has exactly one out-neighbour in each child bag."""
    problems = []
    for d in range(len(D)):
        t = D.node_of[d]
        for c in N.tree.children[t]:
            hits = [e for e in D.out[d].values() if D.node_of[e] == c]
            if len(hits) != 1:
                problems.append(f"vertex {d} at {t}: {len(hits)} out-neighbours at {c}")
    return problems


# -- coloring c_D ----------------------------------------------------------

@dataclass
class ColorCD:
    color: list[int]
    color_at: dict[int, dict[int, int]]  # tree node -> {color: vertex}

    def __getitem__(self, d):
        return self.color[d]

    @property
    def max_color(self) -> int:
        return max(self.color, default=0)


def color_D(D: DagD, N: NormalizedDecomposition) -> ColorCD:
    color = [0] * len(D)
    color_at: dict[int, dict[int, int]] = {}
    for t in N.tree.preorder():
        verts = sorted(D.at[t].values(), key=D.key_of.__getitem__)
        used = {}
        fresh = []
        for d in verts:
            if D.inn[d]:
                color[d] = min(color[e] for e in D.inn[d])
                used[color[d]] = d
            else:
                fresh.append(d)
        c = 1
        for d in fresh:
            while c in used:
                c += 1
            color[d] = c
            used[c] = d
        color_at[t] = used
    return ColorCD(color, color_at)


def signature_of_colors(colors) -> tuple[int, ...]:
    sig = []
    for c in colors:
        if not sig or sig[-1] != c:
            sig.append(c)
    return tuple(sig)


def signature_of_path(D: DagD, cD: ColorCD, path: list[int]) -> tuple[int, ...]:
    if not path:
        raise NotAPath("empty path")
    for a, b in zip(path, path[1:]):
        if D.out[a].get(D.node_of[b]) != b:
            raise NotAPath(f"no edge {a} -> {b}")
    sig = signature_of_colors(cD[d] for d in path)
    if any(a <= b for a, b in zip(sig, sig[1:])):
        raise ValueError(f"colors increase along path: {sig}")
    return sig


def tree_of(D: DagD, cD: ColorCD, d: int, gamma: int) -> list[int]:
    """Vertices reachable from ``d`` along vertices of color ``gamma``."""
    if cD[d] != gamma:
        raise ColorMismatch(f"vertex {d} has color {cD[d]}, not {gamma}")
    out = [d]
    stack = [d]
    while stack:
        v = stack.pop()
        for e in D.out[v].values():
            if cD[e] == gamma:
                out.append(e)
                stack.append(e)
    return out


def proj(D: DagD, vertices) -> frozenset:
    return frozenset(D.node_of[d] for d in vertices)


def sources(D: DagD) -> list[int]:
    return [d for d in range(len(D)) if not D.inn[d]]


# -- realized signatures ---------------------------------------------------

@dataclass
class Realized:
    triples: list[tuple[int, tuple[int, ...], int]]
    by_start: dict[int, set[tuple[int, ...]]]

    @property
    def signatures(self) -> set[tuple[int, ...]]:
        out = set()
        for sigs in self.by_start.values():
            out |= sigs
        return out

    @property
    def pairs(self) -> set[tuple[tuple[int, ...], tuple[int, ...]]]:
        out = set()
        for sigs in self.by_start.values():
            for g in sigs:
                for h in sigs:
                    out.add((g, h))
        return out


def enumerate_realized(D: DagD, cD: ColorCD, N: NormalizedDecomposition) -> Realized:
    """Signatures of all D-paths that end at a node of the form root_of(z)."""
    root_nodes = set(N.root_of.values())
    triples = []
    by_start: dict[int, set] = {}
    for d in range(len(D)):
        stack = [(d, (cD[d],))]
        found = set()
        while stack:
            v, sig = stack.pop()
            t = D.node_of[v]
            if t in root_nodes:
                triples.append((d, sig, t))
                found.add(sig)
            for e in D.out[v].values():
                c = cD[e]
                stack.append((e, sig if c == sig[-1] else sig + (c,)))
        if found:
            by_start[d] = found
    triples.sort()
    return Realized(triples, by_start)


def dump(D: DagD, cD: ColorCD) -> str:
    """One line per vertex: ``<tree node> <vector> <color>``, then edges."""
    lines = [f"c D with {len(D)} vertices"]
    order = sorted(range(len(D)), key=lambda d: (D.node_of[d], D.key_of[d]))
    for d in order:
        lines.append(f"v {D.node_of[d]} {D.key_of[d]} {cD[d]}")
    for d in order:
        for e in sorted(D.out[d].values(), key=lambda e: (D.node_of[e], D.key_of[e])):
            lines.append(f"e {D.node_of[d]} {D.key_of[d]} {D.node_of[e]} {D.key_of[e]}")
    return "\n".join(lines) + "\n"
