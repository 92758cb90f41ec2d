"""Test-corpus generators.

Element ids are dense (1..n). Generators that know a good tree-decomposition
of the cover graph return it alongside the poset; the others leave it to
:func:`booldim.treedec.heuristic_decompose`.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import NTooSmall
from .poset import Poset, make_poset
from .treedec import TreeDecomposition


@dataclass
class GeneratorOutput:
    poset: Poset
    decomposition: TreeDecomposition | None = None
    witness: dict[str, int] = field(default_factory=dict)


def gen_standard_example(n: int) -> GeneratorOutput:
    """S_n with a_i = i and b_i = n + i."""
    if n < 2:
        raise NTooSmall(f"standard example needs n >= 2, got {n}")
    rel = [(i, n + j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    witness = {f"a{i}": i for i in range(1, n + 1)}
    witness.update({f"b{i}": n + i for i in range(1, n + 1)})
    return GeneratorOutput(make_poset(2 * n, rel), None, witness)


def _path_decomposition(bag_list, n_vertices):
    nodes = list(range(1, len(bag_list) + 1))
    edges = [(i, i + 1) for i in nodes[:-1]]
    bags = {i: frozenset(b) for i, b in zip(nodes, bag_list)}
    return TreeDecomposition(nodes, edges, bags, n_vertices)


def gen_kelly(n: int) -> GeneratorOutput:
    """Kelly's planar poset containing S_n, with a width-3 path-decomposition.

    Besides a_1..a_n and b_1..b_n there are two chains
    ``u_1 < ... < u_{n-1}`` and ``w_n < ... < w_2`` with covers
    ``a_i < u_i``, ``u_{j-1} < b_j``, ``a_i < w_i``, ``w_{j+1} < b_j``.
    So a_i < b_j through the u-chain iff i < j and through the w-chain iff
    i > j.
    """
    if n < 3:
        raise NTooSmall(f"Kelly construction needs n >= 3, got {n}")
    a = {i: i for i in range(1, n + 1)}
    b = {i: n + i for i in range(1, n + 1)}
    u = {i: 2 * n + i for i in range(1, n)}
    w = {i: 3 * n + i - 2 for i in range(2, n + 1)}
    rel = []
    for i in range(1, n):
        rel.append((a[i], u[i]))
        rel.append((u[i], b[i + 1]))
        if i + 1 < n:
            rel.append((u[i], u[i + 1]))
    for i in range(2, n + 1):
        rel.append((a[i], w[i]))
        rel.append((w[i], b[i - 1]))
        if i + 1 <= n:
            rel.append((w[i + 1], w[i]))
    total = 4 * n - 2
    P = make_poset(total, rel)

    def present(*xs):
        return {x for x in xs if x is not None}

    bag_list = []
    for i in range(1, n + 1):
        u_prev, u_cur = u.get(i - 1), u.get(i)
        w_cur, w_next = w.get(i), w.get(i + 1)
        bag_list.append(present(u_prev, w_cur, w_next, b[i]))
        bag_list.append(present(u_prev, w_cur, w_next, u_cur))
        bag_list.append(present(w_cur, w_next, u_cur, a[i]))
    witness = {f"a{i}": a[i] for i in a}
    witness.update({f"b{i}": b[i] for i in b})
    return GeneratorOutput(P, _path_decomposition(bag_list, total), witness)


def gen_random_bounded_tw(n: int, k: int, seed: int, edge_prob: float = 0.5) -> GeneratorOutput:
    """Random poset whose cover graph has tree-width at most ``k``.

    A random tree of bags is grown first (each new vertex joins a subset of
    at most ``k`` vertices of an existing bag); random intra-bag edges are
    then oriented along a random linear order and closed transitively.
    """
    rng = random.Random(seed)
    bags = [[1]]
    tree_edges = []
    pairs = []
    for v in range(2, n + 1):
        p = rng.randrange(len(bags))
        parent = bags[p]
        cap = min(k, len(parent))
        if rng.random() < 0.75:
            size = cap
        else:
            size = rng.randint(0, cap)
        sub = sorted(rng.sample(parent, size))
        for x in sub:
            if rng.random() < edge_prob:
                pairs.append((x, v))
        bags.append(sub + [v])
        tree_edges.append((p + 1, len(bags)))
    rank = list(range(1, n + 1))
    rng.shuffle(rank)
    pos = {x: i for i, x in enumerate(rank)}
    oriented = [(x, y) if pos[x] < pos[y] else (y, x) for x, y in pairs]
    P = make_poset(n, oriented)
    nodes = list(range(1, len(bags) + 1))
    td = TreeDecomposition(nodes, tree_edges,
                           {i + 1: frozenset(b) for i, b in enumerate(bags)}, n)
    return GeneratorOutput(P, td)


def gen_chain(n: int) -> GeneratorOutput:
    P = make_poset(n, [(i, i + 1) for i in range(1, n)])
    return GeneratorOutput(P, _path_decomposition([{i, i + 1} for i in range(1, n)] or [{1}], n))


def gen_antichain(n: int) -> GeneratorOutput:
    return GeneratorOutput(make_poset(n, []), _path_decomposition([{i} for i in range(1, n + 1)], n))


def gen_random_forest(n: int, seed: int) -> GeneratorOutput:
    rng = random.Random(seed)
    rel = []
    for v in range(2, n + 1):
        if rng.random() < 0.85:
            u = rng.randrange(1, v)
            rel.append((u, v) if rng.random() < 0.5 else (v, u))
    return GeneratorOutput(make_poset(n, rel))
