"""Permutations, bits-only branching programs, and the two detection tools.

A query pair ``(x, y)`` is seen by a program only through its order bits:
bit ``i`` is True iff ``x`` is at or before ``y`` in permutation ``i``.
Every evaluator in this module takes bits and nothing else.
"""
from __future__ import annotations

import sys
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

import numpy as np

from .errors import DomainsOverlap, ImpossiblePattern, NotASubset
from .trees import RootedTree

RED = "R"
GREEN = "G"

Y_BELOW_X = "y_below_x"
X_LEFT_OF_Y = "x_left_of_y"
Y_LEFT_OF_X = "y_left_of_x"
X_BELOW_Y = "x_below_y"


# -- permutations ----------------------------------------------------------

class Permutation:
    """An ordering of a finite set of hashable items."""

    __slots__ = ("seq", "position")

    def __init__(self, seq: Iterable[Hashable]):
        self.seq = tuple(seq)
        self.position = {item: i for i, item in enumerate(self.seq)}
        if len(self.position) != len(self.seq):
            raise ValueError("permutation lists an item twice")

    def __len__(self):
        return len(self.seq)

    def __iter__(self):
        return iter(self.seq)

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.seq == other.seq

    def __hash__(self):
        return hash(self.seq)

    def __repr__(self):
        return f"Permutation({self.seq!r})"

    def before(self, x, y) -> bool:
        return self.position[x] <= self.position[y]


def reverse(p: Permutation) -> Permutation:
    return Permutation(reversed(p.seq))


def project(p: Permutation, X) -> Permutation:
    X = set(X)
    return Permutation(v for v in p.seq if v in X)


def concat(p: Permutation, q: Permutation) -> Permutation:
    if set(p.seq) & set(q.seq):
        raise DomainsOverlap("concatenated permutations share items")
    return Permutation(p.seq + q.seq)


def order_bits(perms: Sequence[Permutation], x, y) -> tuple[bool, ...]:
    return tuple(p.position[x] <= p.position[y] for p in perms)


# -- Tool 1: set membership ------------------------------------------------

def set_membership_build(V, C, base: Permutation | None = None):
    V = set(V)
    C = set(C)
    if not C <= V:
        raise NotASubset(f"{sorted(C - V)} not in V")
    pi = base if base is not None else Permutation(sorted(V))
    inside, outside = project(pi, C), project(pi, V - C)
    return (concat(inside, outside),
            concat(reverse(inside), outside),
            concat(inside, reverse(outside)))


def set_membership_decode(bits) -> tuple[bool, bool]:
    b1, b2, b3 = (bool(b) for b in bits)
    if b1 == b2 == b3:
        return (b1, not b1)
    if b1 == b3:
        return (True, True)
    if b1 == b2:
        return (False, False)
    raise ImpossiblePattern(f"bits {bits} cannot come from distinct elements")


# -- Tool 2: color detection -----------------------------------------------

def dfs_orders(T: RootedTree) -> tuple[Permutation, Permutation]:
    return Permutation(T.preorder()), Permutation(T.preorder(mirror=True))


def rel_pos(bit_l, bit_r) -> str:
    """Relative position of x and y from their order in the two DFS orders."""
    if bit_l and bit_r:
        return X_BELOW_Y
    if not bit_l and not bit_r:
        return Y_BELOW_X
    return X_LEFT_OF_Y if bit_l else Y_LEFT_OF_X


def algo1_perm(T: RootedTree, colors: dict) -> Permutation:
    """Permutation detecting the first colored edge when y is below x."""
    rank = {v: i for i, v in enumerate(T.preorder())}
    out = []
    tasks = [("process", T.root)]
    while tasks:
        kind, arg = tasks.pop()
        if kind == "emit":
            out.extend(arg)
            continue
        v = arg
        plain, red, green = [], [], []
        stack = [v]
        while stack:
            u = stack.pop()
            plain.append(u)
            for w in T.children[u]:
                c = colors.get((u, w))
                if c is None:
                    stack.append(w)
                elif c == RED:
                    red.append(w)
                else:
                    green.append(w)
        plain.sort(key=lambda u: (T.depth[u], rank[u]))
        red.sort(key=rank.__getitem__)
        green.sort(key=rank.__getitem__)
        todo = [("process", u) for u in red] + [("emit", plain)] + [("process", u) for u in green]
        tasks.extend(reversed(todo))
    return Permutation(out)


@contextmanager
def _deep_recursion(limit):
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, limit))
    try:
        yield
    finally:
        sys.setrecursionlimit(old)


def algo2_perm(T: RootedTree, colors: dict) -> Permutation:
    """Permutation detecting the first colored edge when x is left of y."""
    out = []
    S = []

    def process(v):
        out.append(v)
        for w in T.children[v]:
            c = colors.get((v, w))
            if c is None:
                process(w)
            elif c == RED:
                S.append(w)
            else:
                marker = ("mark", v)
                S.append(marker)
                process(w)
                while S[-1] != marker:
                    process(S.pop())
                S.pop()

    with _deep_recursion(4 * len(T) + 100):
        process(T.root)
        while S:
            process(S.pop())
    return Permutation(out)


@dataclass(frozen=True)
class ColorDetector:
    """The five permutations of Tool 2 for one edge coloring.

    Order: pi_L, pi_R, Algorithm 1, Algorithm 2, Algorithm 2 on the mirrored tree.
    """

    perms: tuple[Permutation, Permutation, Permutation, Permutation, Permutation]


def color_detect_build(T: RootedTree, colors: dict) -> ColorDetector:
    pi_l, pi_r = dfs_orders(T)
    mirrored = T.mirrored()
    return ColorDetector((pi_l, pi_r, algo1_perm(T, colors), algo2_perm(T, colors),
                          algo2_perm(mirrored, colors)))


def color_detect_eval(bits, side: str = "x") -> bool:
    """1 iff the first colored edge from the meet toward the chosen endpoint is RED.

    ``bits`` are the order bits of (x, y) in the five detector permutations.
    For ``side == "y"`` the roles swap; for distinct x, y the bits of (y, x)
    are the complements.
    """
    bl, br, b1, b2, b3 = (bool(b) for b in bits)
    if side == "y":
        bl, br, b1, b2, b3 = not bl, not br, not b1, not b2, not b3
    case = rel_pos(bl, br)
    if case == Y_BELOW_X:
        return b1
    if case == X_LEFT_OF_Y:
        return not b2
    if case == Y_LEFT_OF_X:
        return not b3
    return False


# -- branching programs ----------------------------------------------------

CONST, BIT, NOT, AND, OR, IF = "const", "bit", "not", "and", "or", "if"
EQUAL, MEMBER, COLOR, RELPOS, PAIR_OR = "equal", "member", "color", "relpos", "pair_or"
KINDS = (CONST, BIT, NOT, AND, OR, IF, EQUAL, MEMBER, COLOR, RELPOS, PAIR_OR)


@dataclass(frozen=True)
class Node:
    """One subprogram.

    ``reads`` are the input bits it inspects, ``children`` the subprograms
    it may call, ``params`` the fixed parameters of its rule.
    """

    kind: str
    reads: tuple[int, ...] = ()
    children: tuple[int, ...] = ()
    params: tuple = ()


class ProgramBuilder:
    """Hash-conses nodes so that identical subprograms are stored once."""

    def __init__(self):
        self.nodes: list[Node] = []
        self._index: dict[Node, int] = {}

    def add(self, kind, reads=(), children=(), params=()) -> int:
        node = Node(kind, tuple(reads), tuple(children), tuple(params))
        if node not in self._index:
            self._index[node] = len(self.nodes)
            self.nodes.append(node)
        return self._index[node]

    def const(self, value: bool) -> int:
        return self.add(CONST, params=(bool(value),))

    def build(self, root: int, n_bits: int) -> "BranchingProgram":
        return BranchingProgram(tuple(self.nodes), root, n_bits)


@dataclass(frozen=True)
class BranchingProgram:
    nodes: tuple[Node, ...]
    root: int
    n_bits: int

    def evaluate(self, bits) -> bool:
        if len(bits) != self.n_bits:
            from .errors import BitLengthMismatch

            raise BitLengthMismatch(f"expected {self.n_bits} bits, got {len(bits)}")
        memo: dict[int, bool] = {}
        return self._eval(self.root, bits, memo)

    def _eval(self, i, bits, memo):
        if i in memo:
            return memo[i]
        node = self.nodes[i]
        kind = node.kind
        r = node.reads
        if kind == CONST:
            val = node.params[0]
        elif kind == BIT:
            val = bool(bits[r[0]])
        elif kind == NOT:
            val = not self._eval(node.children[0], bits, memo)
        elif kind == AND:
            val = all(self._eval(c, bits, memo) for c in node.children)
        elif kind == OR:
            val = any(self._eval(c, bits, memo) for c in node.children)
        elif kind == IF:
            c, a, b = node.children
            val = self._eval(a if self._eval(c, bits, memo) else b, bits, memo)
        elif kind == EQUAL:
            val = all(bits[j] for j in r)
        elif kind == MEMBER:
            xin, yin = set_membership_decode([bits[j] for j in r])
            val = xin if node.params[0] == "x" else yin
        elif kind == COLOR:
            val = color_detect_eval([bits[j] for j in r], node.params[0])
        elif kind == RELPOS:
            case = rel_pos(bits[r[0]], bits[r[1]])
            slot = (Y_BELOW_X, X_LEFT_OF_Y, Y_LEFT_OF_X, X_BELOW_Y).index(case)
            val = self._eval(node.children[slot], bits, memo)
        elif kind == PAIR_OR:
            val = False
            ch = node.children
            for a, b in node.params:
                if self._eval(ch[a], bits, memo) and self._eval(ch[b], bits, memo):
                    val = True
                    break
        else:
            raise ValueError(f"unknown node kind {kind!r}")
        memo[i] = val
        return val

    def evaluate_batch(self, bits: np.ndarray) -> np.ndarray:
        """Evaluate on many queries at once; ``bits`` has shape (queries, n_bits).

        Every node is computed for every query (no short-circuit), which
        gives the same values as :meth:`evaluate` row by row.
        """
        bits = np.asarray(bits, dtype=bool)
        if bits.ndim != 2 or bits.shape[1] != self.n_bits:
            from .errors import BitLengthMismatch

            raise BitLengthMismatch(f"expected (*, {self.n_bits}) bits, got {bits.shape}")
        q = bits.shape[0]
        vals: list[np.ndarray | None] = [None] * len(self.nodes)
        for i in self._topo_order():
            node = self.nodes[i]
            kind, r, ch = node.kind, node.reads, node.children
            if kind == CONST:
                v = np.full(q, node.params[0], dtype=bool)
            elif kind == BIT:
                v = bits[:, r[0]]
            elif kind == NOT:
                v = ~vals[ch[0]]
            elif kind == AND:
                v = np.logical_and.reduce([vals[c] for c in ch]) if ch else np.ones(q, bool)
            elif kind == OR:
                v = np.logical_or.reduce([vals[c] for c in ch]) if ch else np.zeros(q, bool)
            elif kind == IF:
                v = np.where(vals[ch[0]], vals[ch[1]], vals[ch[2]])
            elif kind == EQUAL:
                v = np.logical_and.reduce([bits[:, j] for j in r])
            elif kind == MEMBER:
                b1, b2, b3 = bits[:, r[0]], bits[:, r[1]], bits[:, r[2]]
                # x in C: (1,1,1) or b1 == b3 != b2; y in C: (0,0,0) or b1 == b3 != b2
                both_in = (b1 == b3) & (b1 != b2)
                same = (b1 == b2) & (b2 == b3)
                if node.params[0] == "x":
                    v = (same & b1) | both_in
                else:
                    v = (same & ~b1) | both_in
            elif kind == COLOR:
                cols = [bits[:, j] for j in r]
                if node.params[0] == "y":
                    cols = [~c for c in cols]
                bl, br, b1, b2, b3 = cols
                v = np.where(~bl & ~br, b1,
                             np.where(bl & ~br, ~b2, np.where(~bl & br, ~b3, False)))
            elif kind == RELPOS:
                bl, br = bits[:, r[0]], bits[:, r[1]]
                v = np.where(~bl & ~br, vals[ch[0]],
                             np.where(bl & ~br, vals[ch[1]],
                                      np.where(~bl & br, vals[ch[2]], vals[ch[3]])))
            elif kind == PAIR_OR:
                v = np.zeros(q, dtype=bool)
                by_first: dict[int, list[int]] = {}
                for a, b in node.params:
                    by_first.setdefault(a, []).append(b)
                for a, bs in by_first.items():
                    partner = np.logical_or.reduce([vals[ch[b]] for b in bs])
                    v |= vals[ch[a]] & partner
            else:
                raise ValueError(f"unknown node kind {kind!r}")
            vals[i] = v
        return vals[self.root]

    def _topo_order(self) -> list[int]:
        order, seen = [], set()
        stack = [(self.root, False)]
        while stack:
            i, done = stack.pop()
            if done:
                order.append(i)
                continue
            if i in seen:
                continue
            seen.add(i)
            stack.append((i, True))
            stack.extend((c, False) for c in self.nodes[i].children)
        return order

    def bits_read(self) -> set[int]:
        return {j for i in self._topo_order() for j in self.nodes[i].reads}
