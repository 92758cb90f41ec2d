"""Finite posets on dense integer ids with a cached strict-order closure."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import CycleDetected, IdOutOfRange, InconsistentHeader, TDSyntaxError


@dataclass(frozen=True, eq=False)
class Poset:
    """A poset on elements ``1..n``.

    ``closure[u-1, v-1]`` is True iff ``u < v``. ``covers`` is the transitive
    reduction of the closure, i.e. the edge set of the cover graph oriented
    upwards.
    """

    n: int
    covers: frozenset
    closure: np.ndarray = field(repr=False)

    def elements(self):
        return range(1, self.n + 1)

    def lt(self, x: int, y: int) -> bool:
        return bool(self.closure[x - 1, y - 1])

    def cover_graph(self) -> list[tuple[int, int]]:
        return sorted(self.covers)

    def __eq__(self, other):
        if not isinstance(other, Poset):
            return NotImplemented
        return self.n == other.n and self.covers == other.covers

    def __hash__(self):
        return hash((self.n, self.covers))


def _closure_from_pairs(n: int, pairs: Iterable[tuple[int, int]]) -> np.ndarray:
    succ = [[] for _ in range(n)]
    indeg = [0] * n
    for u, v in pairs:
        succ[u - 1].append(v - 1)
        indeg[v - 1] += 1
    order = [i for i in range(n) if indeg[i] == 0]
    head = 0
    while head < len(order):
        u = order[head]
        head += 1
        for v in succ[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                order.append(v)
    if len(order) < n:
        raise CycleDetected("relations contain a directed cycle")
    # bitset DP in reverse topological order
    reach = [0] * n
    for u in reversed(order):
        bits = 0
        for v in succ[u]:
            bits |= (1 << v) | reach[v]
        reach[u] = bits
    closure = np.zeros((n, n), dtype=bool)
    for u in range(n):
        bits = reach[u]
        while bits:
            low = bits & -bits
            closure[u, low.bit_length() - 1] = True
            bits ^= low
    return closure


def transitive_reduction(closure: np.ndarray) -> frozenset:
    c = closure.astype(np.int32)
    implied = (c @ c) > 0
    us, vs = np.nonzero(closure & ~implied)
    return frozenset((int(u) + 1, int(v) + 1) for u, v in zip(us, vs))


def make_poset(n: int, relations: Iterable[tuple[int, int]]) -> Poset:
    """Build a poset from strict relations ``(u, v)`` meaning ``u < v``.

    The input may contain implied pairs; they are reduced away.
    """
    pairs = []
    for u, v in relations:
        if not (1 <= u <= n and 1 <= v <= n):
            raise IdOutOfRange(f"pair ({u}, {v}) outside 1..{n}")
        if u == v:
            raise CycleDetected(f"self-relation on {u}")
        pairs.append((int(u), int(v)))
    closure = _closure_from_pairs(n, pairs)
    closure.setflags(write=False)
    return Poset(n=n, covers=transitive_reduction(closure), closure=closure)


def leq(P: Poset, x: int, y: int) -> bool:
    if not (1 <= x <= P.n and 1 <= y <= P.n):
        raise IdOutOfRange(f"query ({x}, {y}) outside 1..{P.n}")
    return x == y or bool(P.closure[x - 1, y - 1])


def subposet_pairs(P: Poset, ids: list[int]) -> set[tuple[int, int]]:
    """Strict relations of the subposet induced on ``ids`` (as index pairs)."""
    out = set()
    for i, x in enumerate(ids):
        for j, y in enumerate(ids):
            if i != j and P.lt(x, y):
                out.add((i, j))
    return out


# -- text format -----------------------------------------------------------

def write_poset(P: Poset, comments: Iterable[str] = ()) -> str:
    lines = [f"c {c}" for c in comments]
    lines.append(f"p poset {P.n} {len(P.covers)}")
    lines.extend(f"{u} {v}" for u, v in sorted(P.covers))
    return "\n".join(lines) + "\n"


def parse_poset(text: str) -> Poset:
    header = None
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if header is not None or len(parts) != 4 or parts[1] != "poset":
                raise TDSyntaxError(lineno, f"bad header {line!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise TDSyntaxError(lineno, f"bad header {line!r}") from None
            continue
        if header is None:
            raise TDSyntaxError(lineno, "relation before header")
        if len(parts) != 2:
            raise TDSyntaxError(lineno, f"expected '<u> <v>', got {line!r}")
        try:
            pairs.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise TDSyntaxError(lineno, f"non-integer id in {line!r}") from None
    if header is None:
        raise TDSyntaxError(0, "missing 'p poset' header")
    n, m = header
    if m != len(pairs):
        raise InconsistentHeader(f"header announces {m} relations, found {len(pairs)}")
    return make_poset(n, pairs)
