"""Families of pairwise disjoint subtrees of the decomposition tree, indexed
by a decreasing color sequence and a ternary string.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .errors import BadColorOrder, MalformedKey, OddCycle
from .sigdag import ColorCD, DagD, proj, sources, tree_of
from .trees import RootedTree


@dataclass(frozen=True)
class Member:
    root: int
    nodes: frozenset

    def sort_key(self):
        return (self.root, sorted(self.nodes))


@dataclass
class TreeFamily:
    key: tuple[tuple[int, ...], str]
    members: list[Member]
    # for split parts: index (in the parent family) of the tree each member grew from
    origin: list[int] = field(default_factory=list)

    def __len__(self):
        return len(self.members)

    def member_of(self, t: int) -> int | None:
        for i, m in enumerate(self.members):
            if t in m.nodes:
                return i
        return None


def pairwise_disjoint(members) -> bool:
    seen = set()
    for m in members:
        if seen & m.nodes:
            return False
        seen |= m.nodes
    return True


class Families:
    """Lazily built, memoized families over one colored DAG.

    ``break_rule`` selects how a gamma-break on a tree path is recognised:
    ``"chain"`` (default) treats the path as broken unless the gamma-colored
    vertex at its top reaches its bottom through gamma-colored vertices;
    ``"node"`` only looks for nodes without a gamma-colored vertex.
    ``exits`` selects where extensions may leave a tree: from any of its
    nodes (``"all"``, default) or from its leaves only (``"leaves"``).
    """

    def __init__(self, D: DagD, cD: ColorCD, tree: RootedTree,
                 break_rule: str = "chain", exits: str = "all"):
        if break_rule not in ("chain", "node") or exits not in ("all", "leaves"):
            raise ValueError("unknown family construction rule")
        self.D = D
        self.cD = cD
        self.tree = tree
        self.break_rule = break_rule
        self.exits = exits
        self._memo: dict[tuple, TreeFamily] = {}
        self._plus: dict[tuple, list[tuple[int, Member]]] = {}
        self._sources_by_color: dict[int, list[int]] = {}
        for s in sources(D):
            self._sources_by_color.setdefault(cD[s], []).append(s)

    # -- primitive predicates ---------------------------------------------

    def vertex_of_color(self, t: int, gamma: int):
        return self.cD.color_at.get(t, {}).get(gamma)

    def is_gamma_break(self, t: int, gamma: int) -> bool:
        return self.vertex_of_color(t, gamma) is None

    def merges_into(self, t: int, t2: int, gamma_from: int, gamma_to: int) -> bool:
        if not gamma_to < gamma_from:
            raise BadColorOrder(f"{gamma_to} is not below {gamma_from}")
        if self.tree.parent.get(t2) != t:
            raise ValueError(f"{t} is not the parent of {t2}")
        d = self.vertex_of_color(t, gamma_from)
        d2 = self.vertex_of_color(t2, gamma_to)
        return d is not None and d2 is not None and self.D.out[d].get(t2) == d2

    def continues(self, t: int, t2: int, gamma: int) -> bool:
        """The gamma-colored vertex at ``t`` has a gamma-colored out-neighbour at ``t2``."""
        d = self.vertex_of_color(t, gamma)
        if d is None:
            return False
        e = self.D.out[d].get(t2)
        return e is not None and self.cD[e] == gamma

    def path_broken(self, top: int, bottom: int, gamma: int) -> bool:
        path = self.tree.path_up(top, bottom)
        if self.break_rule == "node":
            return any(self.is_gamma_break(t, gamma) for t in path)
        if self.is_gamma_break(top, gamma):
            return True
        return any(not self.continues(a, b, gamma) for a, b in zip(path, path[1:]))

    def exits_of(self, m: Member):
        for t in sorted(m.nodes):
            kids = self.tree.children[t]
            if self.exits == "leaves" and any(c in m.nodes for c in kids):
                continue
            for c in kids:
                if c not in m.nodes:
                    yield t, c

    # -- construction rules -------------------------------------------------

    def base_family(self, gamma: int) -> TreeFamily:
        key = ((gamma,), "")
        if key not in self._memo:
            members = [Member(self.D.node_of[s], proj(self.D, tree_of(self.D, self.cD, s, gamma)))
                       for s in self._sources_by_color.get(gamma, [])]
            members.sort(key=Member.sort_key)
            self._memo[key] = TreeFamily(key, members)
        return self._memo[key]

    def extend_plus(self, F: TreeFamily, gamma: int) -> list[tuple[int, Member]]:
        sig, alpha = F.key
        last = sig[-1]
        if not gamma < last:
            raise BadColorOrder(f"{gamma} is not below {last}")
        memo_key = (sig, alpha, gamma)
        if memo_key in self._plus:
            return self._plus[memo_key]
        out = []
        for qi, Q in enumerate(F.members):
            grown = set()
            for t, t2 in self.exits_of(Q):
                if not self.path_broken(Q.root, t, gamma):
                    continue
                if not self.merges_into(t, t2, last, gamma):
                    continue
                d2 = self.vertex_of_color(t2, gamma)
                grown.update(self.tree.path_up(Q.root, t2))
                grown.update(proj(self.D, tree_of(self.D, self.cD, d2, gamma)))
            if grown:
                out.append((qi, Member(Q.root, frozenset(grown))))
        self._plus[memo_key] = out
        return out

    @staticmethod
    def split_two(plus: list[tuple[int, Member]]):
        """Proper 2-coloring of the intersection graph of the grown trees."""
        m = len(plus)
        adj = [[] for _ in range(m)]
        for i in range(m):
            for j in range(i + 1, m):
                if plus[i][1].nodes & plus[j][1].nodes:
                    adj[i].append(j)
                    adj[j].append(i)
        order = sorted(range(m), key=lambda i: plus[i][1].sort_key())
        side = [0] * m
        for s in order:
            if side[s]:
                continue
            side[s] = 1
            queue = deque([s])
            while queue:
                i = queue.popleft()
                for j in adj[i]:
                    if side[j] == 0:
                        side[j] = 3 - side[i]
                        queue.append(j)
                    elif side[j] == side[i]:
                        raise OddCycle(
                            f"grown trees {sorted(plus[i][1].nodes)} and "
                            f"{sorted(plus[j][1].nodes)} clash in a non-bipartite "
                            f"intersection graph")
        parts = ([], [])
        for i in order:
            parts[side[i] - 1].append(plus[i])
        return parts

    def family(self, sig, alpha: str = "") -> TreeFamily:
        sig = tuple(sig)
        if not sig or len(alpha) != len(sig) - 1 or any(a not in "012" for a in alpha):
            raise MalformedKey(f"bad family key {sig!r}, {alpha!r}")
        if any(a <= b for a, b in zip(sig, sig[1:])):
            raise MalformedKey(f"color sequence {sig!r} is not strictly decreasing")
        key = (sig, alpha)
        if key in self._memo:
            return self._memo[key]
        if len(sig) == 1:
            return self.base_family(sig[0])
        gamma, digit = sig[-1], alpha[-1]
        if digit == "0":
            base = self.base_family(gamma)
            fam = TreeFamily(key, list(base.members))
        else:
            parent = self.family(sig[:-1], alpha[:-1])
            parts = self.split_two(self.extend_plus(parent, gamma))
            for part_digit, part in zip("12", parts):
                k = (sig, alpha[:-1] + part_digit)
                self._memo[k] = TreeFamily(k, [m for _, m in part], [qi for qi, _ in part])
            fam = self._memo[key]
        self._memo[key] = fam
        return fam

    def constructed(self) -> list[TreeFamily]:
        return list(self._memo.values())
