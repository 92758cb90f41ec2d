"""Rooted trees with a fixed left-to-right order of children."""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class RootedTree:
    root: int
    children: dict[int, list[int]]
    parent: dict[int, int | None] = field(default_factory=dict)
    depth: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        for v in list(self.children):
            for w in self.children[v]:
                self.children.setdefault(w, [])
        self.parent = {self.root: None}
        self.depth = {self.root: 0}
        self._pre = []
        self._tin = {}
        self._tout = {}
        stack = [(self.root, False)]
        clock = 0
        while stack:
            v, done = stack.pop()
            if done:
                self._tout[v] = clock
                continue
            self._tin[v] = clock
            clock += 1
            self._pre.append(v)
            stack.append((v, True))
            for w in reversed(self.children[v]):
                self.parent[w] = v
                self.depth[w] = self.depth[v] + 1
                stack.append((w, False))
        if len(self._pre) != len(self.children):
            raise ValueError("children map does not describe a single rooted tree")

    @classmethod
    def from_parent(cls, root, parent_of, order_key=None):
        children = {v: [] for v in parent_of}
        children.setdefault(root, [])
        for v, p in parent_of.items():
            if p is not None:
                children[p].append(v)
        for v in children:
            children[v].sort(key=order_key)
        return cls(root, children)

    @property
    def nodes(self) -> list[int]:
        return self._pre

    def __len__(self):
        return len(self._pre)

    def preorder(self, mirror: bool = False) -> list[int]:
        if not mirror:
            return list(self._pre)
        return self.mirrored().preorder()

    def mirrored(self) -> "RootedTree":
        return RootedTree(self.root, {v: list(reversed(cs)) for v, cs in self.children.items()})

    def is_ancestor(self, u: int, v: int) -> bool:
        """True iff ``u`` lies on the path from the root to ``v`` (``u == v`` allowed)."""
        return self._tin[u] <= self._tin[v] and self._tout[v] <= self._tout[u]

    def subtree(self, v: int) -> list[int]:
        a = self._tin[v]
        return self._pre[a:self._tout[v]]

    def meet(self, u: int, v: int) -> int:
        while not self.is_ancestor(u, v):
            u = self.parent[u]
        return u

    def path_up(self, top: int, bottom: int) -> list[int]:
        """Nodes from ``top`` to ``bottom`` where ``top`` is an ancestor of ``bottom``."""
        out = [bottom]
        while out[-1] != top:
            p = self.parent[out[-1]]
            if p is None:
                raise ValueError(f"{top} is not an ancestor of {bottom}")
            out.append(p)
        out.reverse()
        return out

    def edges(self) -> list[tuple[int, int]]:
        return [(self.parent[v], v) for v in self._pre if self.parent[v] is not None]
