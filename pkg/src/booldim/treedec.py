"""Tree-decompositions: PACE 2017 I/O, validation, min-fill construction and
normalization into a rooted, child-ordered decomposition with distinct roots.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .errors import InconsistentHeader, InvalidDecomposition, TDSyntaxError
from .trees import RootedTree


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...]

    @classmethod
    def from_edges(cls, n, edges):
        norm = {(min(u, v), max(u, v)) for u, v in edges if u != v}
        return cls(n, tuple(sorted(norm)))

    def adjacency(self) -> dict[int, set[int]]:
        adj = {v: set() for v in range(1, self.n + 1)}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj


def cover_graph(P) -> Graph:
    return Graph.from_edges(P.n, P.covers)


@dataclass
class TreeDecomposition:
    nodes: list[int]
    edges: list[tuple[int, int]]
    bags: dict[int, frozenset]
    n_vertices: int = 0

    @property
    def width(self) -> int:
        if not self.bags:
            return -1
        return max(len(b) for b in self.bags.values()) - 1

    def __eq__(self, other):
        if not isinstance(other, TreeDecomposition):
            return NotImplemented
        norm = lambda es: sorted((min(a, b), max(a, b)) for a, b in es)
        return (sorted(self.nodes) == sorted(other.nodes)
                and norm(self.edges) == norm(other.edges)
                and {k: frozenset(v) for k, v in self.bags.items()}
                == {k: frozenset(v) for k, v in other.bags.items()})


# -- PACE formats ----------------------------------------------------------

def _content_lines(text):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line and not line.startswith("c"):
            yield lineno, line.split()


def _ints(lineno, parts):
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise TDSyntaxError(lineno, f"non-integer token in {' '.join(parts)!r}") from None


def parse_gr(text: str) -> Graph:
    header = None
    edges = []
    for lineno, parts in _content_lines(text):
        if parts[0] == "p":
            if header is not None or len(parts) != 4 or parts[1] != "tw":
                raise TDSyntaxError(lineno, "expected 'p tw <n> <m>'")
            header = _ints(lineno, parts[2:])
            continue
        if header is None:
            raise TDSyntaxError(lineno, "edge before 'p tw' header")
        if len(parts) != 2:
            raise TDSyntaxError(lineno, "edge lines have exactly two vertices")
        u, v = _ints(lineno, parts)
        if not (1 <= u <= header[0] and 1 <= v <= header[0]):
            raise TDSyntaxError(lineno, f"vertex out of range in edge ({u}, {v})")
        edges.append((u, v))
    if header is None:
        raise TDSyntaxError(0, "missing 'p tw' header")
    if header[1] != len(edges):
        raise InconsistentHeader(f"header announces {header[1]} edges, found {len(edges)}")
    return Graph.from_edges(header[0], edges)


def write_gr(G: Graph) -> str:
    lines = [f"p tw {G.n} {len(G.edges)}"]
    lines.extend(f"{u} {v}" for u, v in G.edges)
    return "\n".join(lines) + "\n"


def parse_td(text: str) -> TreeDecomposition:
    header = None
    bags: dict[int, frozenset] = {}
    edges = []
    for lineno, parts in _content_lines(text):
        if parts[0] == "s":
            if header is not None or len(parts) != 5 or parts[1] != "td":
                raise TDSyntaxError(lineno, "expected 's td <#bags> <width+1> <n>'")
            header = _ints(lineno, parts[2:])
            continue
        if header is None:
            raise TDSyntaxError(lineno, "content before 's td' header")
        if parts[0] == "b":
            vals = _ints(lineno, parts[1:])
            if not vals:
                raise TDSyntaxError(lineno, "bag line without id")
            if vals[0] in bags:
                raise TDSyntaxError(lineno, f"duplicate bag {vals[0]}")
            bags[vals[0]] = frozenset(vals[1:])
        else:
            if len(parts) != 2:
                raise TDSyntaxError(lineno, "tree edge lines have exactly two bag ids")
            edges.append(tuple(_ints(lineno, parts)))
    if header is None:
        raise TDSyntaxError(0, "missing 's td' header")
    nbags, maxbag, nverts = header
    if nbags != len(bags):
        raise InconsistentHeader(f"header announces {nbags} bags, found {len(bags)}")
    actual = max((len(b) for b in bags.values()), default=0)
    if actual != maxbag:
        raise InconsistentHeader(f"header announces max bag size {maxbag}, found {actual}")
    for a, b in edges:
        if a not in bags or b not in bags:
            raise InconsistentHeader(f"tree edge ({a}, {b}) references an unknown bag")
    return TreeDecomposition(sorted(bags), edges, bags, nverts)


def write_td(T: TreeDecomposition) -> str:
    maxbag = max((len(b) for b in T.bags.values()), default=0)
    nverts = T.n_vertices or max((max(b) for b in T.bags.values() if b), default=0)
    lines = [f"s td {len(T.nodes)} {maxbag} {nverts}"]
    for t in sorted(T.nodes):
        lines.append(" ".join(["b", str(t)] + [str(v) for v in sorted(T.bags[t])]))
    lines.extend(f"{a} {b}" for a, b in T.edges)
    return "\n".join(lines) + "\n"


# -- validation ------------------------------------------------------------

@dataclass
class ValidationReport:
    tree_errors: list[str] = field(default_factory=list)
    missing_vertices: list[int] = field(default_factory=list)       # property (1)
    uncovered_edges: list[tuple[int, int]] = field(default_factory=list)  # property (2)
    disconnected_vertices: list[int] = field(default_factory=list)  # property (3)
    width: int = -1

    @property
    def ok(self) -> bool:
        return not (self.tree_errors or self.missing_vertices
                    or self.uncovered_edges or self.disconnected_vertices)

    def summary(self) -> str:
        if self.ok:
            return f"valid, width {self.width}"
        parts = []
        if self.tree_errors:
            parts.append("tree: " + "; ".join(self.tree_errors))
        if self.missing_vertices:
            parts.append(f"property (1) vertices in no bag: {self.missing_vertices}")
        if self.uncovered_edges:
            parts.append(f"property (2) edges in no bag: {self.uncovered_edges}")
        if self.disconnected_vertices:
            parts.append(f"property (3) vertices with disconnected bags: "
                         f"{self.disconnected_vertices}")
        return " | ".join(parts)


def _tree_adjacency(T: TreeDecomposition):
    adj = {t: [] for t in T.nodes}
    for a, b in T.edges:
        adj[a].append(b)
        adj[b].append(a)
    return adj


def validate(G: Graph, T: TreeDecomposition) -> ValidationReport:
    rep = ValidationReport(width=T.width)
    adj = _tree_adjacency(T)
    if not T.nodes:
        rep.tree_errors.append("no tree nodes")
    else:
        if len(T.edges) != len(T.nodes) - 1:
            rep.tree_errors.append(f"{len(T.nodes)} nodes but {len(T.edges)} edges")
        seen = {T.nodes[0]}
        queue = deque([T.nodes[0]])
        while queue:
            t = queue.popleft()
            for s in adj[t]:
                if s not in seen:
                    seen.add(s)
                    queue.append(s)
        if len(seen) != len(T.nodes):
            rep.tree_errors.append("tree is disconnected")

    holders: dict[int, list[int]] = {v: [] for v in range(1, G.n + 1)}
    for t in T.nodes:
        for v in T.bags[t]:
            holders.setdefault(v, []).append(t)
    rep.missing_vertices = [v for v in range(1, G.n + 1) if not holders[v]]
    for u, v in G.edges:
        if not any(v in T.bags[t] for t in holders.get(u, ())):
            rep.uncovered_edges.append((u, v))
    for v in sorted(holders):
        ts = holders[v]
        if len(ts) <= 1:
            continue
        inside = set(ts)
        seen = {ts[0]}
        queue = deque([ts[0]])
        while queue:
            t = queue.popleft()
            for s in adj.get(t, ()):
                if s in inside and s not in seen:
                    seen.add(s)
                    queue.append(s)
        if len(seen) != len(inside):
            rep.disconnected_vertices.append(v)
    return rep


# -- min-fill heuristic ----------------------------------------------------

def heuristic_decompose(G: Graph) -> TreeDecomposition:
    """Tree-decomposition from a min-fill elimination ordering (ties by id)."""
    adj = G.adjacency()
    alive = set(adj)
    order = []
    bag_of = {}
    while alive:
        best, best_key = None, None
        for v in sorted(alive):
            nb = sorted(adj[v])
            fill = 0
            for i, a in enumerate(nb):
                for b in nb[i + 1:]:
                    if b not in adj[a]:
                        fill += 1
            key = (fill, len(nb), v)
            if best_key is None or key < best_key:
                best, best_key = v, key
        v = best
        nb = adj[v]
        bag_of[v] = frozenset(nb | {v})
        for a in nb:
            adj[a] |= nb - {a}
            adj[a].discard(v)
        del adj[v]
        alive.discard(v)
        order.append(v)
    pos = {v: i for i, v in enumerate(order)}
    nodes = list(range(1, len(order) + 1))
    bags = {pos[v] + 1: bag_of[v] for v in order}
    edges = []
    for i, v in enumerate(order[:-1]):
        later = [u for u in bag_of[v] if u != v]
        if later:
            nxt = min(later, key=pos.__getitem__)
        else:
            nxt = order[-1]
        edges.append((i + 1, pos[nxt] + 1))
    return TreeDecomposition(nodes, edges, bags, G.n)


# -- normalization ---------------------------------------------------------

@dataclass
class NormalizedDecomposition:
    tree: RootedTree
    bags: dict[int, frozenset]
    root_of: dict[int, int]
    width: int

    @property
    def root(self) -> int:
        return self.tree.root

    @property
    def child_order(self) -> dict[int, list[int]]:
        return self.tree.children

    @property
    def element_at(self) -> dict[int, int]:
        return {t: z for z, t in self.root_of.items()}

    def as_td(self) -> TreeDecomposition:
        nodes = self.tree.preorder()
        return TreeDecomposition(sorted(nodes), self.tree.edges(), dict(self.bags),
                                 len(self.root_of))


def normalize(P, T: TreeDecomposition) -> NormalizedDecomposition:
    """Root at the smallest node id and split nodes that are the lowest bag of
    several elements into chains, so that every element has its own root node.
    """
    report = validate(cover_graph(P), T)
    if not report.ok:
        raise InvalidDecomposition(report)
    relabel = {t: i + 1 for i, t in enumerate(sorted(T.nodes))}
    bags = {relabel[t]: frozenset(T.bags[t]) for t in T.nodes}
    adj = {relabel[t]: [] for t in T.nodes}
    for a, b in T.edges:
        adj[relabel[a]].append(relabel[b])
        adj[relabel[b]].append(relabel[a])
    parent = {1: None}
    depth = {1: 0}
    queue = deque([1])
    bfs = []
    while queue:
        t = queue.popleft()
        bfs.append(t)
        for s in sorted(adj[t]):
            if s not in parent:
                parent[s] = t
                depth[s] = depth[t] + 1
                queue.append(s)

    lowest: dict[int, int] = {}
    for t in bfs:
        for z in bags[t]:
            if z not in lowest and 1 <= z <= P.n:
                lowest[z] = t
    rooted_here: dict[int, list[int]] = {}
    for z, t in lowest.items():
        rooted_here.setdefault(t, []).append(z)

    next_id = len(bags) + 1
    root_of = {}
    for t in sorted(rooted_here):
        zs = sorted(rooted_here[t])
        if len(zs) == 1:
            root_of[zs[0]] = t
            continue
        full = bags[t]
        kids = [s for s in parent if parent[s] == t]
        chain = [t]
        for _ in zs[1:]:
            chain.append(next_id)
            next_id += 1
        for j, node in enumerate(chain):
            bags[node] = full - frozenset(zs[j + 1:])
            root_of[zs[j]] = node
            if j:
                parent[node] = chain[j - 1]
        for s in kids:
            parent[s] = chain[-1]

    children = {t: [] for t in parent}
    for s, p in parent.items():
        if p is not None:
            children[p].append(s)
    # order children by the smallest element id occurring in their subtree
    low: dict[int, float] = {}

    def subtree_min(t):
        stack = [(t, False)]
        while stack:
            v, done = stack.pop()
            if done:
                m = min(bags[v], default=float("inf"))
                for c in children[v]:
                    m = min(m, low[c])
                low[v] = m
            else:
                stack.append((v, True))
                stack.extend((c, False) for c in children[v])

    subtree_min(1)
    for t in children:
        children[t].sort(key=lambda c: (low[c], c))
    tree = RootedTree(1, children)
    width = max(len(b) for b in bags.values()) - 1
    return NormalizedDecomposition(tree, bags, root_of, width)
