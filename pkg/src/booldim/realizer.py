"""Boolean realizers: permutations of the poset plus a bits-only program.

:func:`build_realizer` runs the whole pipeline (normalize, color, build the
DAG, enumerate realized signatures, grow families, assemble the program).
Tree-level permutations from the color-detection gadgets become poset
permutations by restricting them to the root nodes of the elements.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import bp
from .bp import GREEN, RED, BranchingProgram, Permutation, ProgramBuilder
from .errors import (BitLengthMismatch, CorruptPayload, IdOutOfRange, UnrealizedSignature,
                     VersionMismatch)
from .families import Families
from .poset import Poset
from .sigdag import EQ, GT, LT, ColorCD, DagD, Realized, build_D, color_D, enumerate_realized, greedy_color
from .treedec import (NormalizedDecomposition, TreeDecomposition, cover_graph, heuristic_decompose,
                      normalize)

FORMAT = "booldim-realizer"
VERSION = 1


def paper_bound(k: int) -> int:
    """Worst-case permutation count of the construction for width ``k``."""
    m = 5 ** (k + 1)
    return 6 * 4 ** m + 4 * 2 ** m - 6


def b_gamma_budget(length: int) -> int:
    return 3 ** (length + 1) - 1


def induce_perm(p: Permutation, N: NormalizedDecomposition) -> Permutation:
    at = N.element_at
    return Permutation(at[t] for t in p.seq if t in at)


@dataclass
class Realizer:
    n: int
    k: int
    permutations: list[tuple[int, ...]]
    program: BranchingProgram
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        pos = np.zeros((len(self.permutations), self.n + 1), dtype=np.int64)
        for i, perm in enumerate(self.permutations):
            if sorted(perm) != list(range(1, self.n + 1)):
                raise ValueError(f"permutation {i} is not a bijection on 1..{self.n}")
            pos[i, list(perm)] = np.arange(len(perm))
        self._pos = pos

    @property
    def positions(self) -> np.ndarray:
        """``positions[i, z]`` is the rank of element z in permutation i (column 0 unused)."""
        return self._pos

    def bits(self, x: int, y: int) -> tuple[bool, ...]:
        if not (1 <= x <= self.n and 1 <= y <= self.n):
            raise IdOutOfRange(f"query ({x}, {y}) outside 1..{self.n}")
        return tuple((self._pos[:, x] <= self._pos[:, y]).tolist())

    def all_bits(self, xs=None, ys=None) -> np.ndarray:
        """Order bits for all pairs of ``xs`` x ``ys`` (rows in x-major order)."""
        xs = np.arange(1, self.n + 1) if xs is None else np.asarray(xs)
        ys = np.arange(1, self.n + 1) if ys is None else np.asarray(ys)
        px = self._pos[:, xs].T[:, None, :]
        py = self._pos[:, ys].T[None, :, :]
        return (px <= py).reshape(len(xs) * len(ys), -1)


def count_permutations(R: Realizer) -> int:
    return len(R.permutations)


def query_bits(R: Realizer, bits) -> bool:
    if len(bits) != len(R.permutations):
        raise BitLengthMismatch(f"expected {len(R.permutations)} bits, got {len(bits)}")
    return R.program.evaluate(bits)


def query(R: Realizer, x: int, y: int) -> bool:
    return query_bits(R, R.bits(x, y))


def query_matrix(R: Realizer) -> np.ndarray:
    """Answers for every ordered pair, as an n x n boolean matrix (0-based)."""
    return R.program.evaluate_batch(R.all_bits()).reshape(R.n, R.n)


# -- construction context --------------------------------------------------

class _PermRegistry:
    """Collects permutations for one program; tree-level ones are induced later."""

    def __init__(self):
        self.entries: list[tuple[str, Permutation]] = []
        self._index: dict = {}

    def add(self, key, level: str, perm_fn) -> int:
        if key not in self._index:
            self._index[key] = len(self.entries)
            self.entries.append((level, perm_fn()))
        return self._index[key]


@dataclass
class Construction:
    """Everything the realizer is built from, kept for inspection and tests."""

    poset: Poset
    decomposition: NormalizedDecomposition
    color: dict[int, int]
    D: DagD
    cD: ColorCD
    realized: Realized
    families: Families

    @property
    def tree(self):
        return self.decomposition.tree

    @property
    def k(self) -> int:
        return self.decomposition.width


def prepare(P: Poset, T: TreeDecomposition | None = None, break_rule: str = "chain",
            exits: str = "all") -> Construction:
    if T is None:
        T = heuristic_decompose(cover_graph(P))
    N = normalize(P, T)
    color = greedy_color(P, N)
    D = build_D(P, N, color)
    cD = color_D(D, N)
    realized = enumerate_realized(D, cD, N)
    fams = Families(D, cD, N.tree, break_rule=break_rule, exits=exits)
    return Construction(P, N, color, D, cD, realized, fams)


class _ProgramAssembler:
    def __init__(self, C: Construction):
        self.C = C
        self.tree = C.tree
        self.mirror = C.tree.mirrored()
        self.b = ProgramBuilder()
        self.perms = _PermRegistry()
        self.i_left = self.perms.add("pi_L", "tree", lambda: Permutation(self.tree.preorder()))
        self.i_right = self.perms.add("pi_R", "tree", lambda: Permutation(self.mirror.preorder()))
        self._b_memo: dict = {}
        self.cd_used: dict[tuple, set] = {}
        self._current = None

    # -- gadgets ------------------------------------------------------------

    def color_node(self, colors: dict, side: str) -> int:
        key = frozenset(colors.items())
        i1 = self.perms.add(("a1", key), "tree", lambda: bp.algo1_perm(self.tree, colors))
        i2 = self.perms.add(("a2", key), "tree", lambda: bp.algo2_perm(self.tree, colors))
        i3 = self.perms.add(("a2m", key), "tree", lambda: bp.algo2_perm(self.mirror, colors))
        if self._current is not None:
            self.cd_used.setdefault(self._current, set()).add(key)
        return self.b.add(bp.COLOR, (self.i_left, self.i_right, i1, i2, i3), params=(side,))

    def _all_child_edges(self):
        return [(self.tree.parent[v], v) for v in self.tree.nodes if self.tree.parent[v] is not None]

    def coloring_membership(self, members) -> dict:
        """RED below every node of the given trees, GREEN elsewhere."""
        inside = set()
        for m in members:
            inside |= m.nodes
        return {(t, c): (RED if t in inside else GREEN) for t, c in self._all_child_edges()}

    def coloring_step(self, fam, g_from: int, g_to: int) -> dict:
        F = self.C.families
        colors = {}
        for Q in fam.members:
            for t in Q.nodes:
                for c in self.tree.children[t]:
                    if c not in Q.nodes:
                        colors[(t, c)] = RED if F.merges_into(t, c, g_from, g_to) else GREEN
        return colors

    def coloring_break(self, fam, gamma: int) -> dict:
        F = self.C.families
        colors = {}
        for Q in fam.members:
            for t in Q.nodes:
                for c in self.tree.children[t]:
                    if c not in Q.nodes:
                        colors[(t, c)] = GREEN
                    elif F.break_rule == "chain" and not F.continues(t, c, gamma):
                        colors[(t, c)] = RED
        if F.break_rule == "node":
            for t in self.tree.nodes:
                if F.is_gamma_break(t, gamma):
                    for c in self.tree.children[t]:
                        colors[(t, c)] = RED
        return colors

    def coloring_outside(self, fam) -> dict:
        owner = {}
        for i, Q in enumerate(fam.members):
            for t in Q.nodes:
                owner[t] = i
        return {(t, c): RED for t, c in self._all_child_edges()
                if owner.get(t) is None or owner.get(t) != owner.get(c)}

    # -- B_Gamma --------------------------------------------------------------

    def b_gamma(self, sig: tuple[int, ...], side: str) -> int:
        key = (sig, side)
        if key in self._b_memo:
            return self._b_memo[key]
        saved, self._current = self._current, sig
        F = self.C.families
        root_fam = F.family(sig[:1], "")
        if not root_fam.members:
            out = self.b.const(False)
        else:
            check = self.color_node(self.coloring_membership(root_fam.members), side)
            out = self.b.add(bp.AND, children=(check, self._level(sig, 1, "", side)))
        self._current = saved
        self._b_memo[key] = out
        return out

    def _level(self, sig, i: int, alpha: str, side: str) -> int:
        F = self.C.families
        fam = F.family(sig[:i], alpha)
        if not fam.members:
            return self.b.const(False)
        if i == len(sig):
            inside = self.color_node(self.coloring_outside(fam), side)
            return self.b.add(bp.NOT, children=(inside,))
        g_cur, g_next = sig[i - 1], sig[i]
        step = self.color_node(self.coloring_step(fam, g_cur, g_next), side)
        fresh = self._level(sig, i + 1, alpha + "0", side)
        fam1 = F.family(sig[:i + 1], alpha + "1")
        fam2 = F.family(sig[:i + 1], alpha + "2")
        if fam1.members and fam2.members:
            first = set(fam1.origin)
            sub = self.color_node(
                self.coloring_membership([Q for qi, Q in enumerate(fam.members) if qi in first]), side)
            grown = self.b.add(bp.IF, children=(sub, self._level(sig, i + 1, alpha + "1", side),
                                                self._level(sig, i + 1, alpha + "2", side)))
        elif fam1.members:
            grown = self._level(sig, i + 1, alpha + "1", side)
        elif fam2.members:
            grown = self._level(sig, i + 1, alpha + "2", side)
        else:
            grown = self.b.const(False)
        brk = self.color_node(self.coloring_break(fam, g_next), side)
        choose = self.b.add(bp.IF, children=(brk, grown, fresh))
        return self.b.add(bp.AND, children=(step, choose))

    def fresh_counts(self) -> dict[tuple[int, ...], int]:
        return {sig: 3 * len(keys) for sig, keys in self.cd_used.items()}


def build_B_gamma(sig, C: Construction, side: str = "x"):
    """Standalone B_Gamma over permutations of the tree nodes.

    Returns ``(program, tree_permutations, fresh_count)`` where the program's
    bit ``i`` is the order of the two queried tree nodes in permutation ``i``.
    """
    sig = tuple(sig)
    if sig not in C.realized.signatures:
        raise UnrealizedSignature(f"signature {sig} is not realized")
    asm = _ProgramAssembler(C)
    root = asm.b_gamma(sig, side)
    perms = [p for _, p in asm.perms.entries]
    return asm.b.build(root, len(perms)), perms, asm.fresh_counts().get(sig, 0)


def membership_sets(C: Construction) -> dict[tuple[str, int], frozenset]:
    """S^>_gamma and S^<_gamma for every color gamma present at some root node."""
    out: dict[tuple[str, int], set] = {}
    N = C.decomposition
    for z in C.poset.elements():
        t = N.root_of[z]
        for gamma, d in C.cD.color_at[t].items():
            ch = C.D.key_of[d][C.color[z] - 1]
            if ch in (GT, EQ):
                out.setdefault((">", gamma), set()).add(z)
            if ch in (LT, EQ):
                out.setdefault(("<", gamma), set()).add(z)
    return {k: frozenset(v) for k, v in out.items()}


def build_main(C: Construction) -> Realizer:
    P = C.poset
    N = C.decomposition
    asm = _ProgramAssembler(C)
    b = asm.b
    ident = Permutation(range(1, P.n + 1))
    i_id = asm.perms.add("identity", "elem", lambda: ident)
    i_rev = asm.perms.add("reverse", "elem", lambda: bp.reverse(ident))
    sets = membership_sets(C)
    elements = list(P.elements())

    def member_node(direction, gamma, side):
        S = sets.get((direction, gamma), frozenset())
        idx = []
        for j in range(3):
            idx.append(asm.perms.add(("sm", direction, gamma, j), "elem",
                                     lambda j=j: bp.set_membership_build(elements, S)[j]))
        return b.add(bp.MEMBER, idx, params=(side,))

    sigs = sorted(C.realized.signatures)
    gt_nodes, lt_nodes = {}, {}
    for sig in sigs:
        single = b.const(len(sig) == 1)
        bx = asm.b_gamma(sig, "x")
        case = b.add(bp.RELPOS, (asm.i_left, asm.i_right), children=(bx, bx, bx, single))
        gt_nodes[sig] = b.add(bp.AND, children=(member_node(">", sig[-1], "x"), case))
        by = asm.b_gamma(sig, "y")
        case = b.add(bp.RELPOS, (asm.i_left, asm.i_right), children=(single, by, by, by))
        lt_nodes[sig] = b.add(bp.AND, children=(member_node("<", sig[-1], "y"), case))
    slot = {sig: i for i, sig in enumerate(sigs)}
    children = [gt_nodes[s] for s in sigs] + [lt_nodes[s] for s in sigs]
    pairs = sorted((slot[g], len(sigs) + slot[h]) for g, h in C.realized.pairs)
    body = b.add(bp.PAIR_OR, children=children, params=pairs) if pairs else b.const(False)
    root = b.add(bp.IF, children=(b.add(bp.EQUAL, (i_id, i_rev)), b.const(True), body))

    perms = []
    for level, p in asm.perms.entries:
        perms.append((induce_perm(p, N) if level == "tree" else p).seq)
    fresh = asm.fresh_counts()
    meta = {
        "n": P.n,
        "k": C.k,
        "tree_nodes": len(C.tree),
        "dag_vertices": len(C.D),
        "max_color": C.cD.max_color,
        "realized_signatures": len(sigs),
        "realized_pairs": len(pairs),
        "permutations": len(perms),
        "program_nodes": len(b.nodes),
        "b_gamma_fresh": {",".join(map(str, s)): fresh.get(s, 0) for s in sigs},
    }
    return Realizer(P.n, C.k, perms, b.build(root, len(perms)), meta)


def build_realizer(P: Poset, T: TreeDecomposition | None = None, **rules) -> Realizer:
    return build_main(prepare(P, T, **rules))


# -- the standard example --------------------------------------------------

def standard_example_realizer(n: int) -> Realizer:
    """Four permutations for S_n (a_i = i, b_i = n + i).

    L1 = b1 a1 b2 a2 ... bn an and L2 = bn an ... b1 a1 put a_i before b_j
    in at least one of them exactly when i != j; L3 = a1..an b1..bn and its
    blockwise reversal L4 put x before y in both exactly when x is an a and
    y a b (or x = y). x <= y iff L3 and L4 and (L1 or L2).
    """
    if n < 2:
        from .errors import NTooSmall

        raise NTooSmall(f"standard example needs n >= 2, got {n}")
    a = list(range(1, n + 1))
    bs = [n + i for i in a]
    l1 = [v for i in range(n) for v in (bs[i], a[i])]
    l2 = [v for i in reversed(range(n)) for v in (bs[i], a[i])]
    l3 = a + bs
    l4 = a[::-1] + bs[::-1]
    b = ProgramBuilder()
    either = b.add(bp.OR, children=(b.add(bp.BIT, (0,)), b.add(bp.BIT, (1,))))
    root = b.add(bp.AND, children=(b.add(bp.BIT, (2,)), b.add(bp.BIT, (3,)), either))
    meta = {"n": 2 * n, "construction": "standard-example", "permutations": 4}
    return Realizer(2 * n, 0, [tuple(l1), tuple(l2), tuple(l3), tuple(l4)], b.build(root, 4), meta)


# -- serialization ---------------------------------------------------------

def _node_to_json(node: bp.Node):
    params = [list(p) if isinstance(p, tuple) else p for p in node.params]
    return {"kind": node.kind, "reads": list(node.reads), "children": list(node.children),
            "params": params}


def to_json(R: Realizer) -> dict:
    return {
        "format": FORMAT,
        "version": VERSION,
        "k": R.k,
        "n": R.n,
        "permutations": [list(p) for p in R.permutations],
        "program": {"root": R.program.root, "n_bits": R.program.n_bits,
                    "nodes": [_node_to_json(nd) for nd in R.program.nodes]},
        "metadata": R.metadata,
    }


def serialize(R: Realizer) -> bytes:
    return json.dumps(to_json(R), sort_keys=True, separators=(",", ":")).encode() + b"\n"


def from_json(doc) -> Realizer:
    try:
        if doc.get("format") != FORMAT:
            raise CorruptPayload("not a realizer document")
        if doc.get("version") != VERSION:
            raise VersionMismatch(f"realizer format version {doc.get('version')}, "
                                  f"this build reads {VERSION}")
        prog = doc["program"]
        nodes = []
        for raw in prog["nodes"]:
            kind = raw["kind"]
            if kind not in bp.KINDS:
                raise CorruptPayload(f"unknown node kind {kind!r}")
            params = raw["params"]
            params = tuple(tuple(p) for p in params) if kind == bp.PAIR_OR else tuple(params)
            nodes.append(bp.Node(kind, tuple(raw["reads"]), tuple(raw["children"]), params))
        n_bits = int(prog["n_bits"])
        perms = [tuple(int(v) for v in p) for p in doc["permutations"]]
        if n_bits != len(perms):
            raise CorruptPayload("bit count does not match the permutation list")
        for nd in nodes:
            if any(not 0 <= r < n_bits for r in nd.reads):
                raise CorruptPayload("node reads a bit outside the permutation list")
            if any(not 0 <= c < len(nodes) for c in nd.children):
                raise CorruptPayload("node references a missing child")
        program = BranchingProgram(tuple(nodes), int(prog["root"]), n_bits)
        return Realizer(int(doc["n"]), int(doc["k"]), perms, program, doc.get("metadata", {}))
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise CorruptPayload(f"malformed realizer: {exc}") from None


def deserialize(data: bytes) -> Realizer:
    try:
        doc = json.loads(data)
    except (ValueError, UnicodeDecodeError) as exc:
        raise CorruptPayload(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise CorruptPayload("top level is not an object")
    return from_json(doc)
