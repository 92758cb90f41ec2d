"""Brute-force ground truth.

Everything here walks raw data (cover lists, parent maps, D's vertex and
edge tables) directly and shares no code with the constructions it checks.
The only thing taken from a realizer is what is under test: its
permutations and its program's answers.
"""
from __future__ import annotations

import json
import time
from collections import deque
from dataclasses import asdict, dataclass, field

import numpy as np


# -- reachability ----------------------------------------------------------

def reachability(n: int, arcs) -> np.ndarray:
    """``out[u-1, v-1]`` is True iff v is reachable from u (reflexive)."""
    adj = [[] for _ in range(n + 1)]
    for u, v in arcs:
        adj[u].append(v)
    out = np.zeros((n, n), dtype=bool)
    for s in range(1, n + 1):
        seen = {s}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
        out[s - 1, [v - 1 for v in seen]] = True
    return out


def leq_matrix(P) -> np.ndarray:
    """x <= y for all pairs, by search over the cover relation."""
    return reachability(P.n, P.covers)


# -- the defining property ---------------------------------------------------

@dataclass
class VerificationReport:
    instance: str
    pairs_checked: int
    mismatches: list[tuple[int, int, bool, bool]] = field(default_factory=list)
    structural: dict[str, bool] = field(default_factory=dict)
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.mismatches and all(self.structural.values())

    def to_json(self) -> str:
        doc = asdict(self)
        doc["passed"] = self.passed
        doc["mismatch_count"] = len(self.mismatches)
        return json.dumps(doc, sort_keys=True)

    def summary(self) -> str:
        state = "PASS" if self.passed else "FAIL"
        return (f"{state} {self.instance}: {self.pairs_checked} pairs, "
                f"{len(self.mismatches)} mismatches")


def verify_all_pairs(P, R, instance: str = "poset", max_report: int = 50) -> VerificationReport:
    """Compare the realizer's answer with x <= y for every ordered pair."""
    t0 = time.perf_counter()
    truth = leq_matrix(P)
    t1 = time.perf_counter()
    n = P.n
    pos = np.zeros((len(R.permutations), n + 1), dtype=np.int64)
    for i, perm in enumerate(R.permutations):
        for rank, z in enumerate(perm):
            pos[i, z] = rank
    xs, ys = np.meshgrid(np.arange(1, n + 1), np.arange(1, n + 1), indexing="ij")
    bits = (pos[:, xs.ravel()] <= pos[:, ys.ravel()]).T
    got = R.program.evaluate_batch(bits).reshape(n, n)
    t2 = time.perf_counter()
    bad = np.argwhere(got != truth)
    mism = [(int(x) + 1, int(y) + 1, bool(truth[x, y]), bool(got[x, y])) for x, y in bad[:max_report]]
    if len(bad) > max_report:
        mism.append((0, 0, False, False))  # marker: list truncated
    structural = {"permutations_are_bijections": all(
        sorted(p) == list(range(1, n + 1)) for p in R.permutations)}
    return VerificationReport(instance, n * n, mism, structural,
                              {"oracle_s": t1 - t0, "program_s": t2 - t1})


# -- two-path search over the DAG ------------------------------------------

def _meet(parent: dict, u: int, v: int) -> int:
    above = set()
    while u is not None:
        above.add(u)
        u = parent[u]
    while v not in above:
        v = parent[v]
    return v


def _down_path(parent: dict, top: int, bottom: int) -> list[int]:
    path = [bottom]
    while path[-1] != top:
        path.append(parent[path[-1]])
    return path[::-1]


def _follow(D, start: int, nodes: list[int]):
    d = start
    for t in nodes[1:]:
        d = D.out[d].get(t)
        if d is None:
            return None
    return d


def bruteforce_two_seq(P, D, cD, N, x: int, y: int, color: dict) -> bool:
    """x <= y iff some vertex at the meet of root(x), root(y) leads to a
    vertex at root(x) that is above-or-equal x in coordinate c(x) and to a
    vertex at root(y) that is below-or-equal y in coordinate c(y)."""
    parent = N.tree.parent
    rx, ry = N.root_of[x], N.root_of[y]
    m = _meet(parent, rx, ry)
    px, py = _down_path(parent, m, rx), _down_path(parent, m, ry)
    for d in D.at[m].values():
        dx, dy = _follow(D, d, px), _follow(D, d, py)
        if dx is None or dy is None:
            continue
        if D.key_of[dx][color[x] - 1] in ">=" and D.key_of[dy][color[y] - 1] in "<=":
            return True
    return False


# -- tree path oracles --------------------------------------------------------

def path_scan_color_oracle(parent: dict, colors: dict, x: int, y: int, side: str = "x") -> bool:
    """First colored edge walking down from the meet toward the chosen end is RED."""
    target = x if side == "x" else y
    m = _meet(parent, x, y)
    path = _down_path(parent, m, target)
    for a, b in zip(path, path[1:]):
        c = colors.get((a, b))
        if c is not None:
            return c == "R"
    return False


def _parents_from_D(D) -> dict:
    parent = {}
    for d, targets in enumerate(D.out):
        for t in targets:
            parent[t] = D.node_of[d]
    for t in D.at:
        parent.setdefault(t, None)
    return parent


def signatures_between(D, cD, meet: int, target: int, parent: dict | None = None) -> set:
    """Signatures of all D-paths from the meet's vertices to ``target``."""
    if parent is None:
        parent = _parents_from_D(D)
    path = _down_path(parent, meet, target)
    out = set()
    for d in D.at[meet].values():
        sig = [cD.color[d]]
        v = d
        for t in path[1:]:
            v = D.out[v][t]
            if cD.color[v] != sig[-1]:
                sig.append(cD.color[v])
        out.add(tuple(sig))
    return out


def bruteforce_signature_exists(D, cD, meet: int, target: int, sig, parent: dict | None = None) -> bool:
    return tuple(sig) in signatures_between(D, cD, meet, target, parent)
