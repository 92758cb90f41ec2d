"""Acceptance checks, one per criterion, each printing a single PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` or ``python3 tests/test_acceptance.py``.
All comparisons are exact.
"""
import itertools
import random
import sys
import time
from functools import lru_cache
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from booldim import generators, reach  # noqa: E402
from booldim.bp import color_detect_build, color_detect_eval, order_bits  # noqa: E402
from booldim.bp import set_membership_build, set_membership_decode  # noqa: E402
from booldim.families import pairwise_disjoint  # noqa: E402
from booldim.oracle import (bruteforce_two_seq, leq_matrix, path_scan_color_oracle,  # noqa: E402
                            reachability, signatures_between, verify_all_pairs)
from booldim.realizer import (b_gamma_budget, build_B_gamma, build_main, count_permutations,  # noqa: E402
                              paper_bound, prepare, standard_example_realizer)
from booldim.sigdag import check_unique_out_neighbor  # noqa: E402

from conftest import random_coloring, random_tree, small_instances  # noqa: E402

RESULTS: dict[int, str] = {}


def report(number: int, title: str, ok: bool, detail: str):
    line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
    RESULTS[number] = line
    print(line, flush=True)
    return ok


# -- the shared corpus -------------------------------------------------------

def corpus_instances():
    for n in range(2, 8):
        yield f"S_{n}", generators.gen_standard_example(n)
    for n in range(3, 9):
        yield f"kelly({n})", generators.gen_kelly(n)
    for k in (1, 2, 3):
        for seed in range(100):
            n = 5 + (13 * seed + 7 * k) % 76
            yield f"random(n={n},k={k},seed={seed})", generators.gen_random_bounded_tw(n, k, seed)
    for n in (1, 2, 5, 10, 25, 50):
        yield f"chain({n})", generators.gen_chain(n)
        yield f"antichain({n})", generators.gen_antichain(n)
    for seed in range(10):
        n = 5 * (seed + 1)
        yield f"forest(n={n},seed={seed})", generators.gen_random_forest(n, seed)


@lru_cache(maxsize=1)
def corpus():
    built = []
    for name, out in corpus_instances():
        C = prepare(out.poset, out.decomposition)
        built.append((name, out.poset, C, build_main(C)))
    return built


# -- criteria ----------------------------------------------------------------

def check_realizer_correctness():
    t0 = time.perf_counter()
    pairs, bad = 0, []
    for name, P, _, R in corpus():
        rep = verify_all_pairs(P, R, instance=name)
        pairs += rep.pairs_checked
        if not rep.passed:
            bad.append(name)
    dt = time.perf_counter() - t0
    return report(1, "realizer correctness", not bad,
                  f"{len(corpus())} instances, {pairs} ordered pairs, {len(bad)} failing "
                  f"{bad[:3]} (verify {dt:.1f}s)")


def check_unique_out_neighbours():
    bad = [name for name, _, C, _ in corpus() if check_unique_out_neighbor(C.D, C.decomposition)]
    edges = sum(len(C.D) for _, _, C, _ in corpus())
    return report(2, "unique out-neighbour per child", not bad,
                  f"{edges} DAG vertices checked, {len(bad)} failing instances {bad[:3]}")


def check_dag_coloring():
    bad = []
    for name, _, C, _ in corpus():
        D, cD = C.D, C.cD
        distinct = all(len({cD[d] for d in D.at[t].values()}) == len(D.at[t]) for t in C.tree.nodes)
        monotone = all(cD[e] <= cD[d] for d, e in D.edges())
        if not (distinct and monotone):
            bad.append(name)
    return report(3, "DAG coloring distinct per node and non-increasing", not bad,
                  f"{len(corpus())} instances, {len(bad)} failing {bad[:3]}")


def check_family_disjointness():
    bad, count = [], 0
    for name, _, C, _ in corpus():
        for fam in C.families.constructed():
            count += 1
            if not pairwise_disjoint(fam.members):
                bad.append((name, fam.key))
    # a split that met an odd cycle would have aborted the build in corpus()
    return report(4, "family members pairwise disjoint, no odd cycles", not bad,
                  f"{count} families, {len(bad)} overlapping {bad[:3]}")


def check_color_detection():
    rng = random.Random(2024)
    checked, bad = 0, 0
    for _ in range(500):
        T = random_tree(rng, rng.randint(2, 40))
        colors = random_coloring(rng, T)
        cd = color_detect_build(T, colors)
        for x, y in itertools.permutations(T.nodes, 2):
            m = T.meet(x, y)
            bits = order_bits(cd.perms, x, y)
            for side, end in (("x", x), ("y", y)):
                if m == end:
                    continue
                checked += 1
                if color_detect_eval(bits, side) != path_scan_color_oracle(T.parent, colors, x, y, side):
                    bad += 1
    return report(5, "color detection vs path scan", bad == 0,
                  f"500 trees, {checked} valid (pair, side) queries, {bad} mismatches")


def check_set_membership():
    t0 = time.perf_counter()
    checked, bad = 0, 0
    for size in range(1, 10):
        V = list(range(1, size + 1))
        for mask in range(1 << size):
            C = {v for v in V if mask >> (v - 1) & 1}
            perms = set_membership_build(V, C)
            pos = [p.position for p in perms]
            for x, y in itertools.permutations(V, 2):
                checked += 1
                got = set_membership_decode([p[x] <= p[y] for p in pos])
                bad += got != (x in C, y in C)
    dt = time.perf_counter() - t0
    return report(6, "set membership exhaustive", bad == 0 and dt < 60,
                  f"|V|<=9, {checked} (C, x, y) cases, {bad} wrong, {dt:.1f}s")


def check_b_gamma():
    checked, bad, sigs = 0, 0, 0
    for _, out in small_instances(50, max_n=25, seed0=7000):
        C = prepare(out.poset, out.decomposition)
        T = C.tree
        cache = {}
        for sig in sorted(C.realized.signatures):
            sigs += 1
            for side in "xy":
                prog, perms, _ = build_B_gamma(sig, C, side)
                pos = [p.position for p in perms]
                rows, expected = [], []
                for a in T.nodes:
                    for b in T.nodes:
                        m = T.meet(a, b)
                        end = a if side == "x" else b
                        if m == end:
                            continue
                        if (m, end) not in cache:
                            cache[m, end] = signatures_between(C.D, C.cD, m, end, T.parent)
                        rows.append([p[a] <= p[b] for p in pos])
                        expected.append(sig in cache[m, end])
                got = prog.evaluate_batch(np.array(rows, dtype=bool).reshape(len(rows), len(perms)))
                checked += len(rows)
                bad += int(np.sum(got != np.array(expected)))
    return report(7, "signature subprogram vs path enumeration", bad == 0,
                  f"50 instances, {sigs} realized signatures, {checked} queries, {bad} mismatches")


def check_two_sequence_characterization():
    checked, bad = 0, 0
    for _, out in small_instances(100, max_n=25, seed0=8000):
        P = out.poset
        C = prepare(P, out.decomposition)
        truth = leq_matrix(P)
        for x in P.elements():
            for y in P.elements():
                if x == y:
                    continue
                checked += 1
                bad += bruteforce_two_seq(P, C.D, C.cD, C.decomposition, x, y, C.color) != truth[x - 1, y - 1]
    return report(8, "two-path characterization vs order", bad == 0,
                  f"100 instances, {checked} pairs, {bad} mismatches")


def check_counting():
    bound_ok = all(count_permutations(R) <= paper_bound(C.k) for _, _, C, R in corpus())
    worst_fresh = []
    fresh_ok = True
    for _, _, C, R in corpus():
        for key, fresh in R.metadata["b_gamma_fresh"].items():
            length = len(key.split(","))
            if fresh > b_gamma_budget(length):
                fresh_ok = False
            worst_fresh.append(fresh / b_gamma_budget(length))
    ok = paper_bound(0) == 6266 and bound_ok and fresh_ok
    return report(9, "permutation counts", ok,
                  f"bound(0)={paper_bound(0)}, count<=bound on all {len(corpus())} instances: {bound_ok}, "
                  f"per-signature fresh <= 3^(l+1)-1: {fresh_ok} (max ratio {max(worst_fresh):.2f})")


def check_kelly_boundedness():
    counts = {}
    for n in range(3, 11):
        out = generators.gen_kelly(n)
        counts[n] = count_permutations(build_main(prepare(out.poset, out.decomposition)))
    ok = all(c <= counts[6] for c in counts.values())
    return report(10, "Kelly permutation count bounded by n=6 value", ok,
                  " ".join(f"n={n}:{c}" for n, c in counts.items()))


def check_standard_example():
    bad, most = [], 0
    for n in range(2, 65):
        R = standard_example_realizer(n)
        most = max(most, count_permutations(R))
        if count_permutations(R) > 4 or not verify_all_pairs(generators.gen_standard_example(n).poset, R).passed:
            bad.append(n)
    return report(11, "standard example with four permutations", not bad,
                  f"n=2..64, max permutations {most}, failing n {bad}")


def check_labeling():
    t0 = time.perf_counter()
    pairs, bad, size_bad = 0, 0, 0
    for seed in range(100):
        n = 10 + (seed * 37) % 111
        G = reach.gen_random_digraph(n, 1 + seed % 3, seed)
        scheme = reach.build_labels(G)
        dag, _ = reach.condense_scc(G)
        if scheme.bits_per_label != len(scheme.realizer.permutations) * reach.field_width(dag.n):
            size_bad += 1
        dec = reach.Decoder(scheme.descriptor)
        vs = range(1, G.n + 1)
        got = dec.batch([(scheme.labels[u], scheme.labels[v]) for u in vs for v in vs]).reshape(G.n, G.n)
        bad += int(np.sum(got != reachability(G.n, G.arcs)))
        pairs += G.n * G.n
    dt = time.perf_counter() - t0
    return report(12, "reachability labels", bad == 0 and size_bad == 0 and dt < 300,
                  f"100 digraphs (n<=120), {pairs} pairs, {bad} wrong, "
                  f"{size_bad} size mismatches, {dt:.1f}s")


CHECKS = [check_realizer_correctness, check_unique_out_neighbours, check_dag_coloring,
          check_family_disjointness, check_color_detection, check_set_membership, check_b_gamma,
          check_two_sequence_characterization, check_counting, check_kelly_boundedness,
          check_standard_example, check_labeling]


@pytest.mark.parametrize("check", CHECKS, ids=[c.__name__.removeprefix("check_") for c in CHECKS])
def test_criterion(check, capsys):
    with capsys.disabled():
        print()
        ok = check()
    assert ok


if __name__ == "__main__":
    results = [check() for check in CHECKS]
    sys.exit(0 if all(results) else 1)
