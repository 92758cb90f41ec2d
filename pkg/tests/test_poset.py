import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from booldim import generators
from booldim.errors import CycleDetected, IdOutOfRange, InconsistentHeader, NTooSmall, TDSyntaxError
from booldim.poset import leq, make_poset, parse_poset, subposet_pairs, transitive_reduction, write_poset
from booldim.treedec import cover_graph, validate


def test_single_relation():
    P = make_poset(2, [(1, 2)])
    assert P.covers == {(1, 2)}
    assert P.closure.tolist() == [[False, True], [False, False]]


def test_transitive_pair_is_reduced_away():
    P = make_poset(3, [(1, 2), (2, 3), (1, 3)])
    assert P.covers == {(1, 2), (2, 3)}
    assert P.lt(1, 3)


def test_cycle_rejected():
    with pytest.raises(CycleDetected):
        make_poset(2, [(1, 2), (2, 1)])
    with pytest.raises(CycleDetected):
        make_poset(3, [(1, 2), (2, 3), (3, 1)])


def test_ids_checked():
    with pytest.raises(IdOutOfRange):
        make_poset(2, [(1, 3)])
    with pytest.raises(IdOutOfRange):
        leq(make_poset(2, []), 0, 1)


def test_leq_on_standard_example():
    out = generators.gen_standard_example(3)
    w = out.witness
    assert leq(out.poset, w["a1"], w["b2"])
    assert not leq(out.poset, w["a1"], w["b1"])
    assert not leq(out.poset, w["a2"], w["b2"])
    assert all(leq(out.poset, x, x) for x in out.poset.elements())


def test_standard_example_shape():
    out = generators.gen_standard_example(2)
    assert out.poset.n == 4
    assert out.poset.covers == {(1, 4), (2, 3)}
    P5 = generators.gen_standard_example(5).poset
    for i in range(1, 6):
        assert sum(P5.lt(i, 5 + j) for j in range(1, 6)) == 4
    with pytest.raises(NTooSmall):
        generators.gen_standard_example(1)


@pytest.mark.parametrize("n", range(2, 9))
def test_standard_example_all_pairs(n):
    P = generators.gen_standard_example(n).poset
    for x in range(1, 2 * n + 1):
        for y in range(1, 2 * n + 1):
            expected = x == y or (x <= n < y and y - n != x)
            assert leq(P, x, y) == expected


@pytest.mark.parametrize("n", range(3, 11))
def test_kelly_contains_standard_example(n):
    out = generators.gen_kelly(n)
    ids = [out.witness[f"a{i}"] for i in range(1, n + 1)] + [out.witness[f"b{i}"] for i in range(1, n + 1)]
    S = generators.gen_standard_example(n).poset
    assert subposet_pairs(out.poset, ids) == subposet_pairs(S, list(range(1, 2 * n + 1)))
    rep = validate(cover_graph(out.poset), out.decomposition)
    assert rep.ok and rep.width <= 3


def test_kelly_too_small():
    with pytest.raises(NTooSmall):
        generators.gen_kelly(2)


def test_random_generator_determinism_and_validity():
    a = generators.gen_random_bounded_tw(40, 3, 7)
    b = generators.gen_random_bounded_tw(40, 3, 7)
    assert a.poset == b.poset and a.decomposition == b.decomposition
    rep = validate(cover_graph(a.poset), a.decomposition)
    assert rep.ok and rep.width <= 3
    single = generators.gen_random_bounded_tw(1, 3, 99)
    assert single.poset.n == 1 and len(single.decomposition.nodes) == 1


@pytest.mark.parametrize("seed", range(30))
def test_random_generator_width(seed):
    k = 1 + seed % 3
    out = generators.gen_random_bounded_tw(10 + seed, k, seed)
    rep = validate(cover_graph(out.poset), out.decomposition)
    assert rep.ok and rep.width <= k


def test_covers_are_the_transitive_reduction():
    for seed in range(20):
        P = generators.gen_random_bounded_tw(30, 2, seed).poset
        assert transitive_reduction(P.closure) == P.covers
        assert not np.any(P.closure & P.closure.T)
        assert not np.any(np.diag(P.closure))


def test_text_round_trip():
    P = generators.gen_kelly(4).poset
    text = write_poset(P, ["kelly 4"])
    assert text.startswith("c kelly 4\np poset 14 ")
    assert parse_poset(text) == P


def test_text_errors():
    with pytest.raises(InconsistentHeader):
        parse_poset("p poset 3 2\n1 2\n")
    with pytest.raises(TDSyntaxError) as exc:
        parse_poset("p poset 3 1\n1 x\n")
    assert exc.value.lineno == 2


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 12).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.tuples(st.integers(1, n), st.integers(1, n)), max_size=30))))
def test_closure_matches_search(case):
    n, pairs = case
    pairs = [(min(u, v), max(u, v)) for u, v in pairs if u != v]  # ascending ids keep it acyclic
    P = make_poset(n, pairs)
    adj = {v: set() for v in range(1, n + 1)}
    for u, v in pairs:
        adj[u].add(v)
    for s in range(1, n + 1):
        seen, stack = set(), [s]
        while stack:
            for v in adj[stack.pop()]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        assert {v for v in range(1, n + 1) if P.lt(s, v)} == seen
