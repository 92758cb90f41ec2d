import random

import numpy as np
import pytest

from booldim import generators
from booldim.bp import GREEN, RED
from booldim.trees import RootedTree


def random_tree(rng: random.Random, n: int) -> RootedTree:
    parent = {1: None}
    for v in range(2, n + 1):
        parent[v] = rng.randrange(1, v)
    return RootedTree.from_parent(1, parent, order_key=lambda v: rng.random())


def random_coloring(rng: random.Random, T: RootedTree, p_red=0.3, p_green=0.3) -> dict:
    colors = {}
    for e in T.edges():
        r = rng.random()
        if r < p_red:
            colors[e] = RED
        elif r < p_red + p_green:
            colors[e] = GREEN
    return colors


def truth_matrix(P) -> np.ndarray:
    t = P.closure.copy()
    np.fill_diagonal(t, True)
    return t


def small_instances(count: int, max_n: int = 25, seed0: int = 0):
    """Seeded random bounded-width posets with at most ``max_n`` elements."""
    for s in range(count):
        k = 1 + s % 3
        n = 3 + (s * 7) % (max_n - 2)
        yield f"random(n={n},k={k},seed={seed0 + s})", generators.gen_random_bounded_tw(n, k, seed0 + s)


@pytest.fixture
def rng():
    return random.Random(12345)
