"""Boolean realizers for posets whose cover graphs have bounded tree-width.

A realizer is a list of permutations of the elements plus a branching
program that answers ``x <= y`` from the order bits alone (is x before y in
each permutation). See :func:`booldim.realizer.build_realizer`.
"""
from .poset import Poset, leq, make_poset, parse_poset, write_poset
from .realizer import (Realizer, build_realizer, count_permutations, deserialize, paper_bound,
                       query, query_bits, serialize, standard_example_realizer)

__version__ = "0.1.0"

__all__ = [
    "Poset", "Realizer", "build_realizer", "count_permutations", "deserialize", "leq",
    "make_poset", "paper_bound", "parse_poset", "query", "query_bits", "serialize",
    "standard_example_realizer", "write_poset",
]
