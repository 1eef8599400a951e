"""Constraint-set families for the solver-vs-oracle comparison.

Levels are addressed by position; ``build`` turns ``(lo, rel, hi)`` atoms
into a ConstraintSet over a fixed level list.
"""
from __future__ import annotations

import itertools
import random

from picheck.universes import Constraint, ConstraintSet, LevelAllocator, Rel

RELS = (Rel.LE, Rel.LT)

_ALLOC = LevelAllocator()
LEVELS = [_ALLOC.fresh() for _ in range(6)]


def build(atoms, nlevels: int) -> ConstraintSet:
    cs = frozenset(Constraint(LEVELS[lo], rel, LEVELS[hi]) for lo, rel, hi in atoms)
    return ConstraintSet(cs, frozenset(LEVELS[:nlevels]))


def pairwise_family(nlevels: int = 4, max_constraints: int = 8):
    """Every set in which each ordered pair of distinct levels carries no
    constraint, a ``<=`` or a ``<``, with at most ``max_constraints`` in all."""
    pairs = [(a, b) for a in range(nlevels) for b in range(nlevels) if a != b]

    def go(i: int, acc: list):
        if i == len(pairs):
            yield tuple(acc)
            return
        yield from go(i + 1, acc)
        if len(acc) < max_constraints:
            a, b = pairs[i]
            for rel in RELS:
                acc.append((a, rel, b))
                yield from go(i + 1, acc)
                acc.pop()

    yield from go(0, [])


def all_atoms(nlevels: int) -> list:
    """Every atom over ``nlevels`` levels, reflexive ones included."""
    return [(a, rel, b) for a in range(nlevels) for b in range(nlevels) for rel in RELS]


def subset_family(nlevels: int, max_size: int):
    atoms = all_atoms(nlevels)
    for k in range(max_size + 1):
        yield from itertools.combinations(atoms, k)


def random_family(seed: int, count: int, max_levels: int = 6, max_constraints: int = 10):
    rng = random.Random(seed)
    for _ in range(count):
        n = rng.randint(1, max_levels)
        atoms = all_atoms(n)
        k = rng.randint(0, max_constraints)
        yield n, tuple(rng.choice(atoms) for _ in range(k))


def search(nlevels: int, atoms) -> bool:
    """Exhaustive backtracking over assignments into ``0..nlevels``."""
    by_last: dict = {i: [] for i in range(nlevels)}
    for lo, rel, hi in atoms:
        by_last[max(lo, hi)].append((lo, rel, hi))
    values = [0] * nlevels

    def go(i: int) -> bool:
        if i == nlevels:
            return True
        for v in range(nlevels + 1):
            values[i] = v
            if all(values[lo] < values[hi] if rel is Rel.LT else values[lo] <= values[hi]
                   for lo, rel, hi in by_last[i]):
                if go(i + 1):
                    return True
        return False

    return go(0)
