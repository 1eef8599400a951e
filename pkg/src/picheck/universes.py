"""Universe levels and the satisfiability of their constraint graph.

Every occurrence of ``Type`` gets its own level variable.  Typing and
cumulativity emit ``<`` and ``<=`` constraints between levels; a set of
constraints is consistent iff some assignment of naturals satisfies it.

The solver reads the constraints as a weighted graph (``<=`` edges weigh 0,
``<`` edges weigh 1).  The set is unsatisfiable exactly when a strongly
connected component contains a strict edge, i.e. some cycle has positive
weight.  Otherwise the longest-path labelling of the condensation is a
witness.
"""
from __future__ import annotations

import enum
import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

from .source import Span


@dataclass(frozen=True)
class Level:
    id: int
    origin: Optional[Span] = field(default=None, compare=False)
    # False for levels the kernel allocates on its own (sort of a sort,
    # sort of a product, eliminator motives, ...).
    user: bool = field(default=False, compare=False)

    def __str__(self) -> str:
        return f"u{self.id}"

    def describe(self) -> str:
        where = str(self.origin) if self.origin is not None else "<kernel>"
        kind = "Type" if self.user else "synthesized"
        return f"{self} ({kind} at {where})"


class Rel(enum.Enum):
    LE = "<="
    LT = "<"

    @property
    def weight(self) -> int:
        return 1 if self is Rel.LT else 0


@dataclass(frozen=True)
class Constraint:
    lo: Level
    rel: Rel
    hi: Level
    # The command that produced the constraint; provenance only.
    site: Optional[Span] = field(default=None, compare=False)

    def __str__(self) -> str:
        return f"{self.lo} {self.rel.value} {self.hi}"


def lt(lo: Level, hi: Level, site: Optional[Span] = None) -> Constraint:
    return Constraint(lo, Rel.LT, hi, site)


def le(lo: Level, hi: Level, site: Optional[Span] = None) -> Constraint:
    return Constraint(lo, Rel.LE, hi, site)


class LevelAllocator:
    """Hands out level ids for one checking session."""

    def __init__(self) -> None:
        self._ids = itertools.count()

    def fresh(self, origin: Optional[Span] = None, user: bool = False) -> Level:
        return Level(next(self._ids), origin, user)


def fresh_level(allocator: LevelAllocator, origin: Optional[Span] = None,
                user: bool = False) -> Level:
    return allocator.fresh(origin, user)


@dataclass(frozen=True)
class ConstraintSet:
    constraints: frozenset = frozenset()
    levels: frozenset = frozenset()

    def __post_init__(self) -> None:
        mentioned = {c.lo for c in self.constraints} | {c.hi for c in self.constraints}
        if not mentioned <= self.levels:
            object.__setattr__(self, "levels", self.levels | mentioned)

    def __len__(self) -> int:
        return len(self.constraints)

    def __iter__(self):
        return iter(self.constraints)

    def add(self, delta: Iterable[Constraint]) -> ConstraintSet:
        delta = frozenset(delta)
        if delta <= self.constraints:
            return self
        return ConstraintSet(self.constraints | delta, self.levels)

    def add_levels(self, levels: Iterable[Level]) -> ConstraintSet:
        levels = frozenset(levels)
        if levels <= self.levels:
            return self
        return ConstraintSet(self.constraints, self.levels | levels)

    def merge(self, other: ConstraintSet) -> ConstraintSet:
        return ConstraintSet(self.constraints | other.constraints,
                             self.levels | other.levels)


def add_constraints(cs: ConstraintSet, delta: Iterable[Constraint]) -> ConstraintSet:
    return cs.add(delta)


def merge(a: ConstraintSet, b: ConstraintSet) -> ConstraintSet:
    return a.merge(b)


@dataclass(frozen=True)
class Sat:
    witness: dict

    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class Unsat:
    core: list

    def __bool__(self) -> bool:
        return False


def _sccs(nodes: list, succ: dict) -> list:
    """Tarjan's algorithm, iterative. Components come out in reverse
    topological order (sinks first)."""
    index: dict = {}
    low: dict = {}
    on_stack: set = set()
    stack: list = []
    out: list = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(succ[root]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, children = work[-1]
            advanced = False
            for child in children:
                if child not in index:
                    index[child] = low[child] = counter
                    counter += 1
                    stack.append(child)
                    on_stack.add(child)
                    work.append((child, iter(succ[child])))
                    advanced = True
                    break
                if child in on_stack:
                    low[node] = min(low[node], index[child])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                comp = []
                while True:
                    top = stack.pop()
                    on_stack.discard(top)
                    comp.append(top)
                    if top == node:
                        break
                out.append(comp)
    return out


def _shortest_path(start: Level, goal: Level, out_edges: dict, allowed: set) -> Optional[list]:
    """BFS by edge count from start to goal inside ``allowed``."""
    if start == goal:
        return []
    prev: dict = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        for c in out_edges[node]:
            nxt = c.hi
            if nxt in prev or nxt not in allowed:
                continue
            prev[nxt] = c
            if nxt == goal:
                path = []
                while prev[nxt] is not None:
                    edge = prev[nxt]
                    path.append(edge)
                    nxt = edge.lo
                return path[::-1]
            queue.append(nxt)
    return None


def satisfiable(cs: ConstraintSet) -> Union[Sat, Unsat]:
    """Decide whether the constraints admit an assignment of naturals.

    Returns ``Sat`` with a witness mapping every level to a natural, or
    ``Unsat`` with a shortest positive cycle (shortest among the cycles
    through each strict edge of an offending component).
    """
    key = lambda lvl: lvl.id  # noqa: E731
    nodes = sorted(cs.levels, key=key)
    ordered = sorted(cs.constraints, key=lambda c: (c.lo.id, c.hi.id, c.rel.weight))
    out_edges: dict = {n: [] for n in nodes}
    for c in ordered:
        out_edges[c.lo].append(c)
    succ = {n: [c.hi for c in out_edges[n]] for n in nodes}

    comps = _sccs(nodes, succ)
    comp_of = {}
    for i, comp in enumerate(comps):
        for n in comp:
            comp_of[n] = i

    best: Optional[list] = None
    for c in ordered:
        if c.rel is Rel.LT and comp_of[c.lo] == comp_of[c.hi]:
            members = set(comps[comp_of[c.lo]])
            back = _shortest_path(c.hi, c.lo, out_edges, members)
            cycle = [c] + back
            if best is None or len(cycle) < len(best):
                best = cycle
    if best is not None:
        return Unsat(best)

    # comps is sinks-first; walk sources-first for longest paths.
    value = {i: 0 for i in range(len(comps))}
    for i in reversed(range(len(comps))):
        for n in comps[i]:
            for c in out_edges[n]:
                j = comp_of[c.hi]
                if j != i:
                    value[j] = max(value[j], value[i] + c.rel.weight)
    return Sat({n: value[comp_of[n]] for n in nodes})


def check_assignment(cs: Iterable[Constraint], assignment: dict) -> bool:
    for c in cs:
        lo, hi = assignment[c.lo], assignment[c.hi]
        if c.rel is Rel.LT and not lo < hi:
            return False
        if c.rel is Rel.LE and not lo <= hi:
            return False
    return True


@dataclass(frozen=True)
class CoreEdge:
    """One step of a user-facing inconsistency: a path of raw constraints
    between two levels that are reported to the user."""

    lo: Level
    rel: Rel
    hi: Level
    path: tuple

    @property
    def sites(self) -> list:
        seen = []
        for c in self.path:
            if c.site is not None and c.site not in seen:
                seen.append(c.site)
        return seen

    def to_json(self) -> dict:
        return {
            "lo": self.lo.describe(),
            "rel": self.rel.value,
            "hi": self.hi.describe(),
            "sites": [str(s) for s in self.sites],
        }

    def __str__(self) -> str:
        via = ", ".join(str(s) for s in self.sites) or "kernel"
        return f"{self.lo.describe()} {self.rel.value} {self.hi.describe()} [from {via}]"


def explain_core(core: list) -> list:
    """Collapse a raw cycle onto the levels the user wrote.

    Kernel-synthesized levels are folded into the surrounding edges; a
    folded edge is strict when any constraint along it is.  When no level
    on the cycle comes from the source text, the raw cycle is returned
    edge by edge.
    """
    if not core:
        return []
    start = next((i for i, c in enumerate(core) if c.lo.user), None)
    if start is None:
        return [CoreEdge(c.lo, c.rel, c.hi, (c,)) for c in core]
    rotated = core[start:] + core[:start]
    edges = []
    path: list = []
    for c in rotated:
        path.append(c)
        if c.hi.user:
            rel = Rel.LT if any(p.rel is Rel.LT for p in path) else Rel.LE
            edges.append(CoreEdge(path[0].lo, rel, c.hi, tuple(path)))
            path = []
    return edges
