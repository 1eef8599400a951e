"""Random terms for the property tests.

``raw_term`` builds untyped de Bruijn terms with a given number of free
variables.  ``WellTyped`` builds closed, well-typed surface expressions over
the signature of the bundled ``arith.pv`` (naturals, booleans, recursors,
built-in equality, a polymorphic identity at a fresh universe).
"""
from __future__ import annotations

import random

from picheck.terms import PROP, App, Const, Lam, Pi, Sort, Var
from picheck.universes import LevelAllocator

_ALLOC = LevelAllocator()
_LEVELS = [_ALLOC.fresh() for _ in range(2)]
_ATOMS = [PROP, Sort(_LEVELS[0]), Sort(_LEVELS[1]), Const("c"), Const("d")]


def raw_term(rng: random.Random, depth: int, scope: int):
    """A term of depth at most ``depth`` whose free variables are below ``scope``."""
    if depth <= 0 or rng.random() < 0.2:
        if scope and rng.random() < 0.6:
            return Var(rng.randrange(scope))
        return rng.choice(_ATOMS)
    pick = rng.random()
    if pick < 0.4:
        return App(raw_term(rng, depth - 1, scope), raw_term(rng, depth - 1, scope))
    node = Lam if pick < 0.7 else Pi
    return node("x", raw_term(rng, depth - 1, scope), raw_term(rng, depth - 1, scope + 1))


NAT, BOOL = "nat", "bool"


def arrow(a, b):
    return ("->", a, b)


def show_type(ty) -> str:
    if isinstance(ty, tuple):
        return f"({show_type(ty[1])} -> {show_type(ty[2])})"
    return ty


_CONSTANTS = {
    arrow(NAT, NAT): ["S", "pred", "(plus O)"],
    arrow(BOOL, BOOL): ["negb"],
    arrow(NAT, BOOL): ["iszero"],
    arrow(NAT, arrow(NAT, NAT)): ["plus"],
}


class WellTyped:
    """Type-directed generator of surface expressions (as source text).

    Recursion counts with ``nat_rect`` iterate over small numerals only, and
    ``mult`` appears only near the leaves, so every generated term
    normalizes quickly.
    """

    def __init__(self, rng: random.Random):
        self.rng = rng
        self.counter = 0

    def fresh(self, base: str) -> str:
        self.counter += 1
        return f"{base}{self.counter}"

    def top(self, depth: int) -> str:
        kind = self.rng.choice([NAT, NAT, BOOL, arrow(NAT, NAT), arrow(BOOL, BOOL), "proof"])
        if kind == "proof":
            return self.proof(depth, [])
        return self.term(kind, depth, [])

    def leaf(self, ty, ctx) -> str:
        vars_ = [x for x, t in ctx if t == ty]
        consts = _CONSTANTS.get(ty, [])
        if ty == NAT:
            consts = ["O", "(S O)"]
        elif ty == BOOL:
            consts = ["true", "false"]
        pool = vars_ + consts
        if pool and (not isinstance(ty, tuple) or self.rng.random() < 0.7):
            return self.rng.choice(pool)
        if isinstance(ty, tuple):
            x = self.fresh("x")
            body = self.leaf(ty[2], ctx + [(x, ty[1])])
            return f"(fun ({x} : {show_type(ty[1])}) => {body})"
        raise ValueError(ty)

    def term(self, ty, depth: int, ctx: list) -> str:
        if depth <= 1 or self.rng.random() < 0.15:
            return self.leaf(ty, ctx)
        d = depth - 1
        r = self.rng
        choices = ["beta", "beta", "poly_id", "eq_elim", "bool_rect", "app"]
        if ty == NAT:
            choices += ["S", "plus", "nat_rect", "nat_rect"] + (["mult"] if depth <= 3 else [])
        elif ty == BOOL:
            choices += ["negb", "iszero"]
        else:
            choices += ["lam", "lam"]
        pick = r.choice(choices)
        if pick == "S":
            return f"(S {self.term(NAT, d, ctx)})"
        if pick in ("plus", "mult"):
            return f"({pick} {self.term(NAT, d, ctx)} {self.term(NAT, d, ctx)})"
        if pick == "negb":
            return f"(negb {self.term(BOOL, d, ctx)})"
        if pick == "iszero":
            return f"(iszero {self.term(NAT, d, ctx)})"
        if pick == "lam":
            x = self.fresh("x")
            body = self.term(ty[2], d, ctx + [(x, ty[1])])
            return f"(fun ({x} : {show_type(ty[1])}) => {body})"
        if pick == "beta":
            a = r.choice([NAT, BOOL])
            x = self.fresh("x")
            body = self.term(ty, d, ctx + [(x, a)])
            return f"((fun ({x} : {show_type(a)}) => {body}) {self.term(a, d, ctx)})"
        if pick == "app":
            a = r.choice([NAT, BOOL])
            return f"({self.term(arrow(a, ty), d, ctx)} {self.term(a, d, ctx)})"
        if pick == "poly_id":
            A, x = self.fresh("A"), self.fresh("x")
            return (f"((fun ({A} : Type) ({x} : {A}) => {x}) {show_type(ty)} "
                    f"{self.term(ty, d, ctx)})")
        if pick == "eq_elim":
            k = self.fresh("k")
            e = self.term(NAT, min(d, 3), ctx)
            return (f"(eq_elim nat {e} (fun ({k} : nat) => {show_type(ty)}) "
                    f"{self.term(ty, d, ctx)} {e} (refl nat {e}))")
        if pick == "bool_rect":
            c = self.fresh("c")
            return (f"(bool_rect (fun ({c} : bool) => {show_type(ty)}) "
                    f"{self.term(ty, d, ctx)} {self.term(ty, d, ctx)} {self.term(BOOL, d, ctx)})")
        if pick == "nat_rect":
            k, p, acc = self.fresh("k"), self.fresh("p"), self.fresh("r")
            step = self.term(NAT, d, ctx + [(p, NAT), (acc, NAT)])
            # Keep the iteration count small: the major premise is a shallow term.
            major = self.term(NAT, min(d, 2), ctx)
            return (f"(nat_rect (fun ({k} : nat) => nat) {self.term(NAT, d, ctx)} "
                    f"(fun ({p} : nat) ({acc} : nat) => {step}) {major})")
        raise AssertionError(pick)

    def proof(self, depth: int, ctx: list) -> str:
        """A proof of ``e = e`` for some generated ``e``, possibly transported."""
        e = self.term(NAT, max(1, depth - 2), ctx)
        pick = self.rng.choice(["refl", "beta", "transport"])
        if pick == "refl":
            return f"(refl nat {e})"
        if pick == "beta":
            h = self.fresh("h")
            return f"((fun ({h} : {e} = {e}) => {h}) (refl nat {e}))"
        k = self.fresh("k")
        return (f"(eq_elim nat {e} (fun ({k} : nat) => {e} = {k}) "
                f"(refl nat {e}) {e} (refl nat {e}))")
