"""Kernel terms with de Bruijn indices for bound variables.

Binder names are kept for printing only and take no part in equality, so
``==`` on terms is structural equality up to renaming of bound variables.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

from .source import Span
from .universes import Level


class Term:
    __slots__ = ()


@dataclass(frozen=True)
class Var(Term):
    index: int


@dataclass(frozen=True)
class Sort(Term):
    """``Prop`` when ``level`` is None, otherwise ``Type`` at that level."""

    level: Optional[Level] = None

    @property
    def is_prop(self) -> bool:
        return self.level is None


PROP = Sort()


@dataclass(frozen=True)
class Const(Term):
    name: str


@dataclass(frozen=True)
class App(Term):
    fn: Term
    arg: Term
    span: Optional[Span] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Lam(Term):
    name: str = field(compare=False)
    domain: Term
    body: Term
    span: Optional[Span] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Pi(Term):
    name: str = field(compare=False)
    domain: Term
    codomain: Term
    span: Optional[Span] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class IndRef(Term):
    name: str


@dataclass(frozen=True)
class CtorRef(Term):
    ind: str
    index: int


@dataclass(frozen=True)
class ElimRef(Term):
    ind: str


# Built-in propositional equality:
#   eq      : forall (A : Type), A -> A -> Prop
#   refl    : forall (A : Type) (x : A), eq A x x
#   eq_elim : forall (A : Type) (x : A) (P : A -> Type), P x -> forall (y : A), eq A x y -> P y
@dataclass(frozen=True)
class EqRef(Term):
    pass


@dataclass(frozen=True)
class ReflRef(Term):
    pass


@dataclass(frozen=True)
class EqElimRef(Term):
    pass


def struct_eq(t: Term, u: Term) -> bool:
    return t == u


def lift(t: Term, amount: int, cutoff: int = 0) -> Term:
    """Shift every variable at or above ``cutoff`` up by ``amount``."""
    if amount == 0:
        return t
    match t:
        case Var(i):
            return Var(i + amount) if i >= cutoff else t
        case App(f, a):
            return App(lift(f, amount, cutoff), lift(a, amount, cutoff), t.span)
        case Lam(x, d, b):
            return Lam(x, lift(d, amount, cutoff), lift(b, amount, cutoff + 1), t.span)
        case Pi(x, d, b):
            return Pi(x, lift(d, amount, cutoff), lift(b, amount, cutoff + 1), t.span)
        case _:
            return t


def subst(t: Term, replacement: Term, target: int = 0) -> Term:
    """Replace ``Var(target)`` by ``replacement`` and close the gap.

    ``replacement`` is read in the context ``t`` ends up in; it is lifted
    as it passes under binders.  Variables above ``target`` move down by
    one.
    """
    return _subst(t, replacement, target, 0)


def _subst(t: Term, r: Term, k: int, depth: int) -> Term:
    match t:
        case Var(i):
            if i == k + depth:
                return lift(r, depth)
            if i > k + depth:
                return Var(i - 1)
            return t
        case App(f, a):
            return App(_subst(f, r, k, depth), _subst(a, r, k, depth), t.span)
        case Lam(x, d, b):
            return Lam(x, _subst(d, r, k, depth), _subst(b, r, k, depth + 1), t.span)
        case Pi(x, d, b):
            return Pi(x, _subst(d, r, k, depth), _subst(b, r, k, depth + 1), t.span)
        case _:
            return t


def instantiate(body: Term, value: Term) -> Term:
    """Substitute ``value`` for the innermost bound variable of ``body``."""
    return subst(body, value, 0)


def max_free(t: Term) -> int:
    """One more than the largest free index; 0 for closed terms."""
    match t:
        case Var(i):
            return i + 1
        case App(f, a):
            return max(max_free(f), max_free(a))
        case Lam(_, d, b) | Pi(_, d, b):
            return max(max_free(d), max_free(b) - 1, 0)
        case _:
            return 0


def is_closed(t: Term, depth: int = 0) -> bool:
    return max_free(t) <= depth


def occurs_var(t: Term, index: int) -> bool:
    match t:
        case Var(i):
            return i == index
        case App(f, a):
            return occurs_var(f, index) or occurs_var(a, index)
        case Lam(_, d, b) | Pi(_, d, b):
            return occurs_var(d, index) or occurs_var(b, index + 1)
        case _:
            return False


def mentions_ind(t: Term, name: str) -> bool:
    match t:
        case IndRef(n) | CtorRef(n, _) | ElimRef(n):
            return n == name
        case App(f, a):
            return mentions_ind(f, name) or mentions_ind(a, name)
        case Lam(_, d, b) | Pi(_, d, b):
            return mentions_ind(d, name) or mentions_ind(b, name)
        case _:
            return False


def spine(t: Term) -> tuple:
    """Split an application into its head and argument list."""
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fn
    args.reverse()
    return t, args


def mk_app(head: Term, args) -> Term:
    for a in args:
        head = App(head, a)
    return head


def mk_pis(binders, body: Term) -> Term:
    for name, ty in reversed(list(binders)):
        body = Pi(name, ty, body)
    return body


def mk_lams(binders, body: Term) -> Term:
    for name, ty in reversed(list(binders)):
        body = Lam(name, ty, body)
    return body


def levels_of(t: Term) -> Iterator[Level]:
    match t:
        case Sort(lvl) if lvl is not None:
            yield lvl
        case App(f, a):
            yield from levels_of(f)
            yield from levels_of(a)
        case Lam(_, d, b) | Pi(_, d, b):
            yield from levels_of(d)
            yield from levels_of(b)
        case _:
            return


def size(t: Term) -> int:
    match t:
        case App(f, a):
            return 1 + size(f) + size(a)
        case Lam(_, d, b) | Pi(_, d, b):
            return 1 + size(d) + size(b)
        case _:
            return 1
