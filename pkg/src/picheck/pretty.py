"""Render kernel terms in the surface syntax."""
from __future__ import annotations

from typing import Optional

from .terms import (
    App, Const, CtorRef, ElimRef, EqElimRef, EqRef, IndRef, Lam, Pi, ReflRef, Sort, Term, Var,
    occurs_var, spine,
)

_TOP, _ARROW_DOM, _APP_FN, _ATOM = range(4)


def _fresh(name: str, names: list) -> str:
    base = name if name and name != "_" else "x"
    if base not in names:
        return base
    i = 0
    while f"{base}{i}" in names:
        i += 1
    return f"{base}{i}"


class Printer:
    def __init__(self, env=None, show_levels: bool = False):
        self.env = env
        self.show_levels = show_levels

    def head_name(self, t: Term) -> str:
        match t:
            case Const(n) | IndRef(n):
                return n
            case CtorRef(ind, i):
                return self.env.ctor_name(ind, i) if self.env is not None else f"{ind}#{i}"
            case ElimRef(ind):
                return self.env.elim_name(ind) if self.env is not None else f"{ind}_rect"
            case EqRef():
                return "eq"
            case ReflRef():
                return "refl"
            case EqElimRef():
                return "eq_elim"
        raise TypeError(t)

    def fmt(self, t: Term, names: list, prec: int = _TOP) -> str:
        match t:
            case Var(i):
                return names[-1 - i] if i < len(names) else f"#{i - len(names)}"
            case Sort(level):
                if level is None:
                    return "Prop"
                return f"Type@{{{level}}}" if self.show_levels else "Type"
            case App():
                head, args = spine(t)
                parts = [self.fmt(head, names, _APP_FN)]
                parts += [self.fmt(a, names, _ATOM) for a in args]
                return self._paren(" ".join(parts), prec > _APP_FN)
            case Lam(x, d, b):
                x = _fresh(x, names)
                text = f"fun ({x}:{self.fmt(d, names)}) => {self.fmt(b, names + [x])}"
                return self._paren(text, prec > _TOP)
            case Pi(x, d, b):
                if not occurs_var(b, 0):
                    text = f"{self.fmt(d, names, _ARROW_DOM)} -> {self.fmt(b, names + ['_'])}"
                else:
                    x = _fresh(x, names)
                    text = f"forall ({x}:{self.fmt(d, names)}), {self.fmt(b, names + [x])}"
                return self._paren(text, prec > _TOP)
            case _:
                return self.head_name(t)

    @staticmethod
    def _paren(text: str, needed: bool) -> str:
        return f"({text})" if needed else text


def format_term(t: Term, env=None, names: Optional[list] = None, show_levels: bool = False) -> str:
    return Printer(env, show_levels).fmt(t, list(names or []))


def context_names(ctx) -> list:
    """Display names for a typing context, made unique left to right."""
    out: list = []
    for name, _ in ctx:
        out.append(_fresh(name, out))
    return out
