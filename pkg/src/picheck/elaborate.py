"""Turn surface expressions into kernel terms.

Names are resolved innermost binder first, then against the global
environment.  Every ``Type`` keyword gets a fresh level whose origin is the
keyword's position.  ``a = b`` needs the type of ``a``, which is asked of
the kernel in the context built so far.
"""
from __future__ import annotations

from typing import Optional

from .environment import GlobalEnv
from .kernel import UnboundName, infer_type
from .reduction import DEFAULT_FLAGS, ReductionFlags
from .syntax import (
    AppExpr, ArrowExpr, EqExpr, Expr, ForallExpr, FunExpr, Name, PropExpr, TypeExpr,
)
from .terms import PROP, App, EqRef, Lam, Pi, Sort, Term, Var, mk_app


class Elaborator:
    def __init__(self, env: GlobalEnv, extra: Optional[dict] = None,
                 flags: ReductionFlags = DEFAULT_FLAGS):
        self.env = env
        self.extra = extra or {}
        self.flags = flags

    def resolve(self, name: Name, scope: list) -> Term:
        for i, bound in enumerate(reversed(scope)):
            if bound == name.ident:
                return Var(i)
        if name.ident in self.extra:
            return self.extra[name.ident]
        term = self.env.resolve(name.ident)
        if term is None:
            raise UnboundName(f"unknown identifier {name.ident}", name.span)
        return term

    def expr(self, e: Expr, scope: list, ctx: tuple) -> Term:
        match e:
            case Name():
                return self.resolve(e, scope)
            case PropExpr():
                return PROP
            case TypeExpr():
                return Sort(self.env.allocator.fresh(e.span, user=True))
            case AppExpr(f, a):
                return App(self.expr(f, scope, ctx), self.expr(a, scope, ctx), e.span)
            case FunExpr(binders, body) | ForallExpr(binders, body):
                node = Lam if isinstance(e, FunExpr) else Pi
                bound = self.telescope(binders, scope, ctx)
                inner_scope = scope + [x for x, _ in bound]
                out = self.expr(body, inner_scope, ctx + tuple(bound))
                for x, ty in reversed(bound):
                    out = node(x, ty, out, e.span)
                return out
            case ArrowExpr(d, c):
                dom = self.expr(d, scope, ctx)
                cod = self.expr(c, scope + [None], ctx + (("_", dom),))
                return Pi("_", dom, cod, e.span)
            case EqExpr(lhs, rhs):
                left = self.expr(lhs, scope, ctx)
                right = self.expr(rhs, scope, ctx)
                carrier = infer_type(self.env, ctx, left, e.span, self.flags).type
                return App(mk_app(EqRef(), [carrier, left]), right, e.span)
        raise TypeError(e)

    def telescope(self, binders, scope: list, ctx: tuple) -> list:
        """Elaborate ``(x y : A) (z : B) ..`` into ``[(x, A), (y, A'), ..]``;
        each name re-reads its type one binder deeper."""
        out = []
        for b in binders:
            for x in b.names:
                ty = self.expr(b.type, scope + [n for n, _ in out], ctx + tuple(out))
                out.append((x, ty))
        return out


def elaborate(env: GlobalEnv, e: Expr, extra: Optional[dict] = None,
              flags: ReductionFlags = DEFAULT_FLAGS) -> Term:
    return Elaborator(env, extra, flags).expr(e, [], ())
