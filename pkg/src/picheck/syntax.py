"""Surface syntax of ``.pv`` files and its printer.

Spans never take part in equality, so a parse of printed output compares
equal to the original parse.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .source import Span

_span = lambda: field(default=None, compare=False, repr=False)  # noqa: E731


class Expr:
    __slots__ = ()


@dataclass(frozen=True)
class Name(Expr):
    ident: str
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class PropExpr(Expr):
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class TypeExpr(Expr):
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class AppExpr(Expr):
    fn: Expr
    arg: Expr
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Binder:
    names: tuple
    type: Expr
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class FunExpr(Expr):
    binders: tuple
    body: Expr
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class ForallExpr(Expr):
    binders: tuple
    body: Expr
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class ArrowExpr(Expr):
    domain: Expr
    codomain: Expr
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class EqExpr(Expr):
    """``a = b``, elaborated to ``eq T a b`` with ``T`` the type of ``a``."""

    lhs: Expr
    rhs: Expr
    span: Optional[Span] = _span()


# Commands


class Command:
    __slots__ = ()
    kind = "Command"


@dataclass(frozen=True)
class ParameterCmd(Command):
    name: str
    type: Expr
    span: Optional[Span] = _span()
    kind = "Parameter"


@dataclass(frozen=True)
class AxiomCmd(ParameterCmd):
    kind = "Axiom"


@dataclass(frozen=True)
class DefinitionCmd(Command):
    name: str
    type: Optional[Expr]
    body: Expr
    span: Optional[Span] = _span()
    kind = "Definition"


@dataclass(frozen=True)
class TheoremCmd(Command):
    name: str
    type: Expr
    body: Expr
    span: Optional[Span] = _span()
    kind = "Theorem"


@dataclass(frozen=True)
class CtorDecl:
    name: str
    type: Expr
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class InductiveCmd(Command):
    name: str
    params: tuple  # of Binder
    arity: Expr
    constructors: tuple  # of CtorDecl
    span: Optional[Span] = _span()
    kind = "Inductive"


@dataclass(frozen=True)
class FieldDecl:
    name: str
    type: Expr
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class RecordCmd(Command):
    name: str
    params: tuple
    arity: Expr
    ctor: Optional[str]
    fields: tuple  # of FieldDecl
    span: Optional[Span] = _span()
    kind = "Record"

    @property
    def ctor_name(self) -> str:
        return self.ctor or f"Build_{self.name}"


@dataclass(frozen=True)
class RequireCmd(Command):
    module: str
    span: Optional[Span] = _span()
    kind = "Require"

    @property
    def name(self) -> str:
        return self.module


@dataclass(frozen=True)
class CheckCmd(Command):
    expr: Expr
    span: Optional[Span] = _span()
    kind = "Check"
    name = None


@dataclass(frozen=True)
class EvalCmd(Command):
    expr: Expr
    span: Optional[Span] = _span()
    kind = "Eval"
    name = None


# Printing

_TOP, _ARROW_DOM, _EQ_SIDE, _APP_FN, _ATOM = range(5)


def _binders(bs) -> str:
    return "".join(f"({' '.join(b.names)}:{print_expr(b.type)})" for b in bs)


def print_expr(e: Expr, prec: int = _TOP) -> str:
    match e:
        case Name(ident):
            return ident
        case PropExpr():
            return "Prop"
        case TypeExpr():
            return "Type"
        case AppExpr(f, a):
            text = f"{print_expr(f, _APP_FN)} {print_expr(a, _ATOM)}"
            need = prec > _APP_FN
        case FunExpr(bs, body):
            text = f"fun {_binders(bs)} => {print_expr(body)}"
            need = prec > _TOP
        case ForallExpr(bs, body):
            text = f"forall {_binders(bs)}, {print_expr(body)}"
            need = prec > _TOP
        case ArrowExpr(d, c):
            text = f"{print_expr(d, _ARROW_DOM)} -> {print_expr(c)}"
            need = prec > _TOP
        case EqExpr(lhs, rhs):
            text = f"{print_expr(lhs, _EQ_SIDE)} = {print_expr(rhs, _EQ_SIDE)}"
            need = prec > _ARROW_DOM
        case _:
            raise TypeError(e)
    return f"({text})" if need else text


def print_command(c: Command) -> str:
    match c:
        case AxiomCmd(name, ty) | ParameterCmd(name, ty):
            return f"{c.kind} {name} : {print_expr(ty)}."
        case DefinitionCmd(name, None, body):
            return f"Definition {name} := {print_expr(body)}."
        case DefinitionCmd(name, ty, body) | TheoremCmd(name, ty, body):
            return f"{c.kind} {name} : {print_expr(ty)} := {print_expr(body)}."
        case InductiveCmd(name, params, arity, ctors):
            head = f"Inductive {name}{' ' + _binders(params) if params else ''} : {print_expr(arity)} :="
            alts = " | ".join(f"{k.name} : {print_expr(k.type)}" for k in ctors)
            return f"{head} {alts}." if ctors else f"{head} ."
        case RecordCmd(name, params, arity, ctor, fields):
            head = f"Record {name}{' ' + _binders(params) if params else ''} : {print_expr(arity)} :="
            if ctor is not None:
                head += f" {ctor}"
            body = "; ".join(f"{f.name} : {print_expr(f.type)}" for f in fields)
            return f"{head} {{ {body} }}."
        case RequireCmd(module):
            return f"Require {module}."
        case CheckCmd(e):
            return f"Check {print_expr(e)}."
        case EvalCmd(e):
            return f"Eval {print_expr(e)}."
    raise TypeError(c)


def print_commands(cmds) -> str:
    return "\n".join(print_command(c) for c in cmds) + ("\n" if cmds else "")
