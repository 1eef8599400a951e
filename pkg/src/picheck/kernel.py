"""The typing judgment and declaration checking.

Sorts are ``Prop`` (impredicative) and ``Type`` at a level variable.  No
judgment fixes a level numerically: each rule emits constraints between
level variables and the caller decides, once per command, whether the
accumulated set is still satisfiable.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

from .environment import (
    Constructor, Definition, GlobalEnv, Inductive, InductiveDescriptor, Parameter,
)
from .pretty import context_names, format_term
from .reduction import (
    DEFAULT_FLAGS, Machine, Mode, ReductionFlags, convertible, recursive_binders,
)
from .source import Span
from .terms import (
    PROP, App, Const, CtorRef, ElimRef, EqElimRef, EqRef, IndRef, Lam, Pi, ReflRef, Sort, Term,
    Var, instantiate, levels_of, lift, mentions_ind, occurs_var, mk_app, mk_lams, mk_pis, spine, subst,
)
from .universes import Constraint, explain_core, le, lt


class KernelError(Exception):
    kind = "KernelError"

    def __init__(self, message: str, span: Optional[Span] = None):
        super().__init__(message)
        self.message = message
        self.span = span


class UnboundName(KernelError):
    kind = "UnboundName"


class NotAFunction(KernelError):
    kind = "NotAFunction"


class DomainNotASort(KernelError):
    kind = "DomainNotASort"


class NotAType(KernelError):
    kind = "NotAType"


class TypeMismatch(KernelError):
    kind = "TypeMismatch"


class PositivityViolation(KernelError):
    kind = "PositivityViolation"


class ArityMismatch(KernelError):
    kind = "ArityMismatch"


class NameClash(KernelError):
    kind = "NameClash"


class InvalidRecord(KernelError):
    kind = "InvalidRecord"


class UniverseInconsistency(KernelError):
    kind = "UniverseInconsistency"

    def __init__(self, core: list, span: Optional[Span] = None):
        self.core = core
        self.explained = explain_core(core)
        chain = str(self.explained[0].lo) if self.explained else ""
        for e in self.explained:
            chain += f" {e.rel.value} {e.hi}"
        super().__init__(f"universe inconsistency, cycle {chain}", span)


@dataclass(frozen=True)
class TypingResult:
    type: Term
    constraints: list


class TypeChecker:
    """Infers and checks types under one global environment.

    Constraints emitted along the way are collected in ``self.constraints``
    and tagged with ``site`` so diagnostics can point back at the command.
    """

    def __init__(self, env: GlobalEnv, site: Optional[Span] = None,
                 flags: ReductionFlags = DEFAULT_FLAGS):
        self.env = env
        self.site = site
        self.flags = flags
        self.constraints: list = []

    def fresh(self):
        return self.env.allocator.fresh(self.site, user=False)

    def emit(self, c: Constraint) -> None:
        self.constraints.append(c if c.site is not None else replace(c, site=self.site))

    def whnf(self, t: Term) -> Term:
        return Machine(self.env, self.flags).whnf(t)

    def show(self, t: Term, ctx=()) -> str:
        return format_term(t, self.env, context_names(ctx))

    def infer(self, ctx: tuple, t: Term) -> Term:
        try:
            return self._infer(ctx, t)
        except KernelError as e:
            span = getattr(t, "span", None)
            if e.span is None and span is not None:
                e.span = span
            raise

    def _infer(self, ctx: tuple, t: Term) -> Term:
        match t:
            case Var(i):
                if i >= len(ctx):
                    raise UnboundName(f"variable #{i} is not bound")
                return lift(ctx[-1 - i][1], i + 1)
            case Sort(level):
                above = self.fresh()
                if level is not None:
                    self.emit(lt(level, above))
                return Sort(above)
            case Const(name):
                decl = self.env.const(name)
                if decl is None:
                    raise UnboundName(f"unknown constant {name}")
                return decl.type
            case IndRef(name):
                return self._desc(name).type()
            case CtorRef(ind, index):
                desc = self._desc(ind)
                return mk_pis(desc.params, desc.constructors[index].type)
            case ElimRef(ind):
                desc = self._desc(ind)
                motive = Sort(self.fresh()) if desc.large_elim else PROP
                return eliminator_type(desc, motive)
            case EqRef():
                return eq_type(self.fresh())
            case ReflRef():
                return refl_type(self.fresh())
            case EqElimRef():
                return eq_elim_type(self.fresh(), self.fresh())
            case App(f, a):
                fty = self.whnf(self.infer(ctx, f))
                if not isinstance(fty, Pi):
                    raise NotAFunction(
                        f"{self.show(f, ctx)} has type {self.show(fty, ctx)}, "
                        "which is not a function type")
                self.check(ctx, a, fty.domain)
                return instantiate(fty.codomain, a)
            case Lam(x, d, b):
                self.infer_sort(ctx, d, DomainNotASort)
                body_ty = self.infer(ctx + ((x, d),), b)
                return Pi(x, d, body_ty)
            case Pi(x, d, b):
                sd = self.infer_sort(ctx, d, DomainNotASort)
                sb = self.infer_sort(ctx + ((x, d),), b, NotAType)
                if sb.is_prop:
                    return PROP
                w = self.fresh()
                if not sd.is_prop:
                    self.emit(le(sd.level, w))
                self.emit(le(sb.level, w))
                return Sort(w)
        raise TypeError(f"not a term: {t!r}")

    def _desc(self, name: str) -> InductiveDescriptor:
        if not self.env.has_inductive(name):
            raise UnboundName(f"unknown inductive {name}")
        return self.env.inductive(name)

    def infer_sort(self, ctx: tuple, t: Term, error=NotAType) -> Sort:
        ty = self.whnf(self.infer(ctx, t))
        if not isinstance(ty, Sort):
            raise error(f"{self.show(t, ctx)} has type {self.show(ty, ctx)}, which is not a sort",
                        getattr(t, "span", None))
        return ty

    def convert(self, a: Term, b: Term, mode: Mode) -> bool:
        res = convertible(self.env, a, b, mode, self.flags)
        if res:
            for c in res.delta:
                self.emit(c)
            return True
        return False

    def check(self, ctx: tuple, t: Term, expected: Term) -> None:
        inferred = self.infer(ctx, t)
        if not self.convert(inferred, expected, Mode.CUMULATIVE):
            raise TypeMismatch(
                f"{self.show(t, ctx)} has type {self.show(inferred, ctx)} "
                f"but is expected to have type {self.show(expected, ctx)}",
                getattr(t, "span", None))


def infer_type(env: GlobalEnv, ctx: tuple, t: Term, site: Optional[Span] = None,
               flags: ReductionFlags = DEFAULT_FLAGS) -> TypingResult:
    tc = TypeChecker(env, site, flags)
    ty = tc.infer(tuple(ctx), t)
    return TypingResult(ty, tc.constraints)


def check_type(env: GlobalEnv, ctx: tuple, t: Term, expected: Term, site: Optional[Span] = None,
               flags: ReductionFlags = DEFAULT_FLAGS) -> list:
    tc = TypeChecker(env, site, flags)
    tc.check(tuple(ctx), t, expected)
    return tc.constraints


# Types of the built-in equality, one fresh level per use.

def eq_type(u) -> Term:
    return Pi("A", Sort(u), Pi("x", Var(0), Pi("y", Var(1), PROP)))


def refl_type(u) -> Term:
    return Pi("A", Sort(u), Pi("x", Var(0), mk_app(EqRef(), [Var(1), Var(0), Var(0)])))


def eq_elim_type(u, w) -> Term:
    return mk_pis(
        [
            ("A", Sort(u)),
            ("x", Var(0)),
            ("P", Pi("_", Var(1), Sort(w))),
            ("px", App(Var(0), Var(1))),
            ("y", Var(3)),
            ("h", mk_app(EqRef(), [Var(4), Var(3), Var(0)])),
        ],
        App(Var(3), Var(1)),
    )


def _branch_type(desc: InductiveDescriptor, index: int, shift: int) -> Term:
    """Type of the branch for constructor ``index``; ``shift`` binders (the
    motive and earlier branches) sit between the parameters and it."""
    n = desc.nparams
    ctor = desc.constructors[index]
    t = lift(ctor.type, shift)
    args = []
    while isinstance(t, Pi):
        args.append((t.name, t.domain))
        t = t.codomain
    m = len(args)
    hyps = []
    for r, (name, a_ty) in enumerate(args):
        if recursive_binders(a_ty, desc.name) is None:
            continue
        j = len(hyps)
        binders = recursive_binders(lift(a_ty, m - r + j), desc.name)
        depth = len(binders)
        motive = Var(shift - 1 + m + j + depth)
        arg = Var(m - 1 - r + j + depth)
        applied = mk_app(arg, [Var(depth - 1 - q) for q in range(depth)])
        hyps.append((f"IH{name}", mk_pis(binders, App(motive, applied))))
    h = len(hyps)
    params = [Var(shift + m + h + n - 1 - q) for q in range(n)]
    ctor_args = [Var(m - 1 - r + h) for r in range(m)]
    concl = App(Var(shift - 1 + m + h), mk_app(CtorRef(desc.name, index), params + ctor_args))
    return mk_pis(args + hyps, concl)


def eliminator_type(desc: InductiveDescriptor, motive_sort: Sort) -> Term:
    """The structural recursor::

        forall params (P : I params -> s) (f1 : B1) .. (fk : Bk) (x : I params), P x
    """
    k = len(desc.constructors)
    binders = list(desc.params)
    binders.append(("P", Pi("x", desc.applied_to_params(0), motive_sort)))
    for i in range(k):
        binders.append((f"f{desc.constructors[i].name}", _branch_type(desc, i, 1 + i)))
    binders.append(("x", desc.applied_to_params(1 + k)))
    return mk_pis(binders, App(Var(k + 1), Var(0)))


def _ensure_fresh(env: GlobalEnv, names: list) -> None:
    seen = set()
    for name in names:
        if name in env or name in seen:
            raise NameClash(f"{name} is already defined")
        seen.add(name)


def _finish(env: GlobalEnv, decl, tc: TypeChecker, terms) -> GlobalEnv:
    cs = env.constraints.add(tc.constraints)
    levels = set()
    for t in terms:
        levels.update(levels_of(t))
    return env.extend(decl, cs.add_levels(levels))


def add_parameter(env: GlobalEnv, name: str, type_: Term, site: Optional[Span] = None,
                  flags: ReductionFlags = DEFAULT_FLAGS) -> GlobalEnv:
    _ensure_fresh(env, [name])
    tc = TypeChecker(env, site, flags)
    tc.infer_sort((), type_)
    return _finish(env, Parameter(name, type_), tc, [type_])


def add_definition(env: GlobalEnv, name: str, type_: Optional[Term], body: Term,
                   site: Optional[Span] = None,
                   flags: ReductionFlags = DEFAULT_FLAGS) -> GlobalEnv:
    """Check ``body`` (against ``type_`` when given) and bind it to ``name``.

    Satisfiability of the resulting constraints is left to the caller.
    """
    _ensure_fresh(env, [name])
    tc = TypeChecker(env, site, flags)
    if type_ is not None:
        tc.infer_sort((), type_)
        tc.check((), body, type_)
    else:
        type_ = tc.infer((), body)
    return _finish(env, Definition(name, type_, body), tc, [type_, body])


def _strict_positive(tc: TypeChecker, desc: InductiveDescriptor, ctor: str, ctx: tuple,
                     arg: Term) -> Term:
    """Return ``arg`` with its products exposed, or raise when the inductive
    occurs other than as the final codomain applied to the parameters."""
    if not mentions_ind(arg, desc.name):
        return arg
    binders = []
    t = tc.whnf(arg)
    while isinstance(t, Pi):
        if mentions_ind(t.domain, desc.name):
            raise PositivityViolation(
                f"{desc.name} occurs to the left of an arrow in the argument "
                f"{tc.show(arg, ctx)} of {ctor}")
        binders.append((t.name, t.domain))
        t = tc.whnf(t.codomain)
    if t != desc.applied_to_params(len(ctx) - desc.nparams + len(binders)):
        raise PositivityViolation(
            f"{desc.name} occurs in a non strictly positive position in the type of {ctor}: "
            f"{tc.show(t, ctx + tuple(binders))}")
    return mk_pis(binders, t)


def check_inductive(env: GlobalEnv, desc: InductiveDescriptor, site: Optional[Span] = None,
                    flags: ReductionFlags = DEFAULT_FLAGS) -> GlobalEnv:
    """Check an inductive declaration and extend ``env`` with it.

    ``desc.sort`` may be any term reducing to a sort; constructor types
    are read in the parameter context and may mention ``IndRef(desc.name)``.
    The stored constructor types have every product exposed, which the
    eliminator generator and the iota rule rely on.
    """
    names = [desc.name, *(c.name for c in desc.constructors)]
    _ensure_fresh(env, names + [desc.elim_name])
    if desc.is_record:
        if len(desc.constructors) != 1:
            raise InvalidRecord(f"record {desc.name} must have exactly one constructor")
        _ensure_fresh(env, list(desc.field_names or ()))

    tc = TypeChecker(env, site, flags)
    ctx: tuple = ()
    for x, a in desc.params:
        tc.infer_sort(ctx, a)
        ctx += ((x, a),)
    arity = tc.whnf(desc.sort)
    if not isinstance(arity, Sort):
        raise ArityMismatch(f"the arity of {desc.name} must be Prop or Type, "
                            f"not {tc.show(desc.sort, ctx)}")
    stub = replace(desc, sort=arity, constructors=())
    # Constructor types see the inductive itself; only its type is needed.
    tc.env = env.extend(Inductive(stub))

    ctors = []
    for ctor in desc.constructors:
        cctx = ctx
        args = []
        t = tc.whnf(ctor.type)
        while isinstance(t, Pi):
            dom = _strict_positive(tc, stub, ctor.name, cctx, t.domain)
            s = tc.infer_sort(cctx, dom)
            if not arity.is_prop and not s.is_prop:
                tc.emit(le(s.level, arity.level))
            args.append((t.name, dom))
            cctx += ((t.name, dom),)
            t = tc.whnf(t.codomain)
        expected = stub.applied_to_params(len(args))
        if t != expected:
            head, _ = spine(t)
            if mentions_ind(t, desc.name) and not (isinstance(head, IndRef) and head.name == desc.name):
                raise PositivityViolation(
                    f"{desc.name} occurs in the result of {ctor.name} other than as its head")
            raise ArityMismatch(
                f"constructor {ctor.name} must produce {tc.show(expected, cctx)}, "
                f"not {tc.show(t, cctx)}")
        for _, dom in args:
            if desc.is_record and mentions_ind(dom, desc.name):
                raise InvalidRecord(f"record {desc.name} cannot be recursive")
        ctors.append(Constructor(ctor.name, mk_pis(args, t)))

    final = replace(desc, sort=arity, constructors=tuple(ctors))
    tc.env = env
    terms = [p[1] for p in desc.params] + [arity] + [c.type for c in ctors]
    out = _finish(env, Inductive(final), tc, terms)
    if final.is_record:
        out = add_projections(out, final, site, flags)
    return out


def add_projections(env: GlobalEnv, desc: InductiveDescriptor, site: Optional[Span] = None,
                    flags: ReductionFlags = DEFAULT_FLAGS) -> GlobalEnv:
    """Define one projection per field through the eliminator.

    For a field ``f_i : T_i`` the projection has type
    ``forall params (r : R params), T_i[f_j := f_j params r]``.  Records in
    Prop only get projections for their propositional fields.
    """
    n = desc.nparams
    fields = desc.field_names
    ctor_ty = desc.constructors[0].type
    arg_types = []
    t = ctor_ty
    while isinstance(t, Pi):
        arg_types.append(t.domain)
        t = t.codomain
    if fields is None:
        fields = tuple(f"proj{i}" for i in range(len(arg_types)))
    record_binder = ("r", desc.applied_to_params(0))
    params_outer = [Var(1 + n - 1 - q) for q in range(n)]
    # Branch binders: the constructor arguments, read under (params, r).
    branch_args = []
    t = lift(ctor_ty, 1)
    while isinstance(t, Pi):
        branch_args.append((t.name, t.domain))
        t = t.codomain
    m = len(branch_args)

    skipped = []
    for i, fname in enumerate(fields):
        field_ty = arg_types[i]
        if not desc.large_elim:
            probe = TypeChecker(env, site, flags)
            sort = probe.infer_sort(tuple(desc.params) + tuple(zip(fields[:i], arg_types[:i])),
                                    field_ty)
            # A field whose type mentions an unprojectable one has no statable type.
            if not sort.is_prop or any(occurs_var(field_ty, i - 1 - q) for q in skipped):
                skipped.append(i)
                continue
        ty = lift(field_ty, 1, i)
        for q in range(i - 1, -1, -1):
            value = mk_app(Const(fields[q]),
                           [Var(q + 1 + n - 1 - p) for p in range(n)] + [Var(q)])
            ty = subst(ty, value, 0)
        motive = Lam("r", desc.applied_to_params(1), lift(ty, 1, 1))
        branch = mk_lams(branch_args, Var(m - 1 - i))
        body = mk_app(ElimRef(desc.name), params_outer + [motive, branch, Var(0)])
        proj_type = mk_pis(list(desc.params) + [record_binder], ty)
        proj_body = mk_lams(list(desc.params) + [record_binder], body)
        env = add_definition(env, fname, proj_type, proj_body, site, flags)
    return env
