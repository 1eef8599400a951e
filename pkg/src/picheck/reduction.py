"""beta/delta/iota reduction, normalization and conversion checking."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Union

from .environment import GlobalEnv, InductiveDescriptor
from .terms import (
    App, Const, CtorRef, ElimRef, EqElimRef, IndRef, Lam, Pi, ReflRef, Sort, Term, Var,
    instantiate, lift, mk_app, mk_lams, mk_pis, spine,
)
from .universes import le

DEFAULT_FUEL = 1_000_000


class FuelExhausted(Exception):
    kind = "FuelExhausted"


@dataclass(frozen=True)
class ReductionFlags:
    beta: bool = True
    delta: bool = True
    iota: bool = True
    fuel: int = DEFAULT_FUEL

    def __post_init__(self):
        if self.fuel <= 0:
            raise ValueError("fuel must be positive")


DEFAULT_FLAGS = ReductionFlags()


class Mode(enum.Enum):
    EQUAL = "equal"
    CUMULATIVE = "cumulative"


@dataclass(frozen=True)
class Convertible:
    delta: list

    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class NotConvertible:
    witness: tuple

    def __bool__(self) -> bool:
        return False


ConversionResult = Union[Convertible, NotConvertible]


def recursive_binders(arg_type: Term, ind: str) -> Optional[list]:
    """For a constructor argument ``forall (y1:B1) .. (yk:Bk), I ..`` return
    the binders ``[(y1, B1), ..]``; None when the argument is not recursive.
    Constructor types are stored with their products already exposed."""
    binders = []
    t = arg_type
    while isinstance(t, Pi):
        binders.append((t.name, t.domain))
        t = t.codomain
    head, _ = spine(t)
    if isinstance(head, IndRef) and head.name == ind:
        return binders
    return None


def ctor_telescope(desc: InductiveDescriptor, index: int, params) -> Term:
    """Constructor type with the given parameter values substituted."""
    t = mk_pis(desc.params, desc.constructors[index].type)
    for v in params:
        t = instantiate(t.codomain, v)
    return t


def contract_elim(desc: InductiveDescriptor, args: list, ctor_args: list, index: int) -> Term:
    """Contract ``I_rect params P f1..fk (c_index params ctor_args) rest``.

    The branch receives the constructor arguments followed by one
    recursive call per recursive argument.
    """
    n, k = desc.nparams, len(desc.constructors)
    params, rest = args[:n], args[n + 2 + k:]
    prefix = args[: n + 1 + k]
    branch = args[n + 1 + index]
    t = ctor_telescope(desc, index, params)
    hyps = []
    for a in ctor_args:
        binders = recursive_binders(t.domain, desc.name)
        if binders is not None:
            depth = len(binders)
            call = mk_app(
                ElimRef(desc.name),
                [lift(x, depth) for x in prefix]
                + [mk_app(lift(a, depth), [Var(depth - 1 - i) for i in range(depth)])],
            )
            hyps.append(mk_lams(binders, call))
        t = instantiate(t.codomain, a)
    return mk_app(branch, list(ctor_args) + hyps + list(rest))


class Machine:
    """One reduction job with its own fuel budget."""

    def __init__(self, env: GlobalEnv, flags: ReductionFlags = DEFAULT_FLAGS):
        self.env = env
        self.flags = flags
        self.fuel = flags.fuel

    def tick(self) -> None:
        self.fuel -= 1
        if self.fuel < 0:
            raise FuelExhausted(f"reduction did not finish within {self.flags.fuel} steps")

    def _iota(self, head: Term, args: list) -> Optional[Term]:
        if isinstance(head, ElimRef):
            desc = self.env.inductive(head.ind)
            pos = desc.nparams + 1 + len(desc.constructors)
            if len(args) <= pos:
                return None
            major = self.whnf(args[pos], delta=True)
            mh, margs = spine(major)
            if not (isinstance(mh, CtorRef) and mh.ind == desc.name):
                return None
            ctor_args = margs[desc.nparams:]
            if len(ctor_args) != _arity(desc, mh.index):
                return None
            return contract_elim(desc, args, ctor_args, mh.index)
        if isinstance(head, EqElimRef) and len(args) >= 6:
            proof = self.whnf(args[5], delta=True)
            ph, pargs = spine(proof)
            if isinstance(ph, ReflRef) and len(pargs) == 2:
                return mk_app(args[3], args[6:])
        return None

    def whnf(self, t: Term, delta: Optional[bool] = None) -> Term:
        flags = self.flags
        use_delta = flags.delta if delta is None else delta
        while True:
            head, args = spine(t)
            if flags.beta and isinstance(head, Lam) and args:
                self.tick()
                t = mk_app(instantiate(head.body, args[0]), args[1:])
                continue
            if use_delta and isinstance(head, Const):
                body = self.env.body(head.name)
                if body is not None:
                    self.tick()
                    t = mk_app(body, args)
                    continue
            if flags.iota and isinstance(head, (ElimRef, EqElimRef)):
                reduced = self._iota(head, args)
                if reduced is not None:
                    self.tick()
                    t = reduced
                    continue
            return t

    def normalize(self, t: Term) -> Term:
        t = self.whnf(t)
        match t:
            case Lam(x, d, b):
                return Lam(x, self.normalize(d), self.normalize(b))
            case Pi(x, d, b):
                return Pi(x, self.normalize(d), self.normalize(b))
            case App():
                head, args = spine(t)
                if isinstance(head, (Lam, Pi, App)):
                    head = self.normalize(head)
                return mk_app(head, [self.normalize(a) for a in args])
            case _:
                return t


def _arity(desc: InductiveDescriptor, index: int) -> int:
    t = desc.constructors[index].type
    n = 0
    while isinstance(t, Pi):
        n += 1
        t = t.codomain
    return n


def whnf(env: GlobalEnv, t: Term, flags: ReductionFlags = DEFAULT_FLAGS) -> Term:
    return Machine(env, flags).whnf(t)


def normalize(env: GlobalEnv, t: Term, flags: ReductionFlags = DEFAULT_FLAGS) -> Term:
    return Machine(env, flags).normalize(t)


def head_redex(env: GlobalEnv, t: Term) -> Optional[Term]:
    """Contract the redex at the head of ``t``, if there is one.

    Unlike ``whnf`` this never reduces inside the major premise of an
    eliminator: iota fires only on a syntactic constructor application.
    """
    head, args = spine(t)
    if isinstance(head, Lam) and args:
        return mk_app(instantiate(head.body, args[0]), args[1:])
    if isinstance(head, Const):
        body = env.body(head.name)
        if body is not None:
            return mk_app(body, args)
    if isinstance(head, ElimRef):
        desc = env.inductive(head.ind)
        pos = desc.nparams + 1 + len(desc.constructors)
        if len(args) > pos:
            mh, margs = spine(args[pos])
            if isinstance(mh, CtorRef) and mh.ind == desc.name:
                ctor_args = margs[desc.nparams:]
                if len(ctor_args) == _arity(desc, mh.index):
                    return contract_elim(desc, args, ctor_args, mh.index)
    if isinstance(head, EqElimRef) and len(args) >= 6:
        ph, pargs = spine(args[5])
        if isinstance(ph, ReflRef) and len(pargs) == 2:
            return mk_app(args[3], args[6:])
    return None


def step(env: GlobalEnv, t: Term) -> Optional[Term]:
    """One leftmost-outermost reduction step; None when ``t`` is normal."""
    contracted = head_redex(env, t)
    if contracted is not None:
        return contracted
    match t:
        case Lam(x, d, b) | Pi(x, d, b):
            s = step(env, d)
            if s is not None:
                return type(t)(x, s, b)
            s = step(env, b)
            if s is not None:
                return type(t)(x, d, s)
            return None
        case App():
            head, args = spine(t)
            s = step(env, head)
            if s is not None:
                return mk_app(s, args)
            for i, a in enumerate(args):
                s = step(env, a)
                if s is not None:
                    return mk_app(head, args[:i] + [s] + args[i + 1:])
            return None
        case _:
            return None


class _Converter:
    def __init__(self, machine: Machine):
        self.m = machine
        self.delta: list = []

    def sorts(self, s: Sort, t: Sort, cumulative: bool) -> bool:
        if s.is_prop:
            return t.is_prop or cumulative
        if t.is_prop:
            return False
        if s.level == t.level:
            return True
        self.delta.append(le(s.level, t.level))
        if not cumulative:
            self.delta.append(le(t.level, s.level))
        return True

    def conv(self, t: Term, u: Term, cumulative: bool) -> bool:
        if t == u:
            return True
        while True:
            t = self.m.whnf(t, delta=False)
            u = self.m.whnf(u, delta=False)
            if t == u:
                return True
            mark = len(self.delta)
            if self.structural(t, u, cumulative):
                return True
            del self.delta[mark:]
            t2 = self.unfold(t)
            u2 = self.unfold(u)
            if t2 is None and u2 is None:
                return False
            t = t if t2 is None else t2
            u = u if u2 is None else u2

    def unfold(self, t: Term) -> Optional[Term]:
        head, args = spine(t)
        if isinstance(head, Const):
            body = self.m.env.body(head.name)
            if body is not None:
                self.m.tick()
                return mk_app(body, args)
        return None

    def structural(self, t: Term, u: Term, cumulative: bool) -> bool:
        match t, u:
            case Sort(), Sort():
                return self.sorts(t, u, cumulative)
            case Pi(_, d1, b1), Pi(_, d2, b2):
                return self.conv(d1, d2, False) and self.conv(b1, b2, cumulative)
            case Lam(_, d1, b1), Lam(_, d2, b2):
                return self.conv(d1, d2, False) and self.conv(b1, b2, False)
        h1, a1 = spine(t)
        h2, a2 = spine(u)
        if len(a1) != len(a2) or isinstance(h1, (Lam, Pi, Sort)):
            return False
        if h1 != h2:
            return False
        return all(self.conv(x, y, False) for x, y in zip(a1, a2))


def convertible(env: GlobalEnv, t: Term, u: Term, mode: Mode = Mode.EQUAL,
                flags: ReductionFlags = DEFAULT_FLAGS) -> ConversionResult:
    """Decide ``t == u`` (EQUAL) or ``t <= u`` (CUMULATIVE).

    Sort comparisons are answered with level constraints rather than a
    verdict: the caller adds the returned ``delta`` to its constraint set
    and tests satisfiability.
    """
    machine = Machine(env, flags)
    c = _Converter(machine)
    if c.conv(t, u, mode is Mode.CUMULATIVE):
        return Convertible(_dedup(c.delta))
    return NotConvertible((machine.whnf(t), machine.whnf(u)))


def _dedup(cs: list) -> list:
    seen = set()
    out = []
    for c in cs:
        if c not in seen:
            seen.add(c)
            out.append(c)
    return out


__all__ = [
    "Convertible", "ConversionResult", "DEFAULT_FLAGS", "FuelExhausted", "Machine", "Mode",
    "NotConvertible", "ReductionFlags", "contract_elim", "convertible", "ctor_telescope",
    "head_redex", "normalize", "recursive_binders", "step", "whnf",
]
