from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

from .terms import (
    Const, CtorRef, ElimRef, EqElimRef, EqRef, IndRef, ReflRef, Sort, Term,
    mk_app, mk_pis, Var,
)
from .universes import ConstraintSet, LevelAllocator

BUILTINS = {"eq": EqRef(), "refl": ReflRef(), "eq_elim": EqElimRef()}


@dataclass(frozen=True)
class Parameter:
    name: str
    type: Term


@dataclass(frozen=True)
class Definition:
    name: str
    type: Term
    body: Term


@dataclass(frozen=True)
class Constructor:
    name: str
    # Lives in the parameter context; arguments are exposed as products and
    # the result is the inductive applied to exactly the parameters.
    type: Term


@dataclass(frozen=True)
class InductiveDescriptor:
    name: str
    params: tuple  # ((name, type), ...), a telescope
    sort: Sort
    constructors: tuple = ()
    is_record: bool = False
    field_names: Optional[tuple] = None

    @property
    def nparams(self) -> int:
        return len(self.params)

    @property
    def large_elim(self) -> bool:
        """Whether the eliminator may target any sort, not only Prop."""
        return not self.sort.is_prop or not self.constructors

    @property
    def elim_name(self) -> str:
        return f"{self.name}_rect" if self.large_elim else f"{self.name}_ind"

    def type(self) -> Term:
        return mk_pis(self.params, self.sort)

    def applied_to_params(self, depth: int = 0) -> Term:
        """``I p1 .. pn`` in a context with the parameters followed by
        ``depth`` further binders."""
        n = self.nparams
        return mk_app(IndRef(self.name), [Var(depth + n - 1 - k) for k in range(n)])

    def ctor_index(self, name: str) -> int:
        for i, c in enumerate(self.constructors):
            if c.name == name:
                return i
        raise KeyError(name)


@dataclass(frozen=True)
class Inductive:
    descriptor: InductiveDescriptor

    @property
    def name(self) -> str:
        return self.descriptor.name


@dataclass(frozen=True)
class GlobalEnv:
    """The checked prefix of a session.

    Values are replaced, never mutated: checking a command yields a new
    environment, so a failed command leaves the previous one untouched.
    The level allocator is the one mutable piece and is shared by every
    environment of a session.
    """

    decls: tuple = ()
    constraints: ConstraintSet = ConstraintSet()
    allocator: LevelAllocator = field(default_factory=LevelAllocator, compare=False)
    # name -> Term the name elaborates to
    _names: dict = field(default_factory=dict, compare=False, repr=False)
    _consts: dict = field(default_factory=dict, compare=False, repr=False)
    _inductives: dict = field(default_factory=dict, compare=False, repr=False)

    def __contains__(self, name: str) -> bool:
        return name in self._names or name in BUILTINS

    def names(self) -> list:
        return list(self._names)

    def resolve(self, name: str) -> Optional[Term]:
        if name in BUILTINS:
            return BUILTINS[name]
        return self._names.get(name)

    def const(self, name: str):
        return self._consts.get(name)

    def body(self, name: str) -> Optional[Term]:
        decl = self._consts.get(name)
        return decl.body if isinstance(decl, Definition) else None

    def inductive(self, name: str) -> InductiveDescriptor:
        return self._inductives[name]

    def has_inductive(self, name: str) -> bool:
        return name in self._inductives

    def ctor_name(self, ind: str, index: int) -> str:
        desc = self._inductives.get(ind)
        if desc is None or index >= len(desc.constructors):
            return f"{ind}#{index}"
        return desc.constructors[index].name

    def elim_name(self, ind: str) -> str:
        desc = self._inductives.get(ind)
        return desc.elim_name if desc is not None else f"{ind}_rect"

    def with_constraints(self, constraints: ConstraintSet) -> GlobalEnv:
        return replace(self, constraints=constraints)

    def extend(self, decl, constraints: Optional[ConstraintSet] = None) -> GlobalEnv:
        names = dict(self._names)
        consts = dict(self._consts)
        inductives = dict(self._inductives)
        if isinstance(decl, Inductive):
            desc = decl.descriptor
            names[desc.name] = IndRef(desc.name)
            for i, c in enumerate(desc.constructors):
                names[c.name] = CtorRef(desc.name, i)
            names[desc.elim_name] = ElimRef(desc.name)
            inductives[desc.name] = desc
        else:
            names[decl.name] = Const(decl.name)
            consts[decl.name] = decl
        return GlobalEnv(
            self.decls + (decl,),
            self.constraints if constraints is None else constraints,
            self.allocator,
            names,
            consts,
            inductives,
        )
