"""Command processing, ``Require`` splicing and check reports."""
from __future__ import annotations

import os
import time
from dataclasses import dataclass, field
from typing import Optional

from .elaborate import Elaborator
from .environment import Constructor, GlobalEnv, Inductive, InductiveDescriptor
from .kernel import (
    KernelError, TypeChecker, UniverseInconsistency, add_definition, add_parameter,
    check_inductive,
)
from .parser import ParseError, parse
from .pretty import format_term
from .reduction import DEFAULT_FLAGS, FuelExhausted, ReductionFlags, normalize
from .source import Span
from .syntax import (
    CheckCmd, Command, DefinitionCmd, EvalCmd, InductiveCmd, ParameterCmd,
    RecordCmd, RequireCmd, TheoremCmd,
)
from .terms import PROP, IndRef, Sort, mk_pis
from .universes import Unsat, satisfiable

EXTENSION = ".pv"


class DriverError(Exception):
    kind = "DriverError"

    def __init__(self, message: str, span: Optional[Span] = None):
        super().__init__(message)
        self.message = message
        self.span = span


class FileNotFound(DriverError):
    kind = "FileNotFound"


class RequireCycle(DriverError):
    kind = "RequireCycle"


def _ensure_consistent(env: GlobalEnv, span: Optional[Span]) -> None:
    verdict = satisfiable(env.constraints)
    if isinstance(verdict, Unsat):
        raise UniverseInconsistency(verdict.core, span)


def _telescope(elab: Elaborator, binders) -> list:
    return elab.telescope(binders, [], ())


def _inductive(env: GlobalEnv, cmd, flags: ReductionFlags) -> GlobalEnv:
    elab = Elaborator(env, flags=flags)
    params = _telescope(elab, cmd.params)
    scope = [x for x, _ in params]
    arity = elab.expr(cmd.arity, scope, tuple(params))
    stub_sort = arity if isinstance(arity, Sort) else PROP
    stub = InductiveDescriptor(cmd.name, tuple(params), stub_sort)
    if isinstance(cmd, InductiveCmd):
        inner = Elaborator(env.extend(Inductive(stub)) if cmd.name not in env else env,
                           {cmd.name: IndRef(cmd.name)}, flags)
        ctors = tuple(Constructor(c.name, inner.expr(c.type, scope, tuple(params)))
                      for c in cmd.constructors)
        desc = InductiveDescriptor(cmd.name, tuple(params), arity, ctors)
    else:
        fields = []
        for f in cmd.fields:
            names = scope + [x for x, _ in fields]
            fields.append((f.name, elab.expr(f.type, names, tuple(params) + tuple(fields))))
        ctor_type = mk_pis(fields, stub.applied_to_params(len(fields)))
        desc = InductiveDescriptor(cmd.name, tuple(params), arity,
                                   (Constructor(cmd.ctor_name, ctor_type),),
                                   is_record=True, field_names=tuple(f.name for f in cmd.fields))
    return check_inductive(env, desc, cmd.span, flags)


def process(env: GlobalEnv, cmd: Command,
            flags: ReductionFlags = DEFAULT_FLAGS) -> tuple:
    """Check one command against ``env``.

    Returns ``(new_env, output)``; ``output`` is the printed answer of
    ``Check``/``Eval`` and None otherwise.  Kernel errors propagate, and a
    command whose constraints are unsatisfiable raises
    UniverseInconsistency.  Either way ``env`` itself is untouched.
    """
    site = cmd.span
    match cmd:
        case ParameterCmd(name, ty):
            t = Elaborator(env, flags=flags).expr(ty, [], ())
            new = add_parameter(env, name, t, site, flags)
        case DefinitionCmd(name, ty, body) | TheoremCmd(name, ty, body):
            elab = Elaborator(env, flags=flags)
            t = elab.expr(ty, [], ()) if ty is not None else None
            b = elab.expr(body, [], ())
            new = add_definition(env, name, t, b, site, flags)
        case InductiveCmd() | RecordCmd():
            new = _inductive(env, cmd, flags)
        case CheckCmd(e) | EvalCmd(e):
            t = Elaborator(env, flags=flags).expr(e, [], ())
            tc = TypeChecker(env, site, flags)
            ty = tc.infer((), t)
            _ensure_consistent(env.with_constraints(env.constraints.add(tc.constraints)), site)
            if isinstance(cmd, CheckCmd):
                return env, format_term(ty, env)
            return env, format_term(normalize(env, t, flags), env)
        case RequireCmd():
            raise TypeError("Require is resolved by the session, not by process()")
        case _:
            raise TypeError(cmd)
    _ensure_consistent(new, site)
    return new, None


@dataclass
class CommandReport:
    name: Optional[str]
    kind: str
    status: str  # "ok" | "error" | "skipped"
    span: Optional[Span]
    error: Optional[dict] = None
    output: Optional[str] = None

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "kind": self.kind,
            "status": self.status,
            "span": self.span.to_json() if self.span is not None else None,
        }
        if self.error is not None:
            out["error"] = self.error
        return out


@dataclass
class FileReport:
    file: str
    commands: list = field(default_factory=list)
    levels: int = 0
    constraints: int = 0
    satisfiable: bool = True
    ms: float = 0.0
    error: Optional[dict] = None

    @property
    def ok(self) -> bool:
        return self.error is None and all(c.status == "ok" for c in self.commands)

    @property
    def first_error(self) -> Optional[CommandReport]:
        return next((c for c in self.commands if c.status == "error"), None)

    def to_json(self) -> dict:
        out = {
            "file": self.file,
            "commands": [c.to_json() for c in self.commands],
            "levels": self.levels,
            "constraints": self.constraints,
            "satisfiable": self.satisfiable,
            "ms": round(self.ms, 3),
        }
        if self.error is not None:
            out["error"] = self.error
        return out


@dataclass
class CheckReport:
    files: list

    @property
    def ok(self) -> bool:
        return all(f.ok for f in self.files)

    @property
    def io_error(self) -> bool:
        return any(f.error is not None and f.error["kind"] == FileNotFound.kind
                   for f in self.files)

    @property
    def exit_code(self) -> int:
        if self.io_error:
            return 2
        return 0 if self.ok else 1


def error_dict(exc: Exception, fallback: Optional[Span] = None) -> dict:
    span = getattr(exc, "span", None) or fallback
    out = {
        "kind": getattr(exc, "kind", type(exc).__name__),
        "message": getattr(exc, "message", str(exc)),
    }
    if span is not None:
        out["span"] = span.to_json()
    if isinstance(exc, UniverseInconsistency):
        out["core"] = [e.to_json() for e in exc.explained]
        out["raw_core"] = [str(c) for c in exc.core]
    return out


class Session:
    """One sequential checking session: one environment, one level allocator.

    Files checked in the same session see each other's declarations, which
    is what ``Require`` relies on: a required file is spliced into the
    requiring one at the point of the ``Require``, exactly as if its text
    had been pasted there.  A file is spliced at most once per session.
    """

    def __init__(self, include_paths=(), flags: ReductionFlags = DEFAULT_FLAGS):
        self.env = GlobalEnv()
        self.include_paths = [os.path.abspath(p) for p in include_paths]
        self.flags = flags
        self.loaded: set = set()
        self._stack: list = []

    def resolve(self, module: str, from_file: Optional[str]) -> Optional[str]:
        dirs = []
        if from_file is not None:
            dirs.append(os.path.dirname(os.path.abspath(from_file)))
        dirs += self.include_paths
        for d in dirs:
            candidate = os.path.join(d, module + EXTENSION)
            if os.path.isfile(candidate):
                return os.path.abspath(candidate)
        return None

    def _run(self, cmds: list, file: str, entries: list) -> bool:
        for i, cmd in enumerate(cmds):
            if isinstance(cmd, RequireCmd):
                ok = self._require(cmd, file, entries)
            else:
                ok = self._one(cmd, entries)
            if not ok:
                for rest in cmds[i + 1:]:
                    entries.append(CommandReport(rest.name, rest.kind, "skipped", rest.span))
                return False
        return True

    def _one(self, cmd: Command, entries: list) -> bool:
        try:
            self.env, output = process(self.env, cmd, self.flags)
        except (KernelError, FuelExhausted, DriverError) as exc:
            entries.append(CommandReport(cmd.name, cmd.kind, "error", cmd.span,
                                         error_dict(exc, cmd.span)))
            return False
        entries.append(CommandReport(cmd.name, cmd.kind, "ok", cmd.span, output=output))
        return True

    def _require(self, cmd: RequireCmd, file: str, entries: list) -> bool:
        path = self.resolve(cmd.module, file)

        def fail(exc: Exception) -> bool:
            entries.append(CommandReport(cmd.name, cmd.kind, "error", cmd.span,
                                         error_dict(exc, cmd.span)))
            return False

        if path is None:
            return fail(FileNotFound(f"cannot find module {cmd.module}", cmd.span))
        if path in self._stack:
            chain = " -> ".join(os.path.basename(p) for p in self._stack + [path])
            return fail(RequireCycle(f"cyclic Require: {chain}", cmd.span))
        if path in self.loaded:
            entries.append(CommandReport(cmd.name, cmd.kind, "ok", cmd.span,
                                         output=f"{cmd.module} already loaded"))
            return True
        try:
            cmds = self._parse(path)
        except ParseError as exc:
            return fail(exc)
        entries.append(CommandReport(cmd.name, cmd.kind, "ok", cmd.span))
        return self._splice(path, cmds, entries)

    def _splice(self, path: str, cmds: list, entries: list) -> bool:
        self.loaded.add(path)
        self._stack.append(path)
        try:
            ok = self._run(cmds, path, entries)
        finally:
            self._stack.pop()
        if not ok:
            self.loaded.discard(path)
        return ok

    def _parse(self, path: str) -> list:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
        return parse(text, display_path(path))

    def check_text(self, text: str, file: str = "<input>") -> FileReport:
        start = time.perf_counter()
        report = FileReport(file)
        try:
            cmds = parse(text, file)
        except ParseError as exc:
            report.error = error_dict(exc)
        else:
            self._run(cmds, file, report.commands)
        return self._finish(report, start)

    def check_file(self, path: str) -> FileReport:
        start = time.perf_counter()
        report = FileReport(display_path(path))
        if not os.path.isfile(path):
            report.error = {"kind": FileNotFound.kind, "message": f"no such file: {path}"}
            return self._finish(report, start)
        full = os.path.abspath(path)
        if full in self.loaded:
            return self._finish(report, start)
        try:
            cmds = self._parse(full)
        except ParseError as exc:
            report.error = error_dict(exc)
        except OSError as exc:
            report.error = {"kind": FileNotFound.kind, "message": str(exc)}
        else:
            self._splice(full, cmds, report.commands)
        return self._finish(report, start)

    def _finish(self, report: FileReport, start: float) -> FileReport:
        cs = self.env.constraints
        report.levels = len(cs.levels)
        report.constraints = len(cs.constraints)
        # A command rejected by the solver is rolled back, so the surviving
        # set is always satisfiable; the report still records the failure.
        rejected = any(c.error and c.error["kind"] == UniverseInconsistency.kind
                       for c in report.commands)
        report.satisfiable = not rejected and not isinstance(satisfiable(cs), Unsat)
        report.ms = (time.perf_counter() - start) * 1000
        return report

    def user_levels(self, file: Optional[str] = None) -> list:
        return sorted(
            (lvl for lvl in self.env.constraints.levels
             if lvl.user and (file is None or (lvl.origin is not None and lvl.origin.file == file))),
            key=lambda lvl: lvl.id,
        )


def display_path(path: str) -> str:
    try:
        rel = os.path.relpath(path)
    except ValueError:
        return path
    return path if rel.startswith("..") else rel


def check_files(paths, include_paths=(), flags: ReductionFlags = DEFAULT_FLAGS) -> CheckReport:
    """Check ``paths`` in order in one shared session."""
    session = Session(include_paths, flags)
    return CheckReport([session.check_file(p) for p in paths])


def check_text(text: str, file: str = "<input>", flags: ReductionFlags = DEFAULT_FLAGS) -> FileReport:
    return Session(flags=flags).check_text(text, file)
