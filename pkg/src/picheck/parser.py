"""Lexer and recursive-descent parser for ``.pv`` files.

Grammar::

    command  := 'Parameter' ident ':' term '.'
              | 'Axiom' ident ':' term '.'
              | 'Definition' ident (':' term)? ':=' term '.'
              | 'Theorem' ident ':' term ':=' term '.'
              | 'Inductive' ident binders? ':' term ':=' '|'? (ctor ('|' ctor)*)? '.'
              | 'Record' ident binders? ':' term ':=' ident? '{' fields? '}' '.'
              | 'Require' ident '.'  |  'Check' term '.'  |  'Eval' term '.'
    term     := 'fun' binders '=>' term | 'forall' binders ',' term
              | eqterm ('->' term)?
    eqterm   := appterm ('=' appterm)?
    appterm  := atom+
    atom     := ident | 'Prop' | 'Type' | '(' term ')'
    binders  := ('(' ident+ ':' term ')')+

Comments ``(* ... *)`` nest.  ``Type`` never carries an explicit level.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .source import Span
from .syntax import (
    AppExpr, ArrowExpr, AxiomCmd, Binder, CheckCmd, CtorDecl, DefinitionCmd, EqExpr, EvalCmd,
    FieldDecl, ForallExpr, FunExpr, InductiveCmd, Name, ParameterCmd, PropExpr, RecordCmd,
    RequireCmd, TheoremCmd, TypeExpr,
)

KEYWORDS = {
    "fun", "forall", "Prop", "Type",
    "Parameter", "Axiom", "Definition", "Theorem", "Inductive", "Record",
    "Require", "Check", "Eval",
}
COMMAND_KEYWORDS = ["Parameter", "Axiom", "Definition", "Theorem", "Inductive", "Record",
                    "Require", "Check", "Eval"]
SYMBOLS = [":=", "=>", "->", "(", ")", ":", ",", ".", "|", "{", "}", ";", "="]


class ParseError(Exception):
    kind = "ParseError"

    def __init__(self, file: str, line: int, column: int, expected: list, found: str):
        self.file = file
        self.line = line
        self.column = column
        self.expected = sorted(set(expected))
        self.found = found
        self.message = f"expected {' or '.join(self.expected)}, found {found}"
        super().__init__(f"{file}:{line}:{column}: {self.message}")

    @property
    def span(self) -> Span:
        return Span.point(self.file, self.line, self.column)


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "kw", "sym", "eof"
    text: str
    line: int
    col: int
    end_line: int
    end_col: int

    def describe(self) -> str:
        return "end of input" if self.kind == "eof" else repr(self.text)


def tokenize(text: str, file: str = "<input>") -> list:
    tokens = []
    i, line, col = 0, 1, 1
    n = len(text)

    def advance(k: int) -> None:
        nonlocal i, line, col
        for ch in text[i:i + k]:
            if ch == "\n":
                line += 1
                col = 1
            else:
                col += 1
        i += k

    while i < n:
        ch = text[i]
        if ch in " \t\r\n":
            advance(1)
            continue
        if text.startswith("(*", i):
            start = (line, col)
            depth = 0
            while True:
                if i >= n:
                    raise ParseError(file, *start, ["'*)'"], "end of input inside comment")
                if text.startswith("(*", i):
                    depth += 1
                    advance(2)
                elif text.startswith("*)", i):
                    depth -= 1
                    advance(2)
                    if depth == 0:
                        break
                else:
                    advance(1)
            continue
        start_line, start_col = line, col
        if ch.isascii() and ch.isalpha():
            j = i
            while j < n and text[j].isascii() and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            advance(j - i)
            kind = "kw" if word in KEYWORDS else "ident"
            tokens.append(Token(kind, word, start_line, start_col, line, col))
            continue
        for sym in SYMBOLS:
            if text.startswith(sym, i):
                advance(len(sym))
                tokens.append(Token("sym", sym, start_line, start_col, line, col))
                break
        else:
            raise ParseError(file, line, col, ["a token"], repr(ch))
    tokens.append(Token("eof", "", line, col, line, col))
    return tokens


class Parser:
    def __init__(self, text: str, file: str = "<input>"):
        self.file = file
        self.tokens = tokenize(text, file)
        self.pos = 0
        # Longest-match error reporting: the farthest token we failed at and
        # everything that would have been accepted there.
        self.far = -1
        self.expected: list = []

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def _expect_here(self, what: str) -> None:
        if self.pos > self.far:
            self.far = self.pos
            self.expected = [what]
        elif self.pos == self.far:
            self.expected.append(what)

    def error(self) -> ParseError:
        tok = self.tokens[self.far] if self.far >= 0 else self.tok
        return ParseError(self.file, tok.line, tok.col, self.expected or ["a command"],
                          tok.describe())

    def at(self, text: str) -> bool:
        if self.tok.kind in ("sym", "kw") and self.tok.text == text:
            return True
        self._expect_here(f"'{text}'")
        return False

    def accept(self, text: str) -> Optional[Token]:
        if self.at(text):
            tok = self.tok
            self.pos += 1
            return tok
        return None

    def expect(self, text: str) -> Token:
        tok = self.accept(text)
        if tok is None:
            raise self.error()
        return tok

    def ident(self) -> Token:
        if self.tok.kind == "ident":
            tok = self.tok
            self.pos += 1
            return tok
        self._expect_here("identifier")
        raise self.error()

    def span(self, start: Token) -> Span:
        end = self.tokens[self.pos - 1]
        return Span(self.file, start.line, start.col, end.end_line, end.end_col)

    # Terms

    def term(self):
        start = self.tok
        if self.accept("fun"):
            bs = self.binders()
            self.expect("=>")
            body = self.term()
            return FunExpr(bs, body, self.span(start))
        if self.accept("forall"):
            bs = self.binders()
            self.expect(",")
            body = self.term()
            return ForallExpr(bs, body, self.span(start))
        lhs = self.eqterm()
        if self.accept("->"):
            rhs = self.term()
            return ArrowExpr(lhs, rhs, self.span(start))
        return lhs

    def eqterm(self):
        start = self.tok
        lhs = self.appterm()
        if self.accept("="):
            rhs = self.appterm()
            return EqExpr(lhs, rhs, self.span(start))
        return lhs

    def starts_atom(self) -> bool:
        if self.tok.kind == "ident":
            return True
        self._expect_here("identifier")
        return self.at("Prop") or self.at("Type") or self.at("(")

    def appterm(self):
        start = self.tok
        fn = self.atom()
        while self.starts_atom():
            arg = self.atom()
            fn = AppExpr(fn, arg, self.span(start))
        return fn

    def atom(self):
        start = self.tok
        if self.tok.kind == "ident":
            self.pos += 1
            return Name(start.text, self.span(start))
        self._expect_here("identifier")
        if self.accept("Prop"):
            return PropExpr(self.span(start))
        if self.accept("Type"):
            return TypeExpr(self.span(start))
        if self.accept("("):
            inner = self.term()
            self.expect(")")
            return inner
        raise self.error()

    def binder(self) -> Binder:
        start = self.expect("(")
        names = [self.ident().text]
        while self.tok.kind == "ident":
            names.append(self.ident().text)
        self._expect_here("identifier")
        self.expect(":")
        ty = self.term()
        self.expect(")")
        return Binder(tuple(names), ty, self.span(start))

    def binders(self, optional: bool = False) -> tuple:
        bs = []
        if not optional:
            bs.append(self.binder())
        while self.at("("):
            bs.append(self.binder())
        return tuple(bs)

    # Commands

    def command(self):
        start = self.tok
        if self.accept("Parameter") or self.accept("Axiom"):
            cls = AxiomCmd if start.text == "Axiom" else ParameterCmd
            name = self.ident().text
            self.expect(":")
            ty = self.term()
            self.expect(".")
            return cls(name, ty, self.span(start))
        if self.accept("Definition"):
            name = self.ident().text
            ty = self.term() if self.accept(":") else None
            self.expect(":=")
            body = self.term()
            self.expect(".")
            return DefinitionCmd(name, ty, body, self.span(start))
        if self.accept("Theorem"):
            name = self.ident().text
            self.expect(":")
            ty = self.term()
            self.expect(":=")
            body = self.term()
            self.expect(".")
            return TheoremCmd(name, ty, body, self.span(start))
        if self.accept("Inductive"):
            return self.inductive(start)
        if self.accept("Record"):
            return self.record(start)
        if self.accept("Require"):
            module = self.ident().text
            self.expect(".")
            return RequireCmd(module, self.span(start))
        if self.accept("Check"):
            e = self.term()
            self.expect(".")
            return CheckCmd(e, self.span(start))
        if self.accept("Eval"):
            e = self.term()
            self.expect(".")
            return EvalCmd(e, self.span(start))
        raise self.error()

    def inductive(self, start: Token) -> InductiveCmd:
        name = self.ident().text
        params = self.binders(optional=True)
        self.expect(":")
        arity = self.term()
        self.expect(":=")
        ctors = []
        leading_bar = self.accept("|") is not None
        if leading_bar or self.tok.kind == "ident":
            while True:
                cstart = self.tok
                cname = self.ident().text
                self.expect(":")
                cty = self.term()
                ctors.append(CtorDecl(cname, cty, self.span(cstart)))
                if not self.accept("|"):
                    break
        else:
            self._expect_here("identifier")
        self.expect(".")
        return InductiveCmd(name, params, arity, tuple(ctors), self.span(start))

    def record(self, start: Token) -> RecordCmd:
        name = self.ident().text
        params = self.binders(optional=True)
        self.expect(":")
        arity = self.term()
        self.expect(":=")
        ctor = None
        if self.tok.kind == "ident":
            ctor = self.ident().text
        else:
            self._expect_here("identifier")
        self.expect("{")
        fields = []
        while self.tok.kind == "ident":
            fstart = self.tok
            fname = self.ident().text
            self.expect(":")
            fty = self.term()
            fields.append(FieldDecl(fname, fty, self.span(fstart)))
            if not self.accept(";"):
                break
        self._expect_here("identifier")
        self.expect("}")
        self.expect(".")
        return RecordCmd(name, params, arity, ctor, tuple(fields), self.span(start))

    def commands(self) -> list:
        out = []
        while self.tok.kind != "eof":
            out.append(self.command())
            self.far, self.expected = -1, []
        return out


def parse(text: str, file: str = "<input>") -> list:
    """Parse a whole file; raises ParseError at the farthest failure point."""
    return Parser(text, file).commands()


def parse_term(text: str, file: str = "<input>"):
    p = Parser(text, file)
    e = p.term()
    if p.tok.kind != "eof":
        p._expect_here("end of input")
        raise p.error()
    return e
