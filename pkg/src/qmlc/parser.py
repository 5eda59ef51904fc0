"""Lexer and recursive-descent parser for the ASCII concrete syntax of QML.

Grammar (``--`` starts a comment)::

    program  ::= def*
    def      ::= NAME params? ':' type '=' term
    params   ::= '(' [NAME ':' type (',' NAME ':' type)*] ')'
    type     ::= tatom ['*' type]                 -- right associative
    tatom    ::= 'Q1' | 'Q2' | '(' type ')'
    term     ::= 'let' bind (';' bind)* 'in' term
               | ('if' | 'ifq') term 'then' term 'else' term
               | scaled ['+' scaled]              -- binary only
    bind     ::= (NAME | '(' NAME ',' NAME ')') '=' term
    scaled   ::= '-' scaled | amp '*' scaled | app
    amp      ::= NUMBER | '(' ['-'] NUMBER [('+'|'-') NUMBER] ')'
    app      ::= NAME atom* | atom
    atom     ::= NAME [weak] | 'qtrue' [weak] | 'qfalse' [weak]
               | '(' ')' | '(' term ')' | '(' term ',' term ')'
    weak     ::= '^' '[' [NAME (',' NAME)*] ']'
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import LexError, ParseError, Span
from .terms import (
    QUBIT,
    UNIT,
    App,
    FunDef,
    IfClassical,
    IfQuantum,
    Let,
    LetPair,
    Pair,
    Program,
    QFalse,
    QTrue,
    QType,
    Scaled,
    Sup,
    Tensor,
    Term,
    UnitVal,
    Var,
)

KEYWORDS = {"let", "in", "if", "ifq", "then", "else", "qtrue", "qfalse"}
PUNCT = set("(),:=*+-^[];")


@dataclass(frozen=True)
class Token:
    kind: str  # "IDENT", "NUMBER", "EOF", a keyword, or a punctuation character
    text: str
    span: Span
    value: complex | None = None

    def __repr__(self) -> str:
        if self.kind == "IDENT":
            return f"Ident({self.text})"
        if self.kind == "NUMBER":
            return f"Complex({self.value.real:g}, {self.value.imag:g})"
        return self.kind


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>--[^\n]*)
  | (?P<number>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?i?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<punct>[(),:=*+\-^\[\];])
    """,
    re.VERBOSE,
)


class _Lines:
    def __init__(self, source: str):
        self.starts = [0] + [i + 1 for i, c in enumerate(source) if c == "\n"]

    def span(self, start: int, end: int) -> Span:
        lo, hi = 0, len(self.starts)
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.starts[mid] <= start:
                lo = mid
            else:
                hi = mid
        return Span(start, end, lo + 1, start - self.starts[lo] + 1)


def lex(source: str) -> list[Token]:
    """Tokenize ``source``; whitespace and comments are dropped, no EOF token."""
    lines = _Lines(source)
    tokens: list[Token] = []
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise LexError(pos, source[pos], lines.span(pos, pos + 1))
        text = m.group()
        span = lines.span(pos, m.end())
        pos = m.end()
        if m.lastgroup in ("ws", "comment"):
            continue
        if m.lastgroup == "number":
            if text.endswith("i"):
                value = complex(0.0, float(text[:-1]))
            else:
                value = complex(float(text), 0.0)
            tokens.append(Token("NUMBER", text, span, value))
        elif m.lastgroup == "ident":
            tokens.append(Token(text if text in KEYWORDS else "IDENT", text, span))
        else:
            tokens.append(Token(text, text, span))
    return tokens


_ATOM_START = {"IDENT", "qtrue", "qfalse", "("}


class Parser:
    def __init__(self, tokens: list[Token], source_len: int | None = None):
        end = tokens[-1].span if tokens else Span(0, 0, 1, 1)
        self.toks = list(tokens) + [Token("EOF", "", Span(end.end, end.end, end.line, end.col + 1))]
        self.i = 0
        self.functions: set[str] = set()

    # -- helpers

    def peek(self, k: int = 0) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self) -> Token:
        tok = self.toks[self.i]
        if tok.kind != "EOF":
            self.i += 1
        return tok

    def expect(self, *kinds: str) -> Token:
        tok = self.peek()
        if tok.kind not in kinds:
            raise ParseError(f"unexpected {tok.text or 'end of input'!r}", tok.span, frozenset(kinds))
        return self.next()

    def at(self, *kinds: str) -> bool:
        return self.peek().kind in kinds

    def _span_from(self, start: Token) -> Span:
        last = self.toks[max(self.i - 1, 0)]
        return Span(start.span.start, max(last.span.end, start.span.end), start.span.line, start.span.col)

    def at_def_start(self) -> bool:
        if not self.at("IDENT"):
            return False
        k1 = self.peek(1).kind
        if k1 == ":":
            return True
        if k1 == "(":
            k2, k3 = self.peek(2).kind, self.peek(3).kind
            return (k2 == "IDENT" and k3 == ":") or (k2 == ")" and k3 == ":")
        return False

    # -- program

    def program(self) -> Program:
        defs = []
        while not self.at("EOF"):
            defs.append(self.fundef())
        return Program(tuple(defs))

    def fundef(self) -> FunDef:
        start = self.expect("IDENT")
        name = start.text
        params: list[tuple[str, QType]] = []
        if self.at("("):
            self.next()
            if not self.at(")"):
                while True:
                    x = self.expect("IDENT").text
                    self.expect(":")
                    params.append((x, self.qtype()))
                    if not self.at(","):
                        break
                    self.next()
            self.expect(")")
        self.expect(":")
        result = self.qtype()
        self.expect("=")
        self.functions.add(name)
        body = self.term()
        return FunDef(name, tuple(params), result, body, span=self._span_from(start))

    def qtype(self) -> QType:
        left = self.tatom()
        if self.at("*"):
            self.next()
            return Tensor(left, self.qtype())
        return left

    def tatom(self) -> QType:
        tok = self.peek()
        if tok.kind == "(":
            self.next()
            t = self.qtype()
            self.expect(")")
            return t
        if tok.kind == "IDENT" and tok.text in ("Q1", "Q2"):
            self.next()
            return UNIT if tok.text == "Q1" else QUBIT
        raise ParseError(f"unexpected {tok.text or 'end of input'!r} in type", tok.span, frozenset({"Q1", "Q2", "("}))

    # -- terms

    def term(self) -> Term:
        tok = self.peek()
        if tok.kind == "let":
            return self.let()
        if tok.kind in ("if", "ifq"):
            self.next()
            cond = self.term()
            self.expect("then")
            then = self.term()
            self.expect("else")
            orelse = self.term()
            node = IfClassical if tok.kind == "if" else IfQuantum
            return node(cond, then, orelse, span=self._span_from(tok))
        left = self.scaled()
        if not self.at("+"):
            return left
        self.next()
        right = self.scaled()
        if self.at("+"):
            raise ParseError("superposition is binary; parenthesize 'a + (b + c)'", self.peek().span)
        return Sup(left, right, span=self._span_from(tok))

    def let(self) -> Term:
        start = self.expect("let")
        binds = []
        while True:
            bstart = self.peek()
            if self.at("("):
                self.next()
                x = self.expect("IDENT").text
                self.expect(",")
                y = self.expect("IDENT").text
                self.expect(")")
                pat: tuple[str, ...] = (x, y)
            else:
                pat = (self.expect("IDENT").text,)
            self.expect("=")
            binds.append((pat, self.term(), bstart))
            if self.at(";"):
                self.next()
                continue
            self.expect("in", ";")
            break
        body = self.term()
        for pat, bound, bstart in reversed(binds):
            span = Span(bstart.span.start, self._span_from(start).end, bstart.span.line, bstart.span.col)
            if len(pat) == 1:
                body = Let(pat[0], bound, body, span=span)
            else:
                body = LetPair(pat[0], pat[1], bound, body, span=span)
        return body

    def scaled(self) -> Term:
        tok = self.peek()
        if tok.kind == "-":
            self.next()
            return Scaled(complex(-1.0), self.scaled(), span=self._span_from(tok))
        amp = self.try_amplitude()
        if amp is not None:
            self.expect("*")
            return Scaled(amp, self.scaled(), span=self._span_from(tok))
        return self.app()

    def try_amplitude(self) -> complex | None:
        if self.at("NUMBER"):
            return self.next().value
        if not self.at("("):
            return None
        save = self.i
        self.next()
        sign = 1.0
        if self.at("-"):
            self.next()
            sign = -1.0
        if not self.at("NUMBER"):
            self.i = save
            return None
        value = sign * self.next().value
        if self.at("+", "-") and self.peek(1).kind == "NUMBER":
            s = 1.0 if self.next().kind == "+" else -1.0
            value += s * self.next().value
        if not self.at(")"):
            self.i = save
            return None
        self.next()
        return value

    def app(self) -> Term:
        tok = self.peek()
        if tok.kind == "IDENT" and (tok.text in self.functions or self._starts_arg(1)):
            self.next()
            args = []
            while self._starts_arg(0):
                args.append(self.atom())
            if not args and tok.text not in self.functions:
                return self._weakening(Var(tok.text, span=tok.span), tok)
            return App(tok.text, tuple(args), span=self._span_from(tok))
        return self.atom()

    def _starts_arg(self, k: int) -> bool:
        if self.peek(k).kind not in _ATOM_START:
            return False
        save = self.i
        self.i += k
        try:
            return not self.at_def_start()
        finally:
            self.i = save

    def atom(self) -> Term:
        tok = self.peek()
        if tok.kind == "IDENT":
            self.next()
            if tok.text in self.functions:
                return App(tok.text, (), span=tok.span)
            return self._weakening(Var(tok.text, span=tok.span), tok)
        if tok.kind in ("qtrue", "qfalse"):
            self.next()
            node = QTrue() if tok.kind == "qtrue" else QFalse()
            return self._weakening(node, tok)
        if tok.kind == "(":
            self.next()
            if self.at(")"):
                self.next()
                return UnitVal(span=self._span_from(tok))
            first = self.term()
            if self.at(","):
                self.next()
                second = self.term()
                self.expect(")")
                return Pair(first, second, span=self._span_from(tok))
            self.expect(")", ",")
            return first
        raise ParseError(
            f"unexpected {tok.text or 'end of input'!r}",
            tok.span,
            frozenset({"identifier", "qtrue", "qfalse", "(", "let", "if", "ifq", "-", "number"}),
        )

    def _weakening(self, node: Term, start: Token) -> Term:
        if not self.at("^"):
            return type(node)(*_fields(node), span=self._span_from(start))
        self.next()
        self.expect("[")
        names: list[str] = []
        if not self.at("]"):
            while True:
                names.append(self.expect("IDENT").text)
                if not self.at(","):
                    break
                self.next()
        self.expect("]", ",")
        if len(set(names)) != len(names):
            raise ParseError("duplicate name in weakening list", self._span_from(start))
        span = self._span_from(start)
        if isinstance(node, Var):
            return Var(node.name, tuple(names), span=span)
        return type(node)(tuple(names), span=span)


def _fields(node: Term) -> tuple:
    if isinstance(node, Var):
        return (node.name, node.weakened)
    return (node.weakened,)


def parse(tokens: list[Token]) -> Program:
    return Parser(tokens).program()


def parse_source(source: str) -> Program:
    return parse(lex(source))


def parse_term(source: str, functions: set[str] | frozenset[str] = frozenset()) -> Term:
    """Parse a standalone term; ``functions`` names callable definitions."""
    p = Parser(lex(source))
    p.functions = set(functions)
    t = p.term()
    p.expect("EOF")
    return t
