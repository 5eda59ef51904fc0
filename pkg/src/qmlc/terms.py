"""Abstract syntax of QML: types, terms, definitions, and the pretty-printer."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .errors import Span


# ---------------------------------------------------------------- types


class QType:
    size: int

    def __str__(self) -> str:
        return render_type(self)


@dataclass(frozen=True)
class Unit(QType):
    @property
    def size(self) -> int:
        return 0


@dataclass(frozen=True)
class Qubit(QType):
    @property
    def size(self) -> int:
        return 1


@dataclass(frozen=True)
class Tensor(QType):
    left: QType
    right: QType

    @property
    def size(self) -> int:
        return self.left.size + self.right.size


UNIT = Unit()
QUBIT = Qubit()


def tensor(*types: QType) -> QType:
    """Right-nested tensor of ``types``; ``tensor()`` is the unit type."""
    if not types:
        return UNIT
    out = types[-1]
    for t in reversed(types[:-1]):
        out = Tensor(t, out)
    return out


# ---------------------------------------------------------------- terms


@dataclass(frozen=True)
class Term:
    # Metadata ignored by structural equality.
    span: Span | None = field(default=None, compare=False, repr=False, kw_only=True)
    ty: QType | None = field(default=None, compare=False, repr=False, kw_only=True)


@dataclass(frozen=True)
class Var(Term):
    name: str
    weakened: tuple[str, ...] = ()


@dataclass(frozen=True)
class UnitVal(Term):
    pass


@dataclass(frozen=True)
class Pair(Term):
    fst: Term
    snd: Term


@dataclass(frozen=True)
class Let(Term):
    x: str
    bound: Term
    body: Term


@dataclass(frozen=True)
class LetPair(Term):
    x: str
    y: str
    bound: Term
    body: Term


@dataclass(frozen=True)
class IfClassical(Term):
    cond: Term
    then: Term
    orelse: Term


@dataclass(frozen=True)
class IfQuantum(Term):
    cond: Term
    then: Term
    orelse: Term


@dataclass(frozen=True)
class QTrue(Term):
    weakened: tuple[str, ...] = ()


@dataclass(frozen=True)
class QFalse(Term):
    weakened: tuple[str, ...] = ()


@dataclass(frozen=True)
class Scaled(Term):
    amp: complex
    body: Term


@dataclass(frozen=True)
class Sup(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class App(Term):
    fname: str
    args: tuple[Term, ...] = ()


@dataclass(frozen=True)
class QubitSup(Term):
    """Normalized qubit literal ``amp_true*qtrue + amp_false*qfalse``.

    Only produced by elaboration; never by the parser.
    """

    amp_true: complex
    amp_false: complex

    @property
    def ket(self) -> tuple[complex, complex]:
        """State vector in (|0>, |1>) order; qfalse is |0>."""
        return (self.amp_false, self.amp_true)


@dataclass(frozen=True)
class FunDef:
    name: str
    params: tuple[tuple[str, QType], ...]
    result: QType
    body: Term
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Program:
    defs: tuple[FunDef, ...]

    def __getitem__(self, name: str) -> FunDef:
        for d in self.defs:
            if d.name == name:
                return d
        raise KeyError(name)

    def names(self) -> list[str]:
        return [d.name for d in self.defs]


def children(t: Term) -> Iterator[Term]:
    if isinstance(t, Pair):
        yield from (t.fst, t.snd)
    elif isinstance(t, (Let, LetPair)):
        yield from (t.bound, t.body)
    elif isinstance(t, (IfClassical, IfQuantum)):
        yield from (t.cond, t.then, t.orelse)
    elif isinstance(t, Scaled):
        yield t.body
    elif isinstance(t, Sup):
        yield from (t.left, t.right)
    elif isinstance(t, App):
        yield from t.args


def walk(t: Term) -> Iterator[Term]:
    yield t
    for c in children(t):
        yield from walk(c)


def free_vars(t: Term) -> set[str]:
    """Variables a term consumes, counting weakened names as consumed."""
    if isinstance(t, Var):
        return {t.name, *t.weakened}
    if isinstance(t, (QTrue, QFalse)):
        return set(t.weakened)
    if isinstance(t, Let):
        return free_vars(t.bound) | (free_vars(t.body) - {t.x})
    if isinstance(t, LetPair):
        return free_vars(t.bound) | (free_vars(t.body) - {t.x, t.y})
    out: set[str] = set()
    for c in children(t):
        out |= free_vars(c)
    return out


# ---------------------------------------------------------------- rendering


def render_type(t: QType) -> str:
    if isinstance(t, Unit):
        return "Q1"
    if isinstance(t, Qubit):
        return "Q2"
    assert isinstance(t, Tensor)
    left = render_type(t.left)
    if isinstance(t.left, Tensor):
        left = f"({left})"
    return f"{left}*{render_type(t.right)}"


def _num(x: float) -> str:
    return format(x, ".17g")


def render_amp(a: complex) -> str:
    a = complex(a)
    if a.imag == 0:
        body = _num(a.real)
    elif a.real == 0:
        body = _num(a.imag) + "i"
    else:
        sign = "-" if a.imag < 0 else "+"
        body = f"{_num(a.real)}{sign}{_num(abs(a.imag))}i"
    return f"({body})"


# Precedence: 0 binders/sup, 1 scaled, 2 application, 3 atom.
def _prec(t: Term) -> int:
    if isinstance(t, (Let, LetPair, IfClassical, IfQuantum, Sup, QubitSup)):
        return 0
    if isinstance(t, Scaled):
        return 1
    if isinstance(t, App) and t.args:
        return 2
    return 3


def _weak(names: tuple[str, ...]) -> str:
    return f" ^ [{', '.join(names)}]" if names else ""


def render_term(t: Term, prec: int = 0) -> str:
    s = _render(t)
    return f"({s})" if _prec(t) < prec else s


def _render(t: Term) -> str:
    if isinstance(t, Var):
        return t.name + _weak(t.weakened)
    if isinstance(t, UnitVal):
        return "()"
    if isinstance(t, QTrue):
        return "qtrue" + _weak(t.weakened)
    if isinstance(t, QFalse):
        return "qfalse" + _weak(t.weakened)
    if isinstance(t, Pair):
        return f"({render_term(t.fst)}, {render_term(t.snd)})"
    if isinstance(t, Let):
        return f"let {t.x} = {render_term(t.bound)} in {render_term(t.body)}"
    if isinstance(t, LetPair):
        return f"let ({t.x}, {t.y}) = {render_term(t.bound)} in {render_term(t.body)}"
    if isinstance(t, IfClassical):
        return f"if {render_term(t.cond)} then {render_term(t.then)} else {render_term(t.orelse)}"
    if isinstance(t, IfQuantum):
        return f"ifq {render_term(t.cond)} then {render_term(t.then)} else {render_term(t.orelse)}"
    if isinstance(t, Scaled):
        return f"{render_amp(t.amp)}*{render_term(t.body, 1)}"
    if isinstance(t, Sup):
        return f"{render_term(t.left, 1)} + {render_term(t.right, 1)}"
    if isinstance(t, App):
        return " ".join([t.fname, *(render_term(a, 3) for a in t.args)])
    if isinstance(t, QubitSup):
        return f"{render_amp(t.amp_true)}*qtrue + {render_amp(t.amp_false)}*qfalse"
    raise TypeError(f"cannot render {t!r}")


def render_def(d: FunDef) -> str:
    params = ""
    if d.params:
        params = " (" + ", ".join(f"{x}:{render_type(ty)}" for x, ty in d.params) + ")"
    return f"{d.name}{params} : {render_type(d.result)} = {render_term(d.body)}"


def render(p: Program) -> str:
    return "".join(render_def(d) + "\n\n" for d in p.defs)
