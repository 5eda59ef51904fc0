"""Strict linear type checking, strictness inference and superposition elaboration.

Every variable in scope must be consumed (used, or listed in an explicit
``^[...]`` weakening); repeated use is contraction and is later realised by
basis copying.  Checking returns an *elaborated* term: every node carries its
type in ``.ty``, qubit-literal superpositions are folded into
:class:`QubitSup`, and all other superpositions become ``ifq`` nodes.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from . import orth
from .errors import (
    ArityMismatch,
    BranchTypeMismatch,
    DuplicateName,
    NestedSup,
    NonStrictUnderIfq,
    OrthogonalityFailure,
    TypeMismatch,
    UnknownFunction,
    UnknownVariable,
    UnusedVariable,
    ZeroAmplitude,
)
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
    QubitSup,
    Scaled,
    Sup,
    Tensor,
    Term,
    UnitVal,
    Var,
    free_vars,
)

Context = dict[str, QType]


class Strictness(enum.Enum):
    STRICT = "strict"
    NONSTRICT = "nonstrict"

    def __le__(self, other: "Strictness") -> bool:
        return self is Strictness.STRICT or other is Strictness.NONSTRICT


@dataclass(frozen=True)
class Signature:
    params: tuple[tuple[str, QType], ...]
    result: QType
    strictness: Strictness


@dataclass(frozen=True)
class TypedTerm:
    term: Term
    context: Context
    qtype: QType
    strictness: Strictness


def context_size(ctx: Context) -> int:
    return sum(t.size for t in ctx.values())


def split_context(g: Context, d: Context) -> tuple[Context, list[str]]:
    """Merge two contexts; names in both are shared (later copied by the compiler)."""
    merged = dict(g)
    shared = []
    for x, ty in d.items():
        if x in g:
            if g[x] != ty:
                raise TypeMismatch(f"variable {x!r} used at {g[x]} and at {ty}")
            shared.append(x)
        else:
            merged[x] = ty
    return merged, shared


def _literal(t: Term) -> tuple[complex, complex] | None:
    return orth.qubit_literal(t)


class Checker:
    def __init__(self, signatures: dict[str, Signature] | None = None):
        self.signatures = dict(signatures or {})

    # Returns (elaborated term, strict?)
    def synth(self, t: Term, ctx: Context) -> tuple[Term, bool]:
        method = getattr(self, "_" + type(t).__name__)
        return method(t, ctx)

    def _need(self, name: str, ctx: Context, t: Term) -> QType:
        if name not in ctx:
            raise UnknownVariable(name, t.span)
        return ctx[name]

    def _weakened(self, names, ctx, t):
        for y in names:
            self._need(y, ctx, t)

    def _Var(self, t: Var, ctx):
        ty = self._need(t.name, ctx, t)
        self._weakened(t.weakened, ctx, t)
        if t.name in t.weakened:
            raise DuplicateName(f"{t.name!r} is both used and weakened", t.span)
        return Var(t.name, t.weakened, span=t.span, ty=ty), not t.weakened

    def _UnitVal(self, t, ctx):
        return UnitVal(span=t.span, ty=UNIT), True

    def _QTrue(self, t, ctx):
        self._weakened(t.weakened, ctx, t)
        return QTrue(t.weakened, span=t.span, ty=QUBIT), not t.weakened

    def _QFalse(self, t, ctx):
        self._weakened(t.weakened, ctx, t)
        return QFalse(t.weakened, span=t.span, ty=QUBIT), not t.weakened

    def _QubitSup(self, t, ctx):
        return QubitSup(t.amp_true, t.amp_false, span=t.span, ty=QUBIT), True

    def _Pair(self, t: Pair, ctx):
        a, sa = self.synth(t.fst, ctx)
        b, sb = self.synth(t.snd, ctx)
        return Pair(a, b, span=t.span, ty=Tensor(a.ty, b.ty)), sa and sb

    def _bind(self, names, ctx, t):
        for x in names:
            if x in ctx:
                raise DuplicateName(f"{x!r} is already bound (shadowing is not allowed)", t.span)
            if x in self.signatures:
                raise DuplicateName(f"{x!r} is the name of a function", t.span)

    def _Let(self, t: Let, ctx):
        self._bind([t.x], ctx, t)
        b, sb = self.synth(t.bound, ctx)
        body, sbody = self.synth(t.body, {**ctx, t.x: b.ty})
        if t.x not in free_vars(body):
            raise UnusedVariable(t.x, t.span)
        return Let(t.x, b, body, span=t.span, ty=body.ty), sb and sbody

    def _LetPair(self, t: LetPair, ctx):
        if t.x == t.y:
            raise DuplicateName(f"pattern binds {t.x!r} twice", t.span)
        self._bind([t.x, t.y], ctx, t)
        b, sb = self.synth(t.bound, ctx)
        if not isinstance(b.ty, Tensor):
            raise TypeMismatch(f"cannot destructure a value of type {b.ty}", t.bound.span)
        body, sbody = self.synth(t.body, {**ctx, t.x: b.ty.left, t.y: b.ty.right})
        used = free_vars(body)
        for x in (t.x, t.y):
            if x not in used:
                raise UnusedVariable(x, t.span)
        return LetPair(t.x, t.y, b, body, span=t.span, ty=body.ty), sb and sbody

    def _branches(self, t, ctx):
        c, sc = self.synth(t.cond, ctx)
        if c.ty != QUBIT:
            raise TypeMismatch(f"condition has type {c.ty}, expected Q2", t.cond.span)
        a, sa = self.synth(t.then, ctx)
        b, sb = self.synth(t.orelse, ctx)
        if a.ty != b.ty:
            raise BranchTypeMismatch(f"branches have types {a.ty} and {b.ty}", t.span)
        fa, fb = free_vars(a), free_vars(b)
        if fa != fb:
            missing = sorted(fa ^ fb)[0]
            raise UnusedVariable(missing, (t.orelse if missing in fa else t.then).span)
        return c, sc, a, sa, b, sb

    def _IfClassical(self, t: IfClassical, ctx):
        c, _, a, _, b, _ = self._branches(t, ctx)
        return IfClassical(c, a, b, span=t.span, ty=a.ty), False

    def _IfQuantum(self, t: IfQuantum, ctx):
        c, sc, a, sa, b, sb = self._branches(t, ctx)
        if not (sc and sa and sb):
            which = "condition" if not sc else "branch"
            raise NonStrictUnderIfq(f"ifq {which} measures or discards (is not strict)", t.span)
        if orth.derive(a, b) is None:
            raise OrthogonalityFailure(a, b, t.span)
        return IfQuantum(c, a, b, span=t.span, ty=a.ty), True

    def _Scaled(self, t: Scaled, ctx):
        amp, inner = _peel(t)
        if abs(amp) == 0:
            raise ZeroAmplitude("amplitude is zero", t.span)
        if isinstance(inner, Sup):
            body, strict = self._Sup(inner, ctx)
        else:
            body, strict = self.synth(inner, ctx)
        phase = amp / abs(amp)
        lit = _literal(body)
        if lit is not None:
            return QubitSup(phase * lit[0], phase * lit[1], span=t.span, ty=QUBIT), strict
        if abs(phase - 1) < 1e-15:
            return body, strict
        return Scaled(phase, body, span=t.span, ty=body.ty), strict

    def _Sup(self, t: Sup, ctx):
        sides = []
        for side in (t.left, t.right):
            if isinstance(side, Sup):
                raise NestedSup("a superposition may not be an unscaled side of another", side.span)
            amp, inner = _peel(side)
            if isinstance(inner, Sup):
                body, strict = self._Sup(inner, ctx)
            else:
                body, strict = self.synth(inner, ctx)
            sides.append((amp, body, strict))
        (l0, a, sa), (l1, b, sb) = sides
        return elaborate_sup(l0, a, l1, b, t, strict=sa and sb)

    def _App(self, t: App, ctx):
        sig = self.signatures.get(t.fname)
        if sig is None:
            if t.fname in ctx:
                raise TypeMismatch(f"{t.fname!r} is a variable, not a function", t.span)
            raise UnknownFunction(t.fname, t.span)
        if len(t.args) != len(sig.params):
            raise ArityMismatch(f"{t.fname} takes {len(sig.params)} arguments, got {len(t.args)}", t.span)
        args, strict = [], sig.strictness is Strictness.STRICT
        for arg, (x, want) in zip(t.args, sig.params):
            a, sa = self.synth(arg, ctx)
            if a.ty != want:
                raise TypeMismatch(f"argument {x} of {t.fname} has type {a.ty}, expected {want}", arg.span)
            args.append(a)
            strict = strict and sa
        return App(t.fname, tuple(args), span=t.span, ty=sig.result), strict

    # -- programs

    def check_def(self, d: FunDef) -> TypedTerm:
        if d.name in self.signatures:
            raise DuplicateName(f"function {d.name!r} defined twice", d.span)
        ctx: Context = {}
        for x, ty in d.params:
            if x in ctx:
                raise DuplicateName(f"parameter {x!r} repeated", d.span)
            if x in self.signatures:
                raise DuplicateName(f"parameter {x!r} shadows a function", d.span)
            ctx[x] = ty
        body, strict = self.synth(d.body, ctx)
        if body.ty != d.result:
            raise TypeMismatch(f"{d.name} body has type {body.ty}, declared {d.result}", d.body.span)
        used = free_vars(body)
        for x in ctx:
            if x not in used:
                raise UnusedVariable(x, d.span)
        s = Strictness.STRICT if strict else Strictness.NONSTRICT
        self.signatures[d.name] = Signature(d.params, d.result, s)
        return TypedTerm(body, ctx, d.result, s)


def _peel(t: Term) -> tuple[complex, Term]:
    amp = complex(1)
    while isinstance(t, Scaled):
        amp *= complex(t.amp)
        t = t.body
    return amp, t


def elaborate_sup(l0: complex, left: Term, l1: complex, right: Term, where: Term | None = None, strict: bool = True):
    """Fold ``l0*left + l1*right`` (both already elaborated) into normal form.

    Returns ``(term, strict)``.  Amplitudes are renormalised; two qubit
    literals collapse into one :class:`QubitSup`, anything else becomes
    ``ifq (l0*qtrue + l1*qfalse) then left else right``.
    """
    span = where.span if where is not None else None
    norm = math.sqrt(abs(l0) ** 2 + abs(l1) ** 2)
    if norm == 0:
        raise ZeroAmplitude("superposition has zero norm", span)
    l0, l1 = l0 / norm, l1 / norm
    if left.ty != right.ty:
        raise BranchTypeMismatch(f"superposed terms have types {left.ty} and {right.ty}", span)
    if not strict:
        raise NonStrictUnderIfq("superposed terms must be strict", span)
    if orth.derive(left, right) is None:
        raise OrthogonalityFailure(left, right, span)
    fl, fr = free_vars(left), free_vars(right)
    if fl != fr:
        raise UnusedVariable(sorted(fl ^ fr)[0], span)
    a, b = _literal(left), _literal(right)
    if a is not None and b is not None:
        return QubitSup(l0 * a[0] + l1 * b[0], l0 * a[1] + l1 * b[1], span=span, ty=QUBIT), True
    cond = QubitSup(l0, l1, span=span, ty=QUBIT)
    return IfQuantum(cond, left, right, span=span, ty=left.ty), True


def elaborate(t: Term, ctx: Context | None = None, signatures: dict[str, Signature] | None = None) -> Term:
    """Elaborate a single term (for example a closed superposition)."""
    return Checker(signatures).synth(t, dict(ctx or {}))[0]


def check_term(t: Term, ctx: Context | None = None, signatures=None) -> TypedTerm:
    ctx = dict(ctx or {})
    body, strict = Checker(signatures).synth(t, ctx)
    for x in ctx:
        if x not in free_vars(body):
            raise UnusedVariable(x, t.span)
    return TypedTerm(body, ctx, body.ty, Strictness.STRICT if strict else Strictness.NONSTRICT)


def check(program: Program) -> dict[str, TypedTerm]:
    checker = Checker()
    return {d.name: checker.check_def(d) for d in program.defs}
