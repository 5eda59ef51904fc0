"""Orthogonality judgements between elaborated terms, and their circuit witnesses.

The eight rules, tried in this order (first success wins)::

    AxTrueFalse   qtrue ⊥ qfalse
    AxFalseTrue   qfalse ⊥ qtrue
    Pair0         t ⊥ u            ==>  (t, v) ⊥ (u, w)
    Pair1         t ⊥ u            ==>  (v, t) ⊥ (w, u)
    Sup           qubit literals l0*qtrue + l1*qfalse ⊥ k0*qtrue + k1*qfalse
                  when conj(l0) k0 = -conj(l1) k1
    SupIfq        ifq (l-literal) then t else u ⊥ ifq (k-literal) then t else u
                  when t ⊥ u and conj(l0) k0 = -conj(l1) k1
    Ifq0          t ⊥ u,  t ⊥ u'   ==>  t ⊥ ifq c then u else u'
    Ifq1          t ⊥ u,  t ⊥ u'   ==>  ifq c then u else u' ⊥ t

The rules are sound but incomplete; :func:`derive` returns ``None`` when
none applies.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .terms import IfQuantum, Pair, QFalse, QTrue, QubitSup, Term, render_term

AX_TRUE_FALSE = "AxTrueFalse"
AX_FALSE_TRUE = "AxFalseTrue"
PAIR0 = "Pair0"
PAIR1 = "Pair1"
SUP = "Sup"
SUP_IFQ = "SupIfq"
IFQ0 = "Ifq0"
IFQ1 = "Ifq1"
RULES = (AX_TRUE_FALSE, AX_FALSE_TRUE, PAIR0, PAIR1, SUP, SUP_IFQ, IFQ0, IFQ1)

SIDE_TOL = 1e-9


@dataclass(frozen=True)
class OrthDerivation:
    rule: str
    left: Term
    right: Term
    premises: tuple["OrthDerivation", ...] = ()
    amplitudes: tuple[complex, complex, complex, complex] | None = None

    def __post_init__(self):
        if self.amplitudes is not None:
            l0, l1, k0, k1 = self.amplitudes
            if abs(np.conj(l0) * k0 + np.conj(l1) * k1) > SIDE_TOL:
                raise ValueError("superposition side condition violated")


@dataclass(frozen=True)
class OrthWitness:
    """Column 0 of ``unitary`` prepares the then-branch qubit, column 1 the else-branch."""

    unitary: np.ndarray
    position: int
    local: bool  # True when the branches differ on one literal qubit at ``position``


def qubit_literal(t: Term) -> tuple[complex, complex] | None:
    """(amp_true, amp_false) of a weakening-free qubit literal, else None."""
    if isinstance(t, QTrue) and not t.weakened:
        return (1 + 0j, 0j)
    if isinstance(t, QFalse) and not t.weakened:
        return (0j, 1 + 0j)
    if isinstance(t, QubitSup):
        return (complex(t.amp_true), complex(t.amp_false))
    return None


def _side_ok(l: tuple[complex, complex], k: tuple[complex, complex]) -> bool:
    return abs(np.conj(l[0]) * k[0] + np.conj(l[1]) * k[1]) <= SIDE_TOL


_TRUE, _FALSE = QTrue(), QFalse()


def derive(t: Term, u: Term) -> OrthDerivation | None:
    if isinstance(t, QTrue) and isinstance(u, QFalse) and not t.weakened and not u.weakened:
        return OrthDerivation(AX_TRUE_FALSE, t, u)
    if isinstance(t, QFalse) and isinstance(u, QTrue) and not t.weakened and not u.weakened:
        return OrthDerivation(AX_FALSE_TRUE, t, u)
    if isinstance(t, Pair) and isinstance(u, Pair):
        d = derive(t.fst, u.fst)
        if d is not None:
            return OrthDerivation(PAIR0, t, u, (d,))
        d = derive(t.snd, u.snd)
        if d is not None:
            return OrthDerivation(PAIR1, t, u, (d,))
    lt, lu = qubit_literal(t), qubit_literal(u)
    if lt is not None and lu is not None and _side_ok(lt, lu):
        return OrthDerivation(
            SUP, t, u, (OrthDerivation(AX_TRUE_FALSE, _TRUE, _FALSE),), (lt[0], lt[1], lu[0], lu[1])
        )
    if isinstance(t, IfQuantum) and isinstance(u, IfQuantum):
        ct, cu = qubit_literal(t.cond), qubit_literal(u.cond)
        if ct is not None and cu is not None and t.then == u.then and t.orelse == u.orelse and _side_ok(ct, cu):
            d = derive(t.then, t.orelse)
            if d is not None:
                return OrthDerivation(SUP_IFQ, t, u, (d,), (ct[0], ct[1], cu[0], cu[1]))
    if isinstance(u, IfQuantum):
        d0, d1 = derive(t, u.then), None
        if d0 is not None:
            d1 = derive(t, u.orelse)
        if d1 is not None:
            return OrthDerivation(IFQ0, t, u, (d0, d1))
    if isinstance(t, IfQuantum):
        d0, d1 = derive(t.then, u), None
        if d0 is not None:
            d1 = derive(t.orelse, u)
        if d1 is not None:
            return OrthDerivation(IFQ1, t, u, (d0, d1))
    return None


def _ket(amps: tuple[complex, complex]) -> np.ndarray:
    return np.array([amps[1], amps[0]], dtype=complex)


def witness(d: OrthDerivation) -> OrthWitness:
    if d.rule == AX_TRUE_FALSE:
        return OrthWitness(linalg.X.copy(), 0, True)
    if d.rule == AX_FALSE_TRUE:
        return OrthWitness(linalg.I2.copy(), 0, True)
    if d.rule == SUP:
        l0, l1, k0, k1 = d.amplitudes
        u = np.column_stack([_ket((l0, l1)), _ket((k0, k1))])
        return OrthWitness(u, 0, True)
    if d.rule == PAIR0:
        return witness(d.premises[0])
    if d.rule == PAIR1:
        w = witness(d.premises[0])
        return OrthWitness(w.unitary, w.position + d.left.fst.ty.size, w.local)
    # SupIfq, Ifq0, Ifq1: no single literal wire separates the branches.
    w = witness(d.premises[0])
    return OrthWitness(w.unitary, w.position, False)


def local_path(d: OrthDerivation) -> list[int] | None:
    """Pair-component path (0 = fst, 1 = snd) to the separating literal, if any."""
    if d.rule in (AX_TRUE_FALSE, AX_FALSE_TRUE, SUP):
        return []
    if d.rule in (PAIR0, PAIR1):
        rest = local_path(d.premises[0])
        return None if rest is None else [0 if d.rule == PAIR0 else 1] + rest
    return None


def explain(d: OrthDerivation | None, indent: int = 0) -> str:
    pad = "  " * indent
    if d is None:
        return f"{pad}(no derivation)"
    head = f"{pad}{d.rule}: {render_term(d.left)} ⊥ {render_term(d.right)}"
    if d.amplitudes is not None:
        head += "  [" + ", ".join(f"{complex(a):.6g}" for a in d.amplitudes) + "]"
    return "\n".join([head] + [explain(p, indent + 1) for p in d.premises])


def inner_product_oracle(t: Term, u: Term) -> complex:
    """<t|u> of two closed strict terms, by compiling and evaluating both."""
    from .compiler import compile_closed
    from .denote import state_of

    vt = state_of(compile_closed(t))
    vu = state_of(compile_closed(u))
    return complex(np.vdot(vt, vu))
