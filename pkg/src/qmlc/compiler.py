"""Translate elaborated QML terms into FQC morphisms.

Compilation threads a single growing wire register.  Each term compiles to
the list of wires holding its value; heap qubits are allocated on demand
(``|0>`` initially), garbage wires are collected as they appear, and wires
that an ``ifq`` returns to ``|0>`` go to a reuse pool.  Only conditional
blocks need physical permutations; everywhere else routing is bookkeeping,
and one final permutation establishes the outputs|garbage|clean layout.

Quantum ``if`` uncomputes its control qubit in one of two ways:

* when the orthogonality derivation bottoms out in one literal qubit (the
  axioms or the qubit ``Sup`` rule, reached through ``Pair0``/``Pair1``),
  that output qubit is not built at all: the control wire itself becomes it,
  after the witness unitary ``W`` (column 0 = then-branch state) times ``X``;
* otherwise (``SupIfq``/``Ifq0``/``Ifq1``) the then-block is undone, the
  control is flipped iff every non-context wire of the block is ``|0>``
  (exactly the then-branch image), and the then-block is redone.  The control
  ends in ``|0>`` and joins the pool.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg, orth
from .circuit import Circuit, Controlled, FqcMorphism, Gate, Id, Permute, Single, optimize_morphism, routing
from .errors import CompileError, InternalError
from .parser import parse_source
from .terms import (
    QUBIT,
    App,
    IfClassical,
    IfQuantum,
    Let,
    LetPair,
    Pair,
    Program,
    QFalse,
    QTrue,
    QubitSup,
    Scaled,
    Term,
    UnitVal,
    Var,
    free_vars,
    tensor,
)
from .typecheck import Strictness, TypedTerm, check

Env = dict[str, list[int]]


@dataclass(frozen=True)
class Hole(Term):
    """Placeholder for the literal qubit an ``ifq`` control wire will stand in for."""


def prep_unitary(amp_true: complex, amp_false: complex) -> np.ndarray:
    """Unitary taking |0> to amp_false|0> + amp_true|1>; the equal superposition gives H, qtrue gives X."""
    a, b = complex(amp_false), complex(amp_true)
    return np.array([[a, np.conj(b)], [b, -np.conj(a)]], dtype=complex)


# Raw gates while building; widths are only known at the end.
#   ("u", wire, matrix) | ("c", control, positive, [raw...]) | ("p", {src: dst})


def _raw_inverse(gates: list) -> list:
    out = []
    for g in reversed(gates):
        if g[0] == "u":
            out.append(("u", g[1], linalg.adjoint(g[2])))
        elif g[0] == "c":
            out.append(("c", g[1], g[2], _raw_inverse(g[3])))
        else:
            out.append(("p", {d: s for s, d in g[1].items()}))
    return out


def _seal(gates: list, width: int) -> tuple[Gate, ...]:
    out: list[Gate] = []
    for g in gates:
        if g[0] == "u":
            out.append(Single(g[1], g[2]))
        elif g[0] == "c":
            out.append(Controlled(g[1], g[2], Circuit(width, _seal(g[3], width))))
        else:
            perm = list(range(width))
            for s, d in g[1].items():
                perm[s] = d
            out.append(Permute(tuple(perm)))
    return tuple(out)


def _unseal(g: Gate, mapping: list[int]):
    if isinstance(g, Single):
        return ("u", mapping[g.wire], g.u)
    if isinstance(g, Controlled):
        return ("c", mapping[g.control], g.positive, [_unseal(b, mapping) for b in g.body.gates if not isinstance(b, Id)])
    if isinstance(g, Permute):
        return ("p", {mapping[i]: mapping[p] for i, p in enumerate(g.perm) if i != p})
    raise TypeError(g)


def _punch(t: Term, path: list[int]) -> Term:
    if not path:
        return Hole(ty=QUBIT)
    assert isinstance(t, Pair)
    if path[0] == 0:
        return Pair(_punch(t.fst, path[1:]), t.snd, ty=t.ty)
    return Pair(t.fst, _punch(t.snd, path[1:]), ty=t.ty)


class _Builder:
    def __init__(self, functions: dict[str, FqcMorphism]):
        self.functions = functions
        self.n = 0
        self.blocks: list[list] = [[]]
        self.garbage: list[int] = []
        self.pool: list[int] = []
        self.logs: list[list[int]] = []

    def emit(self, g) -> None:
        self.blocks[-1].append(g)

    def fresh(self) -> int:
        if self.pool:
            w = self.pool.pop(0)
        else:
            w = self.n
            self.n += 1
        for log in self.logs:
            if w not in log:  # reclaimed wires can be handed out again
                log.append(w)
        return w

    def copy(self, wires: list[int]) -> list[int]:
        out = []
        for w in wires:
            c = self.fresh()
            self.emit(("c", w, True, [("u", c, linalg.X)]))
            out.append(c)
        return out

    def split(self, env: Env, groups: list[set[str]]) -> list[Env]:
        """Give each group its own wires; later users of a shared name get basis copies."""
        envs: list[Env] = [{} for _ in groups]
        seen: set[str] = set()
        for i, names in enumerate(groups):
            for x in sorted(names):
                if x not in env:
                    raise InternalError(f"variable {x!r} has no wires")
                envs[i][x] = self.copy(env[x]) if x in seen else env[x]
                seen.add(x)
        return envs

    # -- terms

    def term(self, t: Term, env: Env) -> list[int | None]:
        method = getattr(self, "_" + type(t).__name__)
        return method(t, env)

    def _weaken(self, names, env):
        for y in names:
            self.garbage.extend(env[y])

    def _Hole(self, t, env):
        return [None]

    def _Var(self, t: Var, env):
        self._weaken(t.weakened, env)
        return list(env[t.name])

    def _UnitVal(self, t, env):
        return []

    def _QTrue(self, t: QTrue, env):
        self._weaken(t.weakened, env)
        w = self.fresh()
        self.emit(("u", w, linalg.X))
        return [w]

    def _QFalse(self, t: QFalse, env):
        self._weaken(t.weakened, env)
        return [self.fresh()]

    def _QubitSup(self, t: QubitSup, env):
        w = self.fresh()
        u = prep_unitary(t.amp_true, t.amp_false)
        if linalg.norm_inf(u - linalg.I2) > 1e-15:
            self.emit(("u", w, u))
        return [w]

    def _Pair(self, t: Pair, env):
        e0, e1 = self.split(env, [free_vars(t.fst), free_vars(t.snd)])
        return self.term(t.fst, e0) + self.term(t.snd, e1)

    def _Let(self, t: Let, env):
        e0, e1 = self.split(env, [free_vars(t.bound), free_vars(t.body) - {t.x}])
        e1[t.x] = self.term(t.bound, e0)
        return self.term(t.body, e1)

    def _LetPair(self, t: LetPair, env):
        e0, e1 = self.split(env, [free_vars(t.bound), free_vars(t.body) - {t.x, t.y}])
        wires = self.term(t.bound, e0)
        k = t.bound.ty.left.size
        e1[t.x], e1[t.y] = wires[:k], wires[k:]
        return self.term(t.body, e1)

    def _Scaled(self, t: Scaled, env):
        out = self.term(t.body, env)
        real = [w for w in out if w is not None]
        if real:
            self.emit(("u", real[0], complex(t.amp) * linalg.I2))
        return out

    def _App(self, t: App, env):
        m = self.functions[t.fname]
        envs = self.split(env, [free_vars(a) for a in t.args])
        ins: list[int] = []
        for a, e in zip(t.args, envs):
            ins += self.term(a, e)
        mapping = ins + [self.fresh() for _ in range(m.heap)]
        for g in m.body.gates:
            if not isinstance(g, Id):
                self.emit(_unseal(g, mapping))
        o, gb = m.output_size, m.garbage
        self.garbage.extend(mapping[o : o + gb])
        self.pool.extend(mapping[o + gb :])
        return mapping[:o]

    def _IfClassical(self, t: IfClassical, env):
        return self._if(t, env, quantum=False)

    def _IfQuantum(self, t: IfQuantum, env):
        return self._if(t, env, quantum=True)

    def _branch(self, t: Term, env: Env, pool: list[int]):
        self.pool = pool
        self.logs.append([])
        self.blocks.append([])
        saved, self.garbage = self.garbage, []
        out = self.term(t, env)
        gates, fresh, garbage = self.blocks.pop(), self.logs.pop(), self.garbage
        self.garbage = saved
        return out, gates, fresh, garbage, list(self.pool)

    def _if(self, t, env, quantum: bool):
        ce, be = self.split(env, [free_vars(t.cond), free_vars(t.then)])
        (c,) = self.term(t.cond, ce)
        then, orelse, path, w_unitary = t.then, t.orelse, None, None
        if quantum:
            d = orth.derive(then, orelse)
            if d is None:
                raise InternalError("ifq reached the compiler without an orthogonality proof")
            path = orth.local_path(d)
            if path is not None:
                w_unitary = _literal_witness(then, orelse, path)
                then, orelse = _punch(then, path), _punch(orelse, path)

        delta = [w for x in sorted(be) for w in be[x]]
        pool0 = list(self.pool)
        out_t, gates_t, fresh_t, garb_t, pool_t = self._branch(then, be, list(pool0))
        else_pool = list(fresh_t) + [w for w in pool0 if w not in fresh_t]
        out_u, gates_u, fresh_u, garb_u, pool_u = self._branch(orelse, be, else_pool)

        region = set(delta) | set(fresh_t) | set(fresh_u) | set(pool0)
        real_t = [w for w in out_t if w is not None]
        real_u = [w for w in out_u if w is not None]
        clean_t = sorted(region - set(real_t) - set(garb_t))
        clean_u = sorted(region - set(real_u) - set(garb_u))
        if not set(clean_t) <= set(pool_t) | (set(fresh_u) - set(fresh_t) - set(pool0)):
            raise InternalError("then-branch left a wire unaccounted for")
        if not set(clean_u) <= set(pool_u):
            raise InternalError("else-branch left a wire unaccounted for")

        g = max(len(garb_t), len(garb_u))
        pad_t = g - len(garb_t)
        target_garbage = garb_t + clean_t[:pad_t]
        target_clean = clean_t[pad_t:]
        pad_u = g - len(garb_u)
        sources = real_u + garb_u + clean_u[:pad_u] + clean_u[pad_u:]
        targets = real_t + target_garbage + target_clean
        moves = {s: d for s, d in zip(sources, targets) if s != d}
        if moves:
            gates_u.append(("p", moves))
        self.emit(("c", c, True, gates_t))
        self.emit(("c", c, False, gates_u))
        self.garbage.extend(target_garbage)
        self.pool = list(target_clean)

        if not quantum:
            self.garbage.append(c)
            return out_t
        if w_unitary is not None:
            u = w_unitary @ linalg.X
            if linalg.norm_inf(u - linalg.I2) > 1e-15:
                self.emit(("u", c, u))
            return [c if w is None else w for w in out_t]

        zero_test = sorted(region - set(delta))
        if not zero_test:
            raise InternalError("ifq branches allocate nothing, so they cannot be orthogonal")
        flip: list = [("u", c, linalg.X)]
        for w in reversed(zero_test):
            flip = [("c", w, False, flip)]
        for g_ in _raw_inverse(gates_t) + flip + gates_t:
            self.emit(g_)
        self.pool.append(c)
        return out_t


def _literal_witness(then: Term, orelse: Term, path: list[int]) -> np.ndarray:
    for step in path:
        then = then.fst if step == 0 else then.snd
        orelse = orelse.fst if step == 0 else orelse.snd
    d = orth.derive(then, orelse)
    return orth.witness(d).unitary


def compile_term(t: TypedTerm, functions: dict[str, FqcMorphism] | None = None) -> FqcMorphism:
    """Compile one elaborated, type-checked term; inputs are its context in order."""
    b = _Builder(dict(functions or {}))
    env: Env = {}
    for x, ty in t.context.items():
        env[x] = list(range(b.n, b.n + ty.size))
        b.n += ty.size
    n_in = b.n
    out = b.term(t.term, env)
    if any(w is None for w in out):
        raise InternalError("unfilled hole in output")
    layout = out + b.garbage + b.pool
    if sorted(layout) != list(range(b.n)):
        raise InternalError(f"wire layout {layout} does not partition {b.n} wires")
    gates = list(_seal(b.blocks[0], b.n))
    perm = routing(layout, b.n)
    if not perm.is_identity():
        gates.append(perm)
    ctx_type = tensor(*t.context.values())
    return FqcMorphism(
        n_in, len(out), b.n - n_in, len(b.garbage), Circuit(b.n, gates), len(b.pool), ctx_type, t.qtype
    )


def compile_closed(term: Term) -> FqcMorphism:
    """Check, elaborate and compile a closed term (no free variables, no calls)."""
    from .typecheck import check_term

    if free_vars(term):
        raise CompileError(f"term is not closed: free variables {sorted(free_vars(term))}")
    return optimize_morphism(compile_term(check_term(term)))


def compile_program(program: Program, typed: dict[str, TypedTerm] | None = None) -> dict[str, FqcMorphism]:
    typed = typed if typed is not None else check(program)
    out: dict[str, FqcMorphism] = {}
    for d in program.defs:
        out[d.name] = optimize_morphism(compile_term(typed[d.name], out))
    return out


def compile_source(source: str) -> dict[str, FqcMorphism]:
    return compile_program(parse_source(source))


__all__ = [
    "Hole",
    "Strictness",
    "compile_closed",
    "compile_program",
    "compile_source",
    "compile_term",
    "prep_unitary",
]
