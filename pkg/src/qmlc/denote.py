"""Evaluate circuits and FQC morphisms to unitaries, isometries and superoperators."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

import numpy as np

from . import linalg
from .circuit import Circuit, Controlled, FqcMorphism, Id, Permute, Single, render_text, morphism_to_json
from .errors import CapExceeded, InternalError

DEFAULT_CAP = 12
DEFAULT_SUPER_CAP = 8


def _cap(cap: int | None, default: int) -> int:
    if cap is not None:
        return cap
    env = os.environ.get("QMLC_CAP")
    return int(env) if env else default


def _apply(state: np.ndarray, gates, n: int) -> np.ndarray:
    # state has n qubit axes followed by one batch axis.
    for g in gates:
        if isinstance(g, Single):
            state = np.moveaxis(np.tensordot(g.u, state, axes=([1], [g.wire])), 0, g.wire)
        elif isinstance(g, Controlled):
            acted = _apply(state, g.body.gates, n)
            sel = [slice(None)] * (n + 1)
            sel[g.control] = 1 if g.positive else 0
            state = state.copy()
            state[tuple(sel)] = acted[tuple(sel)]
        elif isinstance(g, Permute):
            axes = [0] * n
            for i, p in enumerate(g.perm):
                axes[p] = i
            state = np.transpose(state, axes + [n])
        elif not isinstance(g, Id):
            raise TypeError(g)
    return state


def apply_circuit(c: Circuit, vectors: np.ndarray) -> np.ndarray:
    """Apply ``c`` to the columns of ``vectors`` (shape ``2^width x k``)."""
    n = c.width
    k = vectors.shape[1]
    state = np.asarray(vectors, dtype=complex).reshape([2] * n + [k])
    return _apply(state, c.gates, n).reshape(2**n, k)


def circuit_to_unitary(c: Circuit, cap: int | None = None) -> np.ndarray:
    limit = _cap(cap, DEFAULT_CAP)
    if c.width > limit:
        raise CapExceeded(f"circuit has {c.width} wires, cap is {limit}")
    return apply_circuit(c, linalg.identity(2**c.width))


@dataclass(frozen=True)
class Isometry:
    matrix: np.ndarray  # 2^(output+garbage) x 2^input
    garbage: int


@dataclass(frozen=True)
class SuperOp:
    matrix: np.ndarray  # 4^output x 4^input, column-stacked vectorization
    input_size: int
    output_size: int

    def apply(self, rho: np.ndarray) -> np.ndarray:
        d_in, d_out = 2**self.input_size, 2**self.output_size
        if rho.shape != (d_in, d_in):
            raise ValueError(f"expected a {d_in}x{d_in} density matrix")
        return linalg.unvec(self.matrix @ linalg.vec(rho), d_out)


def run_tc(m: FqcMorphism, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps(morphism_to_json(m), indent=2)
    return render_text(m)


def run_m(m: FqcMorphism, cap: int | None = None) -> tuple[int, int, np.ndarray]:
    return m.heap, m.garbage, circuit_to_unitary(m.body, cap)


def _restrict(m: FqcMorphism, cap: int | None, default: int) -> np.ndarray:
    limit = _cap(cap, default)
    if m.width > limit:
        raise CapExceeded(f"morphism has {m.width} wires, cap is {limit}")
    # Heap is the low-order block of the input index: keep columns with heap = 0.
    cols = np.zeros((2**m.width, 2**m.input_size), dtype=complex)
    cols[np.arange(2**m.input_size) * 2**m.heap, np.arange(2**m.input_size)] = 1
    full = apply_circuit(m.body, cols)
    # Clean wires are the low-order block of the output index and must be |0>.
    full = full.reshape(2 ** (m.output_size + m.garbage), 2**m.clean, -1)
    leak = np.abs(full[:, 1:, :]).max() if m.clean else 0.0
    if leak > 1e-9:
        raise InternalError(f"reclaimed wires not returned to |0> (leak {leak:.3g})")
    return full[:, 0, :]


def run_i(m: FqcMorphism, cap: int | None = None) -> tuple[int, Isometry]:
    """Initialise the heap; the garbage (if any) is kept as extra output rows."""
    v = _restrict(m, cap, DEFAULT_CAP)
    return m.garbage, Isometry(v, m.garbage)


def isometry_to_superop(iso: Isometry, output_size: int) -> SuperOp:
    """Lift an isometry to the channel that traces out its trailing garbage."""
    v = iso.matrix
    d_out, d_g = 2**output_size, 2**iso.garbage
    v = v.reshape(d_out, d_g, -1)
    s = sum(linalg.conjugation_superop(v[:, k, :]) for k in range(d_g))
    d_in = v.shape[2]
    return SuperOp(np.asarray(s).reshape(d_out**2, d_in**2), int(np.log2(d_in)), output_size)


def run_s(m: FqcMorphism, cap: int | None = None) -> SuperOp:
    v = _restrict(m, cap, DEFAULT_SUPER_CAP)
    return isometry_to_superop(Isometry(v, m.garbage), m.output_size)


def state_of(m: FqcMorphism, cap: int | None = None) -> np.ndarray:
    """State vector of a closed, garbage-free morphism."""
    if m.input_size != 0 or m.garbage != 0:
        raise ValueError("state_of needs a closed morphism without garbage")
    return run_i(m, cap)[1].matrix[:, 0]


def matrix_to_json(a: np.ndarray, **extra) -> dict:
    a = np.asarray(a)
    out = {"rows": int(a.shape[0]), "cols": int(a.shape[1])}
    out.update(extra)
    out["entries"] = [[float(z.real), float(z.imag)] for z in a.reshape(-1)]
    return out
