"""Reversible circuit IR, FQC morphisms, and the post-compilation optimizer.

Wire layout of an :class:`FqcMorphism` with width ``w``:

* before the body: inputs ``[0, input_size)``, heap ``[input_size, w)``;
* after the body: outputs ``[0, output_size)``, then ``garbage`` wires, then
  ``clean`` wires that are returned to ``|0>`` (reclaimed if-control qubits).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .errors import InternalError, SizeMismatch
from .terms import QType

TOL = 1e-9


class Gate:
    def wires(self) -> set[int]:
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class Single(Gate):
    wire: int
    u: np.ndarray

    def __post_init__(self):
        u = linalg.as_matrix(self.u)
        if u.shape != (2, 2) or not linalg.is_unitary(u, TOL):
            raise ValueError(f"Single gate matrix is not a 2x2 unitary:\n{u}")
        object.__setattr__(self, "u", u)

    def wires(self) -> set[int]:
        return {self.wire}

    def __eq__(self, other):
        return isinstance(other, Single) and other.wire == self.wire and np.array_equal(other.u, self.u)

    def __hash__(self):
        return hash((self.wire, self.u.tobytes()))

    def __repr__(self):
        return f"Single({self.wire}, {gate_name(self.u)})"


@dataclass(frozen=True)
class Controlled(Gate):
    control: int
    positive: bool
    body: "Circuit"

    def __post_init__(self):
        if self.control in self.body.wires():
            raise ValueError("controlled body touches its control wire")

    def wires(self) -> set[int]:
        return {self.control} | self.body.wires()

    def __repr__(self):
        return f"Controlled({self.control}, {'Pos' if self.positive else 'Neg'}, {list(self.body.gates)})"


@dataclass(frozen=True)
class Permute(Gate):
    """Moves the content of wire ``i`` to wire ``perm[i]``."""

    perm: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "perm", tuple(int(p) for p in self.perm))
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ValueError(f"not a permutation: {self.perm}")

    def wires(self) -> set[int]:
        return {i for i, p in enumerate(self.perm) if p != i}

    def is_identity(self) -> bool:
        return all(i == p for i, p in enumerate(self.perm))

    def inverse(self) -> "Permute":
        inv = [0] * len(self.perm)
        for i, p in enumerate(self.perm):
            inv[p] = i
        return Permute(tuple(inv))


@dataclass(frozen=True)
class Id(Gate):
    width: int

    def wires(self) -> set[int]:
        return set()


@dataclass(frozen=True)
class Circuit:
    width: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if any(w < 0 or w >= self.width for w in g.wires()):
                raise ValueError(f"gate {g!r} out of range for width {self.width}")
            if isinstance(g, Permute) and len(g.perm) != self.width:
                raise ValueError("permutation length differs from circuit width")
            if isinstance(g, Controlled) and g.body.width != self.width:
                raise ValueError("controlled body width differs from circuit width")

    def wires(self) -> set[int]:
        out: set[int] = set()
        for g in self.gates:
            out |= g.wires()
        return out

    def __len__(self) -> int:
        return len(self.gates)


def cnot(control: int, target: int, width: int, positive: bool = True) -> Controlled:
    return Controlled(control, positive, Circuit(width, (Single(target, linalg.X),)))


def routing(sources: Sequence[int], width: int) -> Permute:
    """Permutation bringing the content of ``sources[k]`` to wire ``k``."""
    if sorted(sources) != list(range(width)):
        raise InternalError(f"routing sources {list(sources)} do not cover {width} wires")
    perm = [0] * width
    for k, s in enumerate(sources):
        perm[s] = k
    return Permute(tuple(perm))


def relabel(c: Circuit, mapping: Sequence[int], width: int) -> Circuit:
    """Place ``c`` onto a wider circuit, local wire ``i`` becoming ``mapping[i]``."""
    return Circuit(width, tuple(_relabel_gate(g, mapping, width) for g in c.gates))


def _relabel_gate(g: Gate, mapping: Sequence[int], width: int) -> Gate:
    if isinstance(g, Single):
        return Single(mapping[g.wire], g.u)
    if isinstance(g, Controlled):
        return Controlled(mapping[g.control], g.positive, relabel(g.body, mapping, width))
    if isinstance(g, Permute):
        perm = list(range(width))
        for i, p in enumerate(g.perm):
            perm[mapping[i]] = mapping[p]
        return Permute(tuple(perm))
    if isinstance(g, Id):
        return Id(width)
    raise TypeError(g)


def inverse(c: Circuit) -> Circuit:
    return Circuit(c.width, tuple(_inverse_gate(g) for g in reversed(c.gates)))


def _inverse_gate(g: Gate) -> Gate:
    if isinstance(g, Single):
        return Single(g.wire, linalg.adjoint(g.u))
    if isinstance(g, Controlled):
        return Controlled(g.control, g.positive, inverse(g.body))
    if isinstance(g, Permute):
        return g.inverse()
    return g


# ---------------------------------------------------------------- morphisms


@dataclass(frozen=True)
class FqcMorphism:
    input_size: int
    output_size: int
    heap: int
    garbage: int
    body: Circuit
    clean: int = 0
    input_type: QType | None = field(default=None, compare=False)
    output_type: QType | None = field(default=None, compare=False)

    def __post_init__(self):
        w = self.body.width
        if self.input_size + self.heap != w or self.output_size + self.garbage + self.clean != w:
            raise InternalError(
                f"wire conservation violated: in={self.input_size} h={self.heap} "
                f"out={self.output_size} g={self.garbage} clean={self.clean} width={w}"
            )

    @property
    def width(self) -> int:
        return self.body.width


def identity(n: int) -> FqcMorphism:
    return FqcMorphism(n, n, 0, 0, Circuit(n))


def compose(f: FqcMorphism, g: FqcMorphism) -> FqcMorphism:
    """Run ``f`` then ``g`` on ``f``'s outputs; ``f``'s garbage bypasses ``g``."""
    if f.output_size != g.input_size:
        raise SizeMismatch(f"cannot compose: {f.output_size} outputs into {g.input_size} inputs")
    width = f.width + g.heap
    gmap = list(range(g.input_size)) + [f.width + k for k in range(g.heap)]
    gates = list(relabel(f.body, range(f.width), width).gates)
    gates += relabel(g.body, gmap, width).gates
    g_out = gmap[: g.output_size]
    g_garb = gmap[g.output_size : g.output_size + g.garbage]
    g_clean = gmap[g.output_size + g.garbage :]
    f_garb = list(range(f.output_size, f.output_size + f.garbage))
    f_clean = list(range(f.output_size + f.garbage, f.width))
    gates.append(routing(g_out + f_garb + g_garb + f_clean + g_clean, width))
    return FqcMorphism(
        f.input_size,
        g.output_size,
        f.heap + g.heap,
        f.garbage + g.garbage,
        Circuit(width, gates),
        f.clean + g.clean,
        f.input_type,
        g.output_type,
    )


def tensor(f: FqcMorphism, g: FqcMorphism) -> FqcMorphism:
    """Side-by-side composition: inputs ``f|g|heaps``, outputs ``f|g|garbage|clean``."""
    width = f.width + g.width
    fi, gi = f.input_size, g.input_size
    fmap = list(range(fi)) + [fi + gi + k for k in range(f.heap)]
    gmap = [fi + j for j in range(gi)] + [fi + gi + f.heap + k for k in range(g.heap)]
    gates = list(relabel(f.body, fmap, width).gates) + list(relabel(g.body, gmap, width).gates)

    def parts(m: FqcMorphism, mp: list[int]):
        o, gb = m.output_size, m.garbage
        return mp[:o], mp[o : o + gb], mp[o + gb :]

    fo, fg, fc = parts(f, fmap)
    go, gg, gc = parts(g, gmap)
    gates.append(routing(fo + go + fg + gg + fc + gc, width))
    return FqcMorphism(
        fi + gi,
        f.output_size + g.output_size,
        f.heap + g.heap,
        f.garbage + g.garbage,
        Circuit(width, gates),
        f.clean + g.clean,
    )


# ---------------------------------------------------------------- optimizer


def _is_id2(u: np.ndarray, tol: float = 1e-12) -> bool:
    return linalg.norm_inf(u - linalg.I2) < tol


def optimize(c: Circuit) -> Circuit:
    """Simplify ``c`` without changing its unitary.

    Drops ``Id`` gates, identity singles and empty controlled blocks; moves all
    permutations to a single trailing ``Permute`` (dropped when trivial); fuses
    single-qubit gates and merges controlled blocks that meet after commuting
    past gates on disjoint wires.  Iterates to a fixed point.
    """
    prev = None
    while prev != c:
        prev = c
        c = _cancel(_sink_permutations(_clean(c)))
    return c


def _clean(c: Circuit) -> Circuit:
    out: list[Gate] = []
    for g in c.gates:
        if isinstance(g, Id):
            continue
        if isinstance(g, Single) and _is_id2(g.u):
            continue
        if isinstance(g, Permute) and g.is_identity():
            continue
        if isinstance(g, Controlled):
            body = optimize(g.body)
            if not body.gates:
                continue
            g = Controlled(g.control, g.positive, body)
        out.append(g)
    return Circuit(c.width, out)


def _sink_permutations(c: Circuit) -> Circuit:
    # pos[i]: wire currently holding what a permutation-free prefix would have on wire i.
    pos = list(range(c.width))
    out: list[Gate] = []
    for g in c.gates:
        if isinstance(g, Permute):
            pos = [g.perm[p] for p in pos]
        else:
            # g acts on physical wires; in the permutation-free frame it acts on pos^-1.
            inv = [0] * c.width
            for i, p in enumerate(pos):
                inv[p] = i
            out.append(_relabel_gate(g, inv, c.width))
    if pos != list(range(c.width)):
        out.append(Permute(tuple(pos)))
    return Circuit(c.width, out)


def _cancel(c: Circuit) -> Circuit:
    out: list[Gate] = []
    for g in c.gates:
        if isinstance(g, Permute):
            out.append(g)
            continue
        support = g.wires()
        j = len(out) - 1
        while j >= 0 and not (out[j].wires() & support) and not isinstance(out[j], Permute):
            j -= 1
        merged = _merge(out[j], g, c.width) if j >= 0 else None
        if merged is None:
            out.append(g)
        elif merged == "drop":
            del out[j]
        else:
            out[j] = merged
    return Circuit(c.width, out)


def _merge(a: Gate, b: Gate, width: int):
    """Combine ``a`` followed by ``b``; None when they do not combine."""
    if isinstance(a, Single) and isinstance(b, Single) and a.wire == b.wire:
        u = b.u @ a.u
        return "drop" if _is_id2(u) else Single(a.wire, u)
    if (
        isinstance(a, Controlled)
        and isinstance(b, Controlled)
        and a.control == b.control
        and a.positive == b.positive
    ):
        body = optimize(Circuit(width, a.body.gates + b.body.gates))
        return "drop" if not body.gates else Controlled(a.control, a.positive, body)
    return None


def optimize_morphism(m: FqcMorphism) -> FqcMorphism:
    return FqcMorphism(
        m.input_size, m.output_size, m.heap, m.garbage, optimize(m.body), m.clean, m.input_type, m.output_type
    )


# ---------------------------------------------------------------- export

_NAMED = {"H": linalg.H, "X": linalg.X, "Y": linalg.Y, "Z": linalg.Z, "S": linalg.S, "S+": linalg.S.conj()}


def gate_name(u: np.ndarray) -> str:
    for name, m in _NAMED.items():
        if linalg.norm_inf(u - m) < 1e-12:
            return name
    for name, m in _NAMED.items():
        if linalg.norm_inf(u + m) < 1e-12:
            return "-" + name
    return "U"


def _entries(m: np.ndarray) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in np.asarray(m).reshape(-1)]


def gate_to_json(g: Gate) -> dict:
    if isinstance(g, Single):
        return {"kind": "single", "wire": g.wire, "matrix": _entries(g.u)}
    if isinstance(g, Controlled):
        return {
            "kind": "controlled",
            "control": g.control,
            "polarity": "pos" if g.positive else "neg",
            "body": [gate_to_json(b) for b in g.body.gates],
        }
    if isinstance(g, Permute):
        return {"kind": "permute", "perm": list(g.perm)}
    if isinstance(g, Id):
        return {"kind": "id", "width": g.width}
    raise TypeError(g)


def morphism_to_json(m: FqcMorphism) -> dict:
    return {
        "width": m.width,
        "heap": m.heap,
        "garbage": m.garbage,
        "clean": m.clean,
        "inputSize": m.input_size,
        "outputSize": m.output_size,
        "inputType": str(m.input_type) if m.input_type is not None else None,
        "outputType": str(m.output_type) if m.output_type is not None else None,
        "gates": [gate_to_json(g) for g in m.body.gates],
    }


def dumps(m: FqcMorphism) -> str:
    return json.dumps(morphism_to_json(m), indent=2)


def _flatten(gates: Iterable[Gate], controls: tuple[tuple[int, bool], ...] = ()):
    for g in gates:
        if isinstance(g, Controlled):
            yield from _flatten(g.body.gates, controls + ((g.control, g.positive),))
        elif not isinstance(g, Id):
            yield controls, g


def render_text(m: FqcMorphism) -> str:
    """ASCII drawing: one line per wire, one column per (flattened) gate.

    ``*``/``o`` mark positive/negative controls, ``[H]`` a single-qubit gate,
    ``>k`` a permutation moving the wire's content to wire ``k``.
    """
    w = m.width
    columns: list[list[str]] = []
    for controls, g in _flatten(m.body.gates):
        cells = ["-"] * w
        for c, pos in controls:
            cells[c] = "*" if pos else "o"
        if isinstance(g, Single):
            cells[g.wire] = f"[{gate_name(g.u)}]"
        elif isinstance(g, Permute):
            for i, p in enumerate(g.perm):
                if p != i:
                    cells[i] = f">{p}"
        if controls:
            touched = [i for i, s in enumerate(cells) if s != "-"]
            for i in range(min(touched), max(touched) + 1):
                if cells[i] == "-":
                    cells[i] = "|"
        width = max(len(s) for s in cells)
        columns.append([s.center(width, "-") if s != "|" else "|".center(width, "-") for s in cells])

    def left(i: int) -> str:
        return f"in{i}" if i < m.input_size else "|0>"

    def right(i: int) -> str:
        if i < m.output_size:
            return f"out{i}"
        if i < m.output_size + m.garbage:
            return "garbage"
        return "|0> (clean)"

    lines = [
        f"inputs={m.input_size} outputs={m.output_size} heap={m.heap} garbage={m.garbage}"
        + (f" clean={m.clean}" if m.clean else "")
        + (f"  type: {m.input_type} -o {m.output_type}" if m.output_type is not None else "")
    ]
    for i in range(w):
        row = "-".join(col[i] for col in columns)
        lines.append(f"{left(i):>4} --{row}-- {right(i)}")
    return "\n".join(lines)
