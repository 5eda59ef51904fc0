"""Random closed QML terms and random circuits, for soundness sweeps."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .circuit import Circuit, Controlled, Gate, Id, Permute, Single
from .terms import IfQuantum, Pair, QFalse, QTrue, Scaled, Sup, Term

R = 1 / np.sqrt(2)
# Single-qubit states as (amp_true, amp_false), each paired with an orthogonal partner.
BASIS_PAIRS: tuple[tuple[tuple[complex, complex], tuple[complex, complex]], ...] = (
    ((1, 0), (0, 1)),
    ((R, R), (-R, R)),
    ((1j * R, R), (-1j * R, R)),
    ((0.6, 0.8), (0.8, -0.6)),
)


@dataclass
class TermConfig:
    max_depth: int = 3
    pair_weight: float = 0.3
    ifq_weight: float = 0.3
    sup_weight: float = 0.25
    phase_weight: float = 0.2


def _phase(rng: np.random.Generator) -> complex:
    return complex(np.exp(1j * rng.choice([0, np.pi / 2, np.pi, 3 * np.pi / 2, rng.uniform(0, 2 * np.pi)])))


def literal(amps: tuple[complex, complex]) -> Term:
    """Concrete-syntax qubit literal ``a*qtrue + b*qfalse`` (or a bare basis literal)."""
    a, b = complex(amps[0]), complex(amps[1])
    if b == 0:
        return QTrue() if a == 1 else Scaled(a, QTrue())
    if a == 0:
        return QFalse() if b == 1 else Scaled(b, QFalse())
    return Sup(Scaled(a, QTrue()), Scaled(b, QFalse()))


def random_qubit_pair(rng: np.random.Generator, cfg: TermConfig, depth: int) -> tuple[Term, Term]:
    """Two closed qubit terms; orthogonal by construction unless mixed at random."""
    roll = rng.uniform()
    if depth > 0 and roll < cfg.ifq_weight:
        c = random_qubit(rng, cfg, depth - 1)
        t, u = random_qubit_pair(rng, cfg, depth - 1)
        if rng.uniform() < 0.5:
            return IfQuantum(c, t, u), t if rng.uniform() < 0.5 else u
        a, b = BASIS_PAIRS[rng.integers(len(BASIS_PAIRS))]
        return IfQuantum(literal(a), t, u), IfQuantum(literal(b), t, u)
    p, q = BASIS_PAIRS[rng.integers(len(BASIS_PAIRS))]
    if rng.uniform() < 0.5:
        p, q = q, p
    ph = _phase(rng) if rng.uniform() < cfg.phase_weight else 1
    q = (q[0] * ph, q[1] * ph)
    if rng.uniform() < 0.2:
        q = BASIS_PAIRS[rng.integers(len(BASIS_PAIRS))][rng.integers(2)]
    return literal(p), literal(q)


def random_qubit(rng: np.random.Generator, cfg: TermConfig, depth: int) -> Term:
    return random_qubit_pair(rng, cfg, depth)[rng.integers(2)]


def random_pair(rng: np.random.Generator, cfg: TermConfig | None = None) -> tuple[Term, Term]:
    """A pair of closed strict terms of equal type, nesting depth at most ``cfg.max_depth``."""
    cfg = cfg or TermConfig()
    return _pair_of_depth(rng, cfg, cfg.max_depth)


def _pair_of_depth(rng: np.random.Generator, cfg: TermConfig, depth: int) -> tuple[Term, Term]:
    if depth > 0 and rng.uniform() < cfg.pair_weight:
        a, b = _pair_of_depth(rng, cfg, depth - 1)
        c, d = _pair_of_depth(rng, cfg, depth - 1)
        if rng.uniform() < 0.5:
            return Pair(a, c), Pair(b, d)
        if rng.uniform() < 0.6:
            return Pair(a, c), Pair(a if rng.uniform() < 0.5 else b, d)
        # (a, c) against ifq k then (b, c) else (b, d): needs a ⊥ b, and c ⊥ d for the ifq.
        k = random_qubit(rng, cfg, 0)
        t, u = Pair(a, c), IfQuantum(k, Pair(b, c), Pair(b, d))
        return (t, u) if rng.uniform() < 0.5 else (u, t)
    if depth > 0 and rng.uniform() < cfg.sup_weight:
        t, u = random_qubit_pair(rng, cfg, depth - 1)
        p, q = BASIS_PAIRS[rng.integers(len(BASIS_PAIRS))]
        return Sup(Scaled(p[0], t), Scaled(p[1], u)), Sup(Scaled(q[0], t), Scaled(q[1], u))
    return random_qubit_pair(rng, cfg, depth)


def random_gate(rng: np.random.Generator, width: int, depth: int = 1) -> Gate:
    kind = rng.choice(["single", "controlled", "permute", "id"] if depth > 0 else ["single", "permute", "id"], p=None)
    if kind == "single":
        return Single(int(rng.integers(width)), random_unitary(rng))
    if kind == "permute":
        return Permute(tuple(int(p) for p in rng.permutation(width)))
    if kind == "id":
        return Id(width)
    if width < 2:
        return Single(0, random_unitary(rng))
    control = int(rng.integers(width))
    body = random_circuit(rng, width, int(rng.integers(1, 4)), depth - 1, avoid=control)
    return Controlled(control, bool(rng.integers(2)), body)


def random_circuit(
    rng: np.random.Generator, width: int, n_gates: int, depth: int = 1, avoid: int | None = None
) -> Circuit:
    gates: list[Gate] = []
    while len(gates) < n_gates:
        g = random_gate(rng, width, depth)
        if avoid is not None and (avoid in g.wires() or (isinstance(g, Permute) and g.perm[avoid] != avoid)):
            continue
        gates.append(g)
        # Seed cancellation opportunities: sometimes follow a gate by its inverse or a repeat.
        if isinstance(g, Single) and rng.uniform() < 0.3 and len(gates) < n_gates:
            gates.append(Single(g.wire, linalg.adjoint(g.u) if rng.uniform() < 0.5 else g.u))
    return Circuit(width, gates)


def random_unitary(rng: np.random.Generator) -> np.ndarray:
    named = [linalg.X, linalg.H, linalg.Z, linalg.S, linalg.Y]
    if rng.uniform() < 0.6:
        return named[rng.integers(len(named))].copy()
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))
