from __future__ import annotations

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import circuit_matrix
from qmlc import linalg
from qmlc.circuit import (
    Circuit,
    Controlled,
    FqcMorphism,
    Id,
    Permute,
    Single,
    cnot,
    compose,
    dumps,
    identity,
    inverse,
    morphism_to_json,
    optimize,
    render_text,
    routing,
    tensor,
)
from qmlc.denote import circuit_to_unitary, run_i
from qmlc.errors import InternalError, SizeMismatch
from qmlc.sampling import random_circuit

SEEDS = st.integers(0, 2**32 - 1)


def iso(m: FqcMorphism) -> np.ndarray:
    return run_i(m)[1].matrix


def random_morphism(rng, n_in: int, n_out: int, max_extra: int = 1) -> FqcMorphism:
    heap = int(rng.integers(max(0, n_out - n_in), max(0, n_out - n_in) + max_extra + 1))
    width = n_in + heap
    garbage = width - n_out
    c = random_circuit(rng, width, int(rng.integers(1, 6))) if width else Circuit(0)
    return FqcMorphism(n_in, n_out, heap, garbage, c)


class TestValidation:
    def test_single_must_be_unitary(self):
        with pytest.raises(ValueError):
            Single(0, np.diag([1, 2]))

    def test_controlled_body_avoids_control(self):
        with pytest.raises(ValueError):
            Controlled(0, True, Circuit(2, (Single(0, linalg.X),)))

    def test_wire_range(self):
        with pytest.raises(ValueError):
            Circuit(1, (Single(1, linalg.X),))

    def test_permutation_is_bijection(self):
        with pytest.raises(ValueError):
            Permute((0, 0))

    def test_wire_conservation(self):
        with pytest.raises(InternalError):
            FqcMorphism(1, 1, 1, 0, Circuit(2))

    def test_routing(self):
        p = routing([2, 0, 1], 3)
        assert p.perm == (1, 2, 0)
        with pytest.raises(InternalError):
            routing([0, 0], 2)


class TestCompose:
    def test_identity_left(self, teleport):
        f = teleport["Had"]
        assert np.allclose(iso(compose(identity(1), f)), iso(f))
        assert optimize(compose(identity(1), f).body) == optimize(f.body)

    def test_qnot_twice(self, teleport):
        q = teleport["Qnot"]
        assert np.allclose(iso(compose(q, q)), np.eye(2))

    def test_size_mismatch(self, teleport):
        with pytest.raises(SizeMismatch):
            compose(teleport["Epr"], teleport["Had"])

    def test_accounting(self, teleport):
        m = compose(teleport["Meas"], teleport["Meas"])
        assert (m.heap, m.garbage) == (2, 2)

    def test_measure_then_hadamard(self, teleport):
        m = compose(teleport["Meas"], teleport["Had"])
        v = iso(m)  # rows: (out, garbage of Meas)
        expect = np.kron(linalg.H, np.eye(2)) @ iso(teleport["Meas"])
        assert np.allclose(v, expect)

    @settings(max_examples=60, deadline=None)
    @given(SEEDS)
    def test_associative_and_unital(self, seed):
        rng = np.random.default_rng(seed)
        a, b, c, d = (int(rng.integers(1, 3)) for _ in range(4))
        f, g, h = random_morphism(rng, a, b), random_morphism(rng, b, c), random_morphism(rng, c, d)
        assert np.allclose(iso(compose(compose(f, g), h)), iso(compose(f, compose(g, h))))
        assert np.allclose(iso(compose(identity(a), f)), iso(f))
        assert np.allclose(iso(compose(f, identity(b))), iso(f))

    @settings(max_examples=60, deadline=None)
    @given(SEEDS)
    def test_composite_isometry(self, seed):
        rng = np.random.default_rng(seed)
        f, g = random_morphism(rng, 1, 2), random_morphism(rng, 2, 1)
        vf, vg = iso(f), iso(g)
        # g acts on f's outputs; f's garbage bypasses g and sits before g's garbage
        d_fg, d_gg = 2**f.garbage, 2**g.garbage
        expect = np.kron(vg, np.eye(d_fg)) @ vf  # rows: g_out, g_garb, f_garb
        expect = expect.reshape(2**g.output_size, d_gg, d_fg, -1).transpose(0, 2, 1, 3).reshape(-1, vf.shape[1])
        assert np.allclose(iso(compose(f, g)), expect)


class TestTensor:
    def test_identities(self):
        assert np.allclose(iso(tensor(identity(1), identity(1))), iso(identity(2)))

    def test_had_qnot(self, teleport):
        assert np.allclose(iso(tensor(teleport["Had"], teleport["Qnot"])), np.kron(linalg.H, linalg.X))

    def test_unit(self, teleport):
        f = teleport["Meas"]
        assert np.allclose(iso(tensor(f, identity(0))), iso(f))
        assert np.allclose(iso(tensor(identity(0), f)), iso(f))

    def test_sizes_add(self, teleport):
        m = tensor(teleport["Meas"], teleport["Epr"])
        assert (m.input_size, m.output_size, m.heap, m.garbage) == (1, 3, 3, 1)

    @settings(max_examples=40, deadline=None)
    @given(SEEDS)
    def test_pure_tensor_is_kron(self, seed):
        rng = np.random.default_rng(seed)
        f = FqcMorphism(1, 1, 0, 0, random_circuit(rng, 1, 3))
        g = FqcMorphism(2, 2, 0, 0, random_circuit(rng, 2, 4))
        assert np.allclose(iso(tensor(f, g)), np.kron(iso(f), iso(g)))


class TestOptimize:
    def test_inverse_permutations(self):
        p = Permute((1, 2, 0))
        assert optimize(Circuit(3, (p, p.inverse()))).gates == ()

    def test_x_twice(self):
        assert optimize(Circuit(1, (Single(0, linalg.X), Single(0, linalg.X)))).gates == ()

    def test_drops_ids_and_empty_blocks(self):
        c = Circuit(2, (Id(2), Controlled(0, True, Circuit(2, (Id(2),))), Single(1, linalg.I2)))
        assert optimize(c).gates == ()

    def test_keeps_minus_identity(self):
        c = Circuit(1, (Single(0, -linalg.I2),))
        assert optimize(c).gates == c.gates

    def test_fuses_singles(self):
        c = Circuit(1, (Single(0, linalg.H), Single(0, linalg.S)))
        (g,) = optimize(c).gates
        assert np.allclose(g.u, linalg.S @ linalg.H)

    def test_merges_controlled_blocks(self):
        c = Circuit(2, (cnot(0, 1, 2), Single(0, linalg.I2), cnot(0, 1, 2)))
        assert optimize(c).gates == ()

    def test_epr_body(self, teleport):
        assert teleport["Epr"].body.gates == (
            Single(0, linalg.H),
            Controlled(0, True, Circuit(2, (Single(1, linalg.X),))),
        )

    def test_permutations_sink_to_end(self):
        c = Circuit(2, (Permute((1, 0)), Single(0, linalg.H), Permute((1, 0)), Single(1, linalg.Z)))
        o = optimize(c)
        assert not any(isinstance(g, Permute) for g in o.gates[:-1])
        assert np.allclose(circuit_to_unitary(o), circuit_to_unitary(c))

    def test_idempotent(self):
        rng = np.random.default_rng(0)
        for _ in range(30):
            o = optimize(random_circuit(rng, 3, 8))
            assert optimize(o) == o

    @settings(max_examples=150, deadline=None)
    @given(SEEDS, st.integers(1, 4), st.integers(0, 10))
    def test_sound(self, seed, width, n):
        c = random_circuit(np.random.default_rng(seed), width, n)
        o = optimize(c)
        assert len(o.gates) <= len(c.gates) + 1
        assert np.max(np.abs(circuit_matrix(o) - circuit_matrix(c))) < 1e-9


class TestInverse:
    def test_hadamard(self):
        (g,) = inverse(Circuit(1, (Single(0, linalg.H),))).gates
        assert np.allclose(g.u, linalg.H)

    def test_phase(self):
        (g,) = inverse(Circuit(1, (Single(0, linalg.S),))).gates
        assert np.allclose(g.u, np.diag([1, -1j]))

    @settings(max_examples=60, deadline=None)
    @given(SEEDS, st.integers(1, 4))
    def test_involution_and_adjoint(self, seed, width):
        c = random_circuit(np.random.default_rng(seed), width, 8)
        assert inverse(inverse(c)) == c
        assert np.allclose(circuit_matrix(inverse(c)), circuit_matrix(c).conj().T)


class TestExport:
    def test_json_schema(self, teleport):
        doc = morphism_to_json(teleport["Epr"])
        assert {k: doc[k] for k in ("width", "heap", "garbage", "inputSize", "outputSize")} == {
            "width": 2, "heap": 2, "garbage": 0, "inputSize": 0, "outputSize": 2
        }
        assert [g["kind"] for g in doc["gates"]] == ["single", "controlled"]
        assert doc["gates"][1]["body"][0]["wire"] == 1
        assert json.loads(dumps(teleport["Epr"])) == doc

    def test_text(self, teleport):
        text = render_text(teleport["Epr"])
        lines = text.splitlines()
        assert "heap=2 garbage=0" in lines[0]
        assert "[H]" in lines[1] and "*" in lines[1] and "[X]" in lines[2]

    def test_text_marks_garbage(self, teleport):
        text = render_text(teleport["Meas"])
        assert text.splitlines()[-1].endswith("garbage")

    def test_deterministic(self, teleport):
        assert dumps(teleport["Tele"]) == dumps(teleport["Tele"])
        assert render_text(teleport["Tele"]) == render_text(teleport["Tele"])
