from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import partial_trace_sum
from qmlc import linalg
from qmlc.errors import SizeMismatch

KET0 = np.array([[1], [0]], dtype=complex)
R = 1 / np.sqrt(2)


def random_matrix(rng, n, m=None):
    m = n if m is None else m
    return rng.normal(size=(n, m)) + 1j * rng.normal(size=(n, m))


def random_density(rng, qubits):
    a = random_matrix(rng, 2**qubits)
    rho = a @ a.conj().T
    return rho / np.trace(rho)


class TestProducts:
    def test_involutions(self):
        assert np.allclose(linalg.mul(linalg.X, linalg.X), linalg.I2)
        assert np.allclose(linalg.mul(linalg.H, linalg.H), linalg.I2)

    def test_hadamard_on_zero(self):
        assert np.allclose(linalg.mul(linalg.H, KET0), [[R], [R]])

    def test_shape_mismatch(self):
        with pytest.raises(SizeMismatch):
            linalg.mul(np.eye(2), np.eye(3))

    def test_kron_bit_order(self):
        # |01> (index 1) <-> |00>: kron(I, X) flips the low bit, kron(X, I) the high bit
        low, high = linalg.kron(linalg.I2, linalg.X), linalg.kron(linalg.X, linalg.I2)
        assert low[0, 1] == 1 and low[2, 3] == 1
        assert high[0, 2] == 1 and high[1, 3] == 1

    def test_kron_variadic(self):
        assert linalg.kron().shape == (1, 1)
        assert linalg.kron(linalg.X, linalg.I2, linalg.Z).shape == (8, 8)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_mixed_product(self, seed):
        rng = np.random.default_rng(seed)
        a, b, c, d = (random_matrix(rng, 2) for _ in range(4))
        lhs = linalg.kron(a, b) @ linalg.kron(c, d)
        assert np.allclose(lhs, linalg.kron(a @ c, b @ d))


class TestHelpers:
    def test_adjoint(self):
        assert np.array_equal(linalg.adjoint(linalg.S), np.diag([1, -1j]))
        a = random_matrix(np.random.default_rng(0), 3, 2)
        assert np.array_equal(linalg.adjoint(linalg.adjoint(a)), a)

    def test_norm(self):
        assert linalg.norm_inf(linalg.identity(4) - linalg.identity(4)) == 0
        assert linalg.norm_inf(linalg.H.conj().T @ linalg.H - linalg.I2) < 1e-12

    def test_is_unitary(self):
        assert linalg.is_unitary(linalg.H) and not linalg.is_unitary(np.diag([1, 2]))
        assert not linalg.is_unitary(np.ones((2, 3)))

    def test_as_matrix_rejects_nan(self):
        with pytest.raises(ValueError):
            linalg.as_matrix([[np.nan, 0], [0, 1]])

    def test_equal_up_to_phase(self):
        assert linalg.equal_up_to_phase(1j * linalg.H, linalg.H)
        assert not linalg.equal_up_to_phase(linalg.Z, linalg.I2)
        assert not linalg.equal_up_to_phase(2 * linalg.H, linalg.H)

    def test_vec_is_column_stacking(self):
        rho = np.array([[1, 2], [3, 4]])
        assert list(linalg.vec(rho)) == [1, 3, 2, 4]
        assert np.array_equal(linalg.unvec(linalg.vec(rho), 2), rho)

    def test_conjugation_superop(self):
        rng = np.random.default_rng(1)
        m, rho = random_matrix(rng, 2), random_matrix(rng, 2)
        out = linalg.unvec(linalg.conjugation_superop(m) @ linalg.vec(rho), 2)
        assert np.allclose(out, m @ rho @ m.conj().T)


class TestPartialTrace:
    def test_product_state(self):
        rho = np.zeros((4, 4), dtype=complex)
        rho[0, 0] = 1
        assert np.allclose(linalg.partial_trace_last(rho, 1, 1), np.diag([1, 0]))

    def test_epr(self):
        v = np.array([R, 0, 0, R])
        assert np.allclose(linalg.partial_trace_last(np.outer(v, v.conj()), 1, 1), np.eye(2) / 2)

    def test_shape_mismatch(self):
        with pytest.raises(SizeMismatch):
            linalg.partial_trace_last(np.eye(4), 2, 1)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(0, 2), st.integers(0, 2))
    def test_matches_summation_oracle(self, seed, keep, drop):
        if keep + drop == 0:
            return
        rng = np.random.default_rng(seed)
        rho = random_density(rng, keep + drop)
        out = linalg.partial_trace_last(rho, keep, drop)
        assert np.allclose(out, partial_trace_sum(rho, 2**keep, 2**drop), atol=1e-12)
        assert abs(np.trace(out) - np.trace(rho)) < 1e-12

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_linear(self, seed):
        rng = np.random.default_rng(seed)
        a, b = random_matrix(rng, 8), random_matrix(rng, 8)
        s, t = complex(rng.normal(), rng.normal()), complex(rng.normal(), rng.normal())
        lhs = linalg.partial_trace_last(s * a + t * b, 2, 1)
        rhs = s * linalg.partial_trace_last(a, 2, 1) + t * linalg.partial_trace_last(b, 2, 1)
        assert np.allclose(lhs, rhs)
