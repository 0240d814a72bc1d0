import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symtwistor import lagrangian as lg
from symtwistor import symplectic as sp
from symtwistor.errors import (
    DimensionMismatchError,
    NotRealLagrangianError,
    NotSymplecticError,
    SymTwistorError,
)
from symtwistor.linalg import expm


def e(n, k):
    v = np.zeros(2 * n, dtype=complex)
    v[k] = 1
    return v


def test_plane_requires_full_rank():
    with pytest.raises(SymTwistorError):
        lg.ComplexPlane(np.zeros((2, 1)))
    with pytest.raises(DimensionMismatchError):
        lg.ComplexPlane(np.ones((3, 1)))


def test_plane_equality_is_by_span():
    a = lg.ComplexPlane(np.array([[1.0], [1j]]))
    b = lg.ComplexPlane(np.array([[2j], [-2.0]]))
    assert a == b
    assert a != a.conj()


def test_plane_json_round_trip():
    w = lg.j_to_plane(sp.random_compatible(2, 1, 3)[0])
    data = json.loads(json.dumps(w.to_json()))
    assert np.asarray(data).shape == (4, 2, 2)
    np.testing.assert_array_equal(lg.ComplexPlane.from_json(data).basis, w.basis)


def test_j_to_plane_j0_n1():
    w = lg.j_to_plane(sp.j0(1))
    assert w == lg.ComplexPlane((e(1, 0) + 1j * e(1, 1))[:, None])
    # direct check: J0 v = -i v
    v = w.basis[:, 0]
    np.testing.assert_allclose(sp.j0(1) @ v, -1j * v, atol=1e-15)


@pytest.mark.parametrize("n,l", [(1, 0), (2, 1), (3, 2), (3, 3)])
def test_j_to_plane_isotropic(n, l):
    j, _ = sp.random_compatible(n, l, 7)
    b = lg.j_to_plane(j).basis
    assert np.max(np.abs(b.T @ sp.j0(n) @ b)) <= 1e-9 * np.max(np.abs(b)) ** 2
    assert lg.is_real_lagrangian(b)


def test_plane_to_j_examples():
    w = lg.ComplexPlane((e(1, 0) + 1j * e(1, 1))[:, None])
    np.testing.assert_allclose(lg.plane_to_j(w).j, sp.j0(1), atol=1e-15)
    np.testing.assert_allclose(lg.plane_to_j(w.conj()).j, -sp.j0(1), atol=1e-15)


@pytest.mark.parametrize("n,l", [(n, l) for n in (1, 2, 3) for l in range(n + 1)])
def test_canonical_plane_has_index_l(n, l):
    j = lg.plane_to_j(lg.canonical_plane(n, l))
    assert sp.taming_index(j.j) == l
    np.testing.assert_allclose(j.j, sp.canonical_structure(n, l), atol=1e-14)


def test_plane_to_j_rejects_non_lagrangian():
    with pytest.raises(NotRealLagrangianError):
        lg.plane_to_j(np.array([[1.0], [0.0]]))


def test_is_real_lagrangian_examples():
    assert lg.is_real_lagrangian(np.array([[1.0], [1j]]))
    assert not lg.is_real_lagrangian(np.array([[1.0], [0.0]]))
    assert not lg.is_real_lagrangian(np.array([[1, 0], [0, 1], [0, 0], [0, 0]], dtype=complex))
    # isotropic fails: e1 and f1 pair under omega
    assert not lg.is_real_lagrangian(np.array([[1, 0], [0, 1j], [1j, 0], [0, 0]]))


def test_signature_calibration():
    assert lg.INDEX_COUNTS_POSITIVE
    for n in (1, 2, 3):
        for l in range(n + 1):
            sig = lg.hermitian_signature(lg.j_to_plane(sp.canonical_structure(n, l)))
            assert sig == (l, n - l)
            assert lg.index_from_signature(sig) == l


def test_signature_mixed_for_canonical_plane():
    assert lg.hermitian_signature(lg.canonical_plane(2, 1)) == (1, 1)


def test_hermitian_matrix_hand_value():
    # w = (1, i): w^T J0 conj(w) = (1, i).(i, 1) = 2i, so h = i * 2i = -2
    h = lg.hermitian_matrix(np.array([[1.0], [1j]]))
    np.testing.assert_allclose(h, [[-2.0]], atol=1e-15)


def test_signature_invariant_under_column_rescaling():
    w = lg.j_to_plane(sp.random_compatible(3, 2, 1)[0])
    scaled = w.basis @ np.diag([2.0, 2.0, 2.0])
    mixed = w.basis @ np.array([[1, 2j, 0], [0, 1, 1], [3, 0, 1]])
    assert lg.hermitian_signature(w) == lg.hermitian_signature(scaled) == lg.hermitian_signature(mixed)


def test_parabolic_decompose_examples():
    a, ee = lg.parabolic_decompose(np.eye(4))
    np.testing.assert_array_equal(a, np.eye(2))
    np.testing.assert_array_equal(ee, 0)
    rng = np.random.default_rng(0)
    a0 = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    g = lg.assemble_parabolic(a0, np.zeros((2, 2)))
    a, ee = lg.parabolic_decompose(g)
    np.testing.assert_allclose(a, a0)
    assert np.max(np.abs(ee)) < 1e-12
    assert lg.parabolic_decompose(sp.j0(2)) is None


def test_parabolic_non_symplectic_is_an_error_not_a_reject():
    with pytest.raises(NotSymplecticError):
        lg.parabolic_decompose(np.diag([2.0, 1.0, 1.0, 1.0]))


def test_parabolic_stabilises_pi():
    rng = np.random.default_rng(1)
    a0 = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    s = rng.normal(size=(3, 3))
    g = lg.assemble_parabolic(a0, s + s.T)
    x = np.vstack([rng.normal(size=(3, 3)), np.zeros((3, 3))])
    assert np.max(np.abs((g @ x)[3:])) == 0


def _pseudo_unitary(n, l, rng):
    eta = np.diag(sp.q_matrix(n, l))[:n]
    k = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    k = (k - k.conj().T) / 2
    return expm(np.diag(eta) @ k)


@pytest.mark.parametrize("n,l", [(2, 0), (2, 1), (3, 1), (3, 3)])
def test_pseudo_unitary_iff(n, l):
    rng = np.random.default_rng(10 * n + l)
    for _ in range(10):
        a = _pseudo_unitary(n, l, rng)
        assert lg.is_pseudo_unitary(a, l)
        assert lg.preserves_pseudo_metric(lg.assemble_parabolic(a, np.zeros((n, n))), l)
        s = rng.normal(size=(n, n))
        assert not lg.preserves_pseudo_metric(lg.assemble_parabolic(a, 0.5 * (s + s.T)), l)
        b = a @ np.diag(np.linspace(1.5, 2.0, n))
        assert not lg.is_pseudo_unitary(b, l)
        assert not lg.preserves_pseudo_metric(lg.assemble_parabolic(b, np.zeros((n, n))), l)


@settings(max_examples=200, deadline=None)
@given(n=st.integers(1, 3), l=st.integers(0, 3), seed=st.integers(0, 2**31 - 2))
def test_bijection_and_reality(n, l, seed):
    l = min(l, n)
    j, _ = sp.random_compatible(n, l, seed)
    w = lg.j_to_plane(j)
    jc = lg.reconstruct(w)
    assert np.max(np.abs(jc.imag)) <= 1e-10 * max(1.0, np.max(np.abs(j)))
    back = lg.plane_to_j(w).j
    assert np.max(np.abs(back - j)) <= 1e-8 * max(1.0, np.max(np.abs(j)))
    assert lg.j_to_plane(back) == w
    assert lg.index_from_signature(lg.hermitian_signature(w)) == sp.taming_index(j) == l


@settings(max_examples=50, deadline=None)
@given(n=st.integers(1, 3), seed=st.integers(0, 2**31 - 2))
def test_parabolic_round_trip(n, seed):
    rng = np.random.default_rng(seed)
    a0 = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)) + 2 * np.eye(n)
    s = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    g = lg.assemble_parabolic(a0, (s + s.T) / 2)
    a, ee = lg.parabolic_decompose(g)
    assert np.max(np.abs(lg.assemble_parabolic(a, ee) - g)) <= 1e-10 * max(1.0, np.max(np.abs(g)))
