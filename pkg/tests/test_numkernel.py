import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from biodilate import numkernel as nk
from biodilate.exceptions import Defective, DimensionMismatch, NotHermitian, NotPSD, ZeroVector
from biodilate.samplers import complex_normal, random_diagonalizable, random_unitary

from conftest import EXAMPLE_V, tau_matrix

SZ = np.diag([1.0, -1.0])


def test_adjoint_examples():
    assert np.array_equal(nk.adjoint(np.eye(2)), np.eye(2))
    assert np.array_equal(nk.adjoint([[0, 1], [0, 0]]), [[0, 0], [1, 0]])
    assert np.array_equal(nk.adjoint(EXAMPLE_V), [[1, 0], [-2, -1]])


def test_adjoint_conjugates():
    M = np.array([[1j, 2], [3 - 1j, 0]])
    assert np.array_equal(nk.adjoint(M), [[-1j, 3 + 1j], [2, 0]])


def test_matvec_examples():
    v = np.array([0.3, -0.7j])
    assert np.allclose(nk.matvec(np.eye(2), v), v)
    assert np.allclose(nk.matvec(SZ, np.array([1, 1]) / np.sqrt(2)), np.array([1, -1]) / np.sqrt(2))
    a0, a1 = 0.6 + 0.1j, -0.2 + 0.5j
    assert np.allclose(nk.matvec(EXAMPLE_V, [a0, a1]), [a0 - 2 * a1, -a1])


def test_matmul_mismatch():
    with pytest.raises(DimensionMismatch):
        nk.matvec(np.eye(2), [1, 0, 0])


def test_non_finite_rejected():
    with pytest.raises(nk.NonFiniteInput):
        nk.adjoint([[np.nan, 0], [0, 1]])


def test_eig_diagonal():
    es = nk.eig(np.diag([3.0, 1.0]))
    assert np.allclose(es.eigenvalues, [3, 1])
    assert np.allclose(es.right_vectors, np.eye(2))


@pytest.mark.parametrize("tau", [0.5, 1.0, 2.0, 3.7])
def test_eig_tau_family(tau):
    es = nk.eig(tau_matrix(tau))
    assert sorted(es.eigenvalues.real) == pytest.approx(sorted([tau, -1.0]), abs=1e-12)


def test_eig_example_by_substitution():
    es = nk.eig(EXAMPLE_V)
    assert np.allclose(es.eigenvalues, [1, -1])
    u0 = np.array([1, 0])
    u1 = np.array([1, 1]) / np.sqrt(2)
    # oracle: direct substitution V u = lambda u
    assert np.allclose(EXAMPLE_V @ u0, u0)
    assert np.allclose(EXAMPLE_V @ u1, -u1)
    assert np.allclose(es.right_vectors[:, 0], u0)
    assert np.allclose(es.right_vectors[:, 1], u1)


def test_eig_ordering_and_phase(rng):
    # equal moduli: ascending phase in (-pi, pi]
    es = nk.eig(np.diag([-1.0, 1j, 1.0, -1j]))
    assert np.allclose(es.eigenvalues, [-1j, 1, 1j, -1])
    es = nk.eig(random_diagonalizable(rng, 4))
    mods = np.abs(es.eigenvalues)
    assert np.all(np.diff(mods) <= 1e-12)
    for n in range(4):
        col = es.right_vectors[:, n]
        k = int(np.argmax(np.abs(col) >= np.abs(col).max() * (1 - 1e-12)))
        assert abs(col[k].imag) < 1e-12 and col[k].real > 0


def test_eig_defective():
    with pytest.raises(Defective):
        nk.eig([[1.0, 1.0], [0.0, 1.0]])


@pytest.mark.parametrize("d", [2, 4, 8, 16])
def test_eig_invariants(rng, d):
    for _ in range(10):
        M = random_diagonalizable(rng, d)
        es = nk.eig(M)
        assert nk.frobenius(es.reconstruct() - M) <= 1e-9 * nk.frobenius(M)
        assert np.allclose(es.left_rows @ es.right_vectors, np.eye(d), atol=1e-9)
        assert np.allclose(np.linalg.norm(es.right_vectors, axis=0), 1)


def test_singular_values_examples(rng):
    assert np.allclose(nk.singular_values(random_unitary(rng, 4)), 1)
    assert nk.singular_values(EXAMPLE_V)[0] ** 2 == pytest.approx(3 + 2 * np.sqrt(2), abs=1e-12)
    assert np.allclose(nk.singular_values(np.diag([0.5, 0.2])), [0.5, 0.2])
    s = nk.singular_values(np.diag([0.2, 0.5]))
    assert list(s) == sorted(s, reverse=True)


def test_singular_values_cross_check(rng):
    for d in (2, 4, 8):
        M = complex_normal(rng, (d, d))
        ev = np.sort(np.linalg.eigvalsh(M.conj().T @ M))[::-1]
        assert np.allclose(nk.singular_values(M) ** 2, ev, atol=1e-9 * ev[0])


def test_sqrt_psd_examples():
    assert np.allclose(nk.sqrt_psd(np.eye(3)), np.eye(3))
    assert np.allclose(nk.sqrt_psd(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]))
    V = 0.5 * np.eye(2)
    # closed form: sqrt(1 - 1/4) = sqrt(3)/2
    assert np.allclose(nk.sqrt_psd(np.eye(2) - V.conj().T @ V), np.sqrt(3) / 2 * np.eye(2))


def test_sqrt_psd_errors():
    with pytest.raises(NotPSD):
        nk.sqrt_psd(np.eye(2) - EXAMPLE_V.conj().T @ EXAMPLE_V)
    with pytest.raises(NotHermitian):
        nk.sqrt_psd([[1.0, 1.0], [0.0, 1.0]])


def test_sqrt_psd_clamps_tiny_negative():
    R = nk.sqrt_psd(np.diag([1.0, -1e-13]))
    assert np.allclose(R, np.diag([1.0, 0.0]))


def test_sqrt_psd_property(rng):
    for d in (2, 4, 8):
        A = complex_normal(rng, (d, d))
        P = A @ A.conj().T
        R = nk.sqrt_psd(P)
        assert nk.frobenius(R @ R - P) <= 1e-9 * nk.frobenius(P)
        assert np.allclose(R, R.conj().T, atol=1e-10)


def test_fidelity_examples():
    v = np.array([0.6, 0.8j])
    assert nk.fidelity(v, v) == pytest.approx(1)
    assert nk.fidelity([1, 0], [0, 1]) == 0
    with pytest.raises(ZeroVector):
        nk.fidelity([0, 0], [1, 0])


@settings(max_examples=50, deadline=None)
@given(theta=st.floats(-np.pi, np.pi), seed=st.integers(0, 2**32 - 1))
def test_fidelity_phase_invariant(theta, seed):
    v = complex_normal(np.random.default_rng(seed), 4)
    assert nk.fidelity(v, np.exp(1j * theta) * v) == pytest.approx(1.0, abs=1e-12)


def test_adjoint_involution(rng):
    M = complex_normal(rng, (5, 5))
    assert np.array_equal(nk.adjoint(nk.adjoint(M)), M)


def test_eig_outputs_are_read_only():
    es = nk.eig(EXAMPLE_V)
    with pytest.raises(ValueError):
        es.eigenvalues[0] = 0
