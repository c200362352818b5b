import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from biodilate import biortho as bo
from biodilate import numkernel as nk
from biodilate.exceptions import (
    BiorthogonalityViolation,
    Defective,
    ExplicitKappaInvalid,
    NonPositiveKappa,
    ReconstructionFailure,
    SingularWithModulusPolicy,
)
from biodilate.samplers import (
    random_diagonalizable,
    random_operator,
    random_state,
    random_system,
    random_unitary,
)

from conftest import EXAMPLE_V, tau_matrix

S2 = np.sqrt(2)


def computational(d):
    return bo.from_explicit(np.eye(d), np.eye(d))


def tau_system(tau):
    return bo.from_explicit([[1, 0], [1 / S2, 1 / S2]], [[tau, -tau], [0, S2]])


class TestConstruction:
    def test_computational_basis(self):
        s = computational(4)
        assert np.allclose(s.kappa, 1)
        assert bo.validate(s).passed

    def test_example_system(self, example_system):
        assert np.allclose(example_system.kappa, [1, 1])
        assert bo.validate(example_system).passed

    def test_tau_system(self):
        s = tau_system(2.0)
        assert np.allclose(s.kappa, [2, 1])
        assert bo.validate(s).passed

    def test_rescales_u(self):
        s = bo.from_explicit([[2, 0], [1, 1]], [[1, -1], [0, S2]])
        assert np.allclose(np.linalg.norm(s.u, axis=0), 1)
        assert np.allclose(s.kappa, [1, 1])

    def test_zero_kappa(self):
        with pytest.raises(NonPositiveKappa):
            bo.from_explicit([[1, 0], [0, 1]], [[0, 1], [1, 0]])

    def test_complex_kappa_rejected(self):
        with pytest.raises(NonPositiveKappa):
            bo.from_explicit(np.eye(2), np.diag([1j, 1]))

    def test_off_diagonal_overlap(self):
        with pytest.raises(BiorthogonalityViolation):
            bo.from_explicit(np.eye(2), [[1, 0.2], [0, 1]])

    def test_validate_reports_failure(self):
        # zeta_1 = (0.3, 1) overlaps u_0 = |0> by 0.3, reported relative to |zeta_1|
        s = bo.BiorthogonalSystem(np.eye(2), [[1, 0.3], [0, 1]], [1, 1])
        r = bo.validate(s)
        assert not r.passed
        assert r.max_overlap_deviation == pytest.approx(0.3 / np.hypot(0.3, 1))


class TestFromEigen:
    def test_example_unit_kappa(self, example_system):
        s, op = bo.from_eigen(EXAMPLE_V, "ones")
        assert np.allclose(op.rep, np.diag([1, -1]))
        assert np.allclose(s.u, example_system.u)
        assert np.allclose(s.zeta, example_system.zeta)

    def test_tau2_modulus(self):
        # hand eigendecomposition of [[2, -3], [0, -1]]
        s, op = bo.from_eigen(tau_matrix(2.0), "modulus")
        assert np.allclose(s.kappa, [2, 1])
        assert np.allclose(op.rep, np.diag([1, -1]))
        assert np.allclose(s.zeta[:, 0], [2, -2])
        assert np.allclose(s.zeta[:, 1], [0, S2])

    def test_unitary_input(self, rng):
        U = random_unitary(rng, 4)
        for policy in ("modulus", "ones"):
            s, op = bo.from_eigen(U, policy)
            assert np.allclose(s.kappa, 1)
            assert nk.is_unitary(op.rep)

    def test_explicit_kappa(self):
        s, op = bo.from_eigen(tau_matrix(2.0), [4.0, 0.5])
        assert np.allclose(s.kappa, [4, 0.5])
        assert np.allclose(bo.to_computational(op), tau_matrix(2.0))

    def test_errors(self):
        with pytest.raises(SingularWithModulusPolicy):
            bo.from_eigen(np.diag([1.0, 0.0]))
        with pytest.raises(ExplicitKappaInvalid):
            bo.from_eigen(EXAMPLE_V, [1.0, -1.0])
        with pytest.raises(Defective):
            bo.from_eigen([[1.0, 1.0], [0.0, 1.0]])

    @pytest.mark.parametrize("d", [2, 4, 8])
    def test_round_trip(self, rng, d):
        for _ in range(10):
            V = random_diagonalizable(rng, d)
            _, op = bo.from_eigen(V)
            assert nk.frobenius(bo.to_computational(op) - V) <= 1e-8 * nk.frobenius(V)
            assert nk.is_unitary(op.rep)


class TestMetric:
    def test_computational(self):
        assert np.allclose(bo.metric(computational(2)), np.eye(2))

    def test_example_by_hand(self, example_system):
        # |z0><z0| + |z1><z1| with z0 = (1,-1), z1 = (0, sqrt2)
        hand = np.outer([1, -1], [1, -1]) + np.outer([0, S2], [0, S2])
        assert np.allclose(hand, [[1, -1], [-1, 3]])
        assert np.allclose(bo.metric(example_system), hand)

    def test_inverse(self, rng):
        s = random_system(rng, 4)
        assert np.allclose(bo.metric(s) @ bo.metric_inverse(s), np.eye(4), atol=1e-9)


class TestStates:
    def test_associate(self, example_system):
        assert np.allclose(bo.associate(example_system, [1, 0]), [1, -1])
        assert np.allclose(bo.associate(example_system, example_system.u[:, 1]), example_system.zeta[:, 1])
        v = np.array([0.3, 0.4j])
        assert np.allclose(bo.associate(computational(2), v), v)

    def test_expand_example(self, example_system):
        a0, a1 = 0.6 - 0.2j, 0.1 + 0.7j
        c = bo.expand(example_system, [a0, a1]).coeffs
        assert np.allclose(c, [a0 - a1, S2 * a1])

    def test_expand_basis_vector(self, example_system):
        assert np.allclose(bo.expand(example_system, example_system.u[:, 1]).coeffs, [0, 1])
        v = np.array([0.6, 0.8])
        assert np.allclose(bo.expand(computational(2), v).coeffs, v)

    def test_expand_detects_broken_system(self):
        s = bo.BiorthogonalSystem(np.eye(2), [[1, 0.5], [0, 1]], [1, 1])
        with pytest.raises(ReconstructionFailure):
            bo.expand(s, [1, 0])

    def test_bi_inner(self, example_system):
        psi = np.array([0.6, 0.8j])
        c = bo.expand(example_system, psi).coeffs
        ip = bo.bi_inner(example_system, psi, psi)
        assert ip == pytest.approx(np.sum(np.abs(c) ** 2))
        u = example_system.u
        assert abs(bo.bi_inner(example_system, u[:, 0], u[:, 1])) < 1e-12
        phi = np.array([0.1, 0.3 - 1j])
        assert bo.bi_inner(computational(2), phi, psi) == pytest.approx(np.vdot(phi, psi))

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), d=st.sampled_from([2, 4, 8]))
    def test_expand_reconstruct_and_positivity(self, seed, d):
        rng = np.random.default_rng(seed)
        s = random_system(rng, d)
        psi = random_state(rng, d)
        assert np.linalg.norm(bo.expand(s, psi).reconstruct() - psi) <= 1e-9
        ip = bo.bi_inner(s, psi, psi)
        assert ip.real > 0 and abs(ip.imag) <= 1e-9 * abs(ip)


class TestOperators:
    def test_to_computational(self, example_operator):
        assert np.allclose(bo.to_computational(example_operator), EXAMPLE_V)
        s = tau_system(2.0)
        assert np.allclose(bo.to_computational(bo.BiorthogonalOperator(s, np.diag([1, -1]))), tau_matrix(2.0))
        unity = bo.BiorthogonalOperator(s, np.diag(1 / s.kappa))
        assert np.allclose(bo.to_computational(unity), np.eye(2))

    def test_bi_adjoint(self, example_operator, rng):
        assert np.allclose(bo.bi_adjoint(example_operator).rep, example_operator.rep)
        s = random_system(rng, 4)
        op = random_operator(rng, s, unitary=False)
        assert np.allclose(bo.bi_adjoint(bo.bi_adjoint(op)).rep, op.rep)

    def test_bi_unitary(self, example_operator, tau2_operator):
        assert bo.is_bi_unitary(example_operator)
        assert bo.pseudo_unitarity_residual(example_operator) < 1e-12
        assert not bo.is_bi_unitary(tau2_operator)
        assert nk.is_unitary(tau2_operator.rep)
        assert bo.is_bi_unitary(bo.BiorthogonalOperator(computational(2), np.eye(2)))

    def test_bi_hermitian(self, example_operator):
        assert bo.is_bi_hermitian(example_operator)
        assert not bo.is_bi_hermitian(bo.BiorthogonalOperator(computational(2), [[0, 1], [0, 0]]))
        # V^dag f - f V with f = [[1,-1],[-1,3]]: computed by hand below
        f = np.array([[1, -1], [-1, 3]])
        hand = EXAMPLE_V.T @ f - f @ EXAMPLE_V
        assert np.allclose(hand, 0)
        f_code = bo.metric(example_operator.system)
        assert bo.pseudo_hermiticity_residual(bo.to_computational(example_operator), f_code) < 1e-12

    def test_apply_via_biortho(self, example_operator, tau2_operator):
        a0, a1 = 0.3 + 0.2j, -0.9j
        assert np.allclose(bo.apply_via_biortho(example_operator, [a0, a1]), [a0 - 2 * a1, -a1])
        s = example_operator.system
        unity = bo.BiorthogonalOperator(s, np.diag(1 / s.kappa))
        assert np.allclose(bo.apply_via_biortho(unity, [a0, a1]), [a0, a1])
        assert np.allclose(bo.apply_via_biortho(tau2_operator, [1, 0]), [2, 0])

    @pytest.mark.parametrize("d", [2, 4, 8])
    def test_adjoint_relation_through_metric(self, rng, d):
        for _ in range(10):
            s = random_system(rng, d)
            op = random_operator(rng, s, unitary=False)
            Vc = bo.to_computational(op)
            rhs = bo.metric(s) @ bo.to_computational(bo.bi_adjoint(op)) @ bo.metric_inverse(s)
            assert nk.frobenius(Vc.conj().T - rhs) <= 1e-8 * max(1, nk.frobenius(Vc))

    @pytest.mark.parametrize("d", [2, 4, 8])
    def test_relaxed_unitarity_law(self, rng, d):
        for _ in range(10):
            s = random_system(rng, d)
            op = random_operator(rng, s, unitary=True, diagonal=True)
            law = bo.to_computational(bo.bi_adjoint(op)) @ bo.to_computational(op)
            target = (s.u * s.kappa) @ s.zeta.conj().T
            assert nk.frobenius(law - target) <= 1e-8 * nk.frobenius(target)

    @pytest.mark.parametrize("d", [2, 4, 8])
    def test_bi_unitarity_iff_metric_preserved(self, rng, d):
        for _ in range(5):
            s = random_system(rng, d, kappa_ones=True)
            good = random_operator(rng, s, unitary=True)
            bad = random_operator(rng, s, unitary=False)
            assert bo.is_bi_unitary(good) and bo.pseudo_unitarity_residual(good) <= 1e-8 * nk.frobenius(bo.metric(s))
            assert not bo.is_bi_unitary(bad) and bo.pseudo_unitarity_residual(bad) > 1e-6


def test_system_is_immutable(example_system):
    with pytest.raises(ValueError):
        example_system.u[0, 0] = 5
