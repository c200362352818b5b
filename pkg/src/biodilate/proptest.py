"""Randomized invariant suites driven by ``biodilate proptest``.

Each check draws its own generator from ``(seed, check index, dim)`` so
results do not depend on execution order.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np

from . import biortho as bo
from . import dilate
from . import numkernel as nk
from . import qsim
from .exceptions import BiodilateError
from .samplers import (
    complex_normal,
    random_diagonalizable,
    random_operator,
    random_state,
    random_system,
    random_unitary,
)


def _close(a, b, tol, what):
    err = float(np.max(np.abs(np.asarray(a) - np.asarray(b)))) if np.size(a) else 0.0
    if not err <= tol:
        raise AssertionError(f"{what}: deviation {err:.3e} > {tol:.1e}")


def check_numkernel(rng, d, hooks):
    M = random_diagonalizable(rng, d)
    es = nk.eig(M)
    nm = nk.frobenius(M)
    if nk.frobenius(es.reconstruct() - M) > 1e-9 * nm:
        raise AssertionError("eig reconstruction")
    _close(es.left_rows @ es.right_vectors, np.eye(d), 1e-9, "left/right biorthonormality")
    _close(np.linalg.norm(es.right_vectors, axis=0), 1.0, 1e-12, "unit right vectors")
    A = complex_normal(rng, (d, d))
    P = A @ A.conj().T
    R = nk.sqrt_psd(P)
    if nk.frobenius(R @ R - P) > 1e-9 * nk.frobenius(P):
        raise AssertionError("sqrt_psd square")
    _close(R, R.conj().T, 1e-10, "sqrt_psd hermitian")
    sv = nk.singular_values(A)
    ev = np.sort(np.linalg.eigvalsh(A.conj().T @ A))[::-1]
    _close(sv ** 2, ev, 1e-9 * max(1.0, ev[0]), "singular values vs eig(M^dag M)")
    if not np.array_equal(nk.adjoint(nk.adjoint(A)), A):
        raise AssertionError("adjoint involution")


def check_biortho(rng, d, hooks):
    raw = random_system(rng, d)
    zeta_rows = raw.zeta.T.copy()
    if hooks.get("corrupt_zeta"):
        zeta_rows[0] = zeta_rows[0] + 0.1 * zeta_rows[-1]
    s = bo.from_explicit(raw.u.T, zeta_rows)
    U, Z, k = s.u, s.zeta, s.kappa
    _close(Z.conj().T @ U, np.diag(k), 1e-9, "overlaps")
    f, finv = bo.metric(s), bo.metric_inverse(s)
    _close(f, f.conj().T, 1e-10 * max(1.0, nk.frobenius(f)), "metric hermitian")
    _close(f @ finv, np.eye(d), 1e-9, "metric inverse")
    _close(f @ U, Z, 1e-9 * max(1.0, np.abs(Z).max()), "f u = zeta")
    _close((U / k) @ Z.conj().T, np.eye(d), 1e-9, "completeness")
    psi = random_state(rng, d)
    _close(bo.expand(s, psi).reconstruct(), psi, 1e-9, "expansion")
    ip = bo.bi_inner(s, psi, psi)
    if not (abs(ip.imag) <= 1e-9 * abs(ip) and ip.real > 0):
        raise AssertionError("bi_inner positivity")

    op = random_operator(rng, s, unitary=False)
    Vc = bo.to_computational(op)
    lhs = Vc.conj().T
    rhs = f @ bo.to_computational(bo.bi_adjoint(op)) @ finv
    if nk.frobenius(lhs - rhs) > 1e-8 * max(1.0, nk.frobenius(lhs)):
        raise AssertionError("adjoint / bi-adjoint relation through the metric")

    diag_op = random_operator(rng, s, unitary=True, diagonal=True)
    law = bo.to_computational(bo.bi_adjoint(diag_op)) @ bo.to_computational(diag_op)
    target = (U * k) @ Z.conj().T
    if nk.frobenius(law - target) > 1e-8 * max(1.0, nk.frobenius(target)):
        raise AssertionError("relaxed unitarity law")

    s1 = random_system(rng, d, kappa_ones=True)
    for unitary in (True, False):
        op1 = random_operator(rng, s1, unitary=unitary)
        res = bo.pseudo_unitarity_residual(op1)
        scale = max(1.0, nk.frobenius(bo.metric(s1)))
        if bo.is_bi_unitary(op1) != unitary or (res <= 1e-8 * scale) != unitary:
            raise AssertionError("bi-unitarity <-> metric preservation at unit kappa")

    V = random_diagonalizable(rng, d)
    _, op2 = bo.from_eigen(V)
    if nk.frobenius(bo.to_computational(op2) - V) > 1e-8 * nk.frobenius(V):
        raise AssertionError("from_eigen round trip")


def check_qsim(rng, d, hooks):
    n = int(np.log2(d))
    nq = n + 1
    state = qsim.StateVector(nq, random_state(rng, 2 ** nq))
    gates = []
    for _ in range(4):
        t = int(rng.integers(nq))
        c = int((t + 1 + rng.integers(nq - 1)) % nq)
        gates.append(qsim.Gate(random_unitary(rng, 2), (t,), ((c, int(rng.integers(2))),)))
    out = qsim.run(state, qsim.Circuit(nq, tuple(gates)))
    if abs(out.norm() - 1) > 1e-10:
        raise AssertionError("norm preservation")
    if n <= 6:
        Q = qsim.qft_circuit(range(n), n).unitary()
        _close(Q @ Q.conj().T, np.eye(d), 1e-10, "QFT unitarity")
    reg = list(range(n))
    a = qsim.postselect(qsim.run(state, qsim.qft_circuit(reg, nq)), reg, 0)
    b = qsim.postselect(qsim.run(state, qsim.hadamard_layer(reg, nq)), reg, 0)
    _close(a.probability, b.probability, 1e-10, "QFT/H zero-row probability")
    _close(a.state.amplitudes, b.state.amplitudes, 1e-10, "QFT/H zero-row state")
    p = qsim.outcome_probabilities(state, reg)
    _close(p.sum(), 1.0, 1e-10, "post-selection probabilities sum")
    t = random_state(rng, d)
    U = qsim.state_prep_unitary(t)
    _close(U.conj().T @ U, np.eye(d), 1e-10, "state prep unitary")
    _close(U[:, 0], t, 1e-10, "state prep column")


def check_dilate(rng, d, hooks):
    V = random_diagonalizable(rng, d)
    psi = random_state(rng, d)
    ref = V @ psi
    _, op = bo.from_eigen(V)
    plans = [dilate.biortho_plan(op), dilate.lcu_plan(dilate.pauli_decompose(V))]
    C = V / (1.05 * nk.singular_values(V)[0])
    plans.append(dilate.sznagy_plan(C))
    for plan in plans:
        target = plan.target
        out = dilate.run_plan(plan, psi)
        expect = target @ psi
        if nk.fidelity(out.output_state, expect) < 1 - 1e-8:
            raise AssertionError(f"{plan.method} output fidelity")
        if abs(out.simulated_probability - out.predicted_probability) > 1e-10:
            raise AssertionError(f"{plan.method} probability consistency")
        if np.max(np.abs(out.branch * out.scale - expect)) > 1e-9 * max(1.0, np.abs(expect).max()):
            raise AssertionError(f"{plan.method} scale law")
    if plans[0].ancilla_qubits != int(np.log2(d)):
        raise AssertionError("biortho ancilla count")
    if nk.fidelity(ref, plans[0].target @ psi) < 1 - 1e-12:
        raise AssertionError("biortho target mismatch")


CHECKS: tuple[tuple[str, Callable], ...] = (
    ("numkernel", check_numkernel),
    ("biortho", check_biortho),
    ("qsim", check_qsim),
    ("dilate", check_dilate),
)


@dataclass
class ProptestSummary:
    seed: int
    dims: tuple[int, ...]
    cases: int
    results: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(not r["failures"] for r in self.results.values())

    def as_dict(self) -> dict:
        return {"seed": self.seed, "dims": list(self.dims), "cases": self.cases,
                "passed": self.passed, "checks": self.results}


def run_proptest(seed: int = 42, dims: Sequence[int] = (2, 4, 8, 16), cases: int = 50,
                 hooks: dict | None = None, max_messages: int = 5) -> ProptestSummary:
    hooks = hooks or {}
    summary = ProptestSummary(seed, tuple(dims), cases)
    for ci, (name, check) in enumerate(CHECKS):
        for d in dims:
            dilate.num_qubits_for(d)
            rng = np.random.default_rng([seed, ci, d])
            failures = []
            for _ in range(cases):
                try:
                    check(rng, d, hooks)
                except (AssertionError, BiodilateError) as exc:
                    failures.append(f"{type(exc).__name__}: {exc}")
            summary.results[f"{name}/dim={d}"] = {"cases": cases, "failures": failures[:max_messages],
                                                  "failure_count": len(failures)}
    return summary
