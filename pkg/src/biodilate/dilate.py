"""Non-unitary operator backends: biorthogonal dilation, LCU and Sz.-Nagy.

Each backend builds a :class:`DilationPlan` once per operator and runs it
per input state, returning a :class:`DilationOutcome`. In every plan the
post-selected, unnormalized branch equals ``V|psi> / scale``.

Register layout
---------------
biortho : qubits ``0..N-1`` index register (measured), ``N..2N-1`` output.
lcu     : ancilla register first, system register last.
sznagy  : one ancilla (qubit 0), system register last.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from . import biortho as bo
from . import numkernel as nk
from . import qsim
from .exceptions import (
    BiodilateError,
    NonUnitaryRepresentation,
    NonUnitarySummand,
    NotAContraction,
    NotPowerOfTwoDim,
    NotPSD,
)

METHODS = ("biortho", "lcu", "sznagy")

PAULI = {
    "I": np.eye(2, dtype=np.complex128),
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


def num_qubits_for(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim < 2 or 2 ** n != dim:
        raise NotPowerOfTwoDim(f"dimension {dim} is not a power of two >= 2")
    return n


@dataclass(frozen=True)
class UnitarySummand:
    weight: float
    unitary: np.ndarray
    label: str = ""

    def __post_init__(self):
        U = nk.as_matrix(self.unitary, name="summand")
        if not self.weight > 0:
            raise ValueError("summand weight must be positive")
        if not nk.is_unitary(U, atol=nk.ATOL):
            raise NonUnitarySummand(f"summand {self.label or ''} is not unitary")
        object.__setattr__(self, "unitary", nk.frozen(U))
        object.__setattr__(self, "weight", float(self.weight))


@dataclass(frozen=True)
class DilationPlan:
    """A circuit template plus what is needed to read its output.

    For ``biortho`` the first gate is a ``prep`` placeholder, bound per input
    state by :func:`bind_circuit`, and the full scale is ``c * scale`` where
    ``c`` depends on the state (see :func:`biortho_run`).
    """

    method: str
    circuit: qsim.Circuit
    ancilla_qubits: int
    system_qubits: int
    postselect_register: tuple[int, ...]
    postselect_value: int
    output_register: tuple[int, ...]
    scale: float
    target: np.ndarray = field(repr=False)
    operator: bo.BiorthogonalOperator | None = field(default=None, repr=False)
    summands: tuple[UnitarySummand, ...] = field(default=(), repr=False)
    metadata: dict = field(default_factory=dict, compare=False)

    @property
    def total_qubits(self) -> int:
        return self.circuit.num_qubits


@dataclass(frozen=True)
class DilationOutcome:
    output_state: np.ndarray
    simulated_probability: float
    predicted_probability: float
    fidelity_vs_oracle: float
    branch: np.ndarray = field(repr=False)
    scale: float = 1.0
    circuit: qsim.Circuit | None = field(default=None, repr=False)


# ---------------------------------------------------------------- biortho


def biortho_plan(op: bo.BiorthogonalOperator, *, atol: float = nk.ATOL) -> DilationPlan:
    """Dilation circuit for an operator with a unitary representation matrix.

    Gate sequence: state-dependent prep on the index register, ``rep`` on
    the index register, one controlled basis-state preparation per basis
    vector (skipped when ``u_n`` is already ``|0...0>``), then QFT on the
    index register. Post-select the index register on ``0``.

    Raises
    ------
    NonUnitaryRepresentation
        If ``op.rep`` is not unitary.
    """
    if not nk.is_unitary(op.rep, atol=max(atol, 1e-10)):
        raise NonUnitaryRepresentation("representation matrix is not unitary; biorthogonal dilation inapplicable")
    report = bo.validate(op.system)
    if not report.passed:
        raise bo.BiorthogonalityViolation("; ".join(report.failures))
    d = op.system.dim
    N = num_qubits_for(d)
    index = tuple(range(N))
    out = tuple(range(N, 2 * N))
    nq = 2 * N

    gates = [qsim.Gate(np.eye(d), index, label="prep"),
             qsim.Gate(op.rep, index, label="rep", check_unitary=False)]
    e0 = np.zeros(d)
    e0[0] = 1.0
    for n in range(d):
        u_n = op.system.u[:, n]
        if np.allclose(u_n, e0, rtol=0.0, atol=1e-14):
            continue
        gates.append(qsim.controlled_on_value(index, n, qsim.state_prep_unitary(u_n), out))
    circuit = qsim.Circuit(nq, tuple(gates)) + qsim.qft_circuit(index, nq)
    return DilationPlan(
        method="biortho",
        circuit=circuit,
        ancilla_qubits=N,
        system_qubits=N,
        postselect_register=index,
        postselect_value=0,
        output_register=out,
        scale=2 ** (N / 2),
        target=nk.frozen(bo.to_computational(op)),
        operator=op,
        metadata={"kappa": [float(k) for k in op.system.kappa]},
    )


def biortho_amplitudes(op: bo.BiorthogonalOperator, psi) -> tuple[np.ndarray, float]:
    """Prepared amplitudes ``kappa_n c_n / c`` and the normalizer ``c``."""
    c = bo.expand(op.system, psi).coeffs
    amp = op.system.kappa * c
    norm = float(np.linalg.norm(amp))
    return amp / norm, norm


def bind_circuit(plan: DilationPlan, psi) -> qsim.Circuit:
    """Concrete circuit for ``psi`` (fills the biortho prep placeholder)."""
    if plan.method != "biortho":
        return plan.circuit
    psi = _normalized_state(psi, plan.target.shape[0])
    amp, _ = biortho_amplitudes(plan.operator, psi)
    prep = qsim.state_prep_unitary(amp) @ qsim.state_prep_unitary(psi).conj().T
    first = plan.circuit.gates[0]
    bound = qsim.Gate(prep, first.targets, label="prep")
    return qsim.Circuit(plan.circuit.num_qubits, (bound,) + plan.circuit.gates[1:])


def biortho_run(plan: DilationPlan, psi) -> DilationOutcome:
    """Simulate the biorthogonal dilation on ``psi`` and post-select.

    The predicted probability is ``<psi|V^dag V|psi> / (c^2 2^N)`` with
    ``c^2 = sum_n kappa_n^2 |c_n|^2``.
    """
    d = plan.target.shape[0]
    psi = _normalized_state(psi, d)
    _, c = biortho_amplitudes(plan.operator, psi)
    circuit = bind_circuit(plan, psi)
    initial = qsim.StateVector(plan.total_qubits, np.kron(psi, _e0(d)))
    res = _run_and_select(plan, circuit, initial)
    Vpsi = plan.target @ psi
    predicted = float(np.vdot(Vpsi, Vpsi).real) / (c ** 2 * d)
    oracle = bo.apply_via_biortho(plan.operator, psi)
    return DilationOutcome(
        output_state=res.state.amplitudes,
        simulated_probability=res.probability,
        predicted_probability=predicted,
        fidelity_vs_oracle=nk.fidelity(res.state.amplitudes, oracle),
        branch=res.branch,
        scale=c * plan.scale,
        circuit=circuit,
    )


# ---------------------------------------------------------------- LCU


def pauli_strings(n: int):
    for labels in itertools.product("IXYZ", repeat=n):
        P = np.array([[1.0 + 0j]])
        for ch in labels:
            P = np.kron(P, PAULI[ch])
        yield "".join(labels), P


def pauli_decompose(V, *, drop: float = 1e-12) -> list[UnitarySummand]:
    """Positive-weight Pauli decomposition ``V = sum_i w_i U_i``.

    Each coefficient ``a_P = tr(P^dag V) / 2^N`` becomes a summand with
    weight ``|a_P|`` and unitary ``(a_P / |a_P|) P``. Strings are enumerated
    in ``I, X, Y, Z`` lexicographic order, first qubit leftmost.
    """
    V = nk.as_matrix(V)
    n = num_qubits_for(V.shape[0])
    d = V.shape[0]
    out = []
    for label, P in pauli_strings(n):
        a = np.vdot(P, V) / d
        if abs(a) > drop:
            out.append(UnitarySummand(abs(a), (a / abs(a)) * P, label))
    return out


def lcu_plan(summands: Sequence[UnitarySummand]) -> DilationPlan:
    """Prepare / select / unprepare circuit for ``sum_i w_i U_i``.

    Ancilla amplitudes are ``sqrt(w_i / s)`` with ``s = sum_i w_i``; unused
    ancilla values get zero amplitude. Post-selecting the ancilla register
    on ``0`` leaves ``V|psi> / s``.
    """
    summands = tuple(summands)
    if not summands:
        raise ValueError("LCU needs at least one summand")
    d = summands[0].unitary.shape[0]
    N = num_qubits_for(d)
    for s_ in summands:
        if s_.unitary.shape[0] != d:
            raise nk.DimensionMismatch("summands differ in dimension")
    count = len(summands)
    a = math.ceil(math.log2(count)) if count > 1 else 0
    anc = tuple(range(a))
    sysreg = tuple(range(a, a + N))
    nq = a + N
    weights = np.array([s_.weight for s_ in summands])
    s = float(weights.sum())

    gates = []
    if a:
        amps = np.zeros(2 ** a, dtype=np.complex128)
        amps[:count] = np.sqrt(weights / s)
        P = qsim.state_prep_unitary(amps)
        gates.append(qsim.Gate(P, anc, label="prep"))
    for i, s_ in enumerate(summands):
        gates.append(qsim.controlled_on_value(anc, i, s_.unitary, sysreg, label="other"))
    if a:
        gates.append(qsim.Gate(P.conj().T, anc, label="prep"))
    target = sum(s_.weight * s_.unitary for s_ in summands)
    return DilationPlan(
        method="lcu",
        circuit=qsim.Circuit(nq, tuple(gates)),
        ancilla_qubits=a,
        system_qubits=N,
        postselect_register=anc,
        postselect_value=0,
        output_register=sysreg,
        scale=s,
        target=nk.frozen(target),
        summands=summands,
        metadata={"weights": [float(w) for w in weights], "labels": [s_.label for s_ in summands],
                  "weight_sum": s},
    )


def lcu_run(plan: DilationPlan, psi) -> DilationOutcome:
    """Run an LCU plan; predicted probability is ``|V psi|^2 / s^2``."""
    d = plan.target.shape[0]
    psi = _normalized_state(psi, d)
    initial = qsim.StateVector(plan.total_qubits, np.kron(_e0(2 ** plan.ancilla_qubits), psi))
    res = _run_and_select(plan, plan.circuit, initial)
    oracle = plan.target @ psi
    return _outcome(plan, res, oracle, float(np.vdot(oracle, oracle).real) / plan.scale ** 2)


# ---------------------------------------------------------------- Sz.-Nagy


def sznagy_dilation(V, *, atol: float = nk.ATOL) -> np.ndarray:
    """Unitary ``[[V, D_{V^dag}], [D_V, -V^dag]]`` with ``D_V = sqrt(1 - V^dag V)``.

    Raises
    ------
    NotAContraction
        If the largest singular value of ``V`` exceeds one.
    """
    V = nk.as_matrix(V)
    smax = float(nk.singular_values(V)[0])
    if smax > 1.0 + atol:
        raise NotAContraction(f"largest singular value {smax:.12g} exceeds 1; defect operator undefined")
    I = np.eye(V.shape[0])
    try:
        D = nk.sqrt_psd(I - V.conj().T @ V, atol=max(atol, 1e-12))
        Dt = nk.sqrt_psd(I - V @ V.conj().T, atol=max(atol, 1e-12))
    except NotPSD as exc:  # pragma: no cover - guarded by the singular value test
        raise NotAContraction(str(exc)) from exc
    W = np.block([[V, Dt], [D, -V.conj().T]])
    if not nk.is_unitary(W, atol=1e-8):
        raise NotAContraction("defect-operator dilation failed the unitarity check")
    return W


def sznagy_plan(V) -> DilationPlan:
    V = nk.as_matrix(V)
    N = num_qubits_for(V.shape[0])
    W = sznagy_dilation(V)
    nq = N + 1
    defect = np.clip(np.linalg.eigvalsh(np.eye(V.shape[0]) - V.conj().T @ V), 0.0, None)
    gate = qsim.Gate(W, tuple(range(nq)), label="other", check_unitary=False)
    return DilationPlan(
        method="sznagy",
        circuit=qsim.Circuit(nq, (gate,)),
        ancilla_qubits=1,
        system_qubits=N,
        postselect_register=(0,),
        postselect_value=0,
        output_register=tuple(range(1, nq)),
        scale=1.0,
        target=nk.frozen(V),
        metadata={"defect_spectrum": [float(x) for x in np.sqrt(defect)]},
    )


def sznagy_run(plan: DilationPlan, psi) -> DilationOutcome:
    """Run a Sz.-Nagy plan; predicted probability is ``|V psi|^2``."""
    d = plan.target.shape[0]
    psi = _normalized_state(psi, d)
    initial = qsim.StateVector(plan.total_qubits, np.kron(_e0(2), psi))
    res = _run_and_select(plan, plan.circuit, initial)
    oracle = plan.target @ psi
    return _outcome(plan, res, oracle, float(np.vdot(oracle, oracle).real))


# ---------------------------------------------------------------- dispatch


def run_plan(plan: DilationPlan, psi) -> DilationOutcome:
    runner = {"biortho": biortho_run, "lcu": lcu_run, "sznagy": sznagy_run}[plan.method]
    return runner(plan, psi)


def build_plan(method: str, V, kappa_policy="modulus", *, tol: float = nk.RTOL) -> DilationPlan:
    if method == "biortho":
        _, op = bo.from_eigen(V, kappa_policy, tol=tol)
        return biortho_plan(op)
    if method == "lcu":
        return lcu_plan(pauli_decompose(V))
    if method == "sznagy":
        return sznagy_plan(V)
    raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")


@dataclass(frozen=True)
class MethodResult:
    method: str
    applicable: bool
    error: str | None = None
    ancillas: int | None = None
    census: dict | None = None
    predicted_p: float | None = None
    simulated_p: float | None = None
    fidelity: float | None = None
    notes: tuple[str, ...] = ()


@dataclass(frozen=True)
class Classification:
    eigenvalues: tuple[complex, ...]
    eigenvalue_moduli: tuple[float, ...]
    sigma_max: float
    contraction: bool  # operator norm <= 1
    spectral_contraction: bool  # all |lambda| <= 1


@dataclass(frozen=True)
class ComparisonReport:
    classification: Classification
    results: tuple[MethodResult, ...]

    def result(self, method: str) -> MethodResult:
        return next(r for r in self.results if r.method == method)


def classify(V, *, atol: float = nk.ATOL) -> Classification:
    V = nk.as_matrix(V)
    smax = float(nk.singular_values(V)[0])
    lam = np.linalg.eigvals(V)
    order = nk._eig_order(lam, atol)
    lam = lam[order]
    mods = np.abs(lam)
    return Classification(tuple(complex(x) for x in lam), tuple(float(m) for m in mods),
                          smax, smax <= 1.0 + atol, bool(np.all(mods <= 1.0 + atol)))


def lcu_deviation_note(plan: DilationPlan, psi) -> tuple[str, float, float]:
    """Compare ``|V psi|^2 / s`` (amplitude 1/sqrt(s)) with the exact ``|V psi|^2 / s^2``."""
    Vpsi = plan.target @ psi
    n2 = float(np.vdot(Vpsi, Vpsi).real)
    s = plan.scale
    loose = n2 / s
    exact = n2 / s ** 2
    note = (f"exact LCU success probability is |V psi|^2/s^2 = {exact:.12g} with s = {s:.12g}; "
            f"the |V psi|^2/s estimate ({loose:.12g}) overstates it by a factor {s:.12g}")
    return note, loose, exact


def compare(V, psi, kappa_policy="modulus", methods: Sequence[str] = METHODS, *,
            tol: float = nk.RTOL) -> ComparisonReport:
    """Run every applicable backend on the same ``(V, psi)``.

    Backend failures are recorded in the report instead of raised.
    """
    V = nk.as_matrix(V)
    num_qubits_for(V.shape[0])
    psi = _normalized_state(psi, V.shape[0])
    cls = classify(V)
    reference = V @ psi
    results = []
    for method in methods:
        notes: list[str] = []
        try:
            plan = build_plan(method, V, kappa_policy, tol=tol)
            outcome = run_plan(plan, psi)
        except (BiodilateError, np.linalg.LinAlgError) as exc:
            results.append(MethodResult(method, False, f"{type(exc).__name__}: {exc}"))
            continue
        if method == "lcu":
            notes.append(lcu_deviation_note(plan, psi)[0])
            notes.append(f"{len(plan.summands)} unitary summands")
        if method == "biortho":
            notes.append(f"kappa = {plan.metadata['kappa']}")
        census = qsim.gate_census(bind_circuit(plan, psi)).as_dict()
        results.append(MethodResult(
            method, True, None, plan.ancilla_qubits, census,
            outcome.predicted_probability, outcome.simulated_probability,
            nk.fidelity(outcome.output_state, reference), tuple(notes)))
    return ComparisonReport(cls, tuple(results))


# ---------------------------------------------------------------- helpers


def _e0(d: int) -> np.ndarray:
    e = np.zeros(d, dtype=np.complex128)
    e[0] = 1.0
    return e


def _normalized_state(psi, d: int, atol: float = 1e-8) -> np.ndarray:
    v = nk.as_vector(psi, name="state")
    if v.size != d:
        raise nk.DimensionMismatch(f"state of length {v.size} for a {d}-dimensional operator")
    n = np.linalg.norm(v)
    if abs(n - 1.0) > atol:
        raise qsim.UnnormalizedTarget(f"input state norm {n:.12g} is not 1")
    return v / n


def _run_and_select(plan: DilationPlan, circuit: qsim.Circuit, initial: qsim.StateVector):
    final = qsim.run(initial, circuit)
    return qsim.postselect(final, plan.postselect_register, plan.postselect_value)


def _outcome(plan, res, oracle, predicted) -> DilationOutcome:
    return DilationOutcome(
        output_state=res.state.amplitudes,
        simulated_probability=res.probability,
        predicted_probability=predicted,
        fidelity_vs_oracle=nk.fidelity(res.state.amplitudes, oracle),
        branch=res.branch,
        scale=plan.scale,
        circuit=plan.circuit,
    )
