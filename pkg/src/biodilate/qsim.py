"""Exact dense statevector simulation.

Qubit ``0`` is the most significant bit of a basis index, and registers are
read big-endian in the order their qubits are listed. Gates act on an
amplitude tensor of shape ``(2,) * num_qubits``; multi-controlled gates are
applied by slicing the control axes rather than by decomposition.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from . import numkernel as nk
from .exceptions import (
    DimensionMismatch,
    IndexOutOfRange,
    NonUnitaryGate,
    UnnormalizedTarget,
    ValueOutOfRange,
    ZeroProbabilityBranch,
)

LABELS = ("prep", "rep", "controlled-basis", "qft", "other")
ZERO_PROBABILITY = 1e-14

H = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)
X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=np.complex128)


def value_bits(value: int, width: int) -> tuple[int, ...]:
    """Big-endian bits of ``value`` on ``width`` qubits."""
    return tuple((value >> (width - 1 - i)) & 1 for i in range(width))


@dataclass(frozen=True)
class Gate:
    """A (multi-)controlled unitary on ``targets``.

    ``controls`` is a tuple of ``(qubit, required_bit)`` pairs. The matrix
    acts on the target qubits in the listed order, first target most
    significant.
    """

    matrix: np.ndarray
    targets: tuple[int, ...]
    controls: tuple[tuple[int, int], ...] = ()
    label: str = "other"
    check_unitary: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        m = nk.as_matrix(self.matrix, name="gate matrix")
        targets = tuple(int(t) for t in self.targets)
        controls = tuple((int(q), int(b)) for q, b in self.controls)
        if m.shape[0] != 2 ** len(targets):
            raise DimensionMismatch(f"{m.shape[0]}x{m.shape[0]} matrix on {len(targets)} targets")
        touched = list(targets) + [q for q, _ in controls]
        if len(set(touched)) != len(touched):
            raise ValueError("targets and controls must be distinct qubits")
        if any(b not in (0, 1) for _, b in controls):
            raise ValueError("control bits must be 0 or 1")
        if self.check_unitary and not nk.is_unitary(m, atol=nk.ATOL):
            raise NonUnitaryGate("gate matrix is not unitary")
        object.__setattr__(self, "matrix", nk.frozen(m))
        object.__setattr__(self, "targets", targets)
        object.__setattr__(self, "controls", controls)
        object.__setattr__(self, "check_unitary", False)

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.targets + tuple(q for q, _ in self.controls)


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        gates = tuple(self.gates)
        for g in gates:
            if any(q < 0 or q >= self.num_qubits for q in g.qubits):
                raise IndexOutOfRange(f"gate touches qubits {g.qubits} on a {self.num_qubits}-qubit circuit")
        object.__setattr__(self, "gates", gates)

    def __add__(self, other: "Circuit") -> "Circuit":
        if other.num_qubits != self.num_qubits:
            raise DimensionMismatch("cannot concatenate circuits of different widths")
        return Circuit(self.num_qubits, self.gates + other.gates)

    def __len__(self):
        return len(self.gates)

    def with_gates(self, gates: Sequence[Gate]) -> "Circuit":
        return Circuit(self.num_qubits, self.gates + tuple(gates))

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(g.label for g in self.gates)

    def unitary(self) -> np.ndarray:
        """Full ``2**n x 2**n`` matrix; intended for small circuits and tests."""
        d = 2 ** self.num_qubits
        cols = [run(StateVector.basis(self.num_qubits, k), self).amplitudes for k in range(d)]
        return np.array(cols).T


@dataclass(frozen=True)
class StateVector:
    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        a = nk.as_vector(self.amplitudes, name="amplitudes")
        if a.size != 2 ** self.num_qubits:
            raise DimensionMismatch(f"{a.size} amplitudes for {self.num_qubits} qubits")
        object.__setattr__(self, "amplitudes", nk.frozen(a))

    @classmethod
    def from_amplitudes(cls, amplitudes) -> "StateVector":
        a = nk.as_vector(amplitudes, name="amplitudes")
        q = int(a.size).bit_length() - 1
        if 2 ** q != a.size:
            raise DimensionMismatch(f"length {a.size} is not a power of two")
        return cls(q, a)

    @classmethod
    def basis(cls, num_qubits: int, index: int = 0) -> "StateVector":
        a = np.zeros(2 ** num_qubits, dtype=np.complex128)
        a[index] = 1.0
        return cls(num_qubits, a)

    def tensor(self, other: "StateVector") -> "StateVector":
        return StateVector(self.num_qubits + other.num_qubits,
                           np.kron(self.amplitudes, other.amplitudes))

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass(frozen=True)
class PostSelectionResult:
    state: StateVector
    probability: float
    branch: np.ndarray  # unnormalized amplitudes of the selected branch


def _apply_tensor(psi: np.ndarray, gate: Gate, nq: int) -> np.ndarray:
    idx: list = [slice(None)] * nq
    for q, b in gate.controls:
        idx[q] = b
    idx_t = tuple(idx)
    sub = psi[idx_t]
    free = [a for a in range(nq) if idx[a] == slice(None)]
    tpos = [free.index(t) for t in gate.targets]
    k = len(gate.targets)
    m = gate.matrix.reshape((2,) * (2 * k))
    new = np.tensordot(m, sub, axes=(list(range(k, 2 * k)), tpos))
    new = np.moveaxis(new, list(range(k)), tpos)
    out = psi.copy()
    out[idx_t] = new
    return out


def apply(state: StateVector, gate: Gate) -> StateVector:
    nq = state.num_qubits
    if any(q < 0 or q >= nq for q in gate.qubits):
        raise IndexOutOfRange(f"gate touches qubits {gate.qubits} on a {nq}-qubit state")
    psi = state.amplitudes.reshape((2,) * nq)
    return StateVector(nq, _apply_tensor(psi, gate, nq).reshape(-1))


def run(state: StateVector, circuit: Circuit) -> StateVector:
    nq = state.num_qubits
    if circuit.num_qubits != nq:
        raise DimensionMismatch(f"{circuit.num_qubits}-qubit circuit on a {nq}-qubit state")
    psi = state.amplitudes.reshape((2,) * nq)
    for g in circuit.gates:
        psi = _apply_tensor(psi, g, nq)
    return StateVector(nq, psi.reshape(-1))


def qft_circuit(register: Sequence[int], num_qubits: int | None = None) -> Circuit:
    """QFT ``|n> -> 2^{-N/2} sum_k exp(2 pi i n k / 2^N) |k>`` on ``register``.

    The first listed qubit is the most significant. Trailing swaps restore
    the natural bit order, so the circuit matrix equals the DFT matrix.
    """
    reg = list(register)
    if not reg:
        raise ValueError("QFT register must be non-empty")
    nq = num_qubits if num_qubits is not None else max(reg) + 1
    gates = []
    n = len(reg)
    for j in range(n):
        gates.append(Gate(H, (reg[j],), label="qft"))
        for k in range(j + 1, n):
            theta = 2 * np.pi / 2 ** (k - j + 1)
            phase = np.diag([1.0, np.exp(1j * theta)])
            gates.append(Gate(phase, (reg[j],), ((reg[k], 1),), label="qft"))
    for j in range(n // 2):
        gates.append(Gate(SWAP, (reg[j], reg[n - 1 - j]), label="qft"))
    return Circuit(nq, tuple(gates))


def hadamard_layer(register: Sequence[int], num_qubits: int | None = None) -> Circuit:
    reg = list(register)
    nq = num_qubits if num_qubits is not None else max(reg) + 1
    return Circuit(nq, tuple(Gate(H, (q,), label="qft") for q in reg))


def controlled_on_value(control_register: Sequence[int], value: int, U,
                        target_register: Sequence[int], *, label: str = "controlled-basis") -> Gate:
    """Apply ``U`` to ``target_register`` iff ``control_register`` reads ``value``."""
    ctrl = list(control_register)
    if not 0 <= value < 2 ** len(ctrl):
        raise ValueOutOfRange(f"value {value} does not fit in {len(ctrl)} control qubits")
    bits = value_bits(value, len(ctrl))
    return Gate(U, tuple(target_register), tuple(zip(ctrl, bits)), label=label)


def state_prep_unitary(target, *, atol: float = nk.ATOL) -> np.ndarray:
    """Unitary whose first column is ``target``.

    Built from a Householder reflection sending ``e_0`` to the target with
    its leading phase removed, then multiplied by that phase.
    """
    t = nk.as_vector(target, name="target")
    if abs(np.linalg.norm(t) - 1.0) > max(atol, 1e-10):
        raise UnnormalizedTarget(f"target norm is {np.linalg.norm(t):.12g}, expected 1")
    t = t / np.linalg.norm(t)
    d = t.size
    phase = t[0] / abs(t[0]) if abs(t[0]) > 0 else 1.0
    t_hat = t / phase  # t_hat[0] real and >= 0
    w = t_hat.copy()
    w[0] -= 1.0
    nw = np.linalg.norm(w)
    if nw < 1e-15:
        return phase * np.eye(d, dtype=np.complex128)
    w /= nw
    P = np.eye(d, dtype=np.complex128) - 2.0 * np.outer(w, w.conj())
    return phase * P


def postselect(state: StateVector, register: Sequence[int], value: int) -> PostSelectionResult:
    """Project ``register`` onto ``|value>`` and renormalize the rest.

    Remaining qubits keep their relative order.
    """
    nq = state.num_qubits
    reg = list(register)
    if any(q < 0 or q >= nq for q in reg):
        raise IndexOutOfRange(f"register {reg} outside {nq} qubits")
    if not 0 <= value < 2 ** len(reg):
        raise ValueOutOfRange(f"value {value} does not fit in {len(reg)} qubits")
    idx: list = [slice(None)] * nq
    for q, b in zip(reg, value_bits(value, len(reg))):
        idx[q] = b
    branch = state.amplitudes.reshape((2,) * nq)[tuple(idx)].reshape(-1).copy()
    p = float(np.vdot(branch, branch).real)
    if p < ZERO_PROBABILITY:
        raise ZeroProbabilityBranch(f"outcome {value} has probability {p:.3g}")
    rest = nq - len(reg)
    return PostSelectionResult(StateVector(rest, branch / np.sqrt(p)), min(p, 1.0), nk.frozen(branch))


def outcome_probabilities(state: StateVector, register: Sequence[int]) -> np.ndarray:
    """Probability of every value of ``register``."""
    nq = state.num_qubits
    reg = list(register)
    others = [q for q in range(nq) if q not in reg]
    t = np.abs(state.amplitudes.reshape((2,) * nq)) ** 2
    t = np.transpose(t, reg + others).reshape(2 ** len(reg), -1)
    return t.sum(axis=1)


@dataclass(frozen=True)
class GateCensus:
    """Gate counts of a circuit.

    ``elementary_estimate`` counts each QFT gate (rotation or swap) as one
    elementary gate and each controlled basis gate as one oracle-level unit
    plus its control width. ``prep`` gates are oracles and are excluded.
    """

    counts: dict
    qft_rotations: int
    qft_swaps: int
    controlled_units: int
    prep_oracle_calls: int
    elementary_estimate: int

    def as_dict(self) -> dict:
        return {
            "counts": {k: int(self.counts.get(k, 0)) for k in sorted(set(LABELS) | set(self.counts))},
            "qft_rotations": self.qft_rotations,
            "qft_swaps": self.qft_swaps,
            "controlled_units": self.controlled_units,
            "prep_oracle_calls": self.prep_oracle_calls,
            "elementary_estimate": self.elementary_estimate,
        }


def gate_census(circuit: Circuit) -> GateCensus:
    counts = Counter(g.label for g in circuit.gates)
    qft_swaps = sum(1 for g in circuit.gates if g.label == "qft" and len(g.targets) == 2)
    qft_rot = counts.get("qft", 0) - qft_swaps
    controlled_units = sum(1 + len(g.controls) for g in circuit.gates if g.label == "controlled-basis")
    other = sum(1 + len(g.controls) for g in circuit.gates if g.label in ("rep", "other"))
    elementary = qft_rot + qft_swaps + controlled_units + other
    return GateCensus(dict(counts), qft_rot, qft_swaps, controlled_units,
                      counts.get("prep", 0), elementary)
