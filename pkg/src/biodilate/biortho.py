"""Biorthogonal systems and operators expressed in a biorthogonal basis.

A :class:`BiorthogonalSystem` pairs a right basis ``u_n`` (unit norm) with
a left basis ``zeta_n`` such that ``<zeta_n|u_m> = kappa_n delta_nm`` with
``kappa_n > 0``. Bases are stored as matrix columns. A
:class:`BiorthogonalOperator` attaches a representation matrix ``rep`` so
that the operator acts as ``sum_nm rep[n, m] |u_n><zeta_m|``.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from . import numkernel as nk
from .exceptions import (
    BiorthogonalityViolation,
    DimensionMismatch,
    ExplicitKappaInvalid,
    NonPositiveKappa,
    ReconstructionFailure,
    SingularWithModulusPolicy,
)

KAPPA_POLICIES = ("modulus", "ones")


@dataclass(frozen=True)
class BiorthogonalSystem:
    """Paired right/left bases.

    Use :func:`from_explicit` or :func:`from_eigen` to build a checked
    system. The raw constructor performs only shape checks, which lets
    :func:`validate` report on deliberately broken inputs.
    """

    u: np.ndarray  # columns u_n
    zeta: np.ndarray  # columns zeta_n
    kappa: np.ndarray  # real, shape (dim,)

    def __post_init__(self):
        u = nk.as_matrix(self.u, name="u")
        z = nk.as_matrix(self.zeta, name="zeta")
        k = np.array(self.kappa, dtype=float)
        if z.shape != u.shape or k.shape != (u.shape[0],):
            raise DimensionMismatch("u, zeta and kappa sizes disagree")
        k.flags.writeable = False
        object.__setattr__(self, "u", nk.frozen(u))
        object.__setattr__(self, "zeta", nk.frozen(z))
        object.__setattr__(self, "kappa", k)

    @property
    def dim(self) -> int:
        return self.u.shape[0]


@dataclass(frozen=True)
class BiorthogonalOperator:
    system: BiorthogonalSystem
    rep: np.ndarray

    def __post_init__(self):
        rep = nk.as_matrix(self.rep, name="rep")
        if rep.shape[0] != self.system.dim:
            raise DimensionMismatch("rep and system dimensions differ")
        object.__setattr__(self, "rep", nk.frozen(rep))


@dataclass(frozen=True)
class BiorthoExpansion:
    coeffs: np.ndarray
    system: BiorthogonalSystem = field(repr=False)

    def reconstruct(self) -> np.ndarray:
        return self.system.u @ self.coeffs


@dataclass(frozen=True)
class ValidationReport:
    max_overlap_deviation: float
    max_norm_deviation: float
    min_kappa: float
    condition: float
    passed: bool
    failures: tuple[str, ...] = ()


def validate(system: BiorthogonalSystem, *, tol: float = nk.RTOL,
             max_condition: float = nk.MAX_CONDITION) -> ValidationReport:
    """Check the biorthogonality relations of ``system`` without raising."""
    gram = system.zeta.conj().T @ system.u  # gram[n, m] = <zeta_n|u_m>
    expected = np.diag(system.kappa).astype(complex)
    scale = np.maximum(1.0, np.linalg.norm(system.zeta, axis=0))[:, None]
    overlap_dev = float(np.max(np.abs(gram - expected) / scale))
    norm_dev = float(np.max(np.abs(np.linalg.norm(system.u, axis=0) - 1.0)))
    min_kappa = float(np.min(system.kappa))
    cond = float(np.linalg.cond(system.u))

    failures = []
    if overlap_dev > tol:
        failures.append(f"<zeta_n|u_m> deviates from kappa_n delta_nm by {overlap_dev:.3g}")
    if norm_dev > tol:
        failures.append(f"|u_n| deviates from 1 by {norm_dev:.3g}")
    if min_kappa <= tol:
        failures.append(f"kappa has non-positive entry {min_kappa:.3g}")
    if not np.isfinite(cond) or cond > max_condition:
        failures.append(f"right basis condition number {cond:.3g} too large")
    return ValidationReport(overlap_dev, norm_dev, min_kappa, cond, not failures, tuple(failures))


def _as_vector_list(vs, name: str) -> np.ndarray:
    arr = np.array(vs, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch(f"{name} must be a list of dim vectors of length dim")
    return arr.T.copy()  # vectors become columns


def from_explicit(u: Sequence, zeta: Sequence, *, tol: float = nk.RTOL) -> BiorthogonalSystem:
    """Build a system from explicit vector lists ``u[n]`` and ``zeta[n]``.

    Each ``u[n]`` is rescaled to unit norm; ``zeta`` is kept as given and
    ``kappa_n = <zeta_n|u_n>`` is computed afterwards.

    Raises
    ------
    NonPositiveKappa
        If some ``<zeta_n|u_n>`` is not a positive real number.
    BiorthogonalityViolation
        If an off-diagonal overlap exceeds ``tol``.
    """
    U = _as_vector_list(u, "u")
    Z = _as_vector_list(zeta, "zeta")
    if U.shape != Z.shape:
        raise DimensionMismatch("u and zeta differ in shape")
    norms = np.linalg.norm(U, axis=0)
    if np.any(norms == 0):
        raise NonPositiveKappa("zero vector in u")
    U = U / norms
    diag = np.einsum("in,in->n", Z.conj(), U)
    for n, k in enumerate(diag):
        if k.real <= tol or abs(k.imag) > tol * max(1.0, abs(k)):
            raise NonPositiveKappa(f"<zeta_{n}|u_{n}> = {complex(k):.6g} is not positive")
    system = BiorthogonalSystem(U, Z, diag.real)
    report = validate(system, tol=tol)
    if not report.passed:
        raise BiorthogonalityViolation("; ".join(report.failures))
    return system


def from_eigen(V, kappa_policy="modulus", *, tol: float = nk.RTOL,
               max_condition: float = nk.MAX_CONDITION
               ) -> tuple[BiorthogonalSystem, BiorthogonalOperator]:
    """Biorthogonal system from the right/left eigenvectors of ``V``.

    Parameters
    ----------
    V : array_like, shape (d, d)
        Diagonalizable matrix.
    kappa_policy : {"modulus", "ones"} or sequence of float
        ``"modulus"`` sets ``kappa_n = |lambda_n|`` which makes
        ``rep = diag(lambda_n / |lambda_n|)`` unitary for every invertible
        ``V``. ``"ones"`` gives ``rep = diag(lambda_n)``. A sequence is used
        verbatim as ``kappa``.

    Returns
    -------
    system, operator
        ``to_computational(operator)`` reproduces ``V``.
    """
    es = nk.eig(V, max_condition=max_condition)
    lam = es.eigenvalues
    d = lam.size
    if isinstance(kappa_policy, str):
        if kappa_policy == "modulus":
            mods = np.abs(lam)
            if np.any(mods <= nk.ATOL * max(1.0, mods.max())):
                raise SingularWithModulusPolicy("V has a zero eigenvalue; kappa = |lambda| would vanish")
            kappa = mods
        elif kappa_policy == "ones":
            kappa = np.ones(d)
        else:
            raise ValueError(f"unknown kappa policy {kappa_policy!r}; expected one of {KAPPA_POLICIES}")
    else:
        kappa = np.array(kappa_policy, dtype=float)
        if kappa.shape != (d,) or not np.all(np.isfinite(kappa)) or np.any(kappa <= 0):
            raise ExplicitKappaInvalid(f"explicit kappa must be {d} positive finite values")

    zeta = es.left_rows.conj().T * kappa  # column n = kappa_n * conj(left row n)
    system = BiorthogonalSystem(es.right_vectors, zeta, kappa)
    report = validate(system, tol=tol, max_condition=max_condition)
    if not report.passed:
        raise BiorthogonalityViolation("; ".join(report.failures))
    return system, BiorthogonalOperator(system, np.diag(lam / kappa))


def metric(system: BiorthogonalSystem) -> np.ndarray:
    """``f = sum_n |zeta_n><zeta_n| / kappa_n``; maps ``u_n`` to ``zeta_n``."""
    Z = system.zeta
    return (Z / system.kappa) @ Z.conj().T


def metric_inverse(system: BiorthogonalSystem) -> np.ndarray:
    U = system.u
    return (U / system.kappa) @ U.conj().T


def associate(system: BiorthogonalSystem, psi) -> np.ndarray:
    """Associated state ``f |psi>``."""
    return metric(system) @ _vec(system, psi)


def expand(system: BiorthogonalSystem, psi, *, tol: float = nk.RTOL) -> BiorthoExpansion:
    """Coefficients ``c_n = <zeta_n|psi> / kappa_n`` with ``sum_n c_n u_n = psi``."""
    psi = _vec(system, psi)
    c = (system.zeta.conj().T @ psi) / system.kappa
    residual = np.linalg.norm(system.u @ c - psi)
    if residual > tol * max(1.0, np.linalg.norm(psi)):
        raise ReconstructionFailure(f"expansion residual {residual:.3g} exceeds tolerance")
    return BiorthoExpansion(nk.frozen(c), system)


def bi_inner(system: BiorthogonalSystem, phi, psi) -> complex:
    """Biorthogonal inner product ``sum_n kappa_n conj(d_n) c_n``."""
    d = expand(system, phi).coeffs
    c = expand(system, psi).coeffs
    return complex(np.sum(system.kappa * d.conj() * c))


def to_computational(op: BiorthogonalOperator) -> np.ndarray:
    s = op.system
    return s.u @ op.rep @ s.zeta.conj().T


def bi_adjoint(op: BiorthogonalOperator) -> BiorthogonalOperator:
    return BiorthogonalOperator(op.system, op.rep.conj().T)


def is_bi_unitary(op: BiorthogonalOperator, *, atol: float = nk.ATOL) -> bool:
    kappa_ones = np.allclose(op.system.kappa, 1.0, rtol=0.0, atol=atol)
    return kappa_ones and nk.is_unitary(op.rep, atol=atol)


def pseudo_unitarity_residual(op: BiorthogonalOperator) -> float:
    """``|| Vc^dagger f Vc - f ||_F`` in the computational basis."""
    Vc = to_computational(op)
    f = metric(op.system)
    return nk.frobenius(Vc.conj().T @ f @ Vc - f)


def is_bi_hermitian(op: BiorthogonalOperator, *, atol: float = nk.ATOL) -> bool:
    return nk.is_hermitian(op.rep, atol=atol)


def pseudo_hermiticity_residual(V_comp, f) -> float:
    """``|| V^dagger f - f V ||_F``."""
    V = nk.as_matrix(V_comp)
    f = nk.as_matrix(f)
    return nk.frobenius(V.conj().T @ f - f @ V)


def apply_via_biortho(op: BiorthogonalOperator, psi) -> np.ndarray:
    """Classical evaluation of ``V|psi>`` through the biorthogonal expansion.

    Computes ``sum_nm rep[n, m] kappa_m c_m u_n``; independent of
    :func:`to_computational` and used as a reference for circuit outputs.
    """
    s = op.system
    c = expand(s, psi).coeffs
    return s.u @ (op.rep @ (s.kappa * c))


def _vec(system: BiorthogonalSystem, psi) -> np.ndarray:
    v = nk.as_vector(psi, name="state")
    if v.size != system.dim:
        raise DimensionMismatch(f"state of length {v.size} for a {system.dim}-dimensional system")
    return v
