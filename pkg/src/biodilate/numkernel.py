"""Dense complex linear algebra shared by the rest of the package.

Matrices and vectors are plain ``numpy`` arrays of dtype ``complex128``.
Every function returns fresh arrays and never mutates its arguments.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .exceptions import (
    Defective,
    DimensionMismatch,
    NoConvergence,
    NonFiniteInput,
    NotHermitian,
    NotPSD,
    ZeroVector,
)

ATOL = 1e-10
RTOL = 1e-9
MAX_CONDITION = 1e8


def as_matrix(M, *, name: str = "matrix") -> np.ndarray:
    """Coerce ``M`` to a finite, square ``complex128`` array."""
    A = np.array(M, dtype=np.complex128)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise DimensionMismatch(f"{name} must be a non-empty square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise NonFiniteInput(f"{name} has non-finite entries")
    return A


def as_vector(v, *, name: str = "vector") -> np.ndarray:
    a = np.array(v, dtype=np.complex128)
    if a.ndim != 1 or a.size == 0:
        raise DimensionMismatch(f"{name} must be a non-empty 1-D array, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NonFiniteInput(f"{name} has non-finite entries")
    return a


def frozen(a: np.ndarray) -> np.ndarray:
    """Return a read-only copy of ``a``."""
    out = np.array(a, dtype=np.complex128, copy=True)
    out.flags.writeable = False
    return out


def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=np.complex128)


def adjoint(M) -> np.ndarray:
    return as_matrix(M).conj().T.copy()


def matmul(A, B) -> np.ndarray:
    A, B = as_matrix(A, name="A"), as_matrix(B, name="B")
    if A.shape[1] != B.shape[0]:
        raise DimensionMismatch(f"cannot multiply {A.shape} by {B.shape}")
    return A @ B


def matvec(A, v) -> np.ndarray:
    A, v = as_matrix(A, name="A"), as_vector(v, name="v")
    if A.shape[1] != v.shape[0]:
        raise DimensionMismatch(f"cannot apply {A.shape} matrix to vector of length {v.shape[0]}")
    return A @ v


def is_unitary(M, atol: float = ATOL) -> bool:
    M = np.asarray(M)
    return bool(np.allclose(M.conj().T @ M, np.eye(M.shape[0]), rtol=0.0, atol=atol))


def is_hermitian(M, atol: float = ATOL) -> bool:
    M = np.asarray(M)
    return bool(np.allclose(M, M.conj().T, rtol=0.0, atol=atol))


def frobenius(M) -> float:
    return float(np.linalg.norm(M, "fro"))


@dataclass(frozen=True)
class EigenSystem:
    """Right/left eigendata of a diagonalizable matrix.

    Attributes
    ----------
    eigenvalues : ndarray, shape (d,)
    right_vectors : ndarray, shape (d, d)
        Column ``n`` is the unit-norm right eigenvector for ``eigenvalues[n]``.
    left_rows : ndarray, shape (d, d)
        Row ``n`` satisfies ``left_rows[n] @ right_vectors[:, m] == delta_nm``.
    condition : float
        2-norm condition number of ``right_vectors``.
    """

    eigenvalues: np.ndarray
    right_vectors: np.ndarray
    left_rows: np.ndarray
    condition: float

    def reconstruct(self) -> np.ndarray:
        return (self.right_vectors * self.eigenvalues) @ self.left_rows


def _phase(z: complex, atol: float) -> float:
    # (-pi, pi]; values numerically on the negative real axis map to +pi
    if abs(z) <= atol:
        return 0.0
    ang = float(np.angle(z))
    if ang <= -np.pi + 1e-12:
        ang = np.pi
    return ang


def _eig_order(vals: np.ndarray, atol: float) -> list[int]:
    scale = max(1.0, float(np.max(np.abs(vals)))) if vals.size else 1.0
    tie = 1e-9 * scale

    def cmp(i: int, j: int) -> int:
        mi, mj = abs(vals[i]), abs(vals[j])
        if abs(mi - mj) > tie:
            return -1 if mi > mj else 1
        pi, pj = _phase(vals[i], atol), _phase(vals[j], atol)
        if abs(pi - pj) > 1e-9:
            return -1 if pi < pj else 1
        return i - j

    return sorted(range(vals.size), key=functools.cmp_to_key(cmp))


def eig(M, *, max_condition: float = MAX_CONDITION, atol: float = ATOL) -> EigenSystem:
    """Eigendecomposition with biorthonormal left rows.

    Eigenvalues are sorted by descending modulus; equal moduli are ordered
    by ascending phase in (-pi, pi], so ``1`` precedes ``-1``. Each right
    eigenvector is scaled to unit norm and phased so that its first
    largest-modulus component is real and positive.

    Raises
    ------
    Defective
        If the eigenvector matrix has condition number above ``max_condition``.
    NoConvergence
        If LAPACK fails to converge.
    """
    A = as_matrix(M)
    try:
        vals, vecs = np.linalg.eig(A)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure path
        raise NoConvergence(str(exc)) from exc
    order = _eig_order(vals, atol)
    vals = vals[order]
    vecs = vecs[:, order]

    vecs = vecs / np.linalg.norm(vecs, axis=0)
    for n in range(vecs.shape[1]):
        col = vecs[:, n]
        mags = np.abs(col)
        k = int(np.flatnonzero(mags >= mags.max() * (1 - 1e-12))[0])
        vecs[:, n] = col * (abs(col[k]) / col[k])

    cond = float(np.linalg.cond(vecs))
    if not np.isfinite(cond) or cond > max_condition:
        raise Defective(f"eigenvector condition number {cond:.3g} exceeds {max_condition:.3g}")
    left = np.linalg.inv(vecs)
    return EigenSystem(frozen(vals), frozen(vecs), frozen(left), cond)


def singular_values(M) -> np.ndarray:
    """Singular values in descending order."""
    A = as_matrix(M)
    try:
        return np.linalg.svd(A, compute_uv=False)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise NoConvergence(str(exc)) from exc


def sqrt_psd(M, *, atol: float = ATOL, rtol: float = RTOL) -> np.ndarray:
    """Hermitian positive semidefinite square root.

    Eigenvalues in ``[-atol, 0)`` are clamped to zero. Anything more negative
    raises :class:`NotPSD`.
    """
    A = as_matrix(M)
    scale = max(1.0, frobenius(A))
    if frobenius(A - A.conj().T) > max(atol, rtol * scale):
        raise NotHermitian("matrix is not Hermitian")
    A = 0.5 * (A + A.conj().T)
    w, Q = np.linalg.eigh(A)
    if w.min() < -atol:
        raise NotPSD(f"smallest eigenvalue {w.min():.6g} is negative")
    w = np.clip(w, 0.0, None)
    R = (Q * np.sqrt(w)) @ Q.conj().T
    return 0.5 * (R + R.conj().T)


def fidelity(a, b) -> float:
    """Normalized overlap ``|<a|b>|^2 / (|a|^2 |b|^2)``; insensitive to global phase."""
    a, b = as_vector(a, name="a"), as_vector(b, name="b")
    if a.shape != b.shape:
        raise DimensionMismatch(f"vectors of length {a.size} and {b.size}")
    na, nb = np.vdot(a, a).real, np.vdot(b, b).real
    if na == 0.0 or nb == 0.0:
        raise ZeroVector("fidelity is undefined for a zero vector")
    f = abs(np.vdot(a, b)) ** 2 / (na * nb)
    return float(min(1.0, f))
