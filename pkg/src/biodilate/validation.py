"""Input checks for the estimator front end."""

from __future__ import annotations

import numpy as np

from . import numkernel as nk
from .dilate import num_qubits_for
from .exceptions import DimensionMismatch, UnnormalizedTarget


def check_operator(V) -> np.ndarray:
    """Return ``V`` as a finite complex square matrix of power-of-two size."""
    A = nk.as_matrix(V, name="operator")
    num_qubits_for(A.shape[0])
    return A


def check_states(X, dim: int, *, renormalize: bool = False, atol: float = 1e-8) -> np.ndarray:
    """Return ``X`` as a 2-D complex array of unit-norm rows of length ``dim``.

    A single 1-D state is promoted to one row.
    """
    A = np.array(X, dtype=np.complex128)
    if A.ndim == 1:
        A = A[None, :]
    if A.ndim != 2 or A.shape[1] != dim:
        raise DimensionMismatch(f"expected states of length {dim}, got array of shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise nk.NonFiniteInput("states contain non-finite values")
    norms = np.linalg.norm(A, axis=1)
    if np.any(norms == 0):
        raise nk.ZeroVector("zero state")
    if not renormalize and np.any(np.abs(norms - 1.0) > atol):
        raise UnnormalizedTarget("states must have unit norm (pass renormalize=True to rescale)")
    return A / norms[:, None]
