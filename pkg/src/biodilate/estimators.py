"""scikit-learn style front end.

``fit`` takes the non-unitary operator and builds a dilation plan;
``transform`` maps a batch of input states (one per row) to the normalized
post-selected outputs. Parameters follow the ``BaseEstimator`` contract so
``get_params``/``set_params``/``clone`` work.

>>> import numpy as np
>>> est = BiorthogonalDilation(kappa_policy="ones").fit([[1, -2], [0, -1]])
>>> est.success_probability([[1, 0]])
array([0.5])
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import biortho as bo
from . import dilate
from . import numkernel as nk
from .validation import check_operator, check_states


class _DilationEstimator(TransformerMixin, BaseEstimator):
    renormalize = False

    def _build(self, V):  # pragma: no cover - abstract
        raise NotImplementedError

    def fit(self, X, y=None):
        V = check_operator(X)
        self.plan_ = self._build(V)
        self.operator_ = V
        self.n_qubits_ = self.plan_.system_qubits
        self.n_ancillas_ = self.plan_.ancilla_qubits
        return self

    def _outcomes(self, X):
        check_is_fitted(self, "plan_")
        states = check_states(X, self.operator_.shape[0], renormalize=self.renormalize)
        return [dilate.run_plan(self.plan_, psi) for psi in states]

    def transform(self, X):
        """Normalized output states, one row per input state."""
        return np.array([o.output_state for o in self._outcomes(X)])

    def success_probability(self, X):
        """Simulated post-selection probability per input state."""
        return np.array([o.simulated_probability for o in self._outcomes(X)])

    def predicted_probability(self, X):
        return np.array([o.predicted_probability for o in self._outcomes(X)])

    def score(self, X, y=None):
        """Mean fidelity between outputs and the exact ``V x``."""
        check_is_fitted(self, "plan_")
        states = check_states(X, self.operator_.shape[0], renormalize=self.renormalize)
        outs = self.transform(states)
        return float(np.mean([nk.fidelity(o, self.operator_ @ x) for o, x in zip(outs, states)]))

    def census(self, x=None) -> dict:
        check_is_fitted(self, "plan_")
        circuit = self.plan_.circuit if x is None else dilate.bind_circuit(self.plan_, x)
        return dilate.qsim.gate_census(circuit).as_dict()


class BiorthogonalDilation(_DilationEstimator):
    """Biorthogonal dilation with ``N`` ancilla qubits.

    Parameters
    ----------
    kappa_policy : {"modulus", "ones"} or sequence of float, default="modulus"
        Normalizer choice passed to :func:`biodilate.biortho.from_eigen`.
    tol : float, default=1e-9
        Biorthogonality tolerance.
    renormalize : bool, default=False
        Rescale input states instead of rejecting unnormalized rows.
    """

    def __init__(self, kappa_policy="modulus", tol=nk.RTOL, renormalize=False):
        self.kappa_policy = kappa_policy
        self.tol = tol
        self.renormalize = renormalize

    def _build(self, V):
        self.system_, self.biortho_operator_ = bo.from_eigen(V, self.kappa_policy, tol=self.tol)
        return dilate.biortho_plan(self.biortho_operator_)


class LCUDilation(_DilationEstimator):
    """Linear combination of Pauli unitaries; ``ceil(log2 #summands)`` ancillas."""

    def __init__(self, drop=1e-12, renormalize=False):
        self.drop = drop
        self.renormalize = renormalize

    def _build(self, V):
        self.summands_ = dilate.pauli_decompose(V, drop=self.drop)
        return dilate.lcu_plan(self.summands_)


class SzNagyDilation(_DilationEstimator):
    """One-ancilla defect-operator dilation; contractions only."""

    def __init__(self, renormalize=False):
        self.renormalize = renormalize

    def _build(self, V):
        return dilate.sznagy_plan(V)
