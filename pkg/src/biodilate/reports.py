"""Assembly of JSON-ready report dictionaries for the CLI."""

from __future__ import annotations

import numpy as np

from . import __version__
from . import biortho as bo
from . import dilate
from . import numkernel as nk
from .io import SCHEMA, cmat, cpair, cvec, digest, matrix_to_doc, state_to_doc


def _f(x) -> float | None:
    return None if x is None else float(x)


def classification_doc(cls: dilate.Classification) -> dict:
    return {
        "eigenvalues": [cpair(z) for z in cls.eigenvalues],
        "eigenvalue_moduli": list(cls.eigenvalue_moduli),
        "sigma_max": cls.sigma_max,
        "contraction": cls.contraction,
        "spectral_contraction": cls.spectral_contraction,
    }


def analyze(V, kappa_policy="modulus", *, tol: float = nk.RTOL) -> dict:
    """Eigen data, biorthogonal construction and diagnostics for ``V``."""
    V = nk.as_matrix(V)
    es = nk.eig(V)
    doc = {
        "schema": SCHEMA,
        "tool_version": __version__,
        "input_digest": digest(matrix_to_doc(V)),
        "kappa_policy": kappa_policy if isinstance(kappa_policy, str) else [float(k) for k in kappa_policy],
        "tolerance": tol,
        "eigen": {
            "eigenvalues": cvec(es.eigenvalues),
            "right_vectors": cmat(es.right_vectors),
            "left_rows": cmat(es.left_rows),
            "condition": es.condition,
        },
        "classification": classification_doc(dilate.classify(V)),
    }
    try:
        system, op = bo.from_eigen(V, kappa_policy, tol=tol)
    except Exception as exc:  # recorded, not fatal
        doc["biorthogonal"] = {"error": f"{type(exc).__name__}: {exc}"}
        return doc
    f = bo.metric(system)
    report = bo.validate(system, tol=tol)
    doc["biorthogonal"] = {
        "kappa": [float(k) for k in system.kappa],
        "u": cmat(system.u.T),
        "zeta": cmat(system.zeta.T),
        "rep": cmat(op.rep),
        "rep_unitary": nk.is_unitary(op.rep),
        "metric": cmat(f),
        "metric_inverse": cmat(bo.metric_inverse(system)),
        "bi_unitary": bo.is_bi_unitary(op),
        "bi_hermitian": bo.is_bi_hermitian(op),
        "pseudo_unitarity_residual": bo.pseudo_unitarity_residual(op),
        "pseudo_hermiticity_residual": bo.pseudo_hermiticity_residual(bo.to_computational(op), f),
        "reconstruction_residual": nk.frobenius(bo.to_computational(op) - V),
        "validation": {
            "passed": report.passed,
            "max_overlap_deviation": report.max_overlap_deviation,
            "max_norm_deviation": report.max_norm_deviation,
            "min_kappa": report.min_kappa,
            "condition": report.condition,
        },
    }
    return doc


def method_doc(r: dilate.MethodResult) -> dict:
    return {
        "applicable": r.applicable,
        "error": r.error,
        "ancillas": r.ancillas,
        "gate_census": r.census,
        "predicted_p": _f(r.predicted_p),
        "simulated_p": _f(r.simulated_p),
        "fidelity": _f(r.fidelity),
        "notes": list(r.notes),
    }


def run_report(V, psi, *, methods=dilate.METHODS, kappa_policy="modulus",
               tol: float = nk.RTOL, seed=None) -> dict:
    """Full comparison report for one ``(V, psi)`` pair."""
    V = nk.as_matrix(V)
    psi = nk.as_vector(psi)
    cmp = dilate.compare(V, psi, kappa_policy, methods, tol=tol)
    blocks = {r.method: method_doc(r) for r in cmp.results}
    if "lcu" in blocks and blocks["lcu"]["applicable"]:
        plan = dilate.lcu_plan(dilate.pauli_decompose(V))
        _, loose, exact = dilate.lcu_deviation_note(plan, psi)
        blocks["lcu"]["weight_sum"] = plan.scale
        blocks["lcu"]["summands"] = len(plan.summands)
        blocks["lcu"]["loose_estimate_p"] = loose
        blocks["lcu"]["deviation_factor"] = loose / exact if exact > 0 else None
    return {
        "schema": SCHEMA,
        "tool_version": __version__,
        "seed": seed,
        "inputs": {"matrix_sha256": digest(matrix_to_doc(V)), "state_sha256": digest(state_to_doc(psi))},
        "kappa_policy": kappa_policy if isinstance(kappa_policy, str) else [float(k) for k in kappa_policy],
        "tolerances": {"atol": nk.ATOL, "rtol": tol},
        "classification": classification_doc(cmp.classification),
        "methods": blocks,
    }


def oracle_output(V, psi) -> np.ndarray:
    out = nk.as_matrix(V) @ nk.as_vector(psi)
    return out / np.linalg.norm(out)
