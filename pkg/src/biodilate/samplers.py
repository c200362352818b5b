"""Seeded random instances for property tests, benchmarks and reports."""

from __future__ import annotations

import numpy as np

from .biortho import BiorthogonalOperator, BiorthogonalSystem


def complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def random_state(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = complex_normal(rng, dim)
    return v / np.linalg.norm(v)


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    Q, R = np.linalg.qr(complex_normal(rng, (dim, dim)))
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def random_diagonalizable(rng: np.random.Generator, dim: int,
                          moduli: tuple[float, float] = (0.25, 2.5)) -> np.ndarray:
    """Invertible diagonalizable matrix ``R diag(lam) R^-1`` with random complex ``R``."""
    R = complex_normal(rng, (dim, dim))
    lam = rng.uniform(*moduli, size=dim) * np.exp(2j * np.pi * rng.uniform(size=dim))
    return R @ np.diag(lam) @ np.linalg.inv(R)


def random_system(rng: np.random.Generator, dim: int, *, kappa_ones: bool = False) -> BiorthogonalSystem:
    U = complex_normal(rng, (dim, dim))
    U = U / np.linalg.norm(U, axis=0)
    kappa = np.ones(dim) if kappa_ones else rng.uniform(0.5, 2.0, size=dim)
    Z = np.linalg.inv(U).conj().T * kappa
    return BiorthogonalSystem(U, Z, kappa)


def random_operator(rng: np.random.Generator, system: BiorthogonalSystem, *,
                    unitary: bool = True, diagonal: bool = False) -> BiorthogonalOperator:
    d = system.dim
    if diagonal:
        rep = np.diag(np.exp(2j * np.pi * rng.uniform(size=d)))
        if not unitary:
            rep = rep * rng.uniform(0.3, 2.0, size=d)
    elif unitary:
        rep = random_unitary(rng, d)
    else:
        rep = complex_normal(rng, (d, d))
    return BiorthogonalOperator(system, rep)
