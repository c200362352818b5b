"""Biorthogonal dilation of non-unitary operators on a simulated quantum register."""

__version__ = "0.1.0"

from .biortho import (  # noqa: E402
    BiorthogonalOperator,
    BiorthogonalSystem,
    from_eigen,
    from_explicit,
)
from .dilate import (  # noqa: E402
    biortho_plan,
    biortho_run,
    compare,
    lcu_plan,
    lcu_run,
    pauli_decompose,
    sznagy_plan,
    sznagy_run,
)
from .estimators import BiorthogonalDilation, LCUDilation, SzNagyDilation  # noqa: E402

__all__ = [
    "BiorthogonalDilation",
    "BiorthogonalOperator",
    "BiorthogonalSystem",
    "LCUDilation",
    "SzNagyDilation",
    "biortho_plan",
    "biortho_run",
    "compare",
    "from_eigen",
    "from_explicit",
    "lcu_plan",
    "lcu_run",
    "pauli_decompose",
    "sznagy_plan",
    "sznagy_run",
]
