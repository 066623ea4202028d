"""Entanglement dynamics of two qubits in a common squeezed thermal reservoir."""

from .bath import (
    BathSpec,
    CoefficientSet,
    CoefficientTable,
    QuadratureConfig,
    build_coefficient_table,
    coefficients,
)
from .dynamics import GeneratorSpec, IntegratorConfig, Trajectory, evolve, markov_rhs, nonmarkov_rhs
from .entanglement import EsdReport, concurrence, detect_esd, spin_flip

__version__ = "0.1.0"

__all__ = [
    "BathSpec",
    "CoefficientSet",
    "CoefficientTable",
    "EsdReport",
    "GeneratorSpec",
    "IntegratorConfig",
    "QuadratureConfig",
    "Trajectory",
    "build_coefficient_table",
    "coefficients",
    "concurrence",
    "detect_esd",
    "evolve",
    "markov_rhs",
    "nonmarkov_rhs",
    "spin_flip",
]
