"""Exact certification of local conserved charges in spin-1/2 chains."""

from ._accel import BACKEND
from .basis import ChargeBasis, enumerate_obc_basis, enumerate_pbc_basis
from .constraints import ConstraintMatrix, build_matrix
from .models import HamiltonianSpec, builtin_model, fredkin, parse_model_file, xxx
from .pauli import PauliString, commutator, mul, parse_pauli

__all__ = [
    "BACKEND",
    "ChargeBasis",
    "ConstraintMatrix",
    "HamiltonianSpec",
    "PauliString",
    "build_matrix",
    "builtin_model",
    "commutator",
    "enumerate_obc_basis",
    "enumerate_pbc_basis",
    "fredkin",
    "mul",
    "parse_model_file",
    "parse_pauli",
    "xxx",
]

__version__ = "0.1.0"
