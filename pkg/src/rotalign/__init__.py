"""Rotations maximizing ``tr(U M)``, with 2D and 3D solvers and point-set alignment."""
from .backend import BACKEND
from .batch import generate, read_matrices, run_batch, write_matrices
from .cayley import NewtonConfig, NewtonStatus, newton_symmetrize, solve_spatial
from .characterization import (MaximalityVerdict, Reason, givens_improvement, householder_witness,
                               is_maximal, is_maximal_2d, is_maximal_3d, is_maximal_by_eigenvalues)
from .linalg import is_rotation, is_symmetric
from .planar import solve_planar, solve_planar_wahba
from .report import SolveReport, Strategy
from .spatial import axis_angle_rotation, maximize_by_diagonalization, maximize_symmetric
from .spectral import eigenvalues3, spectral_decomposition, top_eigenpair
from .svd import kabsch_umeyama, kabsch_umeyama_2d, svd2, svd3
from .wahba import WahbaProblem, profile_matrix, residual, solve

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "generate", "read_matrices", "run_batch", "write_matrices",
    "NewtonConfig", "NewtonStatus", "newton_symmetrize", "solve_spatial",
    "MaximalityVerdict", "Reason", "givens_improvement", "householder_witness",
    "is_maximal", "is_maximal_2d", "is_maximal_3d", "is_maximal_by_eigenvalues",
    "is_rotation", "is_symmetric", "solve_planar", "solve_planar_wahba",
    "SolveReport", "Strategy", "axis_angle_rotation", "maximize_by_diagonalization",
    "maximize_symmetric", "eigenvalues3", "spectral_decomposition", "top_eigenpair",
    "kabsch_umeyama", "kabsch_umeyama_2d", "svd2", "svd3",
    "WahbaProblem", "profile_matrix", "residual", "solve",
]
