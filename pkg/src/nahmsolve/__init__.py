"""Nahm data for superposed Dirac monopoles from orthonormal frames of the
eigenline bundle over a reducible spectral curve."""

from .basis_direct import BasisMatrix, solve_basis_direct
from .basis_lagrange import solve_all_rows, solve_basis_lagrange
from .geometry import MonopoleConfig, spectral_data
from .nahm import NahmData, boundary_report, nahm_matrices, orthonormal_frame, residuals

__version__ = "0.1.0"

__all__ = ["BasisMatrix", "MonopoleConfig", "NahmData", "boundary_report", "nahm_matrices",
           "orthonormal_frame", "residuals", "solve_all_rows", "solve_basis_direct",
           "solve_basis_lagrange", "spectral_data"]
