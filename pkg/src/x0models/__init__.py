"""Exact q-expansion arithmetic, plane models of X_0(N), and modular polynomials."""

from .arith import LevelInvariants, diag_degree, genus, psi, total_degree_formula
from .forms import ModularForm, cusps, delta, e4_cubed, eisenstein_e4, j_invariant
from .implicit import HomogPoly3, ModelReport, minimal_model, search_ab
from .linalg import IntMatrix, kernel_basis, rank
from .modpoly import BivarPoly, homogenize, phi
from .qseries import LaurentSeries

__version__ = "0.1.0"

__all__ = [
    "BivarPoly",
    "HomogPoly3",
    "IntMatrix",
    "LaurentSeries",
    "LevelInvariants",
    "ModelReport",
    "ModularForm",
    "cusps",
    "delta",
    "diag_degree",
    "e4_cubed",
    "eisenstein_e4",
    "genus",
    "homogenize",
    "j_invariant",
    "kernel_basis",
    "minimal_model",
    "phi",
    "psi",
    "rank",
    "search_ab",
    "total_degree_formula",
]
