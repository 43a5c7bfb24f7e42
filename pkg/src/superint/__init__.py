"""Exact construction and certification of second-order superintegrable systems
from Hesse-Frobenius structures on flat pseudo-Euclidean spaces."""

from .exact_algebra import LaurentPoly, RatMatrix, nullspace, rank, variables
from .flat_geometry import FlatMetric, SymTensorField
from .hesse_frobenius import (
    HesseFrobenius,
    check_axioms,
    check_differential,
    check_symmetry,
    check_wdvv,
    from_frobenius_potential,
    glue,
    semisimple_structure,
    structure_tensor,
)
from .killing import compatible_killing, inheritance_report, integrate_companion, killing_basis
from .pipeline import run_pipeline
from .potential_solver import ExponentWindow, check_separation, solve_potentials, wilczynski_residual
from .verify import build_hamiltonian, certify, independence_rank, poisson_bracket

__all__ = [
    "ExponentWindow",
    "FlatMetric",
    "HesseFrobenius",
    "LaurentPoly",
    "RatMatrix",
    "SymTensorField",
    "build_hamiltonian",
    "certify",
    "check_axioms",
    "check_differential",
    "check_separation",
    "check_symmetry",
    "check_wdvv",
    "compatible_killing",
    "from_frobenius_potential",
    "glue",
    "independence_rank",
    "inheritance_report",
    "integrate_companion",
    "killing_basis",
    "nullspace",
    "poisson_bracket",
    "rank",
    "run_pipeline",
    "semisimple_structure",
    "solve_potentials",
    "structure_tensor",
    "variables",
    "wilczynski_residual",
]

__version__ = "0.1.0"
