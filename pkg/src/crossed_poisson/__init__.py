"""Exact verification engine for Poisson structures on polynomial crossed products.

Subpackages
-----------
scalars  exact cyclotomic / hbar-polynomial arithmetic
groups   finite matrix groups and their fixed-space geometry
polyvec  group-labeled polyvector fields, brackets, projections
pbw      deformation conditions, coboundary solving, rewriting
catalog  the worked structure families
qmoyal   the root-of-unity Moyal star product and its center
cohom    truncated Poisson cohomology of the label-graded complex
cli      command line interface and the JSON structure-file format
"""

from .scalars import Cyclotomic, HScalar, root_of_unity, q_integer, q_factorial, q_binomial
from .polyvec import PolyVectorField, StructurePair, is_poisson
from .pbw import check_bg, overlap_confluence, solve_b, graded_dimension

__all__ = [
    "Cyclotomic",
    "HScalar",
    "root_of_unity",
    "q_integer",
    "q_factorial",
    "q_binomial",
    "PolyVectorField",
    "StructurePair",
    "is_poisson",
    "check_bg",
    "overlap_confluence",
    "solve_b",
    "graded_dimension",
]

__version__ = "0.1.0"
