"""jetcone: cone calculus for pure second-order constraint sets.

Eigenvalue-level subequations with Dirichlet duality, generalized equations
H = E ∩ (-G~) with their canonical pairs and type classification, grid-level
subharmonicity checking, and a planar wide-stencil monotone Dirichlet solver
exhibiting the uniqueness/existence dichotomy.
"""

from .config import DEFAULT, Tolerances
from .symmat import SymMat, eigenvalues, block_spectrum
from .sets import (SpectralSet, SignedVerdict, member, dual, shift, negate,
                   intersect, union, add_P, sub_P, boundary_offset,
                   boundary_offsets, contains, empty_set, full_set, make_prim,
                   BracketOverflow, DimensionMismatch, JetconeError)
from .geneq import (GenEq, make_ge, mirror, negate_ge, intersect_ge,
                    canonical_pair, CanonicalPair, diamond,
                    is_generalized_equation, classify_type, TypeReport,
                    pair_order)
from . import catalog

__version__ = "0.1.0"
