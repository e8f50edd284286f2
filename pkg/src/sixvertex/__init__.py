"""Domain-wall six-vertex model laboratory.

The partition function and the emptiness formation probability are computed
by brute-force enumeration, operator products on the quantum space,
determinant formulas, orthogonal-polynomial determinants and residues of
multiple contour integrals; :mod:`sixvertex.validation` cross-checks them.
"""
from .errors import CapExceededError, ConditioningWarning, NonInvertibleError, ShapeError, SingularityError, SixVertexError
from .model import HomParams, InhomParams

__version__ = "0.1.0"

__all__ = [
    "HomParams", "InhomParams", "SixVertexError", "SingularityError", "NonInvertibleError",
    "ShapeError", "CapExceededError", "ConditioningWarning",
]
