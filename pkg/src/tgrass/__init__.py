"""Exact and numerical toolkit for the equivariant quantum differential
equation of cotangent bundles of Grassmannians.

Submodules:
  laurent   exact sparse Laurent-polynomial / rational-function kernel
  indexing  fixed-point combinatorics (k-subsets, minimal permutations)
  weights   trigonometric and cohomological weight functions
  ktheory   localized K-theory algebra, localization maps, transition map
  schur     subset Schur polynomials, basis expansion, monodromy matrices
  analytic  complex Gamma, residue series, branch-tracked solutions
  integral  Mellin-Barnes vertical-line quadrature
  checks    numeric verifications (integral vs series, determinants, monodromy)
  verify    symbolic + numeric suite runner
  cli       command-line front end
"""

from .indexing import FixedPointIndex, subsets
from .ktheory import KTheoryClass, pi_inf, pi_zero, tau_apply, tau_det, tau_inv_apply
from .laurent import LaurentPolynomial, RationalFunction, VarContext
from .schur import expand_in_schur, m_matrix, monodromy_matrices, schur_V, t_matrix
from .weights import trig_weight, weight_of_class

__version__ = "0.1.0"

__all__ = [
    "FixedPointIndex",
    "KTheoryClass",
    "LaurentPolynomial",
    "RationalFunction",
    "VarContext",
    "expand_in_schur",
    "m_matrix",
    "monodromy_matrices",
    "pi_inf",
    "pi_zero",
    "schur_V",
    "subsets",
    "t_matrix",
    "tau_apply",
    "tau_det",
    "tau_inv_apply",
    "trig_weight",
    "weight_of_class",
    "__version__",
]
