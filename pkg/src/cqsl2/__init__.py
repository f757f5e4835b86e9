"""Exact noncommutative Riemannian geometry of reduced C_q[SL_2].

Field arithmetic is exact (cyclotomic fields at odd roots of unity, or Q at a
rational q). Submodules:

scalar       coefficient fields, q-numbers, JSON encoding
linalg       sparse exact elimination (rank, nullspace, solve)
qalgebra     the r^3-dimensional reduced algebra
calculus     4D bicovariant calculus: forms, wedge, d, pi~, structure constants
connection   torsion / cotorsion, the canonical spin connection, nabla
curvature    metric, Riemann, lift, quantum trace, Ricci
dirac        gamma matrices, Dirac operator, spectrum, r = 3 modes
verify, cli  acceptance checks and the ``cqsl2`` command
"""

from cqsl2.kernel import IMPLEMENTATION
from cqsl2.scalar import FieldContext, Scalar, rational_q, root_of_unity

__version__ = "0.1.0"

__all__ = ["FieldContext", "Scalar", "root_of_unity", "rational_q", "IMPLEMENTATION", "__version__"]
