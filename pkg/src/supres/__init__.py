"""Numerical toolkit for sum-of-squares dual certificates in super-resolution.

Submodules:

- trigpoly:    trigonometric polynomials, Dirichlet kernels and derivatives
- certificate: interpolating dual certificate construction and verification
- gram:        Gram-matrix calculus (T, weighted inverse, projector, correction)
- specfun:     Si/Ci, imaginary-argument incomplete gamma, Lambert W
- qk_operator: the deviation operator in the Dirichlet basis, asymptotic
               entries, structured matvec, truncation budgets
- spectrum:    power iterations with a-posteriori residual bounds
- constants:   reproductions of the scalar constants used by the bounds
- bound_audit: quadrature spot checks of the inner-integral master bounds
- cli:         batch front-end
"""

__version__ = "0.1.0"
