"""Exact engine for integral characteristic-class polynomials and their verification.

Subpackages by concern:

- arith:     Todd denominators, Bernoulli numbers, divisibility facts
- poly:      sparse graded polynomials over exact rationals, symmetric reduction
- series:    universal class polynomials (Todd, Chern character, combined, ...)
- geometry:  Chow rings and K-groups of towers of split projective bundles
- grr:       two-sided Riemann-Roch checkers on model geometries
- suites:    named verification suites (the CLI surface)
- cli:       command line front end
"""

__version__ = "0.1.0"
