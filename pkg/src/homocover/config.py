"""Numeric tolerances shared by every module."""

# Geometric predicate tolerance (containment, facet activity, antipodality).
TAU = 1e-9

# Target tolerance for optimization and ratio bisection.
OPT_TOL = 1e-6

# Two triangle normals closer than this (1 - cos) are merged into one facet.
COPLANAR_TOL = 1e-7

# Smallest admissible pivot magnitude in the simplex tableau.
PIVOT_TOL = 1e-10

# Verifier floor resolution, as a fraction of the body diameter.
EPS_FRACTION = 1e-4


def scaled(tol, scale):
    """Tolerance for a body of the given extent (never below the raw value)."""
    return tol * max(1.0, float(scale))
