"""Numerical tolerances and the enumeration bound shared by all modules."""

import os

# construction / algebra
TOL_ALGEBRA = 1e-12
# classification predicates and zero tests
TOL_CLASSIFY = 1e-9
# per-point tolerance for the symmetry product identity
TOL_EQUATION = 1e-9
# total-variation threshold for exact joint laws
TOL_TV = 1e-10
# most negative mass still accepted by the inverse transform
TOL_POSITIVE = 1e-10

DEFAULT_ENUM_BOUND = 10**6
ENUM_BOUND_ENV = "HEYDE_ENUM_BOUND"


class EnumerationBoundError(ValueError):
    """A whole-group scan would exceed the configured enumeration bound."""


def enum_bound() -> int:
    raw = os.environ.get(ENUM_BOUND_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_ENUM_BOUND
    return int(raw)


def check_bound(size: int, what: str = "enumeration") -> None:
    bound = enum_bound()
    if size > bound:
        raise EnumerationBoundError(f"{what} of size {size} exceeds enumeration bound {bound}")
