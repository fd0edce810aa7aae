"""Finite differences of functions on a finite group, polynomial detection,
and the quadratic (parallelogram) functional equation.

Functions are tabulated: ``GroupFunction.values[i]`` is the value at the
point with index ``i``. Values may be a float/complex array or an object
array of ``fractions.Fraction``; in the latter case every test runs in
exact arithmetic and zero means zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .config import TOL_CLASSIFY, check_bound
from .groups import Character, Group, GroupMismatchError, _as_coords


@dataclass(frozen=True, eq=False)
class GroupFunction:
    group: Group
    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.asarray(self.values)
        if vals.dtype != object:
            vals = vals.astype(complex if np.iscomplexobj(vals) else float)
        if vals.shape != (self.group.order,):
            raise GroupMismatchError(f"expected {self.group.order} values, got shape {vals.shape}")
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_callable(cls, group: Group, fn: Callable[[Character], complex]) -> "GroupFunction":
        return cls(group, np.array([fn(y) for y in group.characters()]))

    @classmethod
    def constant(cls, group: Group, c) -> "GroupFunction":
        dtype = object if isinstance(c, Fraction) else None
        return cls(group, np.full(group.order, c, dtype=dtype))

    @property
    def exact(self) -> bool:
        return self.values.dtype == object

    def __call__(self, y):
        return self.values[self.group.index(_as_coords(self.group, y))]

    def shift(self, h) -> "GroupFunction":
        """y -> f(y + h)."""
        return GroupFunction(self.group, self.values[self.group.shift_indices(h)])

    def compose_scale(self, a: int) -> "GroupFunction":
        """y -> f(a y)."""
        return GroupFunction(self.group, self.values[self.group.scale_indices(a)])

    def _other(self, other):
        if isinstance(other, GroupFunction):
            if other.group != self.group:
                raise GroupMismatchError("functions on different groups")
            return other.values
        return other

    def __add__(self, other):
        return GroupFunction(self.group, self.values + self._other(other))

    __radd__ = __add__

    def __sub__(self, other):
        return GroupFunction(self.group, self.values - self._other(other))

    def __mul__(self, other):
        return GroupFunction(self.group, self.values * self._other(other))

    __rmul__ = __mul__

    def __neg__(self):
        return GroupFunction(self.group, -self.values)

    def max_abs(self) -> float:
        if self.values.size == 0:
            return 0.0
        return float(max(abs(v) for v in self.values)) if self.exact else float(np.max(np.abs(self.values)))

    def is_zero(self, tol: float = TOL_CLASSIFY) -> bool:
        if self.exact:
            return all(v == 0 for v in self.values)
        return self.max_abs() <= tol

    def to_json(self) -> list[dict]:
        rows = []
        for coords, v in zip(self.group.coords, self.values):
            c = complex(v)
            rows.append({"coords": [int(t) for t in coords], "re": c.real, "im": c.imag})
        return rows

    @classmethod
    def from_json(cls, group: Group, rows: Sequence[dict]) -> "GroupFunction":
        if not rows:
            raise ValueError("function table is empty")
        vals = np.full(group.order, np.nan, dtype=complex)
        for row in rows:
            vals[group.index(_as_coords(group, row["coords"]))] = complex(float(row.get("re", 0.0)), float(row.get("im", 0.0)))
        if np.isnan(vals).any():
            raise ValueError("function table does not cover the whole domain")
        if not np.iscomplexobj(vals) or not vals.imag.any():
            vals = vals.real
        return cls(group, vals)


@dataclass(frozen=True)
class PolynomialTestResult:
    is_polynomial: bool
    degree: int | None = None
    witness: tuple[tuple[int, ...], tuple[int, ...]] | None = None  # (h, y)
    max_degree: int = 0

    def __post_init__(self) -> None:
        if self.is_polynomial != (self.degree is not None):
            raise ValueError("degree must be present exactly when the function is a polynomial")

    def to_json(self) -> dict:
        out = {"is_polynomial": self.is_polynomial, "degree": self.degree, "max_degree": self.max_degree}
        if self.witness is not None:
            out["witness"] = {"h": list(self.witness[0]), "y": list(self.witness[1])}
        return out


def delta(h, f: GroupFunction) -> GroupFunction:
    """(Delta_h f)(y) = f(y + h) - f(y)."""
    return f.shift(h) - f


def iterated_delta(hs: Sequence, f: GroupFunction) -> GroupFunction:
    for h in hs:
        f = delta(h, f)
    return f


def _all_shift_table(group: Group) -> np.ndarray:
    """table[h, y] = index of y + h."""
    return group.add_table()


def is_polynomial(f: GroupFunction, max_degree: int | None = None, tol: float = TOL_CLASSIFY) -> PolynomialTestResult:
    """Smallest n <= max_degree with Delta_h^{n+1} f == 0 for every h and y.

    All directions h are swept simultaneously: row h of the working array
    holds Delta_h^k f.
    """
    group = f.group
    if max_degree is None:
        max_degree = group.order
    if max_degree < 0:
        raise ValueError("max_degree must be nonnegative")
    table = _all_shift_table(group)
    work = np.broadcast_to(f.values, (group.order, group.order)).copy()
    with np.errstate(all="ignore"):
        for k in range(1, max_degree + 2):
            work = np.take_along_axis(work, table, axis=1) - work
            if _all_zero(work, f.exact, tol):
                return PolynomialTestResult(True, degree=k - 1, max_degree=max_degree)
    mags = np.abs(work.astype(complex)) if f.exact else np.abs(work)
    mags = np.where(np.isnan(mags), np.inf, mags)
    h, y = np.unravel_index(int(np.argmax(mags)), mags.shape)
    coords = group.coords
    return PolynomialTestResult(
        False,
        witness=(tuple(int(c) for c in coords[h]), tuple(int(c) for c in coords[y])),
        max_degree=max_degree,
    )


def _all_zero(arr: np.ndarray, exact: bool, tol: float) -> bool:
    if exact:
        return not any(v != 0 for v in arr.flat)
    return bool(np.all(np.abs(arr) <= tol))


def fe1_defect(phi: GroupFunction) -> np.ndarray:
    """D[u, v] = phi(u+v) + phi(u-v) - 2 phi(u) - 2 phi(v)."""
    group = phi.group
    table = group.add_table()
    minus = table[:, group.neg_indices]
    vals = phi.values
    return vals[table] + vals[minus] - 2 * vals[:, None] - 2 * vals[None, :]


def satisfies_fe1(phi: GroupFunction, tol: float = TOL_CLASSIFY) -> bool:
    """Exhaustive check of phi(u+v) + phi(u-v) = 2[phi(u) + phi(v)]."""
    if not phi.exact and np.iscomplexobj(phi.values):
        if np.max(np.abs(phi.values.imag), initial=0.0) > tol:
            raise ValueError("phi must be real-valued")
        phi = GroupFunction(phi.group, phi.values.real)
    return _all_zero(fe1_defect(phi), phi.exact, tol)


def fe1_solution_space(group: Group) -> list[list[Fraction]]:
    """Exact rational basis of all real solutions of the quadratic equation.

    The equation is linear in the values of phi, so its solution set is the
    nullspace of an integer matrix with one row per pair (u, v).
    """
    import sympy

    n = group.order
    check_bound(n * n * n, "functional-equation system")
    table = group.add_table()
    minus = table[:, group.neg_indices]
    rows = set()
    for u in range(n):
        for v in range(n):
            row = [0] * n
            row[table[u, v]] += 1
            row[minus[u, v]] += 1
            row[u] -= 2
            row[v] -= 2
            rows.add(tuple(row))
    basis = sympy.Matrix(sorted(rows)).nullspace()
    return [[Fraction(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1])) for c in vec] for vec in basis]
