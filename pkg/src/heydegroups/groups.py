"""Finite Abelian groups in product form Z(n_1) x ... x Z(n_d).

A group is self-dual: characters are coordinate vectors over the same
moduli and pair with elements by

    (x, y) = exp(2 pi i * sum_i x_i y_i / n_i).

Elements and characters are kept as distinct types so that a character
cannot be added to an element by accident. Whole-group scans are
vectorised over the mixed-radix index ``0 .. order-1`` (C order on the
coordinate grid), and every membership question that depends on the
pairing is decided with integer phase numerators, never floats.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import cached_property, reduce
from typing import Iterable, Iterator, Sequence

import numpy as np

from .config import check_bound


class GroupMismatchError(ValueError):
    """Operands live in different groups (or an element was given where a character was expected)."""


_LITERAL_RE = re.compile(r"^\s*Z\((\d+)\)\s*$")


@dataclass(frozen=True)
class Group:
    moduli: tuple[int, ...]

    def __post_init__(self) -> None:
        moduli = tuple(int(n) for n in self.moduli)
        if not moduli:
            raise ValueError("a group needs at least one cyclic factor")
        if any(n < 2 for n in moduli):
            raise ValueError(f"every modulus must be >= 2, got {moduli}")
        object.__setattr__(self, "moduli", moduli)
        check_bound(math.prod(moduli), "group order")

    # -- construction -------------------------------------------------

    @classmethod
    def cyclic(cls, n: int) -> "Group":
        return cls((n,))

    @classmethod
    def parse(cls, text: str) -> "Group":
        """Parse a literal such as ``"Z(4)xZ(3)"``."""
        parts = re.split(r"\s*[x×*]\s*(?=Z)", text.strip())
        moduli = []
        for part in parts:
            m = _LITERAL_RE.match(part)
            if m is None:
                raise ValueError(f"bad group literal {text!r}")
            moduli.append(int(m.group(1)))
        return cls(tuple(moduli))

    @classmethod
    def from_json(cls, obj) -> "Group":
        if isinstance(obj, str):
            return cls.parse(obj)
        if isinstance(obj, dict) and "moduli" in obj:
            return cls(tuple(obj["moduli"]))
        if isinstance(obj, (list, tuple)):
            return cls(tuple(obj))
        raise ValueError(f"cannot read a group from {obj!r}")

    def to_json(self) -> dict:
        return {"moduli": list(self.moduli)}

    def __str__(self) -> str:
        return "x".join(f"Z({n})" for n in self.moduli)

    def product(self, other: "Group") -> "Group":
        return Group(self.moduli + other.moduli)

    # -- sizes --------------------------------------------------------

    @cached_property
    def order(self) -> int:
        return math.prod(self.moduli)

    def __len__(self) -> int:
        return self.order

    @property
    def rank(self) -> int:
        return len(self.moduli)

    @cached_property
    def exponent(self) -> int:
        return reduce(math.lcm, self.moduli, 1)

    def exponent_prime(self) -> int | None:
        """The prime p if every nonzero element has order p (X = X_(p)), else None."""
        p = self.moduli[0]
        if all(n == p for n in self.moduli) and _is_prime(p):
            return p
        return None

    # -- indexing -----------------------------------------------------

    @cached_property
    def strides(self) -> np.ndarray:
        strides = np.ones(self.rank, dtype=np.int64)
        for i in range(self.rank - 2, -1, -1):
            strides[i] = strides[i + 1] * self.moduli[i + 1]
        return strides

    @cached_property
    def _moduli_arr(self) -> np.ndarray:
        return np.asarray(self.moduli, dtype=np.int64)

    @cached_property
    def coords(self) -> np.ndarray:
        """All coordinate vectors, shape (order, rank), in index order."""
        grid = np.indices(self.moduli, dtype=np.int64).reshape(self.rank, -1).T
        grid.setflags(write=False)
        return grid

    def reduce(self, coords) -> np.ndarray:
        return np.mod(np.asarray(coords, dtype=np.int64), self._moduli_arr)

    def index(self, coords) -> np.ndarray | int:
        """Mixed-radix index of one coordinate vector or an array of them (last axis)."""
        arr = self.reduce(coords)
        if arr.shape[-1] != self.rank:
            raise GroupMismatchError(f"coordinate length {arr.shape[-1]} does not match rank {self.rank}")
        idx = arr @ self.strides
        return int(idx) if np.ndim(idx) == 0 else idx

    def element(self, coords) -> "Element":
        return Element(self, _as_coords(self, coords))

    def character(self, coords) -> "Character":
        return Character(self, _as_coords(self, coords))

    def zero(self) -> "Element":
        return Element(self, (0,) * self.rank)

    def elements(self) -> Iterator["Element"]:
        for row in self.coords:
            yield Element(self, tuple(int(c) for c in row))

    def characters(self) -> Iterator["Character"]:
        for row in self.coords:
            yield Character(self, tuple(int(c) for c in row))

    # -- vectorised arithmetic on indices -----------------------------

    def scale_indices(self, a: int) -> np.ndarray:
        """Index of a*y for every y, in index order."""
        return self.index(self.coords * int(a))

    @cached_property
    def neg_indices(self) -> np.ndarray:
        return self.scale_indices(-1)

    def shift_indices(self, h) -> np.ndarray:
        """Index of y + h for every y."""
        return self.index(self.coords + np.asarray(_as_coords(self, h), dtype=np.int64))

    def add_table(self) -> np.ndarray:
        """Full (order, order) addition table of indices; for small groups only."""
        check_bound(self.order * self.order, "addition table")
        c = self.coords
        return self.index(c[:, None, :] + c[None, :, :])

    def phase_numerators(self, xs, ys) -> np.ndarray:
        """Integers k with (x, y) = exp(2 pi i k / exponent), for all pairs of rows.

        ``xs`` has shape (m, rank) and ``ys`` (k, rank); result is (m, k).
        """
        weights = self.exponent // self._moduli_arr
        xs = np.atleast_2d(self.reduce(xs))
        ys = np.atleast_2d(self.reduce(ys))
        return np.mod((xs * weights) @ ys.T, self.exponent)

    def pairing_matrix(self) -> np.ndarray:
        """Character table: entry [x, y] = (x, y). Quadratic size, small groups only."""
        check_bound(self.order * self.order, "character table")
        k = self.phase_numerators(self.coords, self.coords)
        return np.exp(2j * np.pi * k / self.exponent)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


def _as_coords(group: Group, coords) -> tuple[int, ...]:
    if isinstance(coords, (Element, Character)):
        if coords.group.moduli != group.moduli:
            raise GroupMismatchError(f"{coords} is not in {group}")
        return coords.coords
    if isinstance(coords, (int, np.integer)):
        coords = (int(coords),)
    coords = tuple(int(c) for c in coords)
    if len(coords) != group.rank:
        raise GroupMismatchError(f"coordinates {coords} do not fit {group}")
    return tuple(c % n for c, n in zip(coords, group.moduli))


@dataclass(frozen=True)
class _Point:
    group: Group
    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coords", _as_coords(self.group, self.coords))

    @property
    def index(self) -> int:
        return int(self.group.index(self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def _check(self, other) -> None:
        if type(other) is not type(self) or other.group != self.group:
            raise GroupMismatchError(f"cannot combine {self!r} with {other!r}")

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, scalar_mul(-1, other))

    def __neg__(self):
        return scalar_mul(-1, self)

    def __rmul__(self, a: int):
        return scalar_mul(a, self)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({list(self.coords)} in {self.group})"


class Element(_Point):
    """A point x of the group X."""


class Character(_Point):
    """A point y of the dual group Y (same moduli as X)."""


def add(x, y):
    x._check(y)
    return type(x)(x.group, tuple((a + b) % n for a, b, n in zip(x.coords, y.coords, x.group.moduli)))


def scalar_mul(a: int, x):
    """The endomorphism f_a applied to x; negative a allowed."""
    return type(x)(x.group, tuple((a * c) % n for c, n in zip(x.coords, x.group.moduli)))


def pairing(x: Element, y: Character) -> complex:
    if not isinstance(x, Element) or not isinstance(y, Character):
        raise GroupMismatchError("pairing takes an Element and a Character")
    if x.group.moduli != y.group.moduli:
        raise GroupMismatchError(f"{x} and {y} have different moduli")
    k = int(x.group.phase_numerators([x.coords], [y.coords])[0, 0])
    return _root_of_unity(k, x.group.exponent)


def pairing_is_one(x: Element, y: Character) -> bool:
    return int(x.group.phase_numerators([x.coords], [y.coords])[0, 0]) == 0


def _root_of_unity(k: int, n: int) -> complex:
    # exact values at the quarter turns keep the trivial cases bit-exact
    k %= n
    if (4 * k) % n == 0:
        return (1, 1j, -1, -1j)[(4 * k) // n]
    t = 2 * math.pi * k / n
    return complex(math.cos(t), math.sin(t))


@dataclass(frozen=True)
class Subgroup:
    """A subgroup of X (``dual=False``) or of the dual Y (``dual=True``).

    ``indices`` is the sorted tuple of member indices; ``generators`` is a
    greedily chosen generating list kept for display.
    """

    parent: Group
    indices: tuple[int, ...]
    dual: bool = False
    generators: tuple[tuple[int, ...], ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        idx = tuple(sorted({int(i) for i in self.indices}))
        object.__setattr__(self, "indices", idx)
        if not idx or idx[0] != 0:
            raise ValueError("a subgroup must contain zero")
        if self.parent.order % len(idx):
            raise ValueError(f"{len(idx)} elements cannot form a subgroup of a group of order {self.parent.order}")
        if not self.generators:
            object.__setattr__(self, "generators", _greedy_generators(self.parent, idx))

    @property
    def order(self) -> int:
        return len(self.indices)

    def __len__(self) -> int:
        return len(self.indices)

    @cached_property
    def index_array(self) -> np.ndarray:
        return np.asarray(self.indices, dtype=np.int64)

    @cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.parent.order, dtype=bool)
        m[self.index_array] = True
        return m

    @property
    def coords(self) -> np.ndarray:
        return self.parent.coords[self.index_array]

    def points(self) -> list:
        kind = Character if self.dual else Element
        return [kind(self.parent, tuple(int(c) for c in row)) for row in self.coords]

    def __contains__(self, item) -> bool:
        if isinstance(item, (Element, Character)):
            if isinstance(item, Character) != self.dual or item.group != self.parent:
                return False
            return bool(self.mask[item.index])
        return bool(self.mask[self.parent.index(_as_coords(self.parent, item))])

    def is_closed(self) -> bool:
        c = self.coords
        sums = self.parent.index(c[:, None, :] - c[None, :, :])
        return bool(self.mask[sums].all())

    def is_trivial(self) -> bool:
        return self.order == 1

    def is_whole(self) -> bool:
        return self.order == self.parent.order


def _greedy_generators(group: Group, indices: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    span = np.zeros(group.order, dtype=bool)
    span[0] = True
    gens = []
    coords = group.coords
    for i in indices:
        if span[i]:
            continue
        gens.append(tuple(int(c) for c in coords[i]))
        span = _close_with(group, span, coords[i])
    return tuple(gens)


def _close_with(group: Group, span: np.ndarray, gen: np.ndarray) -> np.ndarray:
    """Span of (span U {gen}), with span already a subgroup mask."""
    members = group.coords[span]
    out = span.copy()
    multiple = np.zeros(group.rank, dtype=np.int64)
    while True:
        multiple = group.reduce(multiple + gen)
        if not multiple.any():
            break
        out[group.index(members + multiple)] = True
    return out


def _subgroup_from_mask(group: Group, mask: np.ndarray, dual: bool) -> Subgroup:
    return Subgroup(group, tuple(int(i) for i in np.flatnonzero(mask)), dual=dual)


def subgroup_generated(group: Group, gens: Iterable, dual: bool = False) -> Subgroup:
    span = np.zeros(group.order, dtype=bool)
    span[0] = True
    for g in gens:
        if isinstance(g, (Element, Character)):
            dual = isinstance(g, Character)
        coords = np.asarray(_as_coords(group, g), dtype=np.int64)
        if not span[group.index(coords)]:
            span = _close_with(group, span, coords)
    return _subgroup_from_mask(group, span, dual)


def whole(group: Group, dual: bool = False) -> Subgroup:
    return Subgroup(group, tuple(range(group.order)), dual=dual)


def trivial(group: Group, dual: bool = False) -> Subgroup:
    return Subgroup(group, (0,), dual=dual)


def endo_image(group: Group, a: int, dual: bool = False) -> Subgroup:
    """X^(a) = {a x : x in X}."""
    return Subgroup(group, tuple(np.unique(group.scale_indices(a)).tolist()), dual=dual)


def endo_kernel(group: Group, a: int, dual: bool = False) -> Subgroup:
    """X_(a) = {x : a x = 0}."""
    return _subgroup_from_mask(group, group.scale_indices(a) == 0, dual)


def is_admissible(group: Group, a: int) -> bool:
    """a is admissible iff a X != {0}, i.e. some modulus does not divide a."""
    return any(int(a) % n for n in group.moduli)


def annihilator(group: Group, h: Subgroup) -> Subgroup:
    """A(X, H) for H in Y, or A(Y, K) for K in X; lands on the opposite side."""
    if h.parent.moduli != group.moduli:
        raise GroupMismatchError("subgroup does not belong to this group's dual")
    k = group.phase_numerators(group.coords, h.coords)
    return _subgroup_from_mask(group, ~k.any(axis=1), not h.dual)


def element_order(x) -> int:
    return reduce(math.lcm, (n // math.gcd(c, n) for c, n in zip(x.coords, x.group.moduli)), 1)


def all_product_groups(max_order: int, min_order: int = 2) -> list[Group]:
    """Every nondecreasing product presentation Z(n_1)x...xZ(n_d) with order in range."""
    out: list[Group] = []

    def extend(prefix: Sequence[int], prod: int) -> None:
        if prefix and prod >= min_order:
            out.append(Group(tuple(prefix)))
        start = prefix[-1] if prefix else 2
        for n in range(start, max_order // prod + 1):
            extend([*prefix, n], prod * n)

    extend([], 1)
    return sorted(out, key=lambda g: (g.order, g.moduli))
