"""Probability distributions on a finite group and their characteristic functions.

The forward transform is the unweighted sum

    mu_hat(y) = sum_x mu(x) (x, y),

so mu_hat(0) = 1; the inverse divides by the group order. Both are
computed with a multidimensional FFT on the coordinate grid.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .config import TOL_ALGEBRA, TOL_CLASSIFY, TOL_POSITIVE
from .finite_difference import GroupFunction, satisfies_fe1
from .groups import Element, Group, GroupMismatchError, Subgroup, _as_coords, whole


class NotPositiveDefinite(ValueError):
    """The inverse transform of a candidate characteristic function has a negative mass."""

    def __init__(self, message: str, most_negative: float):
        super().__init__(message)
        self.most_negative = most_negative


def _to_fraction(v) -> Fraction | None:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return Fraction(int(v))
    if isinstance(v, str):
        return Fraction(v.strip())
    return None


@dataclass(frozen=True, eq=False)
class Distribution:
    group: Group
    probs: np.ndarray
    exact: tuple[Fraction, ...] | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        p = np.asarray(self.probs, dtype=float)
        if p.shape != (self.group.order,):
            raise GroupMismatchError(f"expected {self.group.order} masses, got shape {p.shape}")
        if p.min() < -TOL_ALGEBRA:
            raise ValueError(f"negative mass {p.min()}")
        if abs(p.sum() - 1.0) > TOL_ALGEBRA:
            raise ValueError(f"masses sum to {p.sum()}, not 1")
        p = np.clip(p, 0.0, None)
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    # -- constructors --------------------------------------------------

    @classmethod
    def from_masses(cls, group: Group, masses, normalize: bool = False) -> "Distribution":
        """Build from a full mass vector (index order) or a mapping coords -> mass.

        If every mass is rational (int, Fraction or a string such as "1/3")
        normalisation is done exactly and the exact masses are retained.
        """
        if isinstance(masses, Mapping):
            raw: list = [0] * group.order
            for coords, m in masses.items():
                raw[group.index(_as_coords(group, coords))] += m if not isinstance(m, str) else Fraction(m)
        else:
            raw = list(masses)
            if len(raw) != group.order:
                raise GroupMismatchError(f"expected {group.order} masses, got {len(raw)}")
        fracs = [_to_fraction(m) for m in raw]
        if all(f is not None for f in fracs):
            if any(f < 0 for f in fracs):
                raise ValueError("negative mass")
            total = sum(fracs)
            if total == 0:
                raise ValueError("masses sum to zero")
            if total != 1 and not normalize:
                raise ValueError(f"masses sum to {total}, not 1")
            fracs = [f / total for f in fracs]
            return cls(group, np.array([float(f) for f in fracs]), exact=tuple(fracs))
        p = np.asarray([float(m) for m in raw], dtype=float)
        if normalize:
            p = p / p.sum()
        return cls(group, p)

    # -- views ----------------------------------------------------------

    def mass(self, x) -> float:
        return float(self.probs[self.group.index(_as_coords(self.group, x))])

    def __repr__(self) -> str:
        atoms = {tuple(int(c) for c in self.group.coords[i]): round(float(self.probs[i]), 12) for i in np.flatnonzero(self.probs)}
        return f"Distribution({self.group}, {atoms})"

    def allclose(self, other: "Distribution", tol: float = TOL_ALGEBRA) -> bool:
        return self.group == other.group and float(np.max(np.abs(self.probs - other.probs))) <= tol


@dataclass(frozen=True, eq=False)
class CharFunction(GroupFunction):
    """A function on the dual group, usually the transform of a distribution."""

    def violations(self, tol: float = TOL_ALGEBRA) -> list[str]:
        """Which characteristic-function invariants fail (empty when valid)."""
        v = self.values.astype(complex)
        out = []
        if abs(v[0] - 1) > tol:
            out.append("value at zero is not 1")
        if np.max(np.abs(v)) > 1 + tol:
            out.append("modulus exceeds 1")
        if np.max(np.abs(v[self.group.neg_indices] - np.conj(v))) > tol:
            out.append("not Hermitian")
        return out


# -- transforms -----------------------------------------------------------


def char_function(mu: Distribution) -> CharFunction:
    g = mu.group
    grid = mu.probs.reshape(g.moduli)
    vals = np.fft.ifftn(grid) * g.order
    return CharFunction(g, vals.reshape(-1))


def from_char_function(f: GroupFunction, tol: float = TOL_POSITIVE) -> Distribution:
    """Inverse transform; succeeds iff the recovered masses are nonnegative (Bochner on a finite group)."""
    g = f.group
    vals = np.asarray(f.values, dtype=complex).reshape(g.moduli)
    masses = (np.fft.fftn(vals) / g.order).reshape(-1)
    worst_imag = float(np.max(np.abs(masses.imag)))
    if worst_imag > tol:
        raise NotPositiveDefinite(f"inverse transform is not real (imaginary part {worst_imag:.3g})", float("nan"))
    real = masses.real
    most_negative = float(real.min())
    if most_negative < -tol:
        x = tuple(int(c) for c in g.coords[int(np.argmin(real))])
        raise NotPositiveDefinite(f"not positive definite: mass {most_negative:.6g} at {list(x)}", most_negative)
    real = np.clip(real, 0.0, None)
    return Distribution(g, real / real.sum())


# -- named distributions --------------------------------------------------


def point_mass(x: Element) -> Distribution:
    g = x.group
    masses = [Fraction(0)] * g.order
    masses[x.index] = Fraction(1)
    return Distribution.from_masses(g, masses)


def haar(k: Subgroup) -> Distribution:
    g = k.parent
    w = Fraction(1, k.order)
    masses = [Fraction(0)] * g.order
    for i in k.indices:
        masses[i] = w
    return Distribution.from_masses(g, masses)


def mixture(components: Sequence[tuple[object, Distribution]]) -> Distribution:
    """Convex combination sum_i w_i mu_i; exact when all weights and components are."""
    if not components:
        raise ValueError("empty mixture")
    g = components[0][1].group
    if any(mu.group != g for _, mu in components):
        raise GroupMismatchError("mixture components on different groups")
    weights = [_to_fraction(w) for w, _ in components]
    if all(w is not None for w in weights) and all(mu.exact is not None for _, mu in components):
        masses = [sum((w * mu.exact[i] for w, (_, mu) in zip(weights, components)), Fraction(0)) for i in range(g.order)]
        return Distribution.from_masses(g, masses)
    wf = np.array([float(w) for w, _ in components])
    p = sum(w * mu.probs for w, (_, mu) in zip(wf, components))
    return Distribution(g, p)


def uniform(group: Group) -> Distribution:
    return haar(whole(group))


# -- algebra --------------------------------------------------------------


def convolve(mu: Distribution, nu: Distribution) -> Distribution:
    """(mu * nu)(x) = sum_z mu(z) nu(x - z), summed directly over the support of mu."""
    if mu.group != nu.group:
        raise GroupMismatchError("convolution of distributions on different groups")
    g = mu.group
    if mu.exact is not None and nu.exact is not None:
        out = [Fraction(0)] * g.order
        for z in np.flatnonzero(mu.probs):
            idx = g.shift_indices(tuple(-c for c in g.coords[z]))
            for x in range(g.order):
                out[x] += mu.exact[z] * nu.exact[idx[x]]
        return Distribution.from_masses(g, out)
    out = np.zeros(g.order)
    for z in np.flatnonzero(mu.probs):
        out += mu.probs[z] * nu.probs[g.shift_indices(tuple(-c for c in g.coords[z]))]
    return Distribution(g, out)


def reflect(mu: Distribution) -> Distribution:
    """mu_bar(B) = mu(-B)."""
    neg = mu.group.neg_indices
    exact = tuple(mu.exact[i] for i in neg) if mu.exact is not None else None
    return Distribution(mu.group, mu.probs[neg], exact=exact)


def support(mu: Distribution, tol: float = TOL_ALGEBRA) -> list[Element]:
    g = mu.group
    return [g.element(g.coords[i]) for i in np.flatnonzero(mu.probs > tol)]


# -- classes D(X), I(X), Gamma(X), Gamma(X)*I(X) ---------------------------


def is_degenerate(mu: Distribution, tol: float = TOL_ALGEBRA) -> bool:
    return int(np.count_nonzero(mu.probs > tol)) == 1


def _unit_set(values: np.ndarray, tol: float) -> np.ndarray:
    return np.abs(np.abs(values) - 1.0) <= tol


def _is_subgroup_mask(group: Group, mask: np.ndarray) -> bool:
    if not mask[0]:
        return False
    members = group.coords[mask]
    diffs = group.index(members[:, None, :] - members[None, :, :])
    return bool(mask[diffs].all())


def is_idempotent_shift(mu: Distribution, tol: float = TOL_CLASSIFY) -> bool:
    """mu = E_x * m_K for some x, K: |mu_hat| is 0/1-valued and {|mu_hat| = 1} is a subgroup."""
    mods = np.abs(char_function(mu).values)
    if not np.all((mods <= tol) | (np.abs(mods - 1.0) <= tol)):
        return False
    return _is_subgroup_mask(mu.group, _unit_set(mods, tol))


def _phase_is_character(group: Group, phase: np.ndarray, tol: float) -> bool:
    masses = (np.fft.fftn(phase.reshape(group.moduli)) / group.order).reshape(-1)
    return abs(float(np.max(np.abs(masses))) - 1.0) <= tol


def is_gaussian(mu: Distribution, tol: float = TOL_CLASSIFY) -> bool:
    """mu_hat(y) = (x, y) exp(-phi(y)) with phi >= 0 solving the quadratic equation.

    phi = -log|mu_hat| is only available where mu_hat does not vanish, and the
    Gaussian form never vanishes, so a zero of mu_hat decides membership
    (false, unless mu is degenerate).
    """
    if is_degenerate(mu):
        return True
    vals = char_function(mu).values
    mods = np.abs(vals)
    if np.any(mods <= tol):
        return False
    phi = GroupFunction(mu.group, -np.log(np.minimum(mods, 1.0)))
    if not satisfies_fe1(phi, tol):
        return False
    return _phase_is_character(mu.group, vals / mods, tol)


def is_gaussian_times_idempotent(mu: Distribution, tol: float = TOL_CLASSIFY) -> bool:
    """mu = gamma * m_K: mu_hat is supported on a subgroup H = A(Y, K) and has Gaussian form on H."""
    g = mu.group
    vals = char_function(mu).values
    mods = np.abs(vals)
    live = mods > tol
    if not _is_subgroup_mask(g, live):
        return False
    idx = np.flatnonzero(live)
    members = g.coords[idx]
    plus = g.index(members[:, None, :] + members[None, :, :])
    minus = g.index(members[:, None, :] - members[None, :, :])
    phi = np.zeros(g.order)
    phi[idx] = -np.log(np.minimum(mods[idx], 1.0))
    defect = phi[plus] + phi[minus] - 2 * phi[idx][:, None] - 2 * phi[idx][None, :]
    if np.max(np.abs(defect)) > tol:
        return False
    theta = np.zeros(g.order, dtype=complex)
    theta[idx] = vals[idx] / mods[idx]
    mult = theta[plus] - theta[idx][:, None] * theta[idx][None, :]
    return bool(np.max(np.abs(mult)) <= tol)


def classify(mu: Distribution, tol: float = TOL_CLASSIFY) -> dict[str, bool]:
    return {
        "degenerate": is_degenerate(mu),
        "gaussian": is_gaussian(mu, tol),
        "idempotent_shift": is_idempotent_shift(mu, tol),
        "gaussian_times_idempotent": is_gaussian_times_idempotent(mu, tol),
    }


def has_nonvanishing_cf(mu: Distribution, tol: float = TOL_CLASSIFY) -> bool:
    return bool(np.min(np.abs(char_function(mu).values)) > tol)


def symmetrize(mu: Distribution) -> Distribution:
    """mu * mu_bar, whose transform is |mu_hat|^2."""
    return convolve(mu, reflect(mu))


def exact_masses(mu: Distribution) -> list[Fraction]:
    if mu.exact is not None:
        return list(mu.exact)
    return [Fraction(float(p)).limit_denominator(10**12) for p in mu.probs]


def random_rational(group: Group, rng: np.random.Generator, denominator: int, support_size: int | None = None) -> Distribution:
    """A random distribution with masses in (1/denominator) Z."""
    n = group.order
    k = n if support_size is None else max(1, min(support_size, n))
    atoms = rng.choice(n, size=k, replace=False)
    cuts = np.sort(rng.integers(0, denominator + 1, size=k - 1))
    counts = np.diff(np.concatenate(([0], cuts, [denominator])))
    masses = [Fraction(0)] * n
    for a, c in zip(atoms, counts):
        masses[int(a)] += Fraction(int(c), denominator)
    return Distribution.from_masses(group, masses)


def iter_grid(group: Group, denominator: int) -> Iterable[Distribution]:
    """Every distribution with masses in (1/denominator) Z, in lexicographic order."""
    n = group.order

    def compositions(total: int, parts: int):
        if parts == 1:
            yield (total,)
            return
        for first in range(total, -1, -1):
            for rest in compositions(total - first, parts - 1):
                yield (first, *rest)

    for comp in compositions(denominator, n):
        yield Distribution.from_masses(group, [Fraction(c, denominator) for c in comp])
