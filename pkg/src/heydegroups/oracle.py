"""Independent ground truth: exact joint laws, Monte-Carlo cross-checks and brute-force searches."""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .config import check_bound
from .distributions import (
    Distribution,
    has_nonvanishing_cf,
    is_degenerate,
    is_gaussian,
    iter_grid,
    random_rational,
)
from .groups import Group

PRNG_ALGORITHM = "Philox4x64-10 (numpy), key from SeedSequence([seed, chunk])"
SAMPLE_CHUNK = 4096


@dataclass(frozen=True, eq=False)
class JointLaw:
    """Law of (L1, L2) on X x X; ``grid[s1, s2]`` is the mass at (s1, s2) by index."""

    base: Group
    grid: np.ndarray

    @property
    def group(self) -> Group:
        return self.base.product(self.base)

    @property
    def probs(self) -> np.ndarray:
        return self.grid.reshape(-1)

    def negate_second(self) -> "JointLaw":
        """Law of (L1, -L2)."""
        return JointLaw(self.base, self.grid[:, self.base.neg_indices])

    def marginal(self, axis: int) -> np.ndarray:
        return self.grid.sum(axis=1 - axis)

    def tv(self, other: "JointLaw") -> float:
        return 0.5 * float(np.abs(self.grid - other.grid).sum())


def joint_law(g: Group, spec, mus: Sequence[Distribution]) -> JointLaw:
    """Exact law of (sum a_j xi_j, sum b_j xi_j), one variable at a time.

    Cost is sum_j |supp mu_j| * |X|^2; X^n is never materialised.
    """
    check_bound(g.order * g.order, "joint law")
    law = np.zeros((g.order, g.order))
    law[0, 0] = 1.0
    for a, b, mu in zip(spec.a, spec.b, mus):
        nxt = np.zeros_like(law)
        for x in np.flatnonzero(mu.probs):
            cx = g.coords[x]
            i1 = g.shift_indices(a * cx)
            i2 = g.shift_indices(b * cx)
            nxt[np.ix_(i1, i2)] += mu.probs[x] * law
        law = nxt
    return JointLaw(g, law)


def naive_joint_law(g: Group, spec, mus: Sequence[Distribution]) -> JointLaw:
    """The same law by enumerating every tuple in the product of supports."""
    supports = [np.flatnonzero(mu.probs) for mu in mus]
    check_bound(math.prod(len(s) for s in supports), "tuple enumeration")
    law = np.zeros((g.order, g.order))
    a = np.asarray(spec.a)
    b = np.asarray(spec.b)
    for combo in itertools.product(*supports):
        w = math.prod(mu.probs[x] for mu, x in zip(mus, combo))
        pts = g.coords[list(combo)]
        law[g.index(a @ pts), g.index(b @ pts)] += w
    return JointLaw(g, law)


# -- sampling ----------------------------------------------------------------


def _sample_chunk(g: Group, spec, mus: Sequence[Distribution], size: int, seed: int, chunk: int) -> np.ndarray:
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, chunk])))
    l1 = np.zeros((size, g.rank), dtype=np.int64)
    l2 = np.zeros((size, g.rank), dtype=np.int64)
    for a, b, mu in zip(spec.a, spec.b, mus):
        draws = g.coords[rng.choice(g.order, size=size, p=mu.probs)]
        l1 += a * draws
        l2 += b * draws
    counts = np.zeros((g.order, g.order), dtype=np.int64)
    np.add.at(counts, (g.index(l1), g.index(l2)), 1)
    return counts


def sample_check(g: Group, spec, mus: Sequence[Distribution], trials: int, seed: int, jobs: int = 1) -> dict:
    """Empirical joint law of (L1, L2) from i.i.d. draws, compared with the exact law.

    Trials are cut into fixed chunks seeded by (seed, chunk index), so the
    report does not depend on ``jobs``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    sizes = [SAMPLE_CHUNK] * (trials // SAMPLE_CHUNK)
    if trials % SAMPLE_CHUNK:
        sizes.append(trials % SAMPLE_CHUNK)
    tasks = [(size, chunk) for chunk, size in enumerate(sizes)]
    if jobs > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(lambda t: _sample_chunk(g, spec, mus, t[0], seed, t[1]), tasks))
    else:
        parts = [_sample_chunk(g, spec, mus, size, seed, chunk) for size, chunk in tasks]
    counts = sum(parts)
    empirical = JointLaw(g, counts / trials)
    exact = joint_law(g, spec, mus)
    expected = exact.grid * trials
    live = expected > 0
    chi2 = float((((counts - expected) ** 2)[live] / expected[live]).sum())
    off_support = int(counts[~live].sum())
    return {
        "algorithm": PRNG_ALGORITHM,
        "seed": int(seed),
        "trials": int(trials),
        "tv_empirical_vs_exact": empirical.tv(exact),
        "tv_empirical_symmetry": empirical.tv(empirical.negate_second()),
        "tv_exact_symmetry": exact.tv(exact.negate_second()),
        "chi_square": chi2,
        "chi_square_dof": max(int(live.sum()) - 1, 0),
        "off_support_draws": off_support,
    }


# -- searches ----------------------------------------------------------------


@dataclass
class SearchResult:
    witness: list[Distribution] | None
    spec: object | None
    examined: int
    mode: str

    @property
    def found(self) -> bool:
        return self.witness is not None


def _fails_gate(mu: Distribution, gate: str) -> bool:
    if gate == "degenerate":
        return not is_degenerate(mu)
    if gate == "gaussian":
        return not is_gaussian(mu)
    raise ValueError(f"unknown gate {gate!r}")


def grid_distributions(g: Group, max_denominator: int, nonvanishing: bool = True) -> list[Distribution]:
    """All distributions with masses of denominator <= max_denominator, deduplicated."""
    seen = set()
    out = []
    for d in range(1, max_denominator + 1):
        for mu in iter_grid(g, d):
            if mu.exact in seen:
                continue
            seen.add(mu.exact)
            if nonvanishing and not has_nonvanishing_cf(mu):
                continue
            out.append(mu)
    return out


def random_passing_spec(g: Group, rng: np.random.Generator, n_choices=(2, 3), coef_range: int = 6, max_tries: int = 10_000):
    from .heyde import LinearFormsSpec, check_coefficients

    for _ in range(max_tries):
        n = int(rng.choice(n_choices))
        a = rng.integers(-coef_range, coef_range + 1, size=n)
        b = rng.integers(-coef_range, coef_range + 1, size=n)
        spec = LinearFormsSpec(tuple(int(v) for v in a), tuple(int(v) for v in b))
        if check_coefficients(g, spec).passes:
            return spec
    raise RuntimeError(f"no admissible coefficient spec found on {g}")


def random_nonvanishing(g: Group, rng: np.random.Generator, max_denominator: int = 24, max_tries: int = 1000) -> Distribution:
    for _ in range(max_tries):
        d = int(rng.integers(2, max_denominator + 1))
        mu = random_rational(g, rng, d, support_size=int(rng.integers(1, g.order + 1)))
        if has_nonvanishing_cf(mu):
            return mu
    raise RuntimeError(f"no distribution with nonvanishing transform found on {g}")


def search_nondegenerate(
    g: Group,
    spec=None,
    budget: int = 10_000,
    seed: int = 0,
    grid_denominator: int | None = None,
    gate: str = "degenerate",
    candidates: Iterable[Sequence[Distribution]] = (),
    strict: bool = True,
) -> SearchResult:
    """Look for a symmetric tuple with nonvanishing transforms and some mu_j outside the gate class.

    ``grid_denominator`` switches to exhaustive enumeration of the rational
    grid; otherwise ``budget`` random tuples are drawn (with a fresh random
    admissible spec each trial when ``spec`` is None). ``candidates`` are
    tried first, which lets a planted instance confirm the probe works.
    """
    from .heyde import check_coefficients, check_heyde_cf

    if strict:
        if g.exponent_prime() is None:
            raise ValueError(f"{g} is not of prime exponent")
        if spec is not None and not check_coefficients(g, spec).passes:
            raise ValueError("coefficient spec fails admissibility")
    examined = 0

    def hit(s, mus) -> bool:
        return any(_fails_gate(mu, gate) for mu in mus) and check_heyde_cf(g, s, mus).holds

    for mus in candidates:
        examined += 1
        if all(has_nonvanishing_cf(mu) for mu in mus) and hit(spec, mus):
            return SearchResult(list(mus), spec, examined, "planted")

    if grid_denominator is not None:
        if spec is None:
            raise ValueError("grid search needs a fixed spec")
        pool = grid_distributions(g, grid_denominator)
        for mus in itertools.product(pool, repeat=spec.n):
            examined += 1
            if hit(spec, mus):
                return SearchResult(list(mus), spec, examined, "grid")
        return SearchResult(None, spec, examined, "grid")

    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, 0])))
    for _ in range(budget):
        s = spec if spec is not None else random_passing_spec(g, rng)
        mus = [random_nonvanishing(g, rng) for _ in range(s.n)]
        examined += 1
        if hit(s, mus):
            return SearchResult(mus, s, examined, "random")
    return SearchResult(None, spec, examined, "random")


def search_fe1_solutions(g: Group, max_denominator: int = 4, max_value: int = 4, limit: int = 1) -> tuple[list[list[Fraction]], int]:
    """Exhaustive backtracking over phi: Y -> {k/d : d <= max_denominator, 0 <= k/d <= max_value}.

    Returns up to ``limit`` nonzero solutions of the quadratic equation and the
    number of search nodes visited. Each equation is checked as soon as all
    four of its points are assigned.
    """
    values = sorted({Fraction(k, d) for d in range(1, max_denominator + 1) for k in range(0, max_value * d + 1)})
    n = g.order
    table = g.add_table()
    minus = table[:, g.neg_indices]
    by_last: list[list[tuple[int, int, int, int]]] = [[] for _ in range(n)]
    seen = set()
    for u in range(n):
        for v in range(n):
            key = (int(table[u, v]), int(minus[u, v]), u, v)
            if key in seen:
                continue
            seen.add(key)
            by_last[max(key)].append(key)
    phi: list[Fraction] = [Fraction(0)] * n
    found: list[list[Fraction]] = []
    nodes = 0

    def ok(k: int) -> bool:
        return all(phi[s] + phi[d] == 2 * (phi[u] + phi[v]) for s, d, u, v in by_last[k])

    def assign(k: int) -> None:
        nonlocal nodes
        if len(found) >= limit:
            return
        if k == n:
            if any(phi):
                found.append(list(phi))
            return
        for val in values:
            nodes += 1
            phi[k] = val
            if ok(k):
                assign(k + 1)
        phi[k] = Fraction(0)

    assign(0)
    return found, nodes
