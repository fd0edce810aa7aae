"""Symmetry of the conditional law of L2 = sum b_j xi_j given L1 = sum a_j xi_j.

For independent xi_j with laws mu_j the symmetry is equivalent to the
product identity

    prod_j mu_j^(a_j u + b_j v) = prod_j mu_j^(a_j u - b_j v)   for all u, v in Y,

which ``check_heyde_cf`` sweeps exhaustively. ``check_heyde_exact`` decides
the same question from the exact joint law of (L1, L2), and
``check_q_heyde`` from the log-ratio of the two products. The module also
carries the finite-difference elimination that turns the additive form of
the identity into an annihilation statement for a single function.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .config import TOL_CLASSIFY, TOL_EQUATION, TOL_TV
from .distributions import Distribution, char_function, classify, has_nonvanishing_cf
from .finite_difference import GroupFunction, PolynomialTestResult, delta, is_polynomial
from .groups import Group, GroupMismatchError, _as_coords, is_admissible


class VanishingCharacteristicFunction(ValueError):
    def __init__(self, j: int, y: tuple[int, ...]):
        super().__init__(f"characteristic function of distribution {j} vanishes at {list(y)}")
        self.j = j
        self.y = y


@dataclass(frozen=True)
class LinearFormsSpec:
    """Integer coefficients of L1 = sum a_j xi_j and L2 = sum b_j xi_j."""

    a: tuple[int, ...]
    b: tuple[int, ...]

    def __post_init__(self) -> None:
        a = tuple(int(v) for v in self.a)
        b = tuple(int(v) for v in self.b)
        if len(a) != len(b):
            raise ValueError(f"a and b differ in length ({len(a)} vs {len(b)})")
        if not a:
            raise ValueError("need at least one coefficient pair")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def n(self) -> int:
        return len(self.a)

    @cached_property
    def l(self) -> np.ndarray:
        """l[i, j] = a_j b_i + b_j a_i."""
        a = np.asarray(self.a, dtype=np.int64)
        b = np.asarray(self.b, dtype=np.int64)
        return np.outer(b, a) + np.outer(a, b)

    @cached_property
    def m(self) -> np.ndarray:
        """m[i, j] = a_j b_i - b_j a_i."""
        a = np.asarray(self.a, dtype=np.int64)
        b = np.asarray(self.b, dtype=np.int64)
        return np.outer(b, a) - np.outer(a, b)

    def negate_b(self) -> "LinearFormsSpec":
        return LinearFormsSpec(self.a, tuple(-v for v in self.b))

    def to_json(self) -> dict:
        return {"a": list(self.a), "b": list(self.b)}


@dataclass(frozen=True)
class CoefficientReport:
    a_admissible: tuple[bool, ...]
    b_admissible: tuple[bool, ...]
    l_admissible: tuple[tuple[bool, ...], ...]
    m_admissible: tuple[tuple[bool, ...], ...]
    failures: tuple[str, ...]

    @property
    def passes(self) -> bool:
        return not self.failures

    @property
    def forms_proportional(self) -> bool:
        """Every m_ij with i != j inadmissible: then b_1 L1 = a_1 L2 on the group."""
        n = len(self.a_admissible)
        return all(not self.m_admissible[i][j] for i in range(n) for j in range(n) if i != j)

    def to_json(self) -> dict:
        return {
            "passes": self.passes,
            "failures": list(self.failures),
            "a_admissible": list(self.a_admissible),
            "b_admissible": list(self.b_admissible),
            "l_admissible": [list(r) for r in self.l_admissible],
            "m_admissible": [list(r) for r in self.m_admissible],
            "forms_proportional": self.forms_proportional,
        }


def check_coefficients(g: Group, spec: LinearFormsSpec) -> CoefficientReport:
    """Admissibility of every a_j, b_j and every l_ij (diagonal included).

    m_ij admissibility is reported but does not gate the verdict.
    """
    n = spec.n
    a_ok = tuple(is_admissible(g, v) for v in spec.a)
    b_ok = tuple(is_admissible(g, v) for v in spec.b)
    l_ok = tuple(tuple(is_admissible(g, int(spec.l[i, j])) for j in range(n)) for i in range(n))
    m_ok = tuple(tuple(is_admissible(g, int(spec.m[i, j])) for j in range(n)) for i in range(n))
    failures = []
    for j in range(n):
        if not a_ok[j]:
            failures.append(f"inadmissible coefficient a_{j + 1}={spec.a[j]}")
        if not b_ok[j]:
            failures.append(f"inadmissible coefficient b_{j + 1}={spec.b[j]}")
    for i in range(n):
        for j in range(i, n):
            if not l_ok[i][j]:
                failures.append(f"inadmissible cross-sum l_{i + 1}{j + 1}={int(spec.l[i, j])}")
    return CoefficientReport(a_ok, b_ok, l_ok, m_ok, tuple(failures))


@dataclass(frozen=True)
class HeydeVerdict:
    holds: bool
    max_violation: float
    tolerance: float
    witness: tuple[tuple[int, ...], tuple[int, ...]] | None = None
    witness_kind: str = "uv"

    def to_json(self) -> dict:
        out = {"holds": self.holds, "max_violation": self.max_violation, "tolerance": self.tolerance}
        if self.witness is not None:
            keys = ("u", "v") if self.witness_kind == "uv" else ("l1", "l2")
            out["witness"] = {keys[0]: list(self.witness[0]), keys[1]: list(self.witness[1])}
        return out


def _check_inputs(g: Group, spec: LinearFormsSpec, mus: Sequence[Distribution]) -> None:
    if len(mus) != spec.n:
        raise ValueError(f"{spec.n} coefficient pairs but {len(mus)} distributions")
    for mu in mus:
        if mu.group != g:
            raise GroupMismatchError(f"distribution on {mu.group}, expected {g}")


def form_indices(g: Group, a: int, b: int) -> np.ndarray:
    """idx[u, v] = index of a u + b v, over all pairs."""
    c = g.coords
    return g.index(a * c[:, None, :] + b * c[None, :, :])


def cf_sides(g: Group, spec: LinearFormsSpec, mus: Sequence[Distribution]) -> tuple[np.ndarray, np.ndarray]:
    """Both sides of the product identity as (order, order) arrays over (u, v)."""
    _check_inputs(g, spec, mus)
    lhs = np.ones((g.order, g.order), dtype=complex)
    rhs = np.ones((g.order, g.order), dtype=complex)
    for a, b, mu in zip(spec.a, spec.b, mus):
        cf = char_function(mu).values
        lhs *= cf[form_indices(g, a, b)]
        rhs *= cf[form_indices(g, a, -b)]
    return lhs, rhs


def _verdict_from_grid(g: Group, diff: np.ndarray, tol: float, kind: str) -> HeydeVerdict:
    worst = float(np.max(diff))
    witness = None
    if worst > tol:
        u, v = np.unravel_index(int(np.argmax(diff)), diff.shape)
        witness = (tuple(int(c) for c in g.coords[u]), tuple(int(c) for c in g.coords[v]))
    return HeydeVerdict(worst <= tol, worst, tol, witness, kind)


def check_heyde_cf(g: Group, spec: LinearFormsSpec, mus: Sequence[Distribution], tol: float = TOL_EQUATION) -> HeydeVerdict:
    lhs, rhs = cf_sides(g, spec, mus)
    return _verdict_from_grid(g, np.abs(lhs - rhs), tol, "uv")


def check_heyde_exact(g: Group, spec: LinearFormsSpec, mus: Sequence[Distribution], tol: float = TOL_TV) -> HeydeVerdict:
    """Compare the exact laws of (L1, L2) and (L1, -L2) in total variation."""
    from .oracle import joint_law

    _check_inputs(g, spec, mus)
    law = joint_law(g, spec, mus)
    flipped = law.negate_second()
    diff = np.abs(law.grid - flipped.grid)
    tv = 0.5 * float(diff.sum())
    witness = None
    if tv > tol:
        s1, s2 = np.unravel_index(int(np.argmax(diff)), diff.shape)
        witness = (tuple(int(c) for c in g.coords[s1]), tuple(int(c) for c in g.coords[s2]))
    return HeydeVerdict(tv <= tol, tv, tol, witness, "l1l2")


@dataclass(frozen=True)
class QHeydeVerdict:
    holds: bool
    r_at_zero: complex
    max_abs_r: float
    polynomial: PolynomialTestResult
    tolerance: float

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "r_at_zero": [self.r_at_zero.real, self.r_at_zero.imag],
            "max_abs_r": self.max_abs_r,
            "polynomial": self.polynomial.to_json(),
            "tolerance": self.tolerance,
        }


def require_nonvanishing(mus: Sequence[Distribution], tol: float = TOL_CLASSIFY) -> None:
    for j, mu in enumerate(mus, start=1):
        mods = np.abs(char_function(mu).values)
        if mods.min() <= tol:
            y = tuple(int(c) for c in mu.group.coords[int(np.argmin(mods))])
            raise VanishingCharacteristicFunction(j, y)


def q_residual(g: Group, spec: LinearFormsSpec, mus: Sequence[Distribution]) -> GroupFunction:
    """r(u, v) = log of (prod mu_j^(a_j u + b_j v)) / (prod mu_j^(a_j u - b_j v)), principal branch."""
    require_nonvanishing(mus)
    lhs, rhs = cf_sides(g, spec, mus)
    return GroupFunction(g.product(g), np.log(lhs / rhs).reshape(-1))


def check_q_heyde(
    g: Group,
    spec: LinearFormsSpec,
    mus: Sequence[Distribution],
    tol: float = TOL_EQUATION,
    max_degree: int | None = None,
) -> QHeydeVerdict:
    """Symmetry under Q-independence: the log-ratio r must be a polynomial on Y x Y with r(0, 0) = 0."""
    r = q_residual(g, spec, mus)
    poly = is_polynomial(r, max_degree=max_degree, tol=tol)
    r0 = complex(r.values[0])
    holds = poly.is_polynomial and abs(r0) <= tol
    return QHeydeVerdict(holds, r0, r.max_abs(), poly, tol)


# -- finite-difference elimination -----------------------------------------


@dataclass(frozen=True)
class _Term:
    """Delta_{c_1 h_1} ... Delta_{c_k h_k} psi_j evaluated at a_j u + sign b_j v."""

    j: int
    sign: int
    steps: tuple[tuple[int, tuple[int, ...]], ...] = ()

    def shifted(self, coef: int, h: tuple[int, ...]) -> "_Term":
        return _Term(self.j, self.sign, self.steps + ((coef, h),))


@dataclass
class ReductionState:
    """Symbolic left and right sides of the equation after some elimination steps."""

    lhs: list[_Term]
    rhs: list[_Term]
    label: str = "start"
    direction: tuple[tuple[int, ...], tuple[int, ...]] | None = field(default=None)


def _substitute(state: ReductionState, spec: LinearFormsSpec, g: Group, t: int, h, sign_v: int, label: str) -> ReductionState:
    """Replace (u, v) by (u + b_t h, v + sign_v a_t h) and subtract the original equation.

    A term psi_j(a_j u + s b_j v) picks up Delta_{c h} with c = a_j b_t + s sign_v b_j a_t;
    terms with c = 0 cancel exactly.
    """
    a, b = spec.a, spec.b
    h = _as_coords(g, h)

    def step(terms: list[_Term]) -> list[_Term]:
        out = []
        for term in terms:
            c = a[term.j] * b[t] + term.sign * sign_v * b[term.j] * a[t]
            if c != 0:
                out.append(term.shifted(c, h))
        return out

    du = tuple(b[t] * x for x in h)
    dv = tuple(sign_v * a[t] * x for x in h)
    return ReductionState(step(state.lhs), step(state.rhs), label, (du, dv))


def reduction_trace(spec: LinearFormsSpec, g: Group, hs: Sequence, ks: Sequence) -> list[ReductionState]:
    """Every intermediate equation: n h-steps clear the right side, n-1 k-steps leave only psi_1."""
    n = spec.n
    if len(hs) != n:
        raise ValueError(f"need {n} h directions, got {len(hs)}")
    if len(ks) != n - 1:
        raise ValueError(f"need {n - 1} k directions (k_2 .. k_n), got {len(ks)}")
    state = ReductionState([_Term(j, +1) for j in range(n)], [_Term(j, -1) for j in range(n)])
    states = [state]
    for t in range(n - 1, -1, -1):
        state = _substitute(state, spec, g, t, hs[t], +1, f"h_{t + 1}")
        states.append(state)
    for t in range(n - 1, 0, -1):
        state = _substitute(state, spec, g, t, ks[t - 1], -1, f"k_{t + 1}")
        states.append(state)
    return states


def evaluate_terms(terms: Sequence[_Term], psis: Sequence[GroupFunction], spec: LinearFormsSpec) -> GroupFunction:
    """Sum of the terms as a function on Y x Y."""
    g = psis[0].group
    total = np.zeros(g.order * g.order, dtype=complex if any(np.iscomplexobj(p.values) for p in psis) else float)
    for term in terms:
        f = psis[term.j]
        for coef, h in term.steps:
            f = delta(tuple(coef * x for x in h), f)
        idx = form_indices(g, spec.a[term.j], term.sign * spec.b[term.j])
        total = total + f.values[idx].reshape(-1)
    return GroupFunction(g.product(g), total)


def reduction_pipeline(psis: Sequence[GroupFunction], spec: LinearFormsSpec, hs: Sequence, ks: Sequence) -> GroupFunction:
    """Left-hand residual after eliminating psi_n .. psi_2, as a function of (u, v).

    If the psis satisfy sum psi_j(a_j u + b_j v) = sum psi_j(a_j u - b_j v),
    the residual vanishes identically for every choice of hs and ks.
    """
    if len(psis) != spec.n:
        raise ValueError(f"{spec.n} coefficient pairs but {len(psis)} functions")
    g = psis[0].group
    if any(p.group != g for p in psis):
        raise GroupMismatchError("psi functions on different groups")
    final = reduction_trace(spec, g, hs, ks)[-1]
    assert not final.rhs and all(t.j == 0 for t in final.lhs)
    return evaluate_terms(final.lhs, psis, spec)


def restrict_v0(residual: GroupFunction, g: Group) -> GroupFunction:
    """The residual along v = 0, a function of u alone."""
    return GroupFunction(g, residual.values.reshape(g.order, g.order)[:, 0])


def psi_from_distributions(mus: Sequence[Distribution]) -> list[GroupFunction]:
    """psi_j = -log |mu_j^|^2, the transform of mu_j * mu_j-bar made additive."""
    require_nonvanishing(mus)
    return [GroupFunction(mu.group, -np.log(np.abs(char_function(mu).values) ** 2)) for mu in mus]


# -- conclusions -------------------------------------------------------------


def classify_conclusion(g: Group, spec: LinearFormsSpec, mus: Sequence[Distribution], verdict: HeydeVerdict) -> dict:
    """Place a symmetric instance against the characterization results for finite groups.

    Cases (finite X, X != X_(2)):
      prime-exponent    X = X_(p), p > 2, nonvanishing transforms: every mu_j degenerate.
      exponent-3        X = X_(3), no restriction on transforms: every mu_j degenerate.
      nonvanishing-counterexample   any other group admits symmetric tuples with
                        nonvanishing transforms and no mu_j Gaussian.
      idempotent-counterexample     groups other than X_(3) admit symmetric tuples
                        with no mu_j in Gamma*I.
    """
    coeffs = check_coefficients(g, spec)
    p = g.exponent_prime()
    nonvanishing = [has_nonvanishing_cf(mu) for mu in mus]
    classes = [classify(mu) for mu in mus]
    all_degenerate = all(c["degenerate"] for c in classes)
    none_gaussian = all(not c["gaussian"] for c in classes)
    none_gi = all(not c["gaussian_times_idempotent"] for c in classes)

    report: dict = {
        "group": str(g),
        "exponent_prime": p,
        "symmetric": verdict.holds,
        "coefficients_pass": coeffs.passes,
        "forms_proportional": coeffs.forms_proportional,
        "nonvanishing": nonvanishing,
        "classes": classes,
        "case": None,
        "expected": None,
        "consistent": None,
        "counterexample": False,
    }
    if p is not None:
        d_note = "yes" if not all_degenerate else "no"
    else:
        d_note = "no (non-prime-exponent group)"

    if not verdict.holds:
        report["case"] = "not-symmetric"
        report["counterexample_to_D_conclusion"] = "no (not symmetric)"
        return report
    if p == 2:
        report["case"] = "exponent-2-excluded"
        report["counterexample_to_D_conclusion"] = "no (exponent-2 group excluded)"
        return report
    if not coeffs.passes:
        report["case"] = "coefficients-inadmissible"
        report["counterexample_to_D_conclusion"] = "no (coefficient hypotheses fail)"
        return report

    if p is not None and (p == 3 or all(nonvanishing)):
        report["case"] = "exponent-3" if p == 3 else "prime-exponent"
        report["expected"] = "all degenerate"
        report["consistent"] = all_degenerate
        report["counterexample_to_D_conclusion"] = d_note
        return report

    report["counterexample_to_D_conclusion"] = d_note if p is None else "no (vanishing transform)"
    if all(nonvanishing) and none_gaussian:
        report["case"] = "nonvanishing-counterexample"
        report["expected"] = "some group other than X_(p) admits this"
        report["consistent"] = p is None
        report["counterexample"] = True
    elif none_gi:
        report["case"] = "idempotent-counterexample"
        report["expected"] = "some group other than X_(3) admits this"
        report["consistent"] = p != 3
        report["counterexample"] = True
    else:
        report["case"] = "no-conclusion-violated"
        report["consistent"] = True
    return report
