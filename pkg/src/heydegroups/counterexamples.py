"""Explicit symmetric instances whose distributions escape the expected classes.

Each constructor returns an :class:`Instance` carrying the distributions,
the coefficient spec and a ``checks`` dict of verifications computed at
construction time.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .config import TOL_ALGEBRA, TOL_POSITIVE
from .distributions import (
    Distribution,
    char_function,
    from_char_function,
    haar,
    has_nonvanishing_cf,
    is_degenerate,
    is_idempotent_shift,
    mixture,
    point_mass,
    uniform,
)
from .finite_difference import GroupFunction
from .groups import Element, Group, _is_prime, annihilator, element_order, endo_kernel, is_admissible, subgroup_generated
from .heyde import LinearFormsSpec, check_heyde_cf, check_heyde_exact


class ConstructionError(ValueError):
    """Parameters violate a constructor's preconditions."""


@dataclass
class Instance:
    kind: str
    group: Group
    spec: LinearFormsSpec
    distributions: list[Distribution]
    params: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)

    def verify_symmetry(self) -> None:
        cf = check_heyde_cf(self.group, self.spec, self.distributions)
        ex = check_heyde_exact(self.group, self.spec, self.distributions)
        self.checks["heyde_cf"] = cf.to_json()
        self.checks["heyde_exact"] = ex.to_json()


def _weight(a_weight) -> Fraction | float:
    w = Fraction(a_weight) if isinstance(a_weight, (int, Fraction, str)) else float(a_weight)
    if not 0 < w < 1:
        raise ConstructionError(f"weight must lie strictly between 0 and 1, got {a_weight}")
    return w


def thm1_II(g: Group, x0: Element, a_weight=Fraction(1, 2)) -> Instance:
    """mu = a E_0 + (1 - a) m_M with M = <x0> of prime order p; forms L1 = p xi_1 - xi_2, L2 = xi_1 + p xi_2.

    mu_hat is 1 on A(Y, M) and a elsewhere, constant on A(Y, M)-cosets, so the
    product identity reduces to one on Y / A(Y, M) = Z(p), where it is an equality.
    """
    if x0.group != g:
        raise ConstructionError(f"{x0} is not in {g}")
    p = element_order(x0)
    if not _is_prime(p):
        raise ConstructionError(f"order of x0 is {p}, not a prime")
    if not is_admissible(g, p):
        raise ConstructionError(f"pX is trivial on {g}; the construction needs p admissible")
    w = _weight(a_weight)
    m = subgroup_generated(g, [x0])
    mu = mixture([(w, point_mass(g.zero())), (1 - w, haar(m))])
    inst = Instance(
        "thm1-ii",
        g,
        LinearFormsSpec((p, -1), (1, p)),
        [mu, mu],
        params={"x0": list(x0.coords), "p": p, "a_weight": str(w) if isinstance(w, Fraction) else w},
    )

    cf = char_function(mu).values
    ann = annihilator(g, m)
    expected = np.where(ann.mask, 1.0, float(w))
    inst.checks["cf_matches_expected"] = bool(np.max(np.abs(cf - expected)) <= TOL_ALGEBRA)
    inst.checks["cf_max_error"] = float(np.max(np.abs(cf - expected)))
    # translation by A(Y, M) leaves mu_hat unchanged
    coset_err = max(float(np.max(np.abs(cf[g.shift_indices(h)] - cf))) for h in ann.coords)
    inst.checks["coset_invariant"] = coset_err <= TOL_ALGEBRA
    inst.checks["nonvanishing"] = has_nonvanishing_cf(mu)
    inst.checks["nondegenerate"] = not is_degenerate(mu)
    inst.checks["quotient_order"] = g.order // ann.order
    inst.verify_symmetry()
    return inst


def lemma5_truncated(p: int, k: int, a_weight=Fraction(1, 2)) -> Instance:
    """On X = Z(p^k): the transform f = 1 at 0, a on Y_(p) minus 0, and 0 off Y_(p).

    f inverts to nu = a m_{A(X, Y_(p))} + (1 - a) m_X, and nu, nu with forms
    L1 = p xi_1 - xi_2, L2 = xi_1 + p xi_2 is symmetric although nu is not a
    shifted Haar distribution.
    """
    if not _is_prime(p):
        raise ConstructionError(f"{p} is not prime")
    if k < 2:
        raise ConstructionError("need k >= 2 (on Z(p) the forms are not admissible)")
    if p == 2:
        warnings.warn("p = 2 is admitted on Z(2^k) but is not asserted by the original construction", stacklevel=2)
    w = _weight(a_weight)
    g = Group((p**k,))
    y_p = endo_kernel(g, p, dual=True)
    f = np.where(y_p.mask, float(w), 0.0)
    f[0] = 1.0
    nu = from_char_function(GroupFunction(g, f))

    expected = mixture([(w, haar(annihilator(g, y_p))), (1 - w, uniform(g))])
    err = float(np.max(np.abs(nu.probs - expected.probs)))
    inst = Instance(
        "lemma5",
        g,
        LinearFormsSpec((p, -1), (1, p)),
        [nu, nu],
        params={"p": p, "k": k, "a_weight": str(w) if isinstance(w, Fraction) else w},
    )
    inst.checks["inverse_matches_mixture"] = err <= TOL_POSITIVE
    inst.checks["inverse_max_error"] = err
    inst.checks["not_idempotent_shift"] = not is_idempotent_shift(nu)
    inst.checks["gcd_p2_plus_1"] = math.gcd(p * p + 1, p)
    inst.verify_symmetry()
    return inst


def lemma6(p: int, y1: int = 1, y2: int = 2, amplitude: float = 1.0) -> Instance:
    """On X = Z(p), p > 3: nu_i with density 1 + amplitude Re(x, y_i) against m_X.

    nu_i^ is 1 at 0, amplitude/2 at +-y_i and 0 elsewhere, so the default
    amplitude 1 gives the value 1/2 at +-y_i. Forms: L1 = xi_1 + xi_2 + xi_3 + xi_4,
    L2 = xi_1 + xi_2 + 2 xi_3 + 2 xi_4 with (mu_1..mu_4) = (nu_1, nu_2, nu_1, nu_2).
    """
    if not 0 < amplitude <= 1:
        raise ConstructionError(f"amplitude must lie in (0, 1], got {amplitude}")
    if not _is_prime(p) or p <= 3:
        raise ConstructionError(f"need a prime p > 3, got {p}")
    y1 %= p
    y2 %= p
    if y1 == 0 or y2 == 0:
        raise ConstructionError("y1 and y2 must be nonzero")
    if y1 == y2 or (y1 + y2) % p == 0:
        raise ConstructionError("need y1 != +-y2")
    g = Group((p,))
    x = np.arange(p)
    nus = [Distribution(g, (1 + amplitude * np.cos(2 * np.pi * x * y / p)) / p) for y in (y1, y2)]
    inst = Instance(
        "lemma6",
        g,
        LinearFormsSpec((1, 1, 1, 1), (1, 1, 2, 2)),
        [nus[0], nus[1], nus[0], nus[1]],
        params={"p": p, "y1": y1, "y2": y2, "amplitude": amplitude},
    )
    cfs = [char_function(nu).values for nu in nus]
    errs = []
    for cf, y in zip(cfs, (y1, y2)):
        expected = np.zeros(p)
        expected[0] = 1.0
        expected[[y, (-y) % p]] = amplitude / 2
        errs.append(float(np.max(np.abs(cf - expected))))
    inst.checks["cf_max_error"] = max(errs)
    inst.checks["cf_matches_expected"] = max(errs) <= TOL_ALGEBRA
    haar_cf = char_function(uniform(g)).values
    prod_err = float(np.max(np.abs(cfs[0] * cfs[1] - haar_cf)))
    inst.checks["product_is_haar_max_error"] = prod_err
    inst.checks["product_is_haar"] = prod_err <= TOL_ALGEBRA
    # the identity for m_X alone: m^(u+v) m^(u+2v) = m^(u-v) m^(u-2v)
    inst.checks["haar_identity_holds"] = check_heyde_cf(
        g, LinearFormsSpec((1, 1), (1, 2)), [uniform(g), uniform(g)], tol=TOL_ALGEBRA
    ).holds
    inst.checks["not_idempotent_shift"] = all(not is_idempotent_shift(nu) for nu in nus)
    inst.verify_symmetry()
    return inst
