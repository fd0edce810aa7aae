"""Random and planted Heyde instances shared by the test modules."""

from __future__ import annotations

import numpy as np

from heydegroups.distributions import Distribution, mixture, point_mass, random_rational, reflect
from heydegroups.groups import Group
from heydegroups.heyde import LinearFormsSpec
from heydegroups.oracle import random_nonvanishing


def random_spec(rng: np.random.Generator, n: int, coef: int = 4) -> LinearFormsSpec:
    a = rng.integers(-coef, coef + 1, size=n)
    b = rng.integers(-coef, coef + 1, size=n)
    return LinearFormsSpec(tuple(int(v) for v in a), tuple(int(v) for v in b))


def random_distribution(g: Group, rng: np.random.Generator) -> Distribution:
    d = int(rng.integers(2, 13))
    return random_rational(g, rng, d, support_size=int(rng.integers(1, g.order + 1)))


def random_instance(g: Group, rng: np.random.Generator, n: int):
    spec = random_spec(rng, n)
    return spec, [random_distribution(g, rng) for _ in range(n)]


def symmetric_part(mu: Distribution) -> Distribution:
    return mixture([("1/2", mu), ("1/2", reflect(mu))])


def planted_instance(g: Group, rng: np.random.Generator, n: int, nonvanishing: bool = False):
    """An instance that satisfies the product identity by construction.

    Families: iid pair with a = (s, s), b = (t, -t); every b_j = 0; point
    masses with sum b_j x_j = 0; a_j = 0 against symmetric laws. Extra
    coordinates (n = 3) are a point mass at 0 or a symmetric law with a = 0.
    """
    draw = (lambda: random_nonvanishing(g, rng)) if nonvanishing else (lambda: random_distribution(g, rng))
    coef = lambda: int(rng.integers(-4, 5))
    family = int(rng.integers(0, 4))
    if family == 0:
        s, t = coef(), coef()
        mu = draw()
        a, b, mus = [s, s], [t, -t], [mu, mu]
    elif family == 1:
        a, b = [coef() for _ in range(2)], [0, 0]
        mus = [draw(), draw()]
    elif family == 2:
        a, b = [coef() for _ in range(2)], [coef() for _ in range(2)]
        x1 = g.element(g.coords[int(rng.integers(g.order))])
        # choose x2 with b_1 x1 + b_2 x2 = 0 when possible, else fall back to zeros
        target = -(b[0] * x1)
        hits = [x for x in g.elements() if b[1] * x == target]
        if not hits:
            x1, hits = g.zero(), [g.zero()]
        x2 = hits[int(rng.integers(len(hits)))]
        mus = [point_mass(x1), point_mass(x2)]
    else:
        a, b = [0, 0], [coef(), coef()]
        mus = [symmetric_part(draw()) for _ in range(2)]
    if n == 3:
        if rng.integers(2):
            a.append(coef())
            b.append(coef())
            mus.append(point_mass(g.zero()))
        else:
            a.append(0)
            b.append(coef())
            mus.append(symmetric_part(draw()))
    return LinearFormsSpec(tuple(a), tuple(b)), mus


