import itertools

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from heydegroups.groups import Group, all_product_groups

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("fast", max_examples=10, deadline=None)
settings.load_profile("default")

SMALL_GROUPS = all_product_groups(36)


@st.composite
def groups(draw, max_order=36):
    return draw(st.sampled_from([g for g in SMALL_GROUPS if g.order <= max_order]))


@st.composite
def elements(draw, group):
    return group.element(tuple(draw(st.integers(0, n - 1)) for n in group.moduli))


@st.composite
def characters(draw, group):
    return group.character(tuple(draw(st.integers(0, n - 1)) for n in group.moduli))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def all_subgroups(group, dual=False):
    """Every subgroup, by closing all subsets of at most two generators (enough for rank <= 2)."""
    from heydegroups.groups import subgroup_generated

    pts = list(group.characters() if dual else group.elements())
    seen = {}
    for gens in itertools.chain(itertools.combinations(pts, 1), itertools.combinations(pts, 2)):
        h = subgroup_generated(group, gens, dual=dual)
        seen[h.indices] = h
    return list(seen.values())
