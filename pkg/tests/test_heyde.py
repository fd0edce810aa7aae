import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heydegroups.counterexamples import lemma5_truncated, lemma6, thm1_II
from heydegroups.distributions import (
    Distribution,
    char_function,
    haar,
    has_nonvanishing_cf,
    mixture,
    point_mass,
    uniform,
)
from heydegroups.finite_difference import GroupFunction
from heydegroups.groups import Group, GroupMismatchError, all_product_groups, whole
from heydegroups.heyde import (
    LinearFormsSpec,
    VanishingCharacteristicFunction,
    check_coefficients,
    check_heyde_cf,
    check_heyde_exact,
    check_q_heyde,
    classify_conclusion,
    evaluate_terms,
    psi_from_distributions,
    q_residual,
    reduction_pipeline,
    reduction_trace,
    restrict_v0,
)
from heydegroups.oracle import random_nonvanishing

from .instances import planted_instance, random_instance

GROUPS_9 = all_product_groups(9)


def brute_identity_gap(g, spec, mus):
    """max |prod mu_j^(a_j u + b_j v) - prod mu_j^(a_j u - b_j v)| by explicit loops over characters."""
    cfs = [char_function(mu) for mu in mus]
    worst = 0.0
    for u in g.characters():
        for v in g.characters():
            lhs = rhs = 1
            for a, b, cf in zip(spec.a, spec.b, cfs):
                lhs *= cf(a * u + b * v)
                rhs *= cf(a * u - b * v)
            worst = max(worst, abs(lhs - rhs))
    return worst


# -- LinearFormsSpec and coefficients --------------------------------------------------


def test_spec_matrices():
    spec = LinearFormsSpec((1, 2, 3), (4, 5, 6))
    for i, j in itertools.product(range(3), repeat=2):
        assert spec.l[i, j] == spec.a[j] * spec.b[i] + spec.b[j] * spec.a[i]
        assert spec.m[i, j] == spec.a[j] * spec.b[i] - spec.b[j] * spec.a[i]
    assert np.array_equal(spec.l, spec.l.T)
    assert not spec.m.diagonal().any()
    with pytest.raises(ValueError):
        LinearFormsSpec((1, 2), (1,))
    with pytest.raises(ValueError):
        LinearFormsSpec((), ())


def test_coefficients_examples():
    assert check_coefficients(Group((3, 3)), LinearFormsSpec((1, 1), (1, 1))).passes
    rep = check_coefficients(Group((5,)), LinearFormsSpec((5, 1), (1, 5)))
    assert not rep.passes
    assert "inadmissible coefficient a_1=5" in rep.failures
    assert "inadmissible coefficient b_2=5" in rep.failures


@pytest.mark.parametrize("g", [Group((2,)), Group((2, 2)), Group((2, 2, 2))], ids=str)
def test_exponent_two_has_no_valid_spec(g):
    for a1, a2, b1, b2 in itertools.product(range(-3, 4), repeat=4):
        rep = check_coefficients(g, LinearFormsSpec((a1, a2), (b1, b2)))
        assert not rep.passes
        # the diagonal cross-sums 2 a_j b_j are always inadmissible here
        assert not any(rep.l_admissible[j][j] for j in range(2))


def test_m_reported_not_gated():
    # a = b = (1, 1) on Z(3): every m_ij vanishes but the coefficients pass
    rep = check_coefficients(Group((3,)), LinearFormsSpec((1, 1), (1, 1)))
    assert rep.passes and rep.forms_proportional
    assert rep.to_json()["m_admissible"] == [[False, False], [False, False]]


# -- the product identity ----------------------------------------------------------------------


def test_coset_mixture_shape_on_z3():
    g = Group((3,))
    mu = mixture([("1/2", point_mass(g.zero())), ("1/2", uniform(g))])
    v = check_heyde_cf(g, LinearFormsSpec((3, -1), (1, 3)), [mu, mu])
    assert v.holds and v.witness is None


@given(st.data())
@settings(max_examples=80)
def test_cf_matches_brute_force(data):
    g = data.draw(st.sampled_from(GROUPS_9))
    rng = np.random.default_rng(data.draw(st.integers(0, 2**32)))
    spec, mus = random_instance(g, rng, data.draw(st.sampled_from([2, 3])))
    v = check_heyde_cf(g, spec, mus)
    assert v.max_violation == pytest.approx(brute_identity_gap(g, spec, mus), abs=1e-12)
    assert v.holds == (v.max_violation <= v.tolerance)
    if not v.holds:
        u, w = v.witness
        lhs = rhs = 1
        for a, b, mu in zip(spec.a, spec.b, mus):
            cf = char_function(mu)
            lhs *= cf(a * g.character(u) + b * g.character(w))
            rhs *= cf(a * g.character(u) - b * g.character(w))
        assert abs(lhs - rhs) == pytest.approx(v.max_violation, abs=1e-12)


@given(st.data())
@settings(max_examples=120)
def test_cf_and_exact_agree(data):
    g = data.draw(st.sampled_from(GROUPS_9))
    rng = np.random.default_rng(data.draw(st.integers(0, 2**32)))
    n = data.draw(st.sampled_from([2, 3]))
    make = data.draw(st.sampled_from([random_instance, planted_instance]))
    spec, mus = make(g, rng, n)
    assert check_heyde_cf(g, spec, mus).holds == check_heyde_exact(g, spec, mus).holds


@given(st.data())
def test_negating_b_keeps_verdict(data):
    g = data.draw(st.sampled_from(GROUPS_9))
    rng = np.random.default_rng(data.draw(st.integers(0, 2**32)))
    spec, mus = random_instance(g, rng, 2)
    v1 = check_heyde_cf(g, spec, mus)
    v2 = check_heyde_cf(g, spec.negate_b(), mus)
    assert v1.holds == v2.holds
    assert v1.max_violation == pytest.approx(v2.max_violation, abs=1e-12)


@given(st.data())
def test_point_masses(data):
    """The conditional law is the atom at sum b_j x_j, symmetric iff twice it is zero."""
    g = data.draw(st.sampled_from(GROUPS_9))
    rng = np.random.default_rng(data.draw(st.integers(0, 2**32)))
    spec, _ = random_instance(g, rng, data.draw(st.sampled_from([2, 3])))
    xs = [g.element(g.coords[int(rng.integers(g.order))]) for _ in range(spec.n)]
    mus = [point_mass(x) for x in xs]
    s = g.zero()
    for b, x in zip(spec.b, xs):
        s = s + b * x
    expected = (2 * s).is_zero()
    assert check_heyde_cf(g, spec, mus).holds == expected
    assert check_heyde_exact(g, spec, mus).holds == expected


def test_z5_uniform_and_point_mass():
    g = Group((5,))
    spec = LinearFormsSpec((1, 1), (1, 4))
    mus = [uniform(g), point_mass(g.element(1))]
    cf, ex = check_heyde_cf(g, spec, mus), check_heyde_exact(g, spec, mus)
    assert cf.holds == ex.holds
    assert brute_identity_gap(g, spec, mus) == pytest.approx(cf.max_violation, abs=1e-12)


def test_input_validation():
    g = Group((3,))
    with pytest.raises(ValueError):
        check_heyde_cf(g, LinearFormsSpec((1, 1), (1, 1)), [uniform(g)])
    with pytest.raises(GroupMismatchError):
        check_heyde_cf(g, LinearFormsSpec((1, 1), (1, 1)), [uniform(g), uniform(Group((5,)))])


def test_exact_witness_reports_values():
    g = Group((5,))
    v = check_heyde_exact(g, LinearFormsSpec((1, 1), (1, 1)), [point_mass(g.element(1)), point_mass(g.zero())])
    assert not v.holds and v.witness_kind == "l1l2"
    assert v.max_violation == pytest.approx(1.0)
    assert set(v.to_json()["witness"]) == {"l1", "l2"}


# -- Q-variant ------------------------------------------------------------------------------------


@given(st.data())
@settings(max_examples=80)
def test_q_verdict_equals_cf_verdict(data):
    g = data.draw(st.sampled_from(GROUPS_9))
    rng = np.random.default_rng(data.draw(st.integers(0, 2**32)))
    n = data.draw(st.sampled_from([2, 3]))
    if data.draw(st.booleans()):
        spec, mus = planted_instance(g, rng, n, nonvanishing=True)
    else:
        spec, _ = random_instance(g, rng, n)
        mus = [random_nonvanishing(g, rng) for _ in range(n)]
    if not all(has_nonvanishing_cf(mu) for mu in mus):
        return
    cf = check_heyde_cf(g, spec, mus)
    q = check_q_heyde(g, spec, mus)
    assert q.holds == cf.holds
    if q.holds:
        assert q.polynomial.degree == 0 and abs(q.r_at_zero) <= 1e-9


def test_q_residual_zero_when_identity_holds():
    inst = thm1_II(Group((9,)), Group((9,)).element(3))
    r = q_residual(inst.group, inst.spec, inst.distributions)
    assert r.max_abs() <= 1e-12


@pytest.mark.parametrize("p", [3, 5])
def test_q_fails_on_perturbed_instance(p):
    g = Group((p,))
    spec = LinearFormsSpec((1, 1), (1, -1))
    mu = Distribution.from_masses(g, ["1/2", "1/4", "1/4"] + ["0"] * (p - 3))
    nu = Distribution.from_masses(g, ["3/5", "2/5"] + ["0"] * (p - 2))
    assert check_heyde_cf(g, spec, [mu, mu]).holds
    assert not check_heyde_cf(g, spec, [mu, nu]).holds
    q = check_q_heyde(g, spec, [mu, nu])
    assert not q.holds


def test_q_rejects_vanishing_transform():
    g = Group((4,))
    with pytest.raises(VanishingCharacteristicFunction) as info:
        check_q_heyde(g, LinearFormsSpec((1, 1), (1, -1)), [uniform(g), point_mass(g.zero())])
    assert info.value.j == 1


# -- reduction ------------------------------------------------------------------------------------


def random_chars(g, rng, k):
    return [tuple(int(c) for c in g.coords[int(rng.integers(g.order))]) for _ in range(k)]


@pytest.mark.parametrize("p", [5, 7])
def test_reduction_sound_on_holding_instances(p, rng):
    g = Group((p,))
    for _ in range(20):
        n = int(rng.integers(2, 4))
        spec, mus = planted_instance(g, rng, n, nonvanishing=True)
        if not all(has_nonvanishing_cf(mu) for mu in mus):
            continue
        assert check_heyde_cf(g, spec, mus).holds
        psis = psi_from_distributions(mus)
        for _ in range(10):
            res = reduction_pipeline(psis, spec, random_chars(g, rng, n), random_chars(g, rng, n - 1))
            assert res.max_abs() <= 1e-8
            assert restrict_v0(res, g).max_abs() <= 1e-8


def test_reduction_constant_psis():
    g = Group((5,))
    psis = [GroupFunction.constant(g, 3.0), GroupFunction.constant(g, -1.0)]
    res = reduction_pipeline(psis, LinearFormsSpec((1, 2), (3, 1)), [(1,), (2,)], [(4,)])
    assert res.max_abs() == 0


def test_reduction_detects_violation(rng):
    g = Group((5,))
    spec = LinearFormsSpec((1, 1), (1, 2))
    psis = [GroupFunction(g, rng.standard_normal(5)) for _ in range(2)]
    worst = max(
        reduction_pipeline(psis, spec, random_chars(g, rng, 2), random_chars(g, rng, 1)).max_abs() for _ in range(50)
    )
    assert worst > 1e-3


def test_reduction_trace_structure():
    g = Group((7,))
    spec = LinearFormsSpec((1, 2, 3), (1, 3, 5))
    states = reduction_trace(spec, g, [(1,), (2,), (3,)], [(1,), (4,)])
    assert [s.label for s in states] == ["start", "h_3", "h_2", "h_1", "k_3", "k_2"]
    assert not states[3].rhs
    assert all(t.j == 0 for t in states[-1].lhs)
    with pytest.raises(ValueError):
        reduction_trace(spec, g, [(1,)] * 3, [(1,)] * 3)


def test_trace_states_are_consequences(rng):
    """Each intermediate equation (lhs - rhs) vanishes whenever the starting one does."""
    g = Group((5,))
    mu = random_nonvanishing(g, rng)
    spec = LinearFormsSpec((2, 2), (1, -1))
    psis = psi_from_distributions([mu, mu])
    for state in reduction_trace(spec, g, random_chars(g, rng, 2), random_chars(g, rng, 1)):
        diff = evaluate_terms(state.lhs, psis, spec) - evaluate_terms(state.rhs, psis, spec) if state.rhs else evaluate_terms(state.lhs, psis, spec)
        assert diff.max_abs() <= 1e-9


def test_substitution_matches_direct_evaluation(rng):
    """The symbolic shift coefficient c reproduces psi_j evaluated at the substituted point."""
    g = Group((7,))
    spec = LinearFormsSpec((1, 3), (2, 5))
    psis = [GroupFunction(g, rng.standard_normal(7)) for _ in range(2)]
    h = (3,)
    start, after = reduction_trace(spec, g, [(0,), h], [(0,)])[:2]
    u_idx, v_idx = np.divmod(np.arange(49), 7)
    du, dv = after.direction
    shifted = []
    for side in (start.lhs, start.rhs):
        total = np.zeros(49)
        for t in side:
            pt = spec.a[t.j] * (u_idx + du[0]) + t.sign * spec.b[t.j] * (v_idx + dv[0])
            total += psis[t.j].values[pt % 7]
        shifted.append(total)
    lhs0 = evaluate_terms(start.lhs, psis, spec).values
    rhs0 = evaluate_terms(start.rhs, psis, spec).values
    new = evaluate_terms(after.lhs, psis, spec).values - evaluate_terms(after.rhs, psis, spec).values
    assert abs(new - ((shifted[0] - shifted[1]) - (lhs0 - rhs0))).max() < 1e-12


# -- conclusions -----------------------------------------------------------------------------------


def test_conclusion_prime_exponent_all_degenerate():
    g = Group((5,))
    spec = LinearFormsSpec((1, 1), (1, 2))
    mus = [point_mass(g.zero()), point_mass(g.zero())]
    rep = classify_conclusion(g, spec, mus, check_heyde_cf(g, spec, mus))
    assert rep["case"] == "prime-exponent" and rep["consistent"] is True
    assert all(c["degenerate"] for c in rep["classes"])


def test_conclusion_coset_mixture_z9():
    g = Group((9,))
    inst = thm1_II(g, g.element(3))
    rep = classify_conclusion(g, inst.spec, inst.distributions, check_heyde_cf(g, inst.spec, inst.distributions))
    assert rep["case"] == "nonvanishing-counterexample"
    assert rep["consistent"] and rep["counterexample"]
    assert rep["counterexample_to_D_conclusion"] == "no (non-prime-exponent group)"


def test_conclusion_coset_mixture_shape_on_z3():
    g = Group((3,))
    mu = mixture([("1/2", point_mass(g.zero())), ("1/2", uniform(g))])
    spec = LinearFormsSpec((3, -1), (1, 3))
    rep = classify_conclusion(g, spec, [mu, mu], check_heyde_cf(g, spec, [mu, mu]))
    # 3 is not admissible on Z(3), so no positive statement applies
    assert rep["case"] == "coefficients-inadmissible"
    assert not any(c["degenerate"] for c in rep["classes"])


@pytest.mark.parametrize("p,y2", [(5, 2), (7, 3)])
def test_conclusion_cosine_pair(p, y2):
    inst = lemma6(p, 1, y2)
    rep = classify_conclusion(inst.group, inst.spec, inst.distributions, check_heyde_cf(inst.group, inst.spec, inst.distributions))
    assert rep["case"] == "idempotent-counterexample"
    assert rep["consistent"] and rep["counterexample"]
    assert not any(c["idempotent_shift"] for c in rep["classes"])


def test_conclusion_truncated_mixture():
    inst = lemma5_truncated(3, 2)
    rep = classify_conclusion(inst.group, inst.spec, inst.distributions, check_heyde_cf(inst.group, inst.spec, inst.distributions))
    assert rep["case"] == "idempotent-counterexample" and rep["consistent"]


def test_conclusion_not_symmetric_and_exponent_two():
    g = Group((5,))
    spec = LinearFormsSpec((1, 1), (1, 1))
    mus = [point_mass(g.element(1)), point_mass(g.zero())]
    assert classify_conclusion(g, spec, mus, check_heyde_cf(g, spec, mus))["case"] == "not-symmetric"
    g2 = Group((2, 2))
    mus2 = [haar(whole(g2)), point_mass(g2.zero())]
    rep = classify_conclusion(g2, spec, mus2, check_heyde_cf(g2, spec, mus2))
    assert rep["case"] == "exponent-2-excluded"
