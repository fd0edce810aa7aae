"""Exact harmonic analysis of distributions on finite Abelian groups and
mechanical checks of the symmetric-conditional-law characterization."""

from .config import EnumerationBoundError
from .counterexamples import Instance, lemma5_truncated, lemma6, thm1_II
from .distributions import (
    CharFunction,
    Distribution,
    NotPositiveDefinite,
    char_function,
    convolve,
    from_char_function,
    haar,
    is_degenerate,
    is_gaussian,
    is_idempotent_shift,
    mixture,
    point_mass,
    reflect,
    support,
)
from .finite_difference import GroupFunction, PolynomialTestResult, delta, is_polynomial, iterated_delta, satisfies_fe1
from .groups import (
    Character,
    Element,
    Group,
    Subgroup,
    add,
    annihilator,
    endo_image,
    endo_kernel,
    is_admissible,
    pairing,
    scalar_mul,
    subgroup_generated,
)
from .heyde import (
    HeydeVerdict,
    LinearFormsSpec,
    VanishingCharacteristicFunction,
    check_coefficients,
    check_heyde_cf,
    check_heyde_exact,
    check_q_heyde,
    classify_conclusion,
    reduction_pipeline,
)
from .oracle import JointLaw, joint_law, sample_check, search_nondegenerate

__version__ = "0.1.0"
