"""Shared mathematical fixtures for the suite."""

from opfield.commutation import GammaSystem, iterative_hs_coeffs
from opfield.dfields import DField
from opfield.local_algebra import derivation_algebra, truncation_algebra
from opfield.scalars import FieldSpec

SL2_LIE = {
    (1, 2, 3): 1, (2, 1, 3): -1,
    (3, 1, 1): 2, (1, 3, 1): -2,
    (3, 2, 2): -2, (2, 3, 2): 2,
}


def trivial_derivation():
    """One derivation, no bracket."""
    return GammaSystem(derivation_algebra(1), None, {}, {})


def two_derivations():
    """Two commuting derivations."""
    return GammaSystem(derivation_algebra(2), None, {}, {})


def sl2_constants():
    """Three derivations bracketing like sl2, constant coefficients over Q."""
    return GammaSystem(derivation_algebra(3), None, SL2_LIE, {})


def mixed_f2():
    """[d1,d2] = d1 over F_2 together with a 1-truncated HS operator."""
    lie = {(1, 2, 1): 1, (2, 1, 1): 1}
    return GammaSystem(derivation_algebra(2, char=2), truncation_algebra(2, char=2), lie, {})


def passing_fixtures():
    return {
        "trivial_derivation": trivial_derivation(),
        "sl2": sl2_constants(),
        "iterative_2_2": iterative_hs_coeffs(2, 2),
        "iterative_3_1": iterative_hs_coeffs(3, 1),
        "mixed_f2": mixed_f2(),
    }


def identity_breaking_perturbations():
    """Fixture name -> perturbed system failing an identity validator.

    Each perturbation changes exactly one coefficient entry and is chosen to
    break the coefficient identities (not merely multiplicativity), since the
    free-module action is built from the coefficients alone.
    """
    out = {}
    out["trivial_derivation"] = GammaSystem(derivation_algebra(1), None, {(1, 1, 1): 1}, {})
    bad_sl2 = dict(SL2_LIE)
    bad_sl2[(1, 2, 3)] = 2  # breaks skew-symmetry against c^{21}_3 = -1
    out["sl2"] = GammaSystem(derivation_algebra(3), None, bad_sl2, {})
    g22 = iterative_hs_coeffs(2, 2)
    hs22 = dict(g22.hs)
    hs22[(3, 1, 1)] = 1  # c_1^{31} := 1 breaks the associativity identity
    out["iterative_2_2"] = GammaSystem(g22.d1, g22.d2, {}, hs22)
    g31 = iterative_hs_coeffs(3, 1)
    hs31 = dict(g31.hs)
    hs31[(2, 1, 1)] = 1  # c_1^{21} := 1 breaks the associativity identity
    out["iterative_3_1"] = GammaSystem(g31.d1, g31.d2, {}, hs31)
    out["mixed_f2"] = GammaSystem(
        derivation_algebra(2, char=2),
        truncation_algebra(2, char=2),
        {(1, 2, 1): 1},  # mirror entry dropped: skew fails
        {},
    )
    return out


def constant_field(gamma, gens=()):
    """Operator field with the given generators, all derivatives zero."""
    spec = FieldSpec(char=gamma.fieldspec.char, gens=tuple(gens))
    action = {op: {g: 0 for g in gens} for op in gamma.ops}
    return DField(spec, gamma, action)
