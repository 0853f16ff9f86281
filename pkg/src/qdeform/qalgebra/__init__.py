"""Noncommutative polynomials, pair rewriting, and exact operator identities."""

from .identities import (
    BilinearReport,
    T_matrix,
    coefficient_commutation,
    commuting_entries,
    epsilon_matrix,
    ladder_pair,
    monomial_action,
    oscillator_rules,
    specialize,
    suq2_rules,
    verify_bilinear_transport,
    verify_epsilon_invariance,
    verify_oscillator_commutator,
    verify_xD_relation,
    xd_rules,
)
from .ncpoly import DEFAULT_ORDER, NCMatrix, NCPoly, gens
from .rewrite import NonTerminationError, RelationSet, is_normal, normal_form
