"""Relation sets for the oscillator algebra and exact checks of its identities.

Generators: the quantum-group entries alpha, alphabar, beta, betabar; the
position x; the symmetric difference operator D; and Lambda, the operator
form of Delta acting on monomials as q**(-theta) (theta = x d/dx).

All checks return normal forms; a correct identity yields the zero NCPoly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..qcore import LaurentPoly, Q, bracket_sym
from .ncpoly import (
    ALPHA,
    ALPHA_BAR,
    BETA,
    BETA_BAR,
    D,
    DEFAULT_ORDER,
    LAMBDA,
    X,
    NCMatrix,
    NCPoly,
)
from .rewrite import RelationSet, normal_form

QUANTUM_GENS = (ALPHA_BAR, ALPHA, BETA_BAR, BETA)
OPERATOR_GENS = (X, D, LAMBDA)

ONE = LaurentPoly.const(1)

a_, ab_, b_, bb_ = (NCPoly.gen(g) for g in (ALPHA, ALPHA_BAR, BETA, BETA_BAR))
x_, D_, L_ = (NCPoly.gen(g) for g in (X, D, LAMBDA))


def _q(q) -> LaurentPoly:
    return Q if q is None else LaurentPoly.coerce(q)


def xd_rules(q=None, *, unit_delta: bool = False) -> RelationSet:
    """Rules realising  q x p - p x = i hbar Delta  with p = (hbar/i) D.

    Dx -> q xD + Lambda, Lambda x -> q^-1 x Lambda, Lambda D -> q D Lambda.
    With ``unit_delta`` Lambda is replaced by the unit.
    """
    q = _q(q)
    if unit_delta:
        return RelationSet({(D, X): q * x_ * D_ + 1})
    return RelationSet({
        (D, X): q * x_ * D_ + L_,
        (LAMBDA, X): q ** -1 * x_ * L_,
        (LAMBDA, D): q * D_ * L_,
    })


def coefficient_commutation() -> RelationSet:
    """Quantum-group entries commute with x, D and Lambda."""
    return RelationSet({
        (u, g): NCPoly.gen(g) * NCPoly.gen(u) for u in OPERATOR_GENS for g in QUANTUM_GENS
    })


def commuting_entries(*, unitarity: bool = True) -> RelationSet:
    """Fully commuting scalar entries, optionally with alphabar alpha + betabar beta = 1."""
    rank = {g: i for i, g in enumerate(DEFAULT_ORDER)}
    rules = {}
    for g in QUANTUM_GENS:
        for h in QUANTUM_GENS:
            if rank[g] > rank[h]:
                rules[(g, h)] = NCPoly.gen(h) * NCPoly.gen(g)
    if unitarity:
        rules[(BETA_BAR, BETA)] = 1 - ab_ * a_
    return RelationSet(rules)


def monomial_action(p: NCPoly, n: int, q=None) -> dict[int, LaurentPoly]:
    """Apply an operator polynomial in x, D, Lambda to x**n.

    x raises the power, D x^m = [m] x^(m-1), Lambda x^m = q^-m x^m.
    Independent of any rewrite rule; used as an oracle for them.
    """
    q = _q(q)
    out: dict[int, LaurentPoly] = {}
    for word, c in p.items():
        state = {n: c}
        for g in reversed(word):
            nxt: dict[int, LaurentPoly] = {}
            for m, v in state.items():
                if g == X:
                    nxt[m + 1] = nxt.get(m + 1, LaurentPoly()) + v
                elif g == D:
                    if m > 0:
                        br = bracket_sym(m, None)
                        if q != Q:
                            br = LaurentPoly.const(br.eval(q.const_value()))
                        nxt[m - 1] = nxt.get(m - 1, LaurentPoly()) + v * br
                elif g == LAMBDA:
                    nxt[m] = nxt.get(m, LaurentPoly()) + v * q ** -m
                else:
                    raise ValueError(f"{g} does not act on functions of x")
            state = nxt
        for m, v in state.items():
            out[m] = out.get(m, LaurentPoly()) + v
    return {m: v for m, v in out.items() if not v.is_zero()}


def T_matrix(q=None) -> NCMatrix:
    """T = [[alpha, beta], [-q^-1 betabar, alphabar]]."""
    q = _q(q)
    return NCMatrix([[a_, b_], [-(q ** -1) * bb_, ab_]])


def epsilon_matrix(q=None) -> NCMatrix:
    """epsilon = [[0, q^-1/2], [-q^1/2, 0]]."""
    q = _q(q)
    half = Fraction(1, 2)
    return NCMatrix([[0, q ** -half], [-(q ** half), 0]])


def ladder_pair(q=None) -> tuple[NCPoly, NCPoly]:
    """(a, abar) = T X with X = (D, x):  a = alpha D + beta x,  abar = -q^-1 betabar D + alphabar x."""
    A = T_matrix(q) @ NCMatrix([[D_], [x_]])
    return A[0, 0], A[1, 0]


def verify_xD_relation(q=None, *, rules: RelationSet | None = None, unit_delta: bool = False) -> NCPoly:
    """Normal form of q xD - Dx + Delta.

    This is (i/hbar) (q x p - p x - i hbar Delta) for p = (hbar/i) D, so it
    vanishes exactly when the rules reproduce the deformed commutator.
    """
    q = _q(q)
    r = rules if rules is not None else xd_rules(q, unit_delta=unit_delta)
    delta = NCPoly.scalar(1) if unit_delta else L_
    return normal_form(q * x_ * D_ - D_ * x_ + delta, r)


def verify_epsilon_invariance(r: RelationSet, q=None) -> tuple[NCMatrix, NCMatrix]:
    """Normal forms of T^t eps T - eps and T eps T^t - eps."""
    T, eps = T_matrix(q), epsilon_matrix(q)
    res1 = (T.T @ eps @ T - eps).map(lambda e: normal_form(e, r))
    res2 = (T @ eps @ T.T - eps).map(lambda e: normal_form(e, r))
    return res1, res2


def verify_oscillator_commutator(r: RelationSet, q=None, *, unit_delta: bool = False) -> NCPoly:
    """Normal form of a abar - q abar a - Delta for the ladder pair built from T."""
    q = _q(q)
    a, abar = ladder_pair(q)
    delta = NCPoly.scalar(1) if unit_delta else L_
    return normal_form(a * abar - q * abar * a - delta, r)


@dataclass(frozen=True)
class BilinearReport:
    xex: NCPoly       # X^t eps X
    aea: NCPoly       # A^t eps A with A = T X
    residual: NCPoly  # aea - xex

    @property
    def equal(self) -> bool:
        return self.residual.is_zero()


def verify_bilinear_transport(r: RelationSet, q=None, T: NCMatrix | None = None) -> BilinearReport:
    """Compare X^t eps X and A^t eps A for A = T X.

    Both sides are reported; no normalising constant is asserted for either.
    """
    q = _q(q)
    T = T if T is not None else T_matrix(q)
    eps = epsilon_matrix(q)
    X_ = NCMatrix([[D_], [x_]])
    A = T @ X_
    xex = normal_form((X_.T @ eps @ X_)[0, 0], r)
    aea = normal_form((A.T @ eps @ A)[0, 0], r)
    return BilinearReport(xex, aea, normal_form(aea - xex, r))


def specialize(r: RelationSet, q_value) -> RelationSet:
    """Evaluate every rule coefficient at a numeric q (e.g. q = 1)."""
    qv = Fraction(q_value)
    return r.map_coefficients(lambda c: LaurentPoly.const(c.eval(qv)))


def suq2_rules(q=None) -> RelationSet:
    """The frozen quantum-group relations (see ``derive``), optionally at a given q."""
    from .suq2_relations import SUQ2_RULES

    rules = {
        lhs: NCPoly({w: LaurentPoly({e: Fraction(c) for e, c in coeffs.items()}) for w, coeffs in rhs.items()})
        for lhs, rhs in SUQ2_RULES.items()
    }
    r = RelationSet(rules)
    return r if q is None or q == Q else specialize(r, LaurentPoly.coerce(q).const_value())


def oscillator_rules(q=None, *, unit_delta: bool = False) -> RelationSet:
    """x-D rules, entries commuting with operators, and the quantum-group relations."""
    return xd_rules(q, unit_delta=unit_delta) | coefficient_commutation() | suq2_rules(q)
