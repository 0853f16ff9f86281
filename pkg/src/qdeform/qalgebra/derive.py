"""Derive the quantum-group relations among alpha, alphabar, beta, betabar.

The relations are not supplied by hand.  They are the linear conditions on
quadratic words that make

* T^t eps T = eps and T eps T^t = eps, and
* a abar - q abar a = Lambda  for  a = alpha D + beta x,  abar = -q^-1 betabar D + alphabar x

hold in the free algebra (entries commuting only with x, D, Lambda).  Gaussian
elimination over Q(q), pivoting on the largest word in the normal order,
turns the conditions into rewrite rules.

``python -m qdeform.qalgebra.derive`` regenerates ``suq2_relations.py``.
"""

from __future__ import annotations

from fractions import Fraction

from ..qcore import LaurentPoly, Q, QFrac
from .identities import (
    QUANTUM_GENS,
    L_,
    T_matrix,
    coefficient_commutation,
    epsilon_matrix,
    ladder_pair,
    xd_rules,
)
from .ncpoly import DEFAULT_ORDER, NCPoly, word_key
from .rewrite import RelationSet, normal_form


def _integral_scale(p: NCPoly) -> NCPoly:
    """Multiply by q^k so every coefficient exponent is an integer."""
    fracs = {
        Fraction(e) % 1 for c in p.terms.values() for e in c.terms
    }
    if not fracs:
        return p
    if len(fracs) > 1:
        raise ValueError(f"mixed half-integer exponents in relation {p}")
    shift = 1 - fracs.pop() if fracs != {0} else 0
    return p * LaurentPoly.monomial(shift) if shift else p


def free_conditions(q=None) -> list[NCPoly]:
    """Conditions (each must equal zero) on the quantum-group entries."""
    q = Q if q is None else q
    conds: list[NCPoly] = []
    T, eps = T_matrix(q), epsilon_matrix(q)
    for M in (T.T @ eps @ T - eps, T @ eps @ T.T - eps):
        conds.extend(M.entries())
    base = xd_rules(q) | coefficient_commutation()
    a, abar = ladder_pair(q)
    residual = normal_form(a * abar - q * abar * a - L_, base)
    # group by the operator tail of each word
    groups: dict[tuple, dict] = {}
    for w, c in residual.items():
        split = next((i for i, g in enumerate(w) if g not in QUANTUM_GENS), len(w))
        head, tail = w[:split], w[split:]
        groups.setdefault(tail, {})[head] = c
    conds.extend(NCPoly(g) for g in groups.values())
    return [_integral_scale(c) for c in conds if not c.is_zero()]


def _frac(c) -> QFrac:
    return c if isinstance(c, QFrac) else QFrac(c)


def solve_relations(conds: list[NCPoly], order=DEFAULT_ORDER) -> dict[tuple, NCPoly]:
    """Row-reduce the conditions; each pivot word becomes a rewrite rule."""
    rank = {g: i for i, g in enumerate(order)}
    words = sorted({w for c in conds for w in c.terms}, key=lambda w: word_key(w, rank), reverse=True)
    rows = [{w: _frac(v) for w, v in c.items()} for c in conds]
    pivots: list[tuple[tuple, dict]] = []
    for w in words:
        idx = next((i for i, r in enumerate(rows) if w in r and not r[w].is_zero()), None)
        if idx is None:
            continue
        row = rows.pop(idx)
        lead = row[w]
        row = {k: v / lead for k, v in row.items()}
        rows = [_eliminate(r, row, w) for r in rows]
        pivots = [(pw, _eliminate(pr, row, w)) for pw, pr in pivots]
        pivots.append((w, row))
    leftover = [r for r in rows if any(not v.is_zero() for v in r.values())]
    if leftover:
        raise ValueError(f"inconsistent conditions: {leftover}")
    rules = {}
    for w, row in pivots:
        if len(w) != 2:
            raise ValueError(f"pivot word {w} is not a generator pair")
        rhs = {k: _laurent(-v) for k, v in row.items() if k != w and not v.is_zero()}
        rules[w] = NCPoly(rhs)
    return rules


def _laurent(v) -> LaurentPoly:
    s = v.simplify() if isinstance(v, QFrac) else v
    if isinstance(s, QFrac):
        raise ValueError(f"derived coefficient {s} is not a Laurent polynomial")
    return s


def _eliminate(r: dict, pivot_row: dict, w) -> dict:
    c = r.get(w)
    if c is None or c.is_zero():
        return r
    out = dict(r)
    for k, v in pivot_row.items():
        out[k] = out[k] - c * v if k in out else -c * v
        out[k] = _frac(out[k])
    return {k: v for k, v in out.items() if not v.is_zero()}


def derive_suq2_rules(q=None) -> RelationSet:
    return RelationSet(solve_relations(free_conditions(q)))


def render_module(rules: RelationSet) -> str:
    lines = [
        '"""Quantum-group relations, frozen output of ``qdeform.qalgebra.derive``.',
        "",
        "Regenerate with ``python -m qdeform.qalgebra.derive``; do not edit by hand.",
        '"""',
        "",
        "# (left, right) -> {word: {exponent: coefficient}}",
        "SUQ2_RULES = {",
    ]
    for lhs, rhs in sorted(rules.rules.items()):
        lines.append(f"    {lhs!r}: {{")
        for w, c in sorted(rhs.items()):
            coeffs = ", ".join(f"{e!s}: {str(v)!r}" for e, v in c.terms.items())
            lines.append(f"        {w!r}: {{{coeffs}}},")
        lines.append("    },")
    lines.append("}")
    return "\n".join(lines) + "\n"


def main() -> None:
    import pathlib

    target = pathlib.Path(__file__).with_name("suq2_relations.py")
    target.write_text(render_module(derive_suq2_rules()))
    print(f"wrote {target}")


if __name__ == "__main__":
    main()
