"""Pair-rewriting engine: relation sets and normal forms."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Mapping

from .ncpoly import DEFAULT_ORDER, NCPoly, Word, word_key

STEP_BUDGET = 10**6


class NonTerminationError(RuntimeError):
    """normal_form exceeded its rewrite-step budget."""


@dataclass(frozen=True, eq=False)
class RelationSet:
    """Rules ``(g, h) -> poly`` rewriting an adjacent generator pair.

    Every right-hand side must be strictly smaller than its pair in the
    degree-lexicographic order induced by ``order``; this is checked at
    construction and guarantees termination.  ``confluent`` records whether
    every overlap ``g h k`` resolves to one normal form (diamond lemma).
    """

    rules: Mapping[tuple[str, str], NCPoly]
    order: tuple[str, ...] = DEFAULT_ORDER
    confluent: bool = field(init=False)

    def __post_init__(self):
        rules = {tuple(k): NCPoly.coerce(v) for k, v in self.rules.items()}
        object.__setattr__(self, "rules", rules)
        rank = self.rank
        for lhs, rhs in rules.items():
            missing = (set(lhs) | rhs.generators()) - set(rank)
            if missing:
                raise ValueError(f"generators {sorted(missing)} absent from the order")
            lk = word_key(lhs, rank)
            for w in rhs.terms:
                if word_key(w, rank) >= lk:
                    raise ValueError(f"rule {lhs} -> {rhs} does not decrease the word order")
        object.__setattr__(self, "confluent", not self.critical_pair_failures())

    @property
    def rank(self) -> dict[str, int]:
        return {g: i for i, g in enumerate(self.order)}

    def __or__(self, other: "RelationSet") -> "RelationSet":
        if self.order != other.order:
            raise ValueError("cannot merge relation sets with different orders")
        clash = set(self.rules) & set(other.rules)
        for k in clash:
            if self.rules[k] != other.rules[k]:
                raise ValueError(f"conflicting rules for {k}")
        return RelationSet({**self.rules, **other.rules}, self.order)

    def without(self, *pairs: tuple[str, str]) -> "RelationSet":
        return RelationSet({k: v for k, v in self.rules.items() if k not in pairs}, self.order)

    def map_coefficients(self, f) -> "RelationSet":
        return RelationSet({k: v.map_coefficients(f) for k, v in self.rules.items()}, self.order)

    def reducible_positions(self, w: Word) -> list[int]:
        return [i for i in range(len(w) - 1) if (w[i], w[i + 1]) in self.rules]

    def critical_pair_failures(self) -> list[tuple[str, str, str]]:
        """Overlaps g h k whose two one-step reductions have different normal forms."""
        bad = []
        for (g, h), r1 in self.rules.items():
            for (h2, k), r2 in self.rules.items():
                if h2 != h:
                    continue
                left = r1 * NCPoly.gen(k)
                right = NCPoly.gen(g) * r2
                if normal_form(left, self) != normal_form(right, self):
                    bad.append((g, h, k))
        return bad

    def __repr__(self):
        body = ", ".join(f"{a}{b}->{v}" for (a, b), v in self.rules.items())
        return f"RelationSet({body})"


def normal_form(
    p: NCPoly,
    r: RelationSet,
    *,
    rng: random.Random | None = None,
    budget: int = STEP_BUDGET,
) -> NCPoly:
    """Rewrite ``p`` until no word contains a rule pair.

    Leftmost-first by default; pass ``rng`` to choose the rewrite position at
    random (used to probe confluence).
    """
    p = NCPoly.coerce(p)
    rules = r.rules
    done: dict[Word, object] = {}
    stack = list(p.items())
    steps = 0
    while stack:
        w, c = stack.pop()
        pos = r.reducible_positions(w)
        if not pos:
            done[w] = done[w] + c if w in done else c
            continue
        steps += 1
        if steps > budget:
            raise NonTerminationError(f"more than {budget} rewrite steps")
        i = rng.choice(pos) if rng is not None else pos[0]
        prefix, suffix = w[:i], w[i + 2:]
        for rw, rc in rules[(w[i], w[i + 1])].items():
            stack.append((prefix + rw + suffix, c * rc))
    return NCPoly(done)


def is_normal(p: NCPoly, r: RelationSet) -> bool:
    return all(not r.reducible_positions(w) for w in p.terms)
