"""Noncommutative polynomials over Laurent-polynomial coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from ..qcore import LaurentPoly, QFrac, is_exact

Word = tuple[str, ...]

# generator names; the tuple order is the default normal order
ALPHA_BAR, ALPHA, BETA_BAR, BETA = "alphabar", "alpha", "betabar", "beta"
X, D, LAMBDA = "x", "D", "Lambda"
DEFAULT_ORDER: tuple[str, ...] = (ALPHA_BAR, ALPHA, BETA_BAR, BETA, X, D, LAMBDA)

PRETTY = {
    ALPHA_BAR: "ᾱ", ALPHA: "α", BETA_BAR: "β̄", BETA: "β", X: "x", D: "D", LAMBDA: "Λ",
}


def _coef(c) -> LaurentPoly:
    if isinstance(c, QFrac):
        c = c.simplify()
        if isinstance(c, QFrac):
            raise ValueError(f"coefficient {c} is not a Laurent polynomial")
        return c
    return LaurentPoly.coerce(c)


class NCPoly:
    """Finite sum of words in noncommuting generators with LaurentPoly coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Word, object] | None = None):
        out: dict[Word, LaurentPoly] = {}
        for w, c in (terms or {}).items():
            c = _coef(c)
            w = tuple(w)
            if w in out:
                c = out[w] + c
            if c.is_zero():
                out.pop(w, None)
            else:
                out[w] = c
        self._terms = out

    @classmethod
    def gen(cls, name: str) -> "NCPoly":
        return cls({(name,): 1})

    @classmethod
    def scalar(cls, c) -> "NCPoly":
        return cls({(): c})

    @classmethod
    def coerce(cls, x) -> "NCPoly":
        if isinstance(x, NCPoly):
            return x
        if is_exact(x) or isinstance(x, (int, Fraction)):
            return cls.scalar(x)
        raise TypeError(f"cannot use {type(x).__name__} as a noncommutative polynomial")

    @property
    def terms(self) -> dict[Word, LaurentPoly]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def term_count(self) -> int:
        return len(self._terms)

    def generators(self) -> set[str]:
        return {g for w in self._terms for g in w}

    def __add__(self, other):
        try:
            other = NCPoly.coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for w, c in other._terms.items():
            out[w] = out[w] + c if w in out else c
        return NCPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return NCPoly({w: -c for w, c in self._terms.items()})

    def __sub__(self, other):
        try:
            other = NCPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return NCPoly.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, NCPoly):
            out: dict[Word, LaurentPoly] = {}
            for w1, c1 in self._terms.items():
                for w2, c2 in other._terms.items():
                    w = w1 + w2
                    c = c1 * c2
                    out[w] = out[w] + c if w in out else c
            return NCPoly(out)
        try:
            c = _coef(other)
        except TypeError:
            return NotImplemented
        return NCPoly({w: c * v for w, v in self._terms.items()})

    def __rmul__(self, other):
        # scalars are central
        try:
            c = _coef(other)
        except TypeError:
            return NotImplemented
        return NCPoly({w: c * v for w, v in self._terms.items()})

    def __pow__(self, n: int):
        out = NCPoly.scalar(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        try:
            other = NCPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def map_coefficients(self, f) -> "NCPoly":
        return NCPoly({w: f(c) for w, c in self._terms.items()})

    def substitute(self, name: str, value: "NCPoly") -> "NCPoly":
        """Replace every occurrence of a generator by a polynomial."""
        out = NCPoly()
        for w, c in self._terms.items():
            term = NCPoly.scalar(c)
            for g in w:
                term = term * (value if g == name else NCPoly.gen(g))
            out = out + term
        return out

    def sorted_items(self, order: Iterable[str] = DEFAULT_ORDER):
        rank = {g: i for i, g in enumerate(order)}
        return sorted(self._terms.items(), key=lambda t: word_key(t[0], rank))

    def __repr__(self):
        return f"NCPoly({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for w, c in self.sorted_items():
            word = "*".join(PRETTY.get(g, g) for g in w)
            if not w:
                parts.append(f"({c})")
            elif c == 1:
                parts.append(word)
            else:
                parts.append(f"({c})*{word}")
        return " + ".join(parts)


def word_key(w: Word, rank: Mapping[str, int]) -> tuple:
    """Degree-lexicographic key: shorter words first, then by generator rank."""
    return (len(w), tuple(rank[g] for g in w))


def gens(*names: str) -> list[NCPoly]:
    return [NCPoly.gen(n) for n in names]


class NCMatrix:
    """2x2 (or any rectangular) matrix with NCPoly entries; products keep factor order."""

    def __init__(self, rows):
        self.rows = [[NCPoly.coerce(e) for e in row] for row in rows]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def transpose(self) -> "NCMatrix":
        n, m = self.shape
        return NCMatrix([[self.rows[i][j] for i in range(n)] for j in range(m)])

    T = property(transpose)

    def __matmul__(self, other: "NCMatrix") -> "NCMatrix":
        n, k = self.shape
        k2, m = other.shape
        if k != k2:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out = []
        for i in range(n):
            row = []
            for j in range(m):
                acc = NCPoly()
                for t in range(k):
                    acc = acc + self.rows[i][t] * other.rows[t][j]
                row.append(acc)
            out.append(row)
        return NCMatrix(out)

    def __sub__(self, other: "NCMatrix") -> "NCMatrix":
        return NCMatrix([[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)])

    def __add__(self, other: "NCMatrix") -> "NCMatrix":
        return NCMatrix([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)])

    def map(self, f) -> "NCMatrix":
        return NCMatrix([[f(e) for e in row] for row in self.rows])

    def entries(self):
        return [e for row in self.rows for e in row]

    def is_zero(self) -> bool:
        return all(e.is_zero() for e in self.entries())

    def term_count(self) -> int:
        return sum(e.term_count() for e in self.entries())

    def __repr__(self):
        return "NCMatrix(" + "; ".join(", ".join(str(e) for e in row) for row in self.rows) + ")"
