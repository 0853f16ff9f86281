"""q-numbers, q-factorials and exact Laurent-polynomial arithmetic in q.

Two arithmetic modes share one code path:

* float mode: ``QParam(0.7)``; every value is a Python/numpy float.
* exact mode: ``QParam.exact()``; q is a formal indeterminate and every value
  is a :class:`LaurentPoly` (or a :class:`QFrac` after a division that does
  not cancel).

Mixing a float with an exact value raises ``TypeError``.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Mapping, Union

import numpy as np

Exponent = Union[int, Fraction]
Scalar = Union[int, Fraction]


def _norm_exp(e) -> Exponent:
    e = Fraction(e)
    return int(e) if e.denominator == 1 else e


def _is_exact_scalar(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def _mixing_error(other):
    return TypeError(
        f"cannot mix exact q-values with {type(other).__name__}; "
        "use one arithmetic mode per computation"
    )


class LaurentPoly:
    """Laurent polynomial in q with rational coefficients.

    Stored canonically: a mapping exponent -> nonzero Fraction.  Exponents are
    integers except where a square root of q is needed (the epsilon form),
    in which case half-integers appear.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Exponent, Scalar] | None = None):
        clean: dict[Exponent, Fraction] = {}
        for e, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                e = _norm_exp(e)
                clean[e] = clean.get(e, Fraction(0)) + c
                if not clean[e]:
                    del clean[e]
        self._terms = dict(sorted(clean.items()))
        self._hash = None

    # construction helpers
    @classmethod
    def const(cls, c: Scalar) -> "LaurentPoly":
        return cls({0: c})

    @classmethod
    def monomial(cls, exponent: Exponent, coeff: Scalar = 1) -> "LaurentPoly":
        return cls({exponent: coeff})

    @classmethod
    def coerce(cls, x) -> "LaurentPoly":
        if isinstance(x, LaurentPoly):
            return x
        if _is_exact_scalar(x):
            return cls.const(x)
        raise _mixing_error(x)

    @property
    def terms(self) -> dict[Exponent, Fraction]:
        return dict(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_const(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and 0 in self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def const_value(self) -> Fraction:
        if not self.is_const():
            raise ValueError(f"{self} is not a constant")
        return self._terms.get(0, Fraction(0))

    def min_exp(self) -> Exponent:
        return next(iter(self._terms)) if self._terms else 0

    def max_exp(self) -> Exponent:
        return next(reversed(self._terms)) if self._terms else 0

    # ring operations
    def __add__(self, other):
        if isinstance(other, QFrac):
            return NotImplemented
        try:
            other = LaurentPoly.coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, QFrac):
            return NotImplemented
        try:
            other = LaurentPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, QFrac):
            return NotImplemented
        try:
            other = LaurentPoly.coerce(other)
        except TypeError:
            return NotImplemented
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = _norm_exp(e1 + e2)
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        n = Fraction(n)
        if n.denominator != 1 or n < 0:
            # fractional or negative powers only for a bare monomial c*q^k
            if not self.is_monomial():
                raise ValueError(f"cannot raise non-monomial {self} to power {n}")
            (e, c), = self._terms.items()
            if n.denominator != 1 and c != 1:
                raise ValueError("fractional powers need a unit coefficient")
            return LaurentPoly({e * n: c ** int(n) if n.denominator == 1 else 1})
        result = LaurentPoly.const(1)
        base = self
        k = int(n)
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, QFrac):
            return QFrac(self) / other
        if isinstance(other, LaurentPoly):
            if other.is_zero():
                raise ZeroDivisionError("division by the zero polynomial")
            if other.is_monomial():
                (e, c), = other._terms.items()
                return LaurentPoly(
                    {_norm_exp(k - e): v / c for k, v in self._terms.items()}
                )
            quot = _exact_div(self, other)
            if quot is not None:
                return quot
            return QFrac(self, other)
        if _is_exact_scalar(other):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return LaurentPoly({e: c / other for e, c in self._terms.items()})
        return NotImplemented

    def __rtruediv__(self, other):
        return LaurentPoly.coerce(other) / self

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self._terms == other._terms
        if isinstance(other, QFrac):
            return other == self
        if _is_exact_scalar(other):
            return self._terms == LaurentPoly.const(other)._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    # substitutions and evaluation
    def subs_power(self, k: Exponent) -> "LaurentPoly":
        """Substitute q -> q**k (k = -1 inverts q, k = 2 squares it)."""
        return LaurentPoly({_norm_exp(e * k): c for e, c in self._terms.items()})

    def invert_q(self) -> "LaurentPoly":
        return self.subs_power(-1)

    def eval(self, q):
        """Evaluate at a numeric q (float, complex, Fraction or numpy array)."""
        if isinstance(q, Fraction) or (isinstance(q, int) and not isinstance(q, bool)):
            if any(isinstance(e, Fraction) for e in self._terms):
                q = float(q)
            else:
                return sum((c * Fraction(q) ** e for e, c in self._terms.items()), Fraction(0))
        return sum(float(c) * np.power(q, float(e)) for e, c in self._terms.items()) if self._terms else 0.0 * q

    __call__ = eval

    def __repr__(self):
        return f"LaurentPoly({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for e, c in self._terms.items():
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                qpart = "q" if e == 1 else f"q^{e}"
                body = qpart if mag == 1 else f"{mag}*{qpart}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


Q = LaurentPoly.monomial(1)
"""The formal indeterminate q."""


# -- dense polynomial helpers for exact division and gcd ---------------------

def _to_dense(p: LaurentPoly) -> tuple[list[Fraction], int]:
    if any(isinstance(e, Fraction) for e in p._terms):
        raise ValueError("division of polynomials with fractional exponents is unsupported")
    lo = p.min_exp()
    coeffs = [Fraction(0)] * (p.max_exp() - lo + 1)
    for e, c in p._terms.items():
        coeffs[e - lo] = c
    return coeffs, lo


def _from_dense(coeffs: list[Fraction], shift: int) -> LaurentPoly:
    return LaurentPoly({i + shift: c for i, c in enumerate(coeffs) if c})


def _trim(c: list[Fraction]) -> list[Fraction]:
    while c and not c[-1]:
        c.pop()
    return c


def _divmod_dense(num: list[Fraction], den: list[Fraction]):
    num = _trim(list(num))
    den = _trim(list(den))
    if not den:
        raise ZeroDivisionError
    quot = [Fraction(0)] * max(len(num) - len(den) + 1, 0)
    while len(num) >= len(den) and num:
        shift = len(num) - len(den)
        f = num[-1] / den[-1]
        quot[shift] = f
        for i, d in enumerate(den):
            num[i + shift] -= f * d
        _trim(num)
    return quot, num


def _gcd_dense(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        _, r = _divmod_dense(a, b)
        a, b = b, r
    if not a:
        return [Fraction(1)]
    lead = a[-1]
    return [c / lead for c in a]


def _exact_div(num: LaurentPoly, den: LaurentPoly) -> LaurentPoly | None:
    if num.is_zero():
        return LaurentPoly()
    n, nshift = _to_dense(num)
    d, dshift = _to_dense(den)
    quot, rem = _divmod_dense(n, d)
    if rem:
        return None
    return _from_dense(quot, nshift - dshift)


class QFrac:
    """Rational function in q: the field of fractions of :class:`LaurentPoly`.

    Only produced by divisions that do not cancel exactly.  Results collapse
    back to a ``LaurentPoly`` whenever the reduced denominator is a monomial.
    """

    __slots__ = ("num", "den")

    def __new__(cls, num, den=None):
        num = LaurentPoly.coerce(num)
        den = LaurentPoly.const(1) if den is None else LaurentPoly.coerce(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        self = object.__new__(cls)
        if num.is_zero():
            self.num, self.den = LaurentPoly(), LaurentPoly.const(1)
            return self
        if den.is_monomial():
            self.num, self.den = num / den, LaurentPoly.const(1)
            return self
        n, ns = _to_dense(num)
        d, ds = _to_dense(den)
        g = _gcd_dense(n, d)
        n, _ = _divmod_dense(n, g)
        d, _ = _divmod_dense(d, g)
        lead = d[-1]
        self.num = _from_dense([c / lead for c in n], ns - ds)
        self.den = _from_dense([c / lead for c in d], 0)
        return self

    def simplify(self):
        """Return a LaurentPoly when the denominator is trivial."""
        if self.den.is_monomial():
            return self.num / self.den
        return self

    @staticmethod
    def _lift(x) -> "QFrac":
        if isinstance(x, QFrac):
            return x
        return QFrac(LaurentPoly.coerce(x))

    def __add__(self, other):
        try:
            o = QFrac._lift(other)
        except TypeError:
            return NotImplemented
        return QFrac(self.num * o.den + o.num * self.den, self.den * o.den).simplify()

    __radd__ = __add__

    def __neg__(self):
        return QFrac(-self.num, self.den)

    def __sub__(self, other):
        try:
            o = QFrac._lift(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = QFrac._lift(other)
        except TypeError:
            return NotImplemented
        return QFrac(self.num * o.num, self.den * o.den).simplify()

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            o = QFrac._lift(other)
        except TypeError:
            return NotImplemented
        return QFrac(self.num * o.den, self.den * o.num).simplify()

    def __rtruediv__(self, other):
        return QFrac._lift(other) / self

    def __eq__(self, other):
        try:
            o = QFrac._lift(other)
        except TypeError:
            return NotImplemented
        return self.num * o.den == o.num * self.den

    def __hash__(self):
        return hash((self.num, self.den))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def eval(self, q):
        return self.num.eval(q) / self.den.eval(q)

    __call__ = eval

    def __repr__(self):
        return f"QFrac({self})"

    def __str__(self):
        return f"({self.num}) / ({self.den})"


ExactValue = Union[LaurentPoly, QFrac]


def is_exact(x) -> bool:
    return isinstance(x, (LaurentPoly, QFrac))


def is_zero(x) -> bool:
    """Zero test that works in both modes (exact zero only for exact values)."""
    if is_exact(x):
        return x.is_zero()
    return x == 0


@dataclass(frozen=True)
class QParam:
    """Deformation parameter.

    ``value is None`` selects exact mode (q is the formal indeterminate).
    Numeric q must lie strictly inside (0, 1).
    """

    value: float | None = None

    def __post_init__(self):
        if self.value is not None:
            v = float(self.value)
            if not (0.0 < v < 1.0) or not math.isfinite(v):
                raise ValueError("q must lie in (0,1)")
            object.__setattr__(self, "value", v)

    @classmethod
    def exact(cls) -> "QParam":
        return cls(None)

    @property
    def is_exact(self) -> bool:
        return self.value is None

    @property
    def q(self):
        return Q if self.value is None else self.value

    @property
    def q1(self):
        """q**-1, always derived."""
        return Q ** -1 if self.value is None else 1.0 / self.value

    def sqrt(self):
        return Q ** Fraction(1, 2) if self.value is None else math.sqrt(self.value)

    def power(self, k):
        if self.value is None:
            return Q ** k
        return self.value ** k

    def one(self):
        return LaurentPoly.const(1) if self.value is None else 1.0

    def zero(self):
        return LaurentPoly() if self.value is None else 0.0

    def coerce(self, x):
        """Bring an int/Fraction scalar into this mode."""
        if self.value is None:
            return LaurentPoly.coerce(x) if not is_exact(x) else x
        if is_exact(x):
            raise _mixing_error(x)
        return float(x) if isinstance(x, (int, Fraction)) else x

    def __str__(self):
        return "q" if self.value is None else repr(self.value)


def as_qparam(q) -> QParam:
    if isinstance(q, QParam):
        return q
    if q is None or (isinstance(q, LaurentPoly) and q == Q):
        return QParam.exact()
    return QParam(float(q))


def bracket_asym(n: int, q) -> float | LaurentPoly:
    """Asymmetric q-number <n> = (q^n - 1)/(q - 1) = 1 + q + ... + q^(n-1)."""
    qp = as_qparam(q)
    if n < 0:
        raise ValueError(f"<n> is only defined for n >= 0, got {n}")
    if qp.is_exact:
        return LaurentPoly({k: 1 for k in range(n)})
    lq = math.log(qp.value)
    return math.expm1(n * lq) / math.expm1(lq)


def bracket_sym(n: int, q) -> float | LaurentPoly:
    """Symmetric q-number [n] = (q^n - q^-n)/(q - q^-1)."""
    qp = as_qparam(q)
    if qp.is_exact:
        if n < 0:
            return -bracket_sym(-n, qp)
        return LaurentPoly({n - 1 - 2 * j: 1 for j in range(n)})
    # sinh form keeps full relative accuracy as q -> 1
    h = -math.log(qp.value)
    return math.sinh(n * h) / math.sinh(h)


def qfactorial_sym(n: int, q) -> float | LaurentPoly:
    """[n]! = [1][2]...[n], with [0]! = 1."""
    qp = as_qparam(q)
    if n < 0:
        raise ValueError(f"[n]! needs n >= 0, got {n}")
    acc = qp.one()
    for k in range(1, n + 1):
        acc = acc * bracket_sym(k, qp)
    return acc


def bracket_sym_array(n: np.ndarray, q: float) -> np.ndarray:
    """Vectorised float [n]."""
    h = -math.log(q)
    return np.sinh(np.asarray(n, dtype=float) * h) / math.sinh(h)


def laurent_sum(values: Iterable) -> LaurentPoly:
    return reduce(lambda a, b: a + b, values, LaurentPoly())


def to_float(x, q: float | None = None) -> float | complex:
    """Numeric view of a value in either mode (exact values need q)."""
    if is_exact(x):
        if q is None:
            raise ValueError("evaluating an exact value needs a numeric q")
        return x.eval(q)
    if isinstance(x, numbers.Number):
        return x
    return float(x)
