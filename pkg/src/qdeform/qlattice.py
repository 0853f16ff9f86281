"""Geometric lattices, Jackson difference operators and the bilateral q-integral.

A :class:`GeoLattice` holds the points ``s * x0 * q**k`` for ``s = +1, -1`` and
``kmin <= k <= kmax``.  Since ``0 < q < 1``, increasing ``k`` moves toward the
origin: ``kmin`` is the outer shell, ``kmax`` the inner one.  Zero is never a
lattice point.

Difference operators accept either a plain callable (evaluated anywhere) or a
:class:`LatticeFn` (sampled values, neighbours looked up by index).
"""

from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .qcore import LaurentPoly, QParam, as_qparam, is_exact

SIGNS = (1, -1)

# default truncation window
KMIN_DEFAULT = -48
KMAX_DEFAULT = 48


class LatticeBoundaryError(ValueError):
    """A neighbour required by a difference operator lies outside the lattice."""


class SingularPointError(ValueError):
    """An operator that divides by x was evaluated at x = 0."""


class TruncationWarning(UserWarning):
    """An integrand has not decayed at the edge of the truncation window."""


@dataclass(frozen=True)
class GeoLattice:
    x0: float | Fraction
    q: QParam
    kmin: int = KMIN_DEFAULT
    kmax: int = KMAX_DEFAULT

    def __post_init__(self):
        object.__setattr__(self, "q", as_qparam(self.q))
        if self.kmin > self.kmax:
            raise ValueError(f"kmin={self.kmin} exceeds kmax={self.kmax}")
        if self.x0 <= 0:
            raise ValueError("x0 must be positive")
        if self.q.is_exact:
            object.__setattr__(self, "x0", Fraction(self.x0))
        else:
            object.__setattr__(self, "x0", float(self.x0))

    @classmethod
    def spanning(cls, q, rmin: float, rmax: float, x0: float = 1.0) -> "GeoLattice":
        """Smallest window whose |x| range covers [rmin, rmax]."""
        qv = as_qparam(q).value
        kmin = math.floor(math.log(rmax / x0) / math.log(qv))
        kmax = math.ceil(math.log(rmin / x0) / math.log(qv))
        return cls(x0, q, kmin, kmax)

    @property
    def ks(self) -> np.ndarray:
        return np.arange(self.kmin, self.kmax + 1)

    @property
    def nk(self) -> int:
        return self.kmax - self.kmin + 1

    @property
    def is_exact(self) -> bool:
        return self.q.is_exact

    def radius(self, k: int):
        """|x| at shell k."""
        if self.is_exact:
            return LaurentPoly.monomial(int(k), self.x0)
        return self.x0 * self.q.value ** k

    def point(self, sign: int, k: int):
        return sign * self.radius(k)

    def radii(self) -> np.ndarray:
        if self.is_exact:
            return np.array([self.radius(int(k)) for k in self.ks], dtype=object)
        return self.x0 * self.q.value ** self.ks.astype(float)

    def points(self) -> np.ndarray:
        """Array of shape (2, nk); row 0 is the positive branch."""
        r = self.radii()
        return np.stack([r, -r])

    def index(self, k: int) -> int:
        if not self.kmin <= k <= self.kmax:
            raise LatticeBoundaryError(f"shell k={k} outside [{self.kmin}, {self.kmax}]")
        return k - self.kmin

    def shrink(self, inner: int = 1, outer: int = 1) -> "GeoLattice":
        return GeoLattice(self.x0, self.q, self.kmin + outer, self.kmax - inner)

    def window(self, kmin: int, kmax: int) -> "GeoLattice":
        return GeoLattice(self.x0, self.q, kmin, kmax)

    def sample(self, f: Callable) -> "LatticeFn":
        pts = self.points()
        if self.is_exact:
            vals = np.array([[f(x) for x in row] for row in pts], dtype=object)
        else:
            vals = np.asarray(f(pts))
            if vals.shape != pts.shape:
                vals = np.vectorize(f, otypes=[complex])(pts)
        return LatticeFn(self, vals)

    def jackson_weights(self) -> np.ndarray:
        """Weight ((q^-1 - q)/2) * |x| per point, shape (2, nk)."""
        q = self.q
        w = (q.q1 - q.q) / 2 * self.radii()
        return np.stack([w, w])


@dataclass(frozen=True, eq=False)
class LatticeFn:
    """Values on a GeoLattice; ``values[0]`` positive branch, ``values[1]`` negative."""

    lattice: GeoLattice
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.asarray(self.values)
        if vals.shape != (2, self.lattice.nk):
            raise ValueError(f"values shape {vals.shape} != (2, {self.lattice.nk})")
        if not self.lattice.is_exact and vals.dtype == object:
            vals = vals.astype(complex)
        object.__setattr__(self, "values", vals)

    def at(self, sign: int, k: int):
        row = 0 if sign > 0 else 1
        return self.values[row, self.lattice.index(k)]

    def restrict(self, kmin: int, kmax: int) -> "LatticeFn":
        lat = self.lattice
        i0, i1 = lat.index(kmin), lat.index(kmax)
        return LatticeFn(lat.window(kmin, kmax), self.values[:, i0:i1 + 1])

    def _binary(self, other, op):
        if isinstance(other, LatticeFn):
            if other.lattice != self.lattice:
                raise ValueError("pointwise arithmetic needs identical lattices")
            other = other.values
        return LatticeFn(self.lattice, op(self.values, other))

    def __add__(self, other):
        return self._binary(other, np.add)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, np.subtract)

    def __mul__(self, other):
        return self._binary(other, np.multiply)

    __rmul__ = __mul__

    def __neg__(self):
        return LatticeFn(self.lattice, -self.values)

    def map(self, f: Callable) -> "LatticeFn":
        return LatticeFn(self.lattice, f(self.values))

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["sign", "k", "x", "re", "im"])
        lat = self.lattice
        for row, sign in enumerate(SIGNS):
            for i, k in enumerate(lat.ks):
                v = self.values[row, i]
                x = lat.point(sign, int(k))
                if lat.is_exact:
                    w.writerow([sign, int(k), str(x), str(v), "0"])
                else:
                    v = complex(v)
                    w.writerow([sign, int(k), repr(float(x)), repr(v.real), repr(v.imag)])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, q) -> "LatticeFn":
        """Parse the (sign, k, x, re, im) layout written by :meth:`to_csv` (float mode)."""
        rows = [r for r in csv.DictReader(line for line in io.StringIO(text) if not line.startswith("#"))]
        if not rows:
            raise ValueError("empty lattice function table")
        qv = as_qparam(q).value
        ks = sorted({int(r["k"]) for r in rows})
        kmin, kmax = ks[0], ks[-1]
        if ks != list(range(kmin, kmax + 1)):
            raise ValueError("lattice shells must be contiguous")
        r0 = next(r for r in rows if int(r["sign"]) == 1)
        x0 = abs(float(r0["x"])) / qv ** int(r0["k"])
        lat = GeoLattice(x0, QParam(qv), kmin, kmax)
        vals = np.full((2, lat.nk), np.nan, dtype=complex)
        for r in rows:
            row = 0 if int(r["sign"]) > 0 else 1
            vals[row, int(r["k"]) - kmin] = complex(float(r["re"]), float(r["im"]))
        if np.isnan(vals).any():
            raise ValueError("lattice function table is missing points")
        return cls(lat, vals)


Fn = Callable | LatticeFn


def _check_x(x):
    if (not is_exact(x) and x == 0) or (is_exact(x) and x.is_zero()):
        raise SingularPointError("difference operators divide by x; x = 0 is excluded")


def _lattice_neighbors(f: LatticeFn, where, offsets):
    sign, k = where
    try:
        return [f.at(sign, k + o) for o in offsets]
    except LatticeBoundaryError as exc:
        raise LatticeBoundaryError(f"difference at shell k={k} needs {exc}") from None


def d_asym(f: Fn, x=None, q=None):
    """Asymmetric Jackson derivative (f(qx) - f(x)) / ((q - 1) x).

    For a callable, ``x`` is a coordinate and ``q`` is required.  For a
    LatticeFn, ``x`` is a ``(sign, k)`` index, or ``None`` to differentiate
    the whole function (the inner shell is dropped).
    """
    if isinstance(f, LatticeFn):
        lat = f.lattice
        qp = lat.q
        if x is None:
            inner = lat.shrink(inner=1, outer=0)
            r = inner.radii()
            num = f.values[:, 1:] - f.values[:, :-1]
            den = (qp.q - 1) * np.stack([r, -r])
            return LatticeFn(inner, num / den)
        sign, k = x
        fqx, fx = _lattice_neighbors(f, x, (1, 0))
        return (fqx - fx) / ((qp.q - 1) * lat.point(sign, k))
    qp = as_qparam(q)
    _check_x(x)
    return (f(qp.q * x) - f(x)) / ((qp.q - 1) * x)


def d_sym(f: Fn, x=None, q=None):
    """Symmetric Jackson derivative (f(qx) - f(x/q)) / ((q - 1/q) x).

    Same calling conventions as :func:`d_asym`; the lattice form drops both
    edge shells.
    """
    if isinstance(f, LatticeFn):
        lat = f.lattice
        qp = lat.q
        if x is None:
            if lat.nk < 3:
                raise LatticeBoundaryError("symmetric difference needs at least three shells")
            inner = lat.shrink(1, 1)
            r = inner.radii()
            num = f.values[:, 2:] - f.values[:, :-2]
            den = (qp.q - qp.q1) * np.stack([r, -r])
            return LatticeFn(inner, num / den)
        sign, k = x
        fqx, fq1x = _lattice_neighbors(f, x, (1, -1))
        return (fqx - fq1x) / ((qp.q - qp.q1) * lat.point(sign, k))
    qp = as_qparam(q)
    _check_x(x)
    return (f(qp.q * x) - f(qp.q1 * x)) / ((qp.q - qp.q1) * x)


def dilatation_check(n: int, q, x=1):
    """Residuals of D x^n = [n] x^(n-1) and D^q x^n = <n> x^(n-1) at x.

    Exact mode returns exact residuals (zero); float mode returns absolute values.
    """
    from .qcore import bracket_asym, bracket_sym

    qp = as_qparam(q)
    if qp.is_exact:
        x = Fraction(x)

    def mono(t):
        return t ** n

    xn1 = x ** (n - 1) if n > 0 else 0
    r_sym = d_sym(mono, x, qp) - bracket_sym(n, qp) * xn1
    r_asym = d_asym(mono, x, qp) - bracket_asym(n, qp) * xn1
    if qp.is_exact:
        return r_sym, r_asym
    return abs(r_sym), abs(r_asym)


def leibniz_sym(f: Callable, g: Callable, x, q):
    """D(fg) and both product-rule forms:

    f(qx) Dg + g(x/q) Df   and   f(x/q) Dg + g(qx) Df.
    """
    qp = as_qparam(q)

    def fg(t):
        return f(t) * g(t)

    lhs = d_sym(fg, x, qp)
    df = d_sym(f, x, qp)
    dg = d_sym(g, x, qp)
    rhs1 = f(qp.q * x) * dg + g(qp.q1 * x) * df
    rhs2 = f(qp.q1 * x) * dg + g(qp.q * x) * df
    return lhs, rhs1, rhs2


def qintegral(f: LatticeFn, *, decay_tol: float = 1e-14, warn: bool = True):
    """Bilateral Jackson integral over the lattice window.

    ((q^-1 - q)/2) * sum_k sum_{s=+-} x0 q^k f(s x0 q^k)

    With this weight the integral of a symmetric Jackson derivative telescopes
    exactly to edge values (see :func:`telescoped_boundary`).
    """
    lat = f.lattice
    vals = f.values
    if not lat.is_exact:
        if not np.all(np.isfinite(vals)):
            raise FloatingPointError("non-finite integrand values")
        if warn:
            scale = np.max(np.abs(vals)) if vals.size else 0.0
            edge = np.max(np.abs(vals[:, 0]))
            if scale > 0 and edge > decay_tol * max(scale, 1.0):
                warnings.warn(
                    f"integrand is {edge:.3g} at the outer shell |x|={lat.radius(lat.kmin):.4g}; "
                    "the truncated q-integral may be inaccurate",
                    TruncationWarning,
                    stacklevel=2,
                )
    w = lat.jackson_weights()
    if lat.is_exact:
        total = LaurentPoly()
        for wi, vi in zip(w.ravel(), vals.ravel()):
            total = total + wi * vi
        return total
    return complex(np.sum(w * vals))


def telescoped_boundary(g: LatticeFn):
    """The exact value of qintegral(d_sym(g)) implied by telescoping.

    Per branch s the chain collapses to (s/2) times [outer two shells minus
    inner two shells]; their sum approximates g(+inf) - g(-inf).
    """
    v = g.values
    out = 0
    for row, s in enumerate(SIGNS):
        outer = v[row, 0] + v[row, 1]
        inner = v[row, -1] + v[row, -2]
        out = out + s * (outer - inner) / 2
    return out


def fundamental_theorem_check(g: LatticeFn):
    """|qintegral(d_sym g)| for g vanishing on the two outermost shells at both ends.

    The expected value g(+inf) - g(-inf) is zero for such g.  Exact mode
    returns the exact residual.
    """
    lat = g.lattice
    if lat.nk < 5:
        raise LatticeBoundaryError("need at least five shells to hold interior support")
    edge = np.concatenate([g.values[:, :2].ravel(), g.values[:, -2:].ravel()])
    if lat.is_exact:
        touching = any(not v.is_zero() if is_exact(v) else v != 0 for v in edge)
    else:
        touching = bool(np.any(edge != 0))
    if touching:
        raise LatticeBoundaryError("support touches the two outermost shells of the window")
    integral = qintegral(d_sym(g), warn=False)
    if lat.is_exact:
        return integral
    return abs(integral)
