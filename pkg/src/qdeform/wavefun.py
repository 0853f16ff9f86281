"""Configuration-space ground states as truncated infinite products.

Only the coupling ratio ``lam = beta/alpha`` enters; alpha and beta are never
used separately (with commuting scalar entries the ladder algebra fails, see
``qalgebra``).

* asymmetric derivative:  psi(x) = prod_s (1 + K q^2s)^-1,  K = (1 - q) lam x^2
* symmetric derivative:   psi(x) = prod_s (1 - L q^2s)^-1,  L = q^3 lam x^2 / (1 + q^2)

The symmetric product satisfies the two-point relation
psi(qx) = (1 - L) psi(x) exactly, but not the three-point difference equation
psi(qx) - psi(x/q) = K' x^2 psi(x) it was meant to solve; the latter is only
reported.  Two exact solutions of the three-point equation are provided for
comparison: the power series regular at the origin, and the lattice solution
that decays outward (used by the q-Fourier transform).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .qcore import QParam, as_qparam, bracket_sym_array
from .qlattice import GeoLattice, LatticeFn, d_asym

TAIL_TOL = 1e-14
POLE_TOL = 1e-6
SEED_TOL = 1e-10


class PoleError(ArithmeticError):
    """Evaluation hit (or came within POLE_TOL of) a zero of a product factor."""

    def __init__(self, x, s):
        super().__init__(f"product factor s={s} vanishes near x={x}")
        self.x = x
        self.s = s


class SeedError(ValueError):
    """Lattice too shallow to seed the recursion with psi ~ 1."""


class GroundKind(enum.Enum):
    ASYM = "asym"
    SYM = "sym"

    @classmethod
    def parse(cls, value) -> "GroundKind":
        return value if isinstance(value, cls) else cls(str(value).lower())


@dataclass(frozen=True)
class GroundStateParams:
    lam: float
    q: QParam
    kind: GroundKind = GroundKind.ASYM

    def __post_init__(self):
        object.__setattr__(self, "q", as_qparam(self.q))
        object.__setattr__(self, "kind", GroundKind.parse(self.kind))
        if self.q.is_exact:
            raise ValueError("ground states are evaluated in float mode")
        if self.lam < 0:
            raise ValueError("coupling ratio lam must be non-negative")

    @property
    def k_prime(self) -> float:
        """K' = (q^-1 - q) lam, the three-point coefficient."""
        q = self.q.value
        return (1 / q - q) * self.lam

    def coefficient(self, x):
        """K(x) for the asymmetric product, -L(x) for the symmetric one."""
        q = self.q.value
        x2 = np.square(x)
        if self.kind is GroundKind.ASYM:
            return (1 - q) * self.lam * x2
        return -(q**3) * self.lam * x2 / (1 + q**2)


def _terms_needed(c_abs: float, q: float, tol: float = TAIL_TOL) -> int:
    """Smallest S with sum_{s>S} c q^2s / (1 - c q^2s) <= tol."""
    if c_abs == 0:
        return 0
    q2 = q * q
    # first index where c q^2s < 1/2, so each tail term is at most 2 c q^2s
    s0 = max(0, math.ceil(math.log(2 * c_abs) / -math.log(q2))) if c_abs >= 0.5 else 0
    S = max(s0, math.ceil(math.log(tol * (1 - q2) / (2 * c_abs)) / math.log(q2)))
    return max(S, s0)


def tail_bound(c_abs: float, q: float, S: int) -> float:
    """Bound on |log prod_{s>S} (1 + c q^2s)^-1| (closed geometric form)."""
    q2 = q * q
    lead = c_abs * q2 ** (S + 1)
    if lead >= 1:
        return math.inf
    return lead / ((1 - q2) * (1 - lead))


@dataclass(frozen=True)
class ProductState:
    """Truncated product ground state; ``S`` fixed from the largest |x| served.

    Call with scalars or arrays.  ``S=None`` picks the truncation per call so
    the tail bound stays below ``TAIL_TOL``.
    """

    params: GroundStateParams
    S: int | None = None

    def truncation(self, x) -> int:
        c = float(np.max(np.abs(self.params.coefficient(np.asarray(x, dtype=float)))))
        return self.S if self.S is not None else _terms_needed(c, self.params.q.value)

    def tail_bound(self, x) -> float:
        c = float(np.max(np.abs(self.params.coefficient(np.asarray(x, dtype=float)))))
        return tail_bound(c, self.params.q.value, self.truncation(x))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        q = self.params.q.value
        c = self.params.coefficient(x)
        S = self.truncation(x)
        s = np.arange(S + 1)
        factors = 1 + np.multiply.outer(c, q ** (2.0 * s))
        close = np.abs(factors) < POLE_TOL
        if np.any(close):
            idx = np.argwhere(close)[0]
            xi = float(x[tuple(idx[:-1])]) if x.ndim else float(x)
            raise PoleError(xi, int(idx[-1]))
        # sum of logs avoids overflow in the partial products
        logs = np.sum(np.log(np.abs(factors)), axis=-1)
        sign = np.prod(np.sign(factors), axis=-1)
        return sign * np.exp(-logs)

    def sample(self, lattice: GeoLattice) -> LatticeFn:
        pts = lattice.points()
        return LatticeFn(lattice, self(pts).astype(complex))

    def with_truncation(self, S: int) -> "ProductState":
        return ProductState(self.params, S)


def ground_asym(x, params: GroundStateParams):
    if params.kind is not GroundKind.ASYM:
        raise ValueError("ground_asym needs asymmetric-derivative parameters")
    return ProductState(params)(x)


def ground_sym(x, params: GroundStateParams):
    if params.kind is not GroundKind.SYM:
        raise ValueError("ground_sym needs symmetric-derivative parameters")
    return ProductState(params)(x)


def asym_relation_residual(state: ProductState, x) -> float:
    """max |psi(qx) - (1 + K) psi(x)| / |psi(qx)|."""
    x = np.asarray(x, dtype=float)
    q = state.params.q.value
    K = (1 - q) * state.params.lam * x**2
    lhs = state(q * x)
    rhs = (1 + K) * state(x)
    return float(np.max(np.abs(lhs - rhs) / np.abs(lhs)))


def sym_two_point_residual(state: ProductState, x) -> float:
    """max |psi(qx) - [1 - K' q^4 x^2 / (1 - q^4)] psi(x)| / |psi(qx)|."""
    x = np.asarray(x, dtype=float)
    q = state.params.q.value
    factor = 1 - state.params.k_prime * q**4 * x**2 / (1 - q**4)
    lhs = state(q * x)
    return float(np.max(np.abs(lhs - factor * state(x)) / np.abs(lhs)))


def residual_asym(state: ProductState, lattice: GeoLattice) -> float:
    """max over the lattice of |lam x psi + D^q psi| / max |psi|."""
    if state.params.kind is not GroundKind.ASYM:
        raise ValueError("residual_asym needs an asymmetric-derivative state")
    psi = state.sample(lattice)
    dpsi = d_asym(psi)
    x = dpsi.lattice.points()
    inner = psi.values[:, :-1]
    res = np.abs(state.params.lam * x * inner + dpsi.values)
    return float(np.max(res) / psi.max_abs())


def residual_sym_threepoint(state: ProductState, lattice: GeoLattice) -> float:
    """max |psi(qx) - psi(x/q) - K' x^2 psi(x)| over the lattice (diagnostic only)."""
    q = state.params.q.value
    x = lattice.radii()
    res = state(q * x) - state(x / q) - state.params.k_prime * x**2 * state(x)
    return float(np.max(np.abs(res)))


def ground_sym_series(x, lam: float, q, *, max_terms: int = 400):
    """Power-series solution of (lam x + D) psi = 0 with psi(0) = 1.

    psi = sum_n (-lam x^2)^n / ([2][4]...[2n]); an exact solution of the
    three-point equation, regular at the origin.
    """
    qv = as_qparam(q).value
    x2 = np.square(np.asarray(x, dtype=float))
    total = np.ones_like(x2)
    term = np.ones_like(x2)
    for n in range(1, max_terms):
        term = term * (-lam * x2) / bracket_sym_array(2 * n, qv)
        total = total + term
        if np.all(np.abs(term) <= 1e-17 * np.maximum(np.abs(total), 1e-300)):
            break
    return total


def _check_seed(params: GroundStateParams, lattice: GeoLattice):
    r_in = lattice.radius(lattice.kmax - 1)
    if params.k_prime * r_in**2 > SEED_TOL:
        raise SeedError(
            f"K' x^2 = {params.k_prime * r_in**2:.3g} at the inner shells; deepen the lattice (raise kmax)"
        )


def ground_sym_oracle(params: GroundStateParams, lattice: GeoLattice) -> LatticeFn:
    """Exact lattice solution of psi(qx) - psi(x/q) = K' x^2 psi(x), marched outward.

    Seeds psi = 1 on the two innermost shells of each branch and solves for
    the next outer shell: psi(x/q) = psi(qx) - K' x^2 psi(x).
    """
    _check_seed(params, lattice)
    r = lattice.radii()
    c = params.k_prime * r**2
    psi = np.ones(lattice.nk)
    for i in range(lattice.nk - 2, 0, -1):
        psi[i - 1] = psi[i + 1] - c[i] * psi[i]
    return LatticeFn(lattice, np.stack([psi, psi]).astype(complex))


def oracle_backward_check(params: GroundStateParams, fn: LatticeFn) -> float:
    """Re-solve the recursion inward from the two outer shells; max relative seed error."""
    r = fn.lattice.radii()
    c = params.k_prime * r**2
    v = fn.values[0].real
    back = np.empty_like(v)
    back[0], back[1] = v[0], v[1]
    for i in range(1, len(v) - 1):
        back[i + 1] = back[i - 1] + c[i] * back[i]
    return float(np.max(np.abs(back[-2:] - 1.0)))


def ground_sym_decaying(mu: float, lattice: GeoLattice, *, extra_shells: int = 60) -> LatticeFn:
    """Lattice solution of (mu x + D) psi = 0 that decays outward.

    Found as the minimal solution of the three-point recursion by running it
    inward from beyond the outer shell (Miller's method); normalised to 1 at
    the innermost shell.  Even in x.
    """
    if mu <= 0:
        raise ValueError("a decaying ground state needs a positive coupling")
    qv = lattice.q.value
    kp = (1 / qv - qv) * mu
    ks = np.arange(lattice.kmin - extra_shells, lattice.kmax + 1)
    r = lattice.x0 * qv ** ks.astype(float)
    c = kp * r**2
    psi = np.zeros(len(ks))
    psi[1] = 1e-300
    for i in range(1, len(ks) - 1):
        psi[i + 1] = psi[i - 1] + c[i] * psi[i]
        if abs(psi[i + 1]) > 1e250:
            psi[: i + 2] *= 1e-250
    psi = psi[extra_shells:] / psi[-1]
    return LatticeFn(lattice, np.stack([psi, psi]).astype(complex))


def decay_check(state: ProductState, lattice: GeoLattice, *, floor: float = 1e-8) -> bool:
    """|psi| eventually decreasing in |x| and below ``floor`` at the outer shell.

    For the symmetric product only the pole-free inner part of the lattice is
    examined; it grows with |x| there, so the check fails.
    """
    r = lattice.radii()[::-1]  # increasing |x|
    p = state.params
    if p.kind is GroundKind.SYM and p.lam > 0:
        # first pole at |c(x)| = 1 (s = 0 factor)
        r = r[np.abs(p.coefficient(r)) < 1 - POLE_TOL]
        if len(r) == 0:
            return False
    vals = np.abs(state(r))
    if vals[-1] >= floor:
        return False
    peak = int(np.argmax(vals))
    tail = vals[peak:]
    return bool(len(tail) > 1 and np.all(np.diff(tail) <= 0))
