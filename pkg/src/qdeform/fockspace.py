"""Truncated Fock-space realizations of  a abar - q abar a = Delta.

Matrix convention: ``M[m, n] = <m|M|n>``, so the lowering operator ``a`` has
its amplitudes on the superdiagonal (``a[n-1, n] = sqrt(amp2(n))``) and the
raising operator ``abar`` on the subdiagonal.

Residuals of operator identities are evaluated on the interior block (the last
basis row and column are dropped: truncating the ladder corrupts the top
state) and are entrywise relative, ``|lhs - rhs| / (|terms| summed)``, because
[n] grows like q**-n and absolute float residuals scale with it.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .qcore import LaurentPoly, QParam, as_qparam, bracket_asym, bracket_sym

N_DEFAULT = 40


class Realization(enum.Enum):
    ASYM = "asym"  # <n> amplitudes, Delta = 1
    SYM = "sym"    # [n] amplitudes, Delta = q^-n

    @classmethod
    def parse(cls, value) -> "Realization":
        if isinstance(value, cls):
            return value
        return cls(str(value).lower())


def amp2(realization, n: int, q):
    """Squared ladder amplitude: <n> or [n]."""
    realization = Realization.parse(realization)
    return bracket_asym(n, q) if realization is Realization.ASYM else bracket_sym(n, q)


def delta_value(realization, n: int, q):
    realization = Realization.parse(realization)
    qp = as_qparam(q)
    if realization is Realization.ASYM:
        return qp.one()
    return qp.power(-n)


@dataclass(frozen=True, eq=False)
class FockOps:
    realization: Realization
    q: QParam
    N: int
    amp2: tuple  # amp2(n), n = 0..N
    a: np.ndarray | None = field(repr=False)
    abar: np.ndarray | None = field(repr=False)
    H: np.ndarray = field(repr=False)
    Delta: np.ndarray = field(repr=False)

    @property
    def is_exact(self) -> bool:
        return self.q.is_exact


def build_fock(realization, q, N: int = N_DEFAULT) -> FockOps:
    """Truncated a, abar, H, Delta on |0>..|N-1>.

    Exact mode keeps only the squared amplitudes (no square roots); a and abar
    are then ``None`` and H, Delta are object arrays of LaurentPoly.
    """
    realization = Realization.parse(realization)
    qp = as_qparam(q)
    if N < 2:
        raise ValueError(f"Fock dimension must be at least 2, got {N}")
    sq = tuple(amp2(realization, n, qp) for n in range(N + 1))
    deltas = [delta_value(realization, n, qp) for n in range(N)]
    if qp.is_exact:
        H = np.full((N, N), LaurentPoly(), dtype=object)
        Dl = np.full((N, N), LaurentPoly(), dtype=object)
        for n in range(N):
            H[n, n] = (sq[n] + sq[n + 1]) * Fraction(1, 2)
            Dl[n, n] = deltas[n]
        return FockOps(realization, qp, N, sq, None, None, H, Dl)
    amps = np.sqrt(np.array(sq[1:N], dtype=float))
    a = np.diag(amps, k=1)
    abar = np.diag(amps, k=-1)
    H = np.diag([0.5 * (sq[n] + sq[n + 1]) for n in range(N)])
    return FockOps(realization, qp, N, sq, a, abar, H, np.diag(np.array(deltas, dtype=float)))


def spectrum(realization, q, n: int):
    """Energy of |n>: (amp2(n) + amp2(n+1)) / 2."""
    if n < 0:
        raise ValueError("state index must be non-negative")
    qp = as_qparam(q)
    half = Fraction(1, 2) if qp.is_exact else 0.5
    return (amp2(realization, n, qp) + amp2(realization, n + 1, qp)) * half


def _relative(residual: np.ndarray, scale: np.ndarray) -> float:
    with np.errstate(invalid="ignore", divide="ignore"):
        rel = np.where(scale > 0, np.abs(residual) / scale, np.abs(residual))
    return float(np.max(rel)) if rel.size else 0.0


def commutator_residual(ops: FockOps, *, interior: bool = True):
    """Residual of a abar - q abar a - Delta.

    Float mode: max entrywise relative residual (interior block unless
    ``interior=False``).  Exact mode: the list of residual polynomials on the
    interior diagonal, all zero when the identity holds.
    """
    q = ops.q.q
    if ops.is_exact:
        m = ops.N - 1 if interior else ops.N
        return [ops.amp2[n + 1] - q * ops.amp2[n] - ops.Delta[n, n] for n in range(m)]
    aab = ops.a @ ops.abar
    aba = ops.abar @ ops.a
    res = aab - q * aba - ops.Delta
    scale = np.abs(aab) + q * np.abs(aba) + np.abs(ops.Delta)
    if interior:
        res, scale = res[:-1, :-1], scale[:-1, :-1]
    return _relative(res, scale)


def edge_residual(ops: FockOps) -> float:
    """Absolute commutator residual at the truncated top state (reported, not asserted)."""
    q = ops.q.value
    res = ops.a @ ops.abar - q * ops.abar @ ops.a - ops.Delta
    return float(abs(res[-1, -1]))


def epsilon_form_check(ops: FockOps):
    """Residual of A^t eps A = q^-1/2 a abar - q^1/2 abar a against q^-1/2 Delta.

    For Delta = q^-n the diagonal target is q^-(n + 1/2).  Exact residuals are
    returned per interior state in exact mode.
    """
    qp = ops.q
    s = qp.sqrt()
    if ops.is_exact:
        return [
            ops.amp2[n + 1] / s - s * ops.amp2[n] - ops.Delta[n, n] / s
            for n in range(ops.N - 1)
        ]
    aea = ops.a @ ops.abar / s - s * (ops.abar @ ops.a)
    target = ops.Delta / s
    scale = np.abs(ops.a @ ops.abar) / s + s * np.abs(ops.abar @ ops.a) + np.abs(target)
    return _relative((aea - target)[:-1, :-1], scale[:-1, :-1])


def epsilon_form_diagonal(ops: FockOps) -> np.ndarray:
    """Diagonal of A^t eps A (float mode)."""
    s = ops.q.sqrt()
    return np.diag(ops.a @ ops.abar / s - s * (ops.abar @ ops.a))


@dataclass(frozen=True, eq=False)
class XPOps:
    ops: FockOps
    Lscale: float
    Kscale: float
    hbar: float
    x: np.ndarray = field(repr=False)
    p: np.ndarray = field(repr=False)


def kscale_for(Lscale: float, q: float, hbar: float = 1.0) -> float:
    """K fixed by L K = (hbar/2)(q + 1)/2."""
    return hbar * (q + 1) / 4 / Lscale


def build_xp(ops: FockOps, Lscale: float, *, hbar: float = 1.0, Kscale: float | None = None,
             strict: bool = True) -> XPOps:
    """x = L (abar + a),  p = i K (abar - a).

    ``Kscale`` defaults to the value fixed by L K = (hbar/2)(q+1)/2; passing a
    different one requires ``strict=False`` (used for negative controls).
    For q != 1 neither x nor p is Hermitian.
    """
    if ops.is_exact:
        raise ValueError("position/momentum matrices need float mode")
    if Lscale <= 0:
        raise ValueError("Lscale must be positive")
    K0 = kscale_for(Lscale, ops.q.value, hbar)
    if Kscale is None:
        Kscale = K0
    elif strict and not math.isclose(Kscale, K0, rel_tol=1e-12):
        raise ValueError(f"L*K must equal hbar(q+1)/4 = {Lscale * K0}")
    x = Lscale * (ops.abar + ops.a)
    p = 1j * Kscale * (ops.abar - ops.a)
    return XPOps(ops, Lscale, Kscale, hbar, x, p)


def hermiticity_defect(xp: XPOps) -> tuple[float, float]:
    return (float(np.max(np.abs(xp.x - xp.x.conj().T))),
            float(np.max(np.abs(xp.p - xp.p.conj().T))))


def commutator_xp_rhs(xp: XPOps) -> np.ndarray:
    """i hbar [Delta + (q - 1)/4 (x^2/L^2 + p^2/K^2)]."""
    q = xp.ops.q.value
    x2 = xp.x @ xp.x / xp.Lscale**2
    p2 = xp.p @ xp.p / xp.Kscale**2
    return 1j * xp.hbar * (xp.ops.Delta + (q - 1) / 4 * (x2 + p2))


def commutator_xp_check(xp: XPOps) -> float:
    """Relative interior residual of xp - px against the deformed right side."""
    xpm = xp.x @ xp.p
    pxm = xp.p @ xp.x
    rhs = commutator_xp_rhs(xp)
    q = xp.ops.q.value
    x2 = xp.x @ xp.x / xp.Lscale**2
    p2 = xp.p @ xp.p / xp.Kscale**2
    scale = (np.abs(xpm) + np.abs(pxm) + xp.hbar * np.abs(xp.ops.Delta)
             + xp.hbar * (1 - q) / 4 * (np.abs(x2) + np.abs(p2)))
    return _relative((xpm - pxm - rhs)[:-1, :-1], scale[:-1, :-1])


@dataclass(frozen=True)
class UncertaintyReport:
    n: int
    mean_x: complex
    mean_p: complex
    mean_x2: complex
    mean_p2: complex
    product: float
    literal_bound: float
    robertson_bound: float
    holds_literal_sqrt: bool     # sqrt(product) >= literal_bound, as printed
    holds_literal_product: bool  # product >= literal_bound, dimensionally matched
    holds_robertson: bool

    @property
    def holds(self) -> bool:
        return self.holds_robertson


def uncertainty_product(xp: XPOps, n: int) -> UncertaintyReport:
    """Variances in |n> using <n|M|n> = M[n, n] in the Fock basis.

    Emits the variance product, the deformed bound as printed
    (hbar^2/4)[Delta + (q-1)(<x^2>/4L^2 + <p^2>/4K^2)], and the Robertson
    bound |<xp - px>|^2 / 4.
    """
    N = xp.ops.N
    if not 0 <= n <= N - 2:
        raise ValueError(f"state index must lie in [0, {N - 2}] to avoid the truncation edge")
    q = xp.ops.q.value
    x, p = xp.x, xp.p
    mx, mp = x[n, n], p[n, n]
    x2 = (x @ x)[n, n]
    p2 = (p @ p)[n, n]
    var_x = (x2 - mx * mx).real
    var_p = (p2 - mp * mp).real
    product = float(var_x * var_p)
    delta_n = xp.ops.Delta[n, n]
    literal = xp.hbar**2 / 4 * (delta_n + (q - 1) * (x2.real / (4 * xp.Lscale**2)
                                                    + p2.real / (4 * xp.Kscale**2)))
    comm = (x @ p - p @ x)[n, n]
    robertson = float(abs(comm) ** 2 / 4)
    tol = 1e-12 * max(abs(product), 1.0)
    return UncertaintyReport(
        n=n,
        mean_x=complex(mx),
        mean_p=complex(mp),
        mean_x2=complex(x2),
        mean_p2=complex(p2),
        product=product,
        literal_bound=float(literal),
        robertson_bound=robertson,
        holds_literal_sqrt=bool(math.sqrt(max(product, 0.0)) >= literal - tol),
        holds_literal_product=bool(product >= literal - tol),
        holds_robertson=bool(product >= robertson - tol),
    )


def overflow_dimension(q: float, limit: float = 1e300) -> int:
    """Largest N for which [N] stays below ``limit`` in float."""
    h = -math.log(q)
    return int(math.log(2 * limit * math.sinh(h)) / h)
