"""q-exponential, q-Fourier transforms on geometric lattices and the q-delta kernel.

E(z) = sum z^n / [n]!  is the eigenfunction of the symmetric Jackson
derivative: D_x E(ipx) = ip E(ipx).  Transforms are Jackson sums against the
kernel E(+-ipx); no 2 pi style normalisation is inserted, so a round trip is a
smearing by the finite-window delta kernel, not the identity.

When the x- and p-lattices share q, the product p x on shells (k, k') depends
only on k + k', so the kernel matrix has only nx + np distinct entries.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .qcore import QParam, as_qparam, bracket_sym_array
from .qlattice import GeoLattice, LatticeFn, SingularPointError, TruncationWarning, d_sym
from .wavefun import ground_sym_decaying

MIN_TERMS = 30
TERM_RTOL = 1e-16
MAX_TERMS = 20000
DECAY_TOL = 1e-8
EPS = np.finfo(float).eps


def _qvalue(q) -> float:
    qp = as_qparam(q)
    if qp.is_exact:
        raise ValueError("the q-exponential is evaluated in float mode")
    return qp.value


def qexp(z, q, *, with_error: bool = False):
    """E(z) for scalar or array ``z``.

    Summation for each entry stops once |term| < 1e-16 |partial sum| (at least
    30 terms).  With ``with_error`` also returns a float round-off estimate,
    eps * (largest term); it exceeds |E| when the series cancels (large
    imaginary z near q = 1).
    """
    qv = _qvalue(q)
    z = np.asarray(z, dtype=complex)
    flat = z.ravel()
    total = np.ones_like(flat)
    term = np.ones_like(flat)
    biggest = np.ones(flat.shape)
    active = np.arange(flat.size)
    n = 0
    while active.size:
        n += 1
        if n > MAX_TERMS:
            raise RuntimeError("q-exponential series failed to converge")
        term[active] *= flat[active] / bracket_sym_array(n, qv)
        total[active] += term[active]
        mag = np.abs(term[active])
        biggest[active] = np.maximum(biggest[active], mag)
        if n >= MIN_TERMS:
            active = active[mag > TERM_RTOL * np.abs(total[active])]
    out = total.reshape(z.shape)
    if z.ndim == 0:
        out = out[()]
    if with_error:
        err = (EPS * n * biggest).reshape(z.shape)
        return out, (err[()] if z.ndim == 0 else err)
    return out


def qsin(z, q):
    """Odd part of E(i.): (E(iz) - E(-iz)) / 2i."""
    z = np.asarray(z, dtype=complex)
    return (qexp(1j * z, q) - qexp(-1j * z, q)) / 2j


def qcos(z, q):
    z = np.asarray(z, dtype=complex)
    return (qexp(1j * z, q) + qexp(-1j * z, q)) / 2


@dataclass(frozen=True, eq=False)
class TransformPlan:
    """Kernel E(i p x) tabulated for an x-lattice and a p-lattice with the same q.

    ``kernel`` has rows indexed by x (positive branch then negative) and
    columns by p in the same layout.  ``kernel_error`` is the round-off
    estimate of each entry.
    """

    x_lattice: GeoLattice
    p_lattice: GeoLattice
    kernel: np.ndarray = field(init=False, repr=False)
    kernel_error: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        xl, pl = self.x_lattice, self.p_lattice
        if xl.is_exact or pl.is_exact:
            raise ValueError("transforms are evaluated in float mode")
        if xl.q.value != pl.q.value:
            raise ValueError("x- and p-lattices must share q")
        q = xl.q.value
        m = np.arange(xl.kmin + pl.kmin, xl.kmax + pl.kmax + 1)
        vals, errs = qexp(1j * xl.x0 * pl.x0 * q ** m.astype(float), q, with_error=True)
        idx = (xl.ks[:, None] + pl.ks[None, :]) - m[0]
        base, berr = vals[idx], errs[idx]
        K = np.block([[base, base.conj()], [base.conj(), base]])
        object.__setattr__(self, "kernel", K)
        object.__setattr__(self, "kernel_error", np.block([[berr, berr], [berr, berr]]))

    @property
    def q(self) -> float:
        return self.x_lattice.q.value

    def block(self, x_lat: GeoLattice, p_lat: GeoLattice) -> np.ndarray:
        """Kernel restricted to sub-windows of the plan's lattices."""
        rows = _window_index(self.x_lattice, x_lat)
        cols = _window_index(self.p_lattice, p_lat)
        return self.kernel[np.ix_(rows, cols)]


def _window_index(full: GeoLattice, sub: GeoLattice) -> np.ndarray:
    if sub.x0 != full.x0 or sub.q.value != full.q.value or sub.kmin < full.kmin or sub.kmax > full.kmax:
        raise ValueError("lattice is not a window of the plan's lattice")
    pos = np.arange(sub.kmin, sub.kmax + 1) - full.kmin
    return np.concatenate([pos, pos + full.nk])


def _warn_boundary(f: LatticeFn, what: str) -> bool:
    scale = f.max_abs()
    edge = float(np.max(np.abs(f.values[:, 0])))
    if scale > 0 and edge > DECAY_TOL * scale:
        warnings.warn(
            f"{what} has not decayed at the outer shell (|f| = {edge:.3g}, max {scale:.3g})",
            TruncationWarning,
            stacklevel=3,
        )
        return False
    return True


def _contract(K: np.ndarray, f: LatticeFn) -> np.ndarray:
    w = f.lattice.jackson_weights()
    return K @ (w * f.values).ravel()


def fourier_forward(phi: LatticeFn, plan: TransformPlan, x_lattice: GeoLattice | None = None) -> LatticeFn:
    """psi(x) = int E(ipx) phi(p) d_q p over phi's lattice (a window of the plan's p-lattice)."""
    x_lat = x_lattice or plan.x_lattice
    _warn_boundary(phi, "phi")
    vals = _contract(plan.block(x_lat, phi.lattice), phi)
    return LatticeFn(x_lat, vals.reshape(2, x_lat.nk))


def fourier_inverse(psi: LatticeFn, plan: TransformPlan, p_lattice: GeoLattice | None = None) -> LatticeFn:
    """phi(p) = int E(-ipx) psi(x) d_q x; the kernel is the conjugate transpose."""
    p_lat = p_lattice or plan.p_lattice
    _warn_boundary(psi, "psi")
    K = plan.block(psi.lattice, p_lat).conj().T
    vals = _contract(K, psi)
    return LatticeFn(p_lat, vals.reshape(2, p_lat.nk))


def _rel(diff: np.ndarray, scale: float) -> float:
    m = float(np.max(np.abs(diff))) if diff.size else 0.0
    return m / scale if scale > 0 else m


def intertwine_check(phi: LatticeFn, plan: TransformPlan, lam: float) -> float:
    """Compare (D_x + lam x) forward(phi) with forward(i (p + lam D_p) phi).

    Evaluated on the interior of the x-lattice; the discrepancy is relative to
    max |forward(phi)|.
    """
    psi = fourier_forward(phi, plan)
    if psi.max_abs() == 0:
        return 0.0
    dpsi = d_sym(psi)
    x_in = dpsi.lattice
    lhs = dpsi.values + lam * x_in.points() * psi.values[:, 1:-1]
    dphi = d_sym(phi)
    p_in = dphi.lattice
    a_phi = LatticeFn(p_in, 1j * (p_in.points() * phi.values[:, 1:-1] + lam * dphi.values))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        rhs = fourier_forward(a_phi, plan, x_in)
    return _rel(lhs - rhs.values, psi.max_abs())


def momentum_lattice(q, lam: float, *, p_min: float = 1e-12, p_max: float = 1e3, cutoff: float = 1e-18) -> GeoLattice:
    """p-lattice from p_min out to where the momentum ground state falls below ``cutoff``."""
    if lam <= 0:
        raise ValueError("a decaying momentum ground state needs lam > 0")
    wide = GeoLattice.spanning(q, p_min, p_max)
    phi = np.abs(ground_sym_decaying(1 / lam, wide).values[0])
    keep = np.nonzero(phi > cutoff)[0]
    return wide.window(wide.kmin + int(keep[0]), wide.kmax)


def make_plan(q, lam: float = 1.0, *, x_range=(1e-3, 3.0), p_min: float = 1e-12) -> TransformPlan:
    p_lat = momentum_lattice(q, lam, p_min=p_min)
    return TransformPlan(GeoLattice.spanning(q, *x_range), p_lat)


@dataclass(frozen=True)
class CorrespondenceReport:
    residual: float
    psi_scale: float
    kernel_error: float


def ground_correspondence(lam: float, plan: TransformPlan) -> CorrespondenceReport:
    """Residual of a_x = D_x + lam x on the transform of the momentum ground state.

    The momentum ground state solves (p + lam D_p) phi = 0, i.e. the decaying
    solution with coupling 1/lam; ``residual`` is relative to max |psi|.
    """
    if lam <= 0:
        raise ValueError("lam = 0 gives a constant momentum state, which violates the decay precondition")
    phi = ground_sym_decaying(1 / lam, plan.p_lattice)
    psi = fourier_forward(phi, plan)
    dpsi = d_sym(psi)
    res = dpsi.values + lam * dpsi.lattice.points() * psi.values[:, 1:-1]
    w = plan.p_lattice.jackson_weights().ravel()
    kerr = float(np.max(plan.kernel_error @ (w * np.abs(phi.values.ravel()))))
    return CorrespondenceReport(_rel(res, psi.max_abs()), psi.max_abs(), kerr / psi.max_abs())


@dataclass(frozen=True)
class DeltaSpec:
    """Cutoff momentum P = p0 q^-m."""

    q: QParam
    m: int
    p0: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "q", as_qparam(self.q))
        if self.q.is_exact:
            raise ValueError("the q-delta kernel is evaluated in float mode")
        if self.p0 <= 0:
            raise ValueError("p0 must be positive")

    @property
    def P(self) -> float:
        return self.p0 * self.q.value ** (-self.m)


def delta_q(x, xprime, spec: DeltaSpec):
    """Finite-P kernel (E(iPx)E(-iqPx') - E(-iPx)E(iqPx')) / (i (x - x')).

    Vectorised over x and x'.  At x = x' = 0 the value is the limit 2P.  At
    x = x' != 0 the numerator tends to 2i Im E(iPx)E(-iqPx), which is nonzero
    for q < 1, so the kernel has a genuine pole there and SingularPointError is
    raised.
    """
    q, P = spec.q.value, spec.P
    x, xp = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(xprime, dtype=float))
    both_zero = (x == 0) & (xp == 0)
    if np.any((x == xp) & ~both_zero):
        raise SingularPointError("delta_q has a pole at x = x' != 0 for q < 1")
    prod = qexp(1j * P * x, q) * qexp(-1j * q * P * xp, q)
    with np.errstate(invalid="ignore", divide="ignore"):
        val = 2 * prod.imag / (x - xp)
    val = np.where(both_zero, 2 * P, val)
    return val[()] if val.ndim == 0 else val


def classical_delta(x, xprime, P: float):
    """2 sin(P (x - x')) / (x - x'), with the value 2P at coincidence."""
    d = np.asarray(x, dtype=float) - np.asarray(xprime, dtype=float)
    return 2 * P * np.sinc(P * d / math.pi)


def dirac_distance(spec: DeltaSpec, xprime: float = 0.0, *, dmin: float = 0.1, dmax: float = 5.0, n: int = 400) -> float:
    """sup |delta_q - 2 sin(P d)/d| / sup |2 sin(P d)/d| over dmin <= |x - x'| <= dmax."""
    d = np.concatenate([-np.linspace(dmax, dmin, n), np.linspace(dmin, dmax, n)])
    x = xprime + d
    dq = delta_q(x, xprime, spec)
    dc = classical_delta(x, xprime, spec.P)
    return float(np.max(np.abs(dq - dc)) / np.max(np.abs(dc)))


@dataclass(frozen=True)
class BoundaryReport:
    telescoping: float     # |interior sum - telescoped boundary|, relative
    rearrangement: float   # |interior sum - (i x S_W - i x'' S_W+1)|, relative
    total: complex         # the interior Jackson sum of D_p(E(ipx)E(-ipx'))


def boundary_identity_check(x: float, xprime: float, spec: DeltaSpec, p_lattice: GeoLattice,
                            *, xpp: float | None = None) -> BoundaryReport:
    """Finite-window checks on int D_p[E(ipx) E(-ipx')] d_q p.

    The window is the interior of ``p_lattice``.  The sum is compared with the
    telescoped boundary values, and with the rearranged form
    i x S_W - i x'' S_W+1, where S_W = sum_W w E(ipx) E(-ipx'') and W+1 is the
    window moved one shell inward; x'' = x'/q unless overridden (``xpp`` is
    the hook for the negative control x'' = x').
    """
    q = p_lattice.q.value
    if p_lattice.nk < 3:
        return BoundaryReport(0.0, 0.0, 0j)
    xpp = xprime / q if xpp is None else xpp
    pts = p_lattice.points()
    g = qexp(1j * pts * x, q) * qexp(-1j * pts * xprime, q)
    fg = LatticeFn(p_lattice, g)
    dfg = d_sym(fg)
    inner = dfg.lattice
    w_in = inner.jackson_weights()
    total = complex(np.sum(w_in * dfg.values))
    # weight times difference quotient is -s/2 (g(qp) - g(p/q)); the sum
    # collapses to two shells per end
    tele = 0j
    for row, s in ((0, 1), (1, -1)):
        v = g[row]
        tele += s / 2 * ((v[0] + v[1]) - (v[-2] + v[-1]))
    scale = float(np.sum(np.abs(w_in * dfg.values))) + abs(tele)

    def S(window: GeoLattice) -> complex:
        pp = window.points()
        return complex(np.sum(window.jackson_weights() * qexp(1j * pp * x, q) * qexp(-1j * pp * xpp, q)))

    shifted = p_lattice.window(inner.kmin + 1, inner.kmax + 1)
    rearr = 1j * x * S(inner) - 1j * xpp * S(shifted)
    scale2 = scale + abs(x * S(inner)) + abs(xpp * S(shifted))
    return BoundaryReport(abs(total - tele) / scale, abs(total - rearr) / scale2, total)


def delta_window(spec: DeltaSpec, p_min: float = 1e-12) -> GeoLattice:
    """Symmetric p-window [-P, P] on the lattice p0 q^k."""
    q = spec.q.value
    kmax = math.ceil(math.log(p_min / spec.p0) / math.log(q))
    return GeoLattice(spec.p0, spec.q, -spec.m, max(kmax, -spec.m))


@dataclass(frozen=True)
class LocalizationProfile:
    q: float
    P: float
    x: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    peak: float
    hwhm: float
    first_zero: float


def _first_crossing(x: np.ndarray, y: np.ndarray, level: float) -> float:
    below = np.nonzero(y <= level)[0]
    if below.size == 0 or below[0] == 0:
        return math.nan
    i = below[0]
    x0, x1, y0, y1 = x[i - 1], x[i], y[i - 1], y[i]
    return float(x0 + (level - y0) * (x1 - x0) / (y1 - y0))


def localization_profile(spec: DeltaSpec, x: np.ndarray) -> LocalizationProfile:
    """|delta_q(x, 0)| on a grid of x >= 0 with peak, half width at half maximum and first zero."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or np.any(np.diff(x) <= 0):
        raise ValueError("profile grid must be increasing and non-negative")
    vals = delta_q(x, 0.0, spec)
    peak = float(np.max(np.abs(vals)))
    return LocalizationProfile(
        q=spec.q.value,
        P=spec.P,
        x=x,
        values=vals,
        peak=peak,
        hwhm=_first_crossing(x, np.abs(vals), peak / 2),
        first_zero=_first_crossing(x, vals, 0.0),
    )


def translation_defect(spec: DeltaSpec, a: float, x: np.ndarray) -> float:
    """max |delta_q(x + a, a) - delta_q(x, 0)| over x (x != 0)."""
    x = np.asarray(x, dtype=float)
    x = x[x != 0]
    return float(np.max(np.abs(delta_q(x + a, a, spec) - delta_q(x, 0.0, spec))))


@dataclass(frozen=True)
class RoundTripReport:
    defect: float        # max |forward(inverse(psi)) - psi| / max |psi|
    convolution: float   # max |forward(inverse(psi)) - sum_x' K(x, x') psi(x')|, relative to the round trip


def round_trip(psi: LatticeFn, plan: TransformPlan) -> RoundTripReport:
    """forward(inverse(psi)) compared with psi and with the finite-window kernel convolution."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        back = fourier_forward(fourier_inverse(psi, plan), plan, psi.lattice)
    K = plan.block(psi.lattice, plan.p_lattice)
    wp = plan.p_lattice.jackson_weights().ravel()
    kern = (K * wp) @ K.conj().T
    conv = kern @ (psi.lattice.jackson_weights() * psi.values).ravel()
    scale = psi.max_abs()
    return RoundTripReport(
        _rel(back.values - psi.values, scale),
        _rel(back.values.ravel() - conv, back.max_abs()),
    )
