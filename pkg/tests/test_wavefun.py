import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qdeform import wavefun as wf
from qdeform.qlattice import GeoLattice, d_asym, d_sym


def params(lam, q, kind="asym"):
    return wf.GroundStateParams(lam, q, kind)


def brute_product(c, q, factors=40):
    return 1 / np.prod([1 + c * q ** (2 * s) for s in range(factors)])


def test_param_validation():
    with pytest.raises(ValueError):
        params(-1.0, 0.5)
    with pytest.raises(ValueError):
        params(1.0, None)
    assert params(1.0, 0.5, "SYM").kind is wf.GroundKind.SYM
    assert params(2.0, 0.5).k_prime == pytest.approx(3.0)


def test_kind_guards():
    with pytest.raises(ValueError):
        wf.ground_asym(1.0, params(1.0, 0.5, "sym"))
    with pytest.raises(ValueError):
        wf.ground_sym(1.0, params(1.0, 0.5, "asym"))


@pytest.mark.parametrize("kind", ["asym", "sym"])
def test_origin_is_one(kind):
    st_ = wf.ProductState(params(1.3, 0.7, kind))
    assert st_(0.0) == 1.0


def test_asym_matches_partial_product():
    q, lam, x = 0.5, 1.0, 1.0
    c = (1 - q) * lam * x * x
    assert wf.ground_asym(x, params(lam, q)) == pytest.approx(brute_product(c, q), rel=1e-14)
    assert wf.ground_asym(x, params(lam, q)) == pytest.approx(0.56869894626542, rel=1e-12)


def test_sym_matches_partial_product():
    q, lam, x = 0.5, 1.0, 0.5
    c = -(q ** 3) * lam * x * x / (1 + q * q)
    assert wf.ground_sym(x, params(lam, q, "sym")) == pytest.approx(brute_product(c, q), rel=1e-14)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.05, 0.95), st.floats(0.0, 5.0), st.floats(-3.0, 3.0))
def test_asym_functional_relation(q, lam, x):
    st_ = wf.ProductState(params(lam, q))
    assert wf.asym_relation_residual(st_, x) <= 1e-12


@settings(max_examples=60, deadline=None)
@given(st.floats(0.1, 0.95), st.floats(0.0, 3.0), st.floats(-1.0, 1.0))
def test_sym_two_point_relation(q, lam, x):
    st_ = wf.ProductState(params(lam, q, "sym"))
    try:
        r = wf.sym_two_point_residual(st_, x)
    except wf.PoleError:
        return
    assert r <= 1e-12


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["asym", "sym"]), st.floats(0.1, 0.95), st.floats(0.0, 1.0))
def test_even(kind, q, x):
    st_ = wf.ProductState(params(1.0, q, kind))
    assert st_(-x) == st_(x)


@pytest.mark.parametrize("q", [0.3, 0.7, 0.95])
def test_truncation_sound(q):
    st_ = wf.ProductState(params(2.0, q))
    x = np.linspace(-3, 3, 61)
    S = st_.truncation(x)
    assert st_.tail_bound(x) <= wf.TAIL_TOL
    doubled = st_.with_truncation(2 * S + 1)
    assert np.max(np.abs(st_(x) - doubled(x)) / np.abs(doubled(x))) <= 1e-13


def test_tail_bound_infinite_when_factor_large():
    assert wf.tail_bound(100.0, 0.5, 0) == np.inf


def test_asym_equation_residual():
    lat = GeoLattice.spanning(0.5, 1e-3, 3.0)
    assert wf.residual_asym(wf.ProductState(params(1.0, 0.5)), lat) <= 1e-10


def test_asym_zero_coupling():
    lat = GeoLattice.spanning(0.5, 1e-3, 3.0)
    st_ = wf.ProductState(params(0.0, 0.5))
    assert np.all(st_(lat.points()) == 1.0)
    assert wf.residual_asym(st_, lat) == 0.0


def test_wrong_sign_control():
    q, lam = 0.5, 1.0
    lat = GeoLattice.spanning(q, 1e-3, 3.0)
    psi = wf.ProductState(params(lam, q)).sample(lat)
    dpsi = d_asym(psi)
    x = dpsi.lattice.points()
    res = np.abs(-lam * x * psi.values[:, :-1] + dpsi.values)
    assert np.max(res) / psi.max_abs() > 0.1


def test_pole_error():
    q, lam = 0.5, 1.0
    L = q ** 3 * lam / (1 + q * q)
    st_ = wf.ProductState(params(lam, q, "sym"))
    with pytest.raises(wf.PoleError):
        st_(1 / np.sqrt(L))


def test_three_point_vanishes_near_origin():
    st_ = wf.ProductState(params(1.0, 0.9, "sym"))
    small = GeoLattice(1e-6, 0.9, 0, 10)
    assert wf.residual_sym_threepoint(st_, small) <= 1e-11


def test_three_point_diagnostic_finite():
    st_ = wf.ProductState(params(1.0, 0.9, "sym"))
    r = wf.residual_sym_threepoint(st_, GeoLattice(0.5, 0.9, 0, 0))
    assert np.isfinite(r)


def test_series_solves_symmetric_equation():
    q, lam = 0.8, 1.0
    for x in (0.3, 1.0, 2.0):
        lhs = d_sym(lambda t: wf.ground_sym_series(t, lam, q), x, q)
        assert abs(lhs + lam * x * wf.ground_sym_series(x, lam, q)) <= 1e-12
    assert wf.ground_sym_series(0.0, lam, q) == 1.0


def test_oracle_satisfies_recursion():
    p = params(1.0, 0.9, "sym")
    lat = GeoLattice.spanning(0.9, 1e-6, 1.0)
    fn = wf.ground_sym_oracle(p, lat)
    v = fn.values[0].real
    r = lat.radii()
    res = v[2:] - v[:-2] - p.k_prime * r[1:-1] ** 2 * v[1:-1]
    assert np.max(np.abs(res)) <= 1e-12
    assert wf.oracle_backward_check(p, fn) <= 1e-12
    assert np.allclose(fn.values[0], fn.values[1])


def test_oracle_zero_coupling():
    lat = GeoLattice.spanning(0.9, 1e-6, 1.0)
    fn = wf.ground_sym_oracle(params(0.0, 0.9, "sym"), lat)
    assert np.all(fn.values == 1)


def test_oracle_seed_error():
    with pytest.raises(wf.SeedError):
        wf.ground_sym_oracle(params(1.0, 0.9, "sym"), GeoLattice(1.0, 0.9, 0, 5))


def test_oracle_agrees_with_series():
    q, lam = 0.9, 1.0
    lat = GeoLattice.spanning(q, 1e-6, 1.0)
    fn = wf.ground_sym_oracle(params(lam, q, "sym"), lat)
    ref = wf.ground_sym_series(lat.radii(), lam, q)
    assert np.max(np.abs(fn.values[0].real - ref)) <= 1e-8


def test_decaying_solution():
    q, mu = 0.9, 1.0
    lat = GeoLattice.spanning(q, 1e-3, 3.0)
    fn = wf.ground_sym_decaying(mu, lat)
    v = fn.values[0].real
    assert v[-1] == 1.0
    assert np.all(np.diff(v) > 0)  # larger toward the origin
    assert np.max(np.abs(d_sym(fn).values + mu * d_sym(fn).lattice.points() * fn.values[:, 1:-1])) <= 1e-10
    with pytest.raises(ValueError):
        wf.ground_sym_decaying(0.0, lat)


def test_decay_checks():
    lat = GeoLattice(1.0, 0.5)
    assert wf.decay_check(wf.ProductState(params(1.0, 0.5)), lat)
    assert not wf.decay_check(wf.ProductState(params(0.0, 0.5)), lat)
    assert not wf.decay_check(wf.ProductState(params(1.0, 0.5, "sym")), lat)


def test_faster_decay_for_stronger_coupling():
    lat = GeoLattice(1.0, 0.9)
    weak = wf.ProductState(params(1.0, 0.9))
    strong = wf.ProductState(params(5.0, 0.9))
    assert wf.decay_check(strong, lat) and wf.decay_check(weak, lat)
    for x in (1.0, 2.0, 3.0):
        assert strong(x) < weak(x)
