import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qdeform import fockspace as fk
from qdeform.qcore import Q, QParam, bracket_sym

EXACT = QParam.exact()
QS = (0.3, 0.7, 0.9, 0.99)
REALS = tuple(fk.Realization)


def test_parse():
    assert fk.Realization.parse("SYM") is fk.Realization.SYM
    with pytest.raises(ValueError):
        fk.Realization.parse("other")


def test_dimension_error():
    with pytest.raises(ValueError):
        fk.build_fock("asym", 0.5, 1)


def test_amplitude_layout():
    ops = fk.build_fock("asym", 0.6, 6)
    assert ops.a[0, 1] ** 2 == pytest.approx(1.0)
    assert np.count_nonzero(np.tril(ops.a)) == 0  # lowering sits above the diagonal
    sym = fk.build_fock("sym", 0.5, 6)
    assert sym.abar[2, 1] ** 2 == pytest.approx(2.5)
    assert np.allclose(sym.abar, sym.a.T)


def test_classical_amplitudes():
    for real in REALS:
        ops = fk.build_fock(real, 1 - 1e-9, 8)
        assert np.allclose(np.diag(ops.a, 1), np.sqrt(np.arange(1, 8)), rtol=1e-6)


def test_spectrum_examples():
    assert fk.spectrum("asym", 0.4, 0) == pytest.approx(0.5)
    assert fk.spectrum("sym", 0.4, 0) == pytest.approx(0.5)
    assert fk.spectrum("sym", 0.5, 2) == pytest.approx(3.875)
    assert fk.spectrum("sym", EXACT, 1) == (1 + Q + Q ** -1) / 2
    for real in REALS:
        assert fk.spectrum(real, 1 - 1e-9, 5) == pytest.approx(5.5, rel=1e-6)
    with pytest.raises(ValueError):
        fk.spectrum("sym", 0.5, -1)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.05, 0.999), st.sampled_from(REALS))
def test_spectrum_increasing(q, real):
    # asym levels approach 1/(1-q); stay where q**n is resolvable in float
    n_max = min(25, int(np.log(1e-12) / np.log(q)))
    e = [fk.spectrum(real, q, n) for n in range(n_max)]
    assert all(b > a for a, b in zip(e, e[1:]))


def test_exact_spectrum_diagonal():
    ops = fk.build_fock("sym", EXACT, 5)
    assert ops.a is None
    assert ops.H[2, 2] == fk.spectrum("sym", EXACT, 2)


def test_commutator_tiny():
    ops = fk.build_fock("asym", 0.5, 2)
    assert fk.commutator_residual(ops) == 0.0


@pytest.mark.parametrize("q", QS)
@pytest.mark.parametrize("real", REALS)
def test_commutator_and_epsilon(q, real):
    ops = fk.build_fock(real, q, 40)
    assert fk.commutator_residual(ops) <= 1e-12
    assert fk.epsilon_form_check(ops) <= 1e-12


@pytest.mark.parametrize("real", REALS)
def test_exact_identities(real):
    ops = fk.build_fock(real, EXACT, 40)
    assert all(r == 0 for r in fk.commutator_residual(ops))
    assert all(r == 0 for r in fk.epsilon_form_check(ops))


def test_edge_is_large():
    ops = fk.build_fock("sym", 0.7, 40)
    assert fk.edge_residual(ops) > 1.0
    assert fk.commutator_residual(ops, interior=False) > 1e-3


def test_epsilon_diagonals():
    q, N = 0.6, 12
    asym = fk.epsilon_form_diagonal(fk.build_fock("asym", q, N))[:-1]
    assert np.allclose(asym, q ** -0.5, rtol=1e-13)
    sym = fk.epsilon_form_diagonal(fk.build_fock("sym", q, N))[:-1]
    assert np.allclose(sym, q ** -(np.arange(N - 1) + 0.5), rtol=1e-13)


def test_kscale():
    assert fk.kscale_for(1.0, 0.5) == pytest.approx(0.375)
    xp = fk.build_xp(fk.build_fock("asym", 0.5, 10), 1.0)
    assert xp.Kscale == pytest.approx(0.375)
    with pytest.raises(ValueError):
        fk.build_xp(xp.ops, 1.0, Kscale=1.0)
    with pytest.raises(ValueError):
        fk.build_xp(xp.ops, -1.0)
    with pytest.raises(ValueError):
        fk.build_xp(fk.build_fock("asym", EXACT, 4), 1.0)


def test_matrices_self_adjoint_in_fock_basis():
    # real amplitudes on an orthonormal basis: x is symmetric and p is i * antisymmetric
    xp = fk.build_xp(fk.build_fock("sym", 0.5, 10), 1.0)
    assert fk.hermiticity_defect(xp) == (0.0, 0.0)
    # the deformation shows up in the commutator instead
    assert np.max(np.abs(xp.x @ xp.p - xp.p @ xp.x - 1j * np.eye(10))) > 0.1


@pytest.mark.parametrize("q", QS)
@pytest.mark.parametrize("real", REALS)
def test_xp_commutator(q, real):
    xp = fk.build_xp(fk.build_fock(real, q, 40), 1.0)
    assert fk.commutator_xp_check(xp) <= 1e-10


def test_xp_commutator_classical():
    xp = fk.build_xp(fk.build_fock("asym", 1 - 1e-12, 20), np.sqrt(0.5))
    comm = (xp.x @ xp.p - xp.p @ xp.x)[:-1, :-1]
    assert np.allclose(comm, 1j * np.eye(19), atol=1e-9)


def test_xp_perturbed_kscale_control():
    ops = fk.build_fock("asym", 0.7, 40)
    xp = fk.build_xp(ops, 1.0)
    bad = fk.build_xp(ops, 1.0, Kscale=2 * xp.Kscale, strict=False)
    assert fk.commutator_xp_check(bad) > 1e-3


def test_uncertainty_examples():
    xp = fk.build_xp(fk.build_fock("sym", 0.5, 10), 1.0)
    rep = fk.uncertainty_product(xp, 1)
    assert rep.mean_x == 0 and rep.mean_p == 0
    assert rep.mean_x2.real == pytest.approx(bracket_sym(1, 0.5) + bracket_sym(2, 0.5))
    assert rep.mean_x2.real == pytest.approx(3.5)
    with pytest.raises(ValueError):
        fk.uncertainty_product(xp, 9)


def test_uncertainty_classical_ground():
    q = 1 - 1e-10
    xp = fk.build_xp(fk.build_fock("sym", q, 10), np.sqrt(0.5))
    rep = fk.uncertainty_product(xp, 0)
    assert rep.product == pytest.approx(0.25, rel=1e-6)
    assert rep.robertson_bound == pytest.approx(0.25, rel=1e-6)
    assert rep.literal_bound == pytest.approx(0.25, rel=1e-6)


@pytest.mark.parametrize("q", QS)
@pytest.mark.parametrize("real", REALS)
def test_robertson_holds(q, real):
    xp = fk.build_xp(fk.build_fock(real, q, 40), 1.0)
    assert all(fk.uncertainty_product(xp, n).holds for n in range(11))


def test_overflow_dimension():
    n = fk.overflow_dimension(0.3)
    assert np.isfinite(bracket_sym(n, 0.3))
    assert bracket_sym(n + 2, 0.3) > 1e300
