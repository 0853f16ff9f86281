from fractions import Fraction

import math

import pytest
from hypothesis import given, settings, strategies as st

from qdeform.qcore import (
    LaurentPoly,
    Q,
    QFrac,
    QParam,
    bracket_asym,
    bracket_sym,
    qfactorial_sym,
)

EXACT = QParam.exact()

laurent = st.dictionaries(
    st.integers(-6, 6), st.fractions(min_value=-5, max_value=5, max_denominator=7), max_size=5
).map(LaurentPoly)


def test_bracket_asym_small_values():
    assert bracket_asym(0, EXACT) == 0
    assert bracket_asym(1, EXACT) == 1
    assert bracket_asym(2, EXACT) == 1 + Q


def test_bracket_asym_rejects_negative():
    with pytest.raises(ValueError):
        bracket_asym(-1, EXACT)


def test_bracket_sym_small_values():
    assert bracket_sym(1, EXACT) == 1
    assert bracket_sym(2, EXACT) == Q + Q ** -1
    assert str(bracket_sym(2, EXACT)) == "q^-1 + q"


@pytest.mark.parametrize("n", range(11))
def test_bracket_sym_antisymmetric(n):
    assert bracket_sym(-n, EXACT) == -bracket_sym(n, EXACT)
    assert bracket_sym(-n, 0.6) == pytest.approx(-bracket_sym(n, 0.6))


def test_qfactorial():
    assert qfactorial_sym(0, EXACT) == 1
    assert qfactorial_sym(2, EXACT) == Q + Q ** -1
    assert qfactorial_sym(3, EXACT) == (Q + Q ** -1) * (Q ** 2 + 1 + Q ** -2)
    with pytest.raises(ValueError):
        qfactorial_sym(-1, EXACT)


def test_laurent_arithmetic_examples():
    assert (Q + 1) * (Q - 1) == Q ** 2 - 1
    assert (Q + Q ** -1).eval(0.5) == pytest.approx(2.5)
    p = LaurentPoly({3: 0, 0: 2})
    assert p.is_const() and len(p) == 1 and p.const_value() == 2


def test_exact_division_and_fraction_fallback():
    assert (Q ** 2 - 1) / (Q - 1) == Q + 1
    f = (Q + 2) / (Q - 1)
    assert isinstance(f, QFrac)
    assert f * (Q - 1) == Q + 2
    assert f.eval(0.5) == pytest.approx(2.5 / -0.5)


def test_half_integer_exponents():
    s = Q ** Fraction(1, 2)
    assert s * s == Q
    assert str(Q ** Fraction(-1, 2)) == "q^-1/2"


def test_mode_mixing_is_an_error():
    with pytest.raises(TypeError):
        Q + 0.5
    with pytest.raises(TypeError):
        QParam(0.5).coerce(Q)


@pytest.mark.parametrize("bad", [0.0, 1.0, 1.2, -0.3, float("nan")])
def test_qparam_range(bad):
    with pytest.raises(ValueError, match=r"q must lie in \(0,1\)"):
        QParam(bad)


def test_q1_is_derived():
    qp = QParam(0.25)
    assert qp.q1 == 4.0
    assert QParam.exact().q1 == Q ** -1


@pytest.mark.parametrize("n", range(31))
def test_recursions_exact(n):
    assert bracket_asym(n + 1, EXACT) - (Q * bracket_asym(n, EXACT) + 1) == 0
    assert bracket_sym(n + 1, EXACT) - (Q * bracket_sym(n, EXACT) + Q ** -n) == 0
    assert bracket_sym(n, EXACT).invert_q() == bracket_sym(n, EXACT)


@pytest.mark.parametrize("n", range(1, 25))
def test_sym_from_asym_with_q_squared(n):
    # [n]_q = q^(1-n) <n>_{q^2}
    assert bracket_sym(n, EXACT) == Q ** (1 - n) * bracket_asym(n, EXACT).subs_power(2)


@pytest.mark.parametrize("q", [0.3, 0.7, 0.99])
@pytest.mark.parametrize("n", [0, 1, 2, 7, 20, 40])
def test_float_matches_exact(q, n):
    for f in (bracket_asym, bracket_sym):
        exact = f(n, EXACT).eval(q)
        assert f(n, q) == pytest.approx(exact, rel=1e-12, abs=1e-300)


def test_float_sym_accurate_near_one():
    q = 1 - 1e-9
    assert bracket_sym(5, q) == pytest.approx(5.0, rel=1e-12)
    assert bracket_asym(5, q) == pytest.approx(5.0, rel=1e-7)


@settings(max_examples=60, deadline=None)
@given(laurent, laurent, laurent)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a - a == 0


@settings(max_examples=60, deadline=None)
@given(laurent, laurent, st.sampled_from([0.3, 0.7, 0.99]))
def test_eval_is_homomorphism(a, b, q):
    lhs = (a * b).eval(q)
    rhs = a.eval(q) * b.eval(q)
    mag = lambda p: sum(abs(float(c)) * q ** float(e) for e, c in p.terms.items())  # noqa: E731
    scale = 1 + mag(a) * mag(b)
    assert abs(lhs - rhs) <= 1e-12 * scale


@settings(max_examples=40, deadline=None)
@given(laurent)
def test_canonical_no_zero_coefficients(a):
    assert all(c != 0 for c in a.terms.values())
    assert (a * 0).is_zero()


def test_exact_eval_at_rational():
    assert (Q + Q ** -1).eval(Fraction(1, 2)) == Fraction(5, 2)
    assert math.isclose(bracket_sym(3, EXACT).eval(0.5), 5.25)
