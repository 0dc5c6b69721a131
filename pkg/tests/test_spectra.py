from fractions import Fraction
from math import factorial

import mpmath
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from wavecoh.poly import Polynomial
from wavecoh.roots import complex_roots
from wavecoh.spectra import (WaveOperator, c_selfpair, char_poly, spectral_data, spectral_datum,
                             spectrum)


def sympy_char_poly(n, a):
    """Oracle: determinant of A + lambda built directly from the operator's action."""
    lam = sympy.Symbol("lam")
    M = sympy.zeros(n + 1, n + 1)
    for k in range(n + 1):
        for m, c in ((k - 2, 1), (k - 1, -a), (k + 1, (n - k) * (k + 1))):
            if 0 <= m <= n:
                M[m, k] += c
    M += lam * sympy.eye(n + 1)
    return [sympy.Rational(c) for c in reversed(sympy.Poly(M.det(), lam).all_coeffs())]


def wave_oracle(n, a, b):
    """Oracle: solve the ODE in the monomial basis with leading coefficient 1."""
    a, b = mpmath.mpmathify(a), mpmath.mpmathify(b)
    # columns: monomial x^k; rows: coefficient of x^m in L(x^k)
    M = mpmath.zeros(n + 2, n + 1)
    for k in range(n + 1):
        if k >= 2:
            M[k - 2, k] += k * (k - 1)
        if k >= 1:
            M[k + 1, k] -= k
            M[k - 1, k] -= a * k
        M[k + 1, k] += n
        M[k, k] += b
    # fix the x^n coefficient to 1 and solve the remaining rows by least squares
    A = M[:, :n]
    rhs = -M[:, n]
    if n == 0:
        return [mpmath.mpf(1)]
    sol = mpmath.qr_solve(A, rhs)[0]
    return [sol[i] for i in range(n)] + [mpmath.mpf(1)]


@pytest.mark.parametrize("n", range(6))
@pytest.mark.parametrize("a", [0, -1, 2, Fraction(1, 3)])
def test_char_poly_matches_determinant(n, a):
    expected = sympy_char_poly(n, sympy.Rational(a))
    got = char_poly(n, a).coeffs
    assert [Fraction(int(c.p), int(c.q)) for c in expected] == [Fraction(c) for c in got]


def test_operator_matrix_and_apply_agree():
    op = WaveOperator(3, 2)
    p = Polynomial((1, 2, 3, 4))
    assert op.apply(p) == op.apply_direct(p)


@pytest.mark.parametrize("n,a", [(2, 1), (3, -2), (5, 1), (8, 2)])
def test_spectrum_matches_polyroots(n, a, ctx):
    chi = char_poly(n, a)
    oracle = mpmath.polyroots([mpmath.mpf(c) for c in reversed(chi.coeffs)], maxsteps=200, extraprec=256)
    got = [z for z, _ in spectrum(n, a, ctx)]
    assert len(got) == len(oracle)
    for z in oracle:
        # eigenvalues are -b; spectrum lists roots of chi
        assert min(abs(z - w) for w in got) < mpmath.mpf(10) ** -60


def test_eigen_order_is_by_decreasing_real_part():
    bs = [sd.b for sd in spectral_data(2, 1)]
    res = [mpmath.re(b) for b in bs]
    assert res == sorted(res, reverse=True)
    assert spectral_datum(1, -1, 0).b == 1


@pytest.mark.parametrize("n,a", [(1, -1), (2, 0), (3, 1), (4, -2), (6, 2)])
def test_wave_polynomial_matches_monomial_solve(n, a):
    for sd in spectral_data(n, a):
        oracle = wave_oracle(n, a, sd.b)
        # leading e-coefficient n! makes p monic
        assert len(sd.p.coeffs) == n + 1
        for x, y in zip(sd.p.coeffs, oracle):
            assert abs(x - y) < mpmath.mpf(10) ** -50


def test_desk_wave_polynomials():
    sd = spectral_datum(1, -1, 0)
    assert sd.e_coeffs[1] == 1
    assert abs(sd.e_coeffs[0] + 1) < mpmath.mpf(10) ** -70
    # n = 0: p = 1 and b = 0
    sd0 = spectral_datum(0, 0, 0)
    assert sd0.b == 0 and list(sd0.e_coeffs) == [1]


@pytest.mark.parametrize("n,a", [(n, a) for n in range(9) for a in (-2, 1)])
def test_selfpair_equals_chi_prime(n, a):
    for sd in spectral_data(n, a):
        assert abs(c_selfpair(sd.e_coeffs) - sd.chi_prime_at_b) <= 1e-50 * (1 + abs(sd.chi_prime_at_b))


def test_desk_c_values():
    cs = sorted(mpmath.re(sd.c_selfpair) for sd in spectral_data(1, -1))
    assert abs(cs[0] + 2) < 1e-60 and abs(cs[1] - 2) < 1e-60


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 6), st.integers(-3, 3), st.integers(1, 3))
def test_ode_residual_small(n, a_num, a_den):
    for sd in spectral_data(n, Fraction(a_num, a_den)):
        for x in (mpmath.mpf("0.3"), mpmath.mpc(-1, 0.7)):
            assert abs(sd.ode_residual(x)) < mpmath.mpf(10) ** -40


def test_recurrence_head_is_factorial():
    for sd in spectral_data(4, 1):
        assert sd.e_coeffs[4] == factorial(4)


def test_roots_of_known_polynomial(ctx):
    roots = complex_roots(Polynomial((-2, 0, 1)), ctx)
    assert abs(max(mpmath.re(r) for r in roots) - mpmath.sqrt(2)) < mpmath.mpf(10) ** -70
