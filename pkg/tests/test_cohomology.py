from dataclasses import replace
from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from wavecoh.cohomology import (check_in_R, corollary_check, reduce_to_linear, theorem_c_check,
                                theorem_d0_check, verify_certificate, wave_basis,
                                wave_basis_coordinates)
from wavecoh.errors import ResidueObstruction
from wavecoh.pfrac import D_of_monomial, D_of_pole, PoleExpansion, apply_D, partial_fractions
from wavecoh.poly import CubicWeight, Polynomial, e_basis
from wavecoh.scalars import GaussianRational
from wavecoh.spectra import spectral_data, spectral_datum

frac = st.fractions(min_value=-3, max_value=3, max_denominator=5)
gauss = st.builds(GaussianRational, frac, frac)
weights = st.builds(CubicWeight, st.one_of(frac, gauss))
polys = st.lists(frac, max_size=5).map(Polynomial)


@st.composite
def expansions(draw):
    """Rational functions with 0..2 Gaussian-rational poles of order <= 3."""
    poly = draw(polys)
    zs = draw(st.lists(gauss, max_size=2, unique_by=lambda z: (z.re, z.im)))
    terms = [(z, k, draw(frac)) for z in zs for k in range(1, draw(st.integers(1, 3)) + 1)]
    return PoleExpansion.from_terms(poly, terms)


@st.composite
def residue_free(draw, w):
    """Elements of R that are generally not in the image of D."""
    q = PoleExpansion(draw(polys))
    for z in draw(st.lists(gauss, max_size=2, unique_by=lambda z: (z.re, z.im))):
        a2 = draw(frac)
        # residue of q e^h at z vanishes when a1 + a2 (z^2 + a) = 0
        q = q + PoleExpansion.from_terms(Polynomial(), [(z, 2, a2), (z, 1, -a2 * (z * z + w.a))])
    return q


def test_partial_fractions_against_apart():
    x = sympy.Symbol("x")
    expr = (x**2 + 1) / ((x - 1) ** 2 * (x + 2))
    oracle = sympy.apart(expr, x)
    pf = partial_fractions(Polynomial((1, 0, 1)), [(1, 2), (-2, 1)])
    ours = sum(sympy.Rational(c) / (x - sympy.Rational(z)) ** k for z, k, c in pf.terms)
    assert sympy.simplify(ours - oracle) == 0
    assert pf.polynomial.is_zero


def test_partial_fractions_recombine():
    num = Polynomial((3, -1, 0, 2, 5))
    pf = partial_fractions(num, [(GaussianRational(0, 1), 2), (Fraction(1, 2), 1)])
    n2, d2 = pf.to_rational()
    den = Polynomial.from_roots([GaussianRational(0, 1)] * 2 + [Fraction(1, 2)])
    assert n2 * den == num * d2


def test_D_examples():
    w = CubicWeight(-1)
    # D(1) = x^2 + a, D(x) = 1 + x^3 + a x
    assert D_of_monomial(0, w) == Polynomial((-1, 0, 1))
    assert D_of_monomial(1, w) == Polynomial((1, -1, 0, 1))
    # D(1/(x-1)) = -1/(x-1)^2 + (1+a)/(x-1) + 2 + (x-1)
    d = D_of_pole(1, 1, w)
    assert d.terms == [(1, 2, -1)]
    assert d.polynomial == Polynomial((1, 1))


@pytest.mark.parametrize("a", [0, -1, Fraction(2, 3), GaussianRational(1, 1)])
def test_desk_reductions(a):
    w = CubicWeight(a)
    assert reduce_to_linear(Polynomial((0, 1)), w).linear_form == (1, 0)
    assert reduce_to_linear(D_of_monomial(1, w), w).linear_form == (0, 0)
    assert reduce_to_linear(Polynomial((0, 0, 1)), w).linear_form == (0, -a)
    assert reduce_to_linear(Polynomial((0, 0, 0, 1)), w).linear_form == (-a, -1)


def test_simple_pole_is_obstructed():
    w = CubicWeight(-1)
    q = PoleExpansion.from_terms(Polynomial(), [(1, 1, 1)])
    assert not check_in_R(q, w).in_R
    with pytest.raises(ResidueObstruction):
        reduce_to_linear(q, w)


def test_double_pole_residue_closed_form():
    # residue of e^h/(x-z)^2 is h'(z) e^{h(z)}
    w = CubicWeight(-1)
    z = Fraction(1, 2)
    q = PoleExpansion.from_terms(Polynomial(), [(z, 2, 1)])
    rep = check_in_R(q, w)
    (_, residue, reduced), = rep.entries
    assert reduced == z * z - 1
    assert abs(residue - (z * z - 1) * mpmath.exp(mpmath.mpf(0.5) ** 3 / 3 - 0.5)) < 1e-60


@settings(max_examples=60, deadline=None)
@given(weights, expansions())
def test_exact_forms_reduce_to_zero(w, u):
    q = apply_D(u, w)
    assert check_in_R(q, w).in_R
    assert reduce_to_linear(q, w).linear_form == (0, 0)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_reduction_is_linear(data):
    w = data.draw(weights)
    q1 = data.draw(residue_free(w))
    q2 = data.draw(residue_free(w))
    c = data.draw(frac)
    l1 = reduce_to_linear(q1, w).linear_form
    l2 = reduce_to_linear(q2, w).linear_form
    l3 = reduce_to_linear(q1 + q2 * c, w).linear_form
    assert l3 == (l1[0] + c * l2[0], l1[1] + c * l2[1])


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_certificates_are_sound(data):
    w = data.draw(weights)
    q = data.draw(residue_free(w))
    cls = reduce_to_linear(q, w)
    alpha, beta = cls.linear_form
    # exact inputs: D(u) + alpha x + beta reproduces q identically
    assert apply_D(cls.certificate.u, w) + PoleExpansion(Polynomial((beta, alpha))) - q == PoleExpansion()
    assert verify_certificate(q, cls, w)[0]


def test_mutated_certificate_is_rejected():
    w = CubicWeight(2)
    q = PoleExpansion(Polynomial((0, 0, 0, 0, 1)))
    cls = reduce_to_linear(q, w)
    u = cls.certificate.u
    bad = replace(cls, certificate=replace(cls.certificate,
                                           u=PoleExpansion(u.polynomial + Polynomial((Fraction(1, 1000),)))))
    assert verify_certificate(q, cls, w)[0]
    assert not verify_certificate(q, bad, w)[0]


def test_wave_basis_desk_values():
    sd = spectral_datum(1, -1, 0)  # b = 1, p = x - 1
    basis = wave_basis(sd)
    assert len(basis.roots) == 1 and abs(basis.roots[0] - 1) < 1e-70
    c, d = wave_basis_coordinates(basis.inv_p2, sd).wave_coords
    assert abs(c - 1) < 1e-60 and abs(d) < 1e-60
    # f/p^2 with f = x^2/2 - x equals 1/2 - (1/2)/(x-1)^2
    assert basis.f_over_p2.polynomial.degree == 0
    assert abs(basis.f_over_p2.polynomial.coeffs[0] - 0.5) < 1e-70
    (_, k, coef), = basis.f_over_p2.terms
    assert k == 2 and abs(coef + 0.5) < 1e-70


def test_desk_corollary_value():
    sd = spectral_datum(1, -1, 0)
    r = corollary_check(sd)
    assert r.passed
    for key in ("reduction", "chi_prime", "selfpair", "contour"):
        assert abs(r.detail[key] - 2) < 1e-8


@pytest.mark.parametrize("n,a", [(1, -1), (2, 1), (3, -2), (5, 0), (8, 2)])
def test_theorem_c_all_k(n, a):
    for sd in spectral_data(n, a):
        for k in range(n + 1):
            r = theorem_c_check(sd, k)
            assert r.passed, r.detail
            assert r.detail["certificate_ok"]


def test_theorem_c_desk_n1():
    # n = 1, a = -1, b = 1: e_0(-x)p(-x) = -x - 1 ~ -p_1/p^2 = -1/p^2
    sd = spectral_datum(1, -1, 0)
    r = theorem_c_check(sd, 0)
    assert abs(r.detail["c"] + 1) < 1e-60
    r = theorem_c_check(sd, 1)
    assert abs(r.detail["c"] - 1) < 1e-60  # -(p_0) = 1


@pytest.mark.parametrize("n,a", [(2, 0), (4, 1)])
def test_theorem_d0_examples(n, a):
    for sd in spectral_data(n, a):
        for k in range(n + 1):
            assert theorem_d0_check(sd, e_basis(k) + Polynomial((Fraction(1, 3),))).passed


def test_theorem_d0_rejects_high_degree():
    sd = spectral_datum(1, -1, 0)
    with pytest.raises(ValueError):
        theorem_d0_check(sd, Polynomial((0, 0, 1)))
