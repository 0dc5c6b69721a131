import math

import mpmath
import pytest

from wavecoh.contour import (J_value, J_values, Sector, asymptotic_form_g, asymptotics_check_g,
                             build_contour, contour_ratio_c, dual_g1, dual_g2, dual_ode_residual,
                             integrate, l_functional, taylor_reconstruct_p, theta_in, theta_out,
                             y_ode_residual, y_solution)
from wavecoh.errors import ReconstructionMismatch
from wavecoh.poly import CubicWeight, Polynomial
from wavecoh.spectra import spectral_datum

# Frozen oracle values: mpmath.quad along straight rays, or 2*pi*i*Ai via mpmath.airyai.
with mpmath.workdps(50):
    TWO_PI_I_AI0 = mpmath.mpc(0, "2.230707051824495741427486519543450239771")
    TWO_PI_I_AI_1_5 = mpmath.mpc(0, "0.4508153853988536093569461133868823113049")
    J_N1 = [  # n = 1, a = -1, b = 1
        mpmath.mpc("-0.863899217385032801566145431960868851282", "-0.9250100935905785911764677243412581744889"),
        mpmath.mpc("0.863899217385032801566145431960868851282", "-0.9250100935905785911764677243412581744889"),
        mpmath.mpc(0, "1.850020187181157182352935448682516348978"),
    ]
    Y2_N0_HALF = mpmath.mpc("-0.1386787134459328134147240211846707634602", "1.115353525912247870713743259771725119886")
    Y2_N1 = mpmath.mpc("-0.5359027392588973090541750264669228312905", "-0.7661880875908599965999586818603835878547")
    G1_N1_1_5 = mpmath.mpc(0, "-0.263748040751310536405612128873548903136")

TOL = mpmath.mpf(10) ** -35


@pytest.fixture(scope="module")
def desk():
    return spectral_datum(1, -1, 0)


@pytest.fixture(scope="module")
def airy():
    return spectral_datum(0, 0, 0)


def test_ray_directions():
    for j in range(3):
        for th in (theta_in(j), theta_out(j)):
            # e^{x^3/3} decays along the ray: cos(3 theta) = -1
            assert math.isclose(math.cos(3 * th), -1, abs_tol=1e-12)
        assert math.isclose((theta_out(j) - theta_in(j)) % (2 * math.pi), 2 * math.pi / 3)


def test_sector_contains_bisector():
    for j in range(3):
        s = Sector(j)
        assert s.contains(mpmath.expj(s.bisector))


def test_contour_keeps_clear_of_poles(ctx):
    w = CubicWeight(-1)
    poles = [mpmath.mpf(0.05), mpmath.mpc(0.4, 0.69)]
    for j in range(3):
        c = build_contour(j, poles, ctx, w)
        assert c.clearance() > 0.05


def test_airy_constant(airy):
    assert abs(J_value(airy, 2).value - TWO_PI_I_AI0) < TOL


def test_J_desk_values(desk):
    for got, want in zip(J_values(desk), J_N1):
        assert abs(got.value - want) < TOL


def test_contour_deformation_independence(desk, ctx):
    w = desk.weight
    q = (Polynomial((0, 1, 2)), Polynomial((1, -2, 1)))
    base = l_functional(q, 2, w, ctx, poles=[1]).value
    for v in (mpmath.mpc(-0.5, 0), mpmath.mpc(0.3, 0.4), mpmath.mpc(-0.2, -0.6)):
        assert abs(l_functional(q, 2, w, ctx, poles=[1], vertex=v).value - base) < TOL


def test_l_sum_vanishes(desk):
    assert abs(sum(J.value for J in J_values(desk))) < TOL


def test_l_annihilates_D(ctx):
    w = CubicWeight(mpmath.mpf(1) / 3)
    # D(x^2/(x-i)) has a double pole at i
    z = mpmath.mpc(0, 1)
    u_num, u_den = Polynomial((0, 0, 1)), Polynomial((-z, 1))
    from wavecoh.poly import derivative
    num = (derivative(u_num) * u_den - u_num * derivative(u_den)) + w.h_prime * u_num * u_den
    for j in range(3):
        assert abs(l_functional((num, u_den * u_den), j, w, ctx, poles=[z]).value) < TOL


def test_contour_ratio_desk(desk):
    assert abs(contour_ratio_c(desk) - 2) < TOL


def test_y_solutions_match_oracle(desk, airy):
    assert abs(y_solution(airy, 2, mpmath.mpf("0.5")).value - Y2_N0_HALF) < TOL
    assert abs(y_solution(desk, 2, mpmath.mpc("0.3", "0.2")).value - Y2_N1) < TOL


def test_connection_formula(desk):
    x = mpmath.mpc(-0.4, 0.9)
    ys = [y_solution(desk, j, x).value for j in range(3)]
    px = desk.p(x)
    for j in range(3):
        assert abs(ys[(j + 1) % 3] - ys[j] + J_N1[j] * px) < TOL


def test_y_satisfies_ode(desk):
    assert y_ode_residual(desk, 1, mpmath.mpc(0.2, -0.5)) < 1e-20


def test_dual_airy(airy):
    assert abs(dual_g1(airy, 2, mpmath.mpf(1.5)).value - TWO_PI_I_AI_1_5) < TOL


def test_dual_desk(desk):
    u = mpmath.mpf(1.5)
    g1 = dual_g1(desk, 2, u).value
    assert abs(g1 - G1_N1_1_5) < TOL
    assert abs(g1 + dual_g2(desk, 2, u).value) < TOL  # (-1)^n with n = 1
    assert dual_ode_residual(desk, 2, mpmath.mpc(0.7, -1.1)) < 1e-30


def test_dual_at_zero(desk):
    # g_j(0) = (-1)^n n! J_j
    for j in range(3):
        assert abs(dual_g1(desk, j, 0).value + J_N1[j]) < TOL


def test_taylor_reconstruction():
    sd = spectral_datum(3, 1, 1)
    recon, alpha, worst = taylor_reconstruct_p(sd, 2)
    assert worst < 1e-30
    for c1, c2 in zip(recon.coeffs, sd.p.coeffs):
        assert abs(c1 - alpha * c2) < 1e-30 * abs(alpha)


def test_taylor_mismatch_raises():
    sd = spectral_datum(2, 1, 0)
    with pytest.raises(ReconstructionMismatch):
        taylor_reconstruct_p(sd, 2, tol=1e-300)


def test_airy_asymptotics(airy):
    r = asymptotics_check_g(airy)
    assert r.passed and r.status == "pass"
    devs = r.detail["deviations"]
    # 2 pi i Ai(u) / form - 1 = -5/(72 zeta) + ... with zeta = (2/3) u^(3/2)
    for u, d in zip((20, 40, 80), devs):
        assert math.isclose(d, 5 / (48 * u ** 1.5), rel_tol=0.05)


def test_asymptotic_form_airy_limit():
    u = mpmath.mpf(30)
    ratio = 2j * mpmath.pi * mpmath.airyai(u) / asymptotic_form_g(0, 0, u)
    assert abs(ratio - 1) < 1e-3


def test_asymptotic_arg_window():
    with pytest.raises(ValueError):
        asymptotics_check_g(spectral_datum(0, 0, 0), j=0, arg=0.0)


def test_integrate_reports_error_estimate(ctx):
    w = CubicWeight(0)
    c = build_contour(2, (), ctx, w)
    r = integrate(Polynomial((1,)), c, w, ctx)
    assert r.error_estimate < 1e-60 and r.subdivisions >= 2
