"""End-to-end verification of one or all eigenpairs for given ``(n, a)``."""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass, replace
from fractions import Fraction
from math import factorial

import mpmath

from .cohomology import (theorem_c_check, corollary_check, verify_certificate,
                         wave_basis, wave_basis_coordinates)
from .contour import (J_values, _best_j, asymptotics_check_g, build_contour, contour_ratio_c,
                      dual_g1_derivatives, dual_g2, integrate_many, taylor_reconstruct_p,
                      y_solution)
from .errors import ReconstructionMismatch
from .pfrac import PoleExpansion
from .poly import Polynomial, derivative, e_basis
from .report import FAIL, WARN, CheckResult, VerificationReport, make_check, timed
from .scalars import (DEFAULT_CONTEXT, GaussianRational, PrecisionContext, format_exact,
                      format_scalar, magnitude, to_mp)
from .spectra import SpectralDatum, spectral_data

__all__ = [
    "Tolerances",
    "random_polynomial",
    "random_test_function",
    "sample_points",
    "verify_datum",
    "run_verification",
    "summarize_datum",
]


@dataclass(frozen=True)
class Tolerances:
    """``acceptance`` bounds the theorem and duality checks; ``quadrature`` the
    contour identities; ``ode`` the wave-polynomial residual."""

    acceptance: float = 1e-8
    quadrature: float = 1e-10
    ode: float = 1e-10
    asymptotic: float = 0.05
    asymptotic_warn: float = 0.10

    def __post_init__(self):
        for k, v in asdict(self).items():
            if not v > 0:
                raise ValueError(f"tolerance {k} must be positive")


def _rng(seed, *tags) -> random.Random:
    return random.Random(":".join(str(t) for t in (seed,) + tags))


def random_polynomial(rng: random.Random, degree: int) -> Polynomial:
    """Dense polynomial with small rational coefficients and degree at most ``degree``."""
    return Polynomial(Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(degree + 1))


def random_test_function(rng: random.Random) -> PoleExpansion:
    """Rational function with one or two poles of order 1-3 at Gaussian-rational points."""
    terms = []
    used = set()
    for _ in range(rng.randint(1, 2)):
        while True:
            z = GaussianRational(Fraction(rng.randint(-4, 4), 2), Fraction(rng.randint(-4, 4), 2))
            if z not in used:
                used.add(z)
                break
        for k in range(1, rng.randint(1, 3) + 1):
            terms.append((z, k, Fraction(rng.randint(-5, 5), rng.randint(1, 4))))
    return PoleExpansion.from_terms(random_polynomial(rng, rng.randint(0, 2)), terms)


def sample_points(rng: random.Random, count: int, avoid=(), radius: float = 2.0) -> list:
    """Gaussian-rational points in a square, kept away from ``avoid``."""
    out = []
    avoid = [complex(to_mp(z)) for z in avoid]
    while len(out) < count:
        x = complex(rng.randint(-16, 16) / 8 * radius / 2, rng.randint(-16, 16) / 8 * radius / 2)
        if all(abs(x - z) > 0.3 * (1 + abs(z)) for z in avoid) and x not in out:
            out.append(x)
    return [mpmath.mpc(x.real, x.imag) for x in out]


def summarize_datum(sd: SpectralDatum) -> dict:
    return {
        "index": sd.index,
        "n": sd.n,
        "a": format_exact(sd.a),
        "b": format_scalar(sd.b),
        "multiplicity": sd.multiplicity,
        "chi": [format_exact(c) for c in sd.chi.coeffs],
        "p_e_coefficients": [format_scalar(c) for c in sd.e_coeffs],
        "chi_prime_at_b": format_scalar(sd.chi_prime_at_b),
        "c": format_scalar(sd.c_selfpair),
        "warnings": list(sd.warnings),
    }


def _check_ode(sd, rng, tol):
    pts = sample_points(rng, sd.n + 3)
    res = max(magnitude(sd.ode_residual(x)) for x in pts)
    return make_check("wave_ode_residual", "p'' - h'p' + (nx+b)p = 0", res, tol,
                      {"eig": sd.index, "points": len(pts)})


def _check_simple_roots(sd, ctx):
    if sd.n == 0:
        return make_check("simple_roots", "roots of p are simple", 0, 0, {"eig": sd.index})
    roots = wave_basis(sd, ctx).roots
    sep = min((magnitude(z - w) for i, z in enumerate(roots) for w in roots[i + 1:]),
              default=mpmath.inf)
    ok = len(roots) == sd.n
    return make_check("simple_roots", "roots of p are simple", 0 if ok else 1, 0,
                      {"eig": sd.index, "min_separation": float(sep)})


def _check_theorem_c(sd, tol, ctx, certs):
    worst = 0.0
    per_k = []
    for k in range(sd.n + 1):
        r = theorem_c_check(sd, k, tol, ctx)
        worst = max(worst, r.residual)
        per_k.append(r.residual)
        certs.append(r.detail["certificate_residual"])
    return make_check("theorem_c", "e_k(-x)p(-x) ~ (-1)^n p_{n-k}/p^2 for k = 0..n", worst, tol,
                      {"eig": sd.index, "per_k": per_k})


def _check_theorem_d0(sd, rng, tol, ctx, certs, trials=20):
    worst = 0.0
    basis = wave_basis(sd, ctx)
    for _ in range(trials):
        r = random_polynomial(rng, rng.randint(0, sd.n))
        q = r * sd.p.reflect()
        if q.is_zero:
            continue
        cls = wave_basis_coordinates(q, sd, ctx)
        worst = max(worst, float(magnitude(cls.wave_coords[1])))
        certs.append(float(verify_certificate(q, cls, sd.weight, ctx, basis=basis)[1]))
    return make_check("theorem_d0", "r(x)p(-x) ~ c/p^2 for deg r <= n", worst, tol,
                      {"eig": sd.index, "trials": trials})


def _check_certificates(sd, ctx, certs):
    worst = max(certs, default=0.0)
    r1 = make_check("certificate_soundness", "D(u) + canonical form = q", worst, ctx.zero_tolerance,
                    {"eig": sd.index, "certificates": len(certs)})
    # perturb one coefficient of a genuine certificate; verification must reject it
    q = sd.p.reflect() * sd.p.reflect()
    cls = wave_basis_coordinates(q, sd, ctx)
    u = cls.certificate.u
    bumped = PoleExpansion(u.polynomial + Polynomial((mpmath.mpf("1e-3"),)), u.poles, u.match_tol)
    mutated = replace(cls, certificate=replace(cls.certificate, u=bumped))
    ok, res = verify_certificate(q, mutated, sd.weight, ctx, basis=wave_basis(sd, ctx))
    r2 = make_check("certificate_mutation", "perturbed certificate is rejected", 0 if not ok else 1, 0,
                    {"eig": sd.index, "mutated_residual": float(res)})
    return [r1, r2]


def _check_corollary(sd, tol, ctx, Js):
    c = contour_ratio_c(sd, ctx, Js=Js)
    r = corollary_check(sd, contour_c=c, tol=tol, ctx=ctx)
    if r.status == FAIL and sd.degenerate:
        r.status = WARN
        r.detail["note"] = "near-degenerate eigenvalue; agreement not required"
    return r


def _check_l_sum(sd, tol, ctx):
    inv = (Polynomial((1,)), sd.p * sd.p)
    roots = wave_basis(sd, ctx).roots
    vals = []
    for j in range(3):
        v = 0.5 * mpmath.expj(mpmath.pi * (mpmath.mpf(2) / 3 + mpmath.mpf(2 * j) / 3))
        c = build_contour(j, roots, ctx, sd.weight, vertex=v)
        vals.append(integrate_many([inv[0]], inv[1], c, sd.weight, ctx)[0].value)
    scale = max(abs(v) for v in vals)
    return make_check("l_sum", "l_0 + l_1 + l_2 = 0 on 1/p^2", abs(sum(vals)) / scale, tol,
                      {"eig": sd.index, "J": vals})


def _check_l_of_D(sd, rng, tol, ctx, trials=10):
    w = sd.weight
    worst = 0.0
    for t in range(trials):
        q = random_test_function(rng)
        num, den = q.to_rational()
        dnum, dden = derivative(num), derivative(den)
        qprime = dnum * den - num * dden
        hq = w.h_prime * num * den
        j = t % 3
        c = build_contour(j, q.locations, ctx, w)
        lD, lqp, lhq, lq = integrate_many([qprime + hq, qprime, hq, num * den], den * den, c, w, ctx)
        # l(q) keeps the scale meaningful when q' and h'q both integrate to zero
        scale = abs(lqp.value) + abs(lhq.value) + abs(lq.value)
        worst = max(worst, float(abs(lD.value) / scale))
    return make_check("l_of_D", "l_j(D q) = 0", worst, tol, {"eig": sd.index, "trials": trials})


def _check_independence(sd, tol, ctx):
    w = sd.weight
    rows = []
    for j in (1, 2):
        c = build_contour(j, (), ctx, w)
        rows.append([r.value for r in integrate_many([e_basis(0), e_basis(1)], Polynomial((1,)), c, w, ctx)])
    det = rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    scale = max(abs(x) for row in rows for x in row) ** 2
    rel = float(abs(det) / scale)
    # passes when the determinant is clearly nonzero
    return make_check("functional_independence", "det(l_j(e_k)), j=1,2, k=0,1 is nonzero",
                      0 if rel > tol else 1, 0, {"eig": sd.index, "relative_determinant": rel})


def _check_connection(sd, rng, tol, ctx, Js):
    pts = sample_points(rng, 5, wave_basis(sd, ctx).roots)
    worst = 0.0
    for x in pts:
        ys = [y_solution(sd, j, x, ctx).value for j in range(3)]
        px = sd.p(x)
        for j in range(3):
            diff = ys[(j + 1) % 3] - ys[j] + Js[j].value * px
            scale = 1 + abs(ys[(j + 1) % 3]) + abs(ys[j]) + abs(Js[j].value * px)
            worst = max(worst, float(abs(diff) / scale))
    return make_check("connection_formula", "y_{j+1} = y_j - J_j p", worst, tol,
                      {"eig": sd.index, "points": len(pts)})


def _check_duality(sd, rng, tol, ctx, j):
    sign = (-1) ** sd.n
    worst_pair = 0.0
    worst_ode = 0.0
    for _ in range(5):
        u = to_mp(GaussianRational(Fraction(rng.randint(-12, 12), 8), Fraction(rng.randint(-12, 12), 8)))
        g0, g1, g2 = (r.value for r in dual_g1_derivatives(sd, j, u, range(3), ctx))
        h2 = dual_g2(sd, j, u, ctx).value
        worst_pair = max(worst_pair, float(abs(g0 - sign * h2) / abs(g0)))
        terms = (u * g2, -sd.n * g1, -(u * u - to_mp(sd.a) * u + sd.b) * g0)
        worst_ode = max(worst_ode, float(abs(sum(terms)) / sum(abs(t) for t in terms)))
    return [
        make_check("dual_g1_g2", "g1(u) = (-1)^n g2(u)", worst_pair, tol, {"eig": sd.index, "j": j}),
        make_check("dual_ode", "u g'' - n g' - (u^2 - a u + b) g = 0", worst_ode, tol,
                   {"eig": sd.index, "j": j}),
    ]


def _check_taylor(sd, tol, ctx, j, Js):
    n = sd.n
    g = dual_g1_derivatives(sd, j, 0, [0], ctx)[0].value
    target = (-1) ** n * factorial(n) * Js[j].value
    out = [make_check("dual_at_zero", "g_j(0) = (-1)^n n! J_j", float(abs(g - target) / abs(target)),
                      tol, {"eig": sd.index, "j": j})]
    try:
        _, alpha, worst = taylor_reconstruct_p(sd, j, ctx, tol)
        out.append(make_check("taylor_reconstruction", "sum g^(s)(0)/s! e_{n-s} = alpha p",
                              float(worst), tol, {"eig": sd.index, "j": j, "alpha": alpha}))
    except ReconstructionMismatch as exc:
        out.append(make_check("taylor_reconstruction", "sum g^(s)(0)/s! e_{n-s} = alpha p",
                              1, tol, {"eig": sd.index, "j": j, "error": str(exc)}))
    return out


def _check_asymptotics(sd, tols, ctx):
    r = asymptotics_check_g(sd, 2, ctx, tol=tols.asymptotic, warn_above=tols.asymptotic_warn)
    if r.status == FAIL:
        r.status = WARN
        r.detail["note"] = "report-only in verification runs"
    return r


def verify_datum(sd: SpectralDatum, tols: Tolerances = Tolerances(), seed: int = 0,
                 ctx: PrecisionContext | None = None) -> list:
    """All checks for one eigenpair, in a fixed order."""
    ctx = ctx or sd.ctx
    rng = _rng(seed, sd.n, sd.a, sd.index)
    out: list[CheckResult] = []
    certs: list = []
    with ctx.workprec():
        with timed(out):
            out.append(_check_ode(sd, rng, tols.ode))
        with timed(out):
            out.append(_check_simple_roots(sd, ctx))
        with timed(out):
            out.append(_check_theorem_d0(sd, rng, tols.acceptance, ctx, certs))
        with timed(out):
            out.append(_check_theorem_c(sd, tols.acceptance, ctx, certs))
        with timed(out):
            Js = J_values(sd, ctx)
            out.append(_check_corollary(sd, tols.acceptance, ctx, Js))
        with timed(out):
            out.extend(_check_certificates(sd, ctx, certs))
        with timed(out):
            out.append(_check_l_sum(sd, tols.quadrature, ctx))
        with timed(out):
            out.append(_check_l_of_D(sd, rng, tols.quadrature, ctx))
        with timed(out):
            out.append(_check_independence(sd, tols.acceptance, ctx))
        with timed(out):
            out.append(_check_connection(sd, rng, tols.acceptance, ctx, Js))
        j = _best_j(Js)
        with timed(out):
            out.extend(_check_duality(sd, rng, tols.acceptance, ctx, j))
        with timed(out):
            out.extend(_check_taylor(sd, tols.acceptance, ctx, j, Js))
        with timed(out):
            out.append(_check_asymptotics(sd, tols, ctx))
    return out


def run_verification(n: int, a=0, eig="all", tols: Tolerances = Tolerances(), seed: int = 0,
                     ctx: PrecisionContext = DEFAULT_CONTEXT) -> VerificationReport:
    data = spectral_data(n, a, ctx)
    if eig != "all":
        idx = int(eig)
        if not 0 <= idx < len(data):
            raise IndexError(f"eigenvalue index {idx} out of range (0..{len(data) - 1})")
        data = [data[idx]]
    checks = []
    for sd in data:
        checks.extend(verify_datum(sd, tols, seed, ctx))
    config = {
        "n": n,
        "a": format_exact(a),
        "eig": str(eig),
        "bits": ctx.mantissa_bits,
        "zero_tolerance": f"{float(ctx.zero_tolerance):.6e}",
        "tolerances": {k: f"{v:.6e}" for k, v in asdict(tols).items()},
        "seed": seed,
    }
    return VerificationReport(config, [summarize_datum(sd) for sd in data], checks)
