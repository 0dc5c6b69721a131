"""Reduction in the twisted cohomology of ``C(x)`` with weight ``exp(h)``.

Classes are computed modulo the image ``C`` of ``D(q) = q' + h'q``.  Every
``q`` whose residues against ``exp(h)`` vanish reduces to a linear form
``alpha*x + beta``; each reduction carries an explicit ``u`` with
``D(u) = q - canonical_form`` so the equivalence can be re-checked.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath

from .errors import IllConditioned, ResidueObstruction, SingularBasis
from .pfrac import PoleExpansion, apply_D, binomial_power, partial_fractions
from .poly import CubicWeight, Polynomial, antiderivative_zero, e_basis, exact_div
from .report import make_check
from .roots import cluster_roots, complex_roots
from .scalars import DEFAULT_CONTEXT, PrecisionContext, is_exact, magnitude, to_mp
from .spectra import SpectralDatum

__all__ = [
    "ResidueReport",
    "ExactnessCertificate",
    "CohomologyClass",
    "check_in_R",
    "reduce_to_linear",
    "WaveBasis",
    "wave_basis",
    "wave_basis_coordinates",
    "verify_certificate",
    "theorem_c_check",
    "theorem_d0_check",
    "corollary_check",
]


@dataclass(frozen=True)
class ResidueReport:
    """Residues of ``q * exp(h)`` at each pole of ``q``.

    ``entries`` holds ``(z, residue, reduced)`` where ``reduced`` is the
    residue divided by ``exp(h(z))``; membership is decided on ``reduced``.
    """

    entries: tuple
    in_R: bool


@dataclass(frozen=True)
class ExactnessCertificate:
    u: PoleExpansion
    dropped: object = 0  # largest simple-pole coefficient discarded as zero


@dataclass(frozen=True)
class CohomologyClass:
    linear_form: tuple
    certificate: ExactnessCertificate
    wave_coords: tuple | None = None
    wave_certificate: ExactnessCertificate | None = None


def _exp_shift_series(z, a, order: int) -> list:
    """Taylor coefficients of ``exp(h(z + t) - h(z))`` up to ``t**(order-1)``."""
    s = {1: z * z + a, 2: z, 3: exact_div(1, 3) if is_exact(z) else mpmath.mpf(1) / 3}
    e = [1]
    for m in range(1, order):
        acc = 0
        for i in range(1, min(m, 3) + 1):
            acc = acc + i * s[i] * e[m - i]
        e.append(exact_div(acc, m))
    return e


def check_in_R(q: PoleExpansion, w: CubicWeight,
               ctx: PrecisionContext = DEFAULT_CONTEXT) -> ResidueReport:
    """Residues of ``q exp(h)`` in closed form, without quadrature."""
    with ctx.workprec():
        entries = []
        in_R = True
        for z, cs in q.poles:
            series = _exp_shift_series(z, w.a, len(cs))
            reduced = sum((c * series[k] for k, c in enumerate(cs)), 0)
            scale = sum((magnitude(c) * magnitude(series[k]) for k, c in enumerate(cs)), 0)
            if is_exact(reduced):
                ok = reduced == 0
            else:
                ok = magnitude(reduced) <= ctx.zero_tolerance * max(scale, 1)
            in_R = in_R and ok
            residue = mpmath.exp(to_mp(w(z))) * to_mp(reduced)
            entries.append((z, residue, reduced))
        return ResidueReport(tuple(entries), in_R)


def reduce_to_linear(q: PoleExpansion, w: CubicWeight,
                     ctx: PrecisionContext = DEFAULT_CONTEXT) -> CohomologyClass:
    """Reduce ``q`` modulo the image of ``D`` to ``alpha*x + beta``.

    Poles are lowered highest order first by subtracting multiples of
    ``D(1/(x-z)**m)``; surviving simple-pole coefficients must vanish
    (otherwise :class:`ResidueObstruction`).  Then the polynomial part is
    lowered by multiples of ``D(x**m)``.
    """
    if isinstance(q, Polynomial):
        q = PoleExpansion(q)
    with ctx.workprec():
        a = w.a
        scale = max(q.scale(), 1)
        poly = list(q.polynomial.coeffs)
        u_poly = [0] * max(len(poly) - 2, 0)
        u_poles = []
        dropped = 0

        def add_poly(p: Polynomial, factor):
            nonlocal poly
            if len(p.coeffs) > len(poly):
                poly += [0] * (len(p.coeffs) - len(poly))
            for i, c in enumerate(p.coeffs):
                poly[i] = poly[i] + factor * c

        for z, coeffs in q.poles:
            cs = list(coeffs)
            K = len(cs)
            ucs = [0] * max(K - 1, 0)
            zz_a = z * z + a
            for k in range(K, 1, -1):
                ak = cs[k - 1]
                if ak == 0:
                    continue
                m = k - 1
                c = exact_div(-ak, m)
                ucs[m - 1] = ucs[m - 1] + c
                # subtract c * D(1/(x-z)^m); the order-k term cancels exactly
                cs[k - 1] = 0
                cs[m - 1] = cs[m - 1] - c * zz_a
                if m - 1 >= 1:
                    cs[m - 2] = cs[m - 2] - c * 2 * z
                else:
                    add_poly(Polynomial((1,)), -c * 2 * z)
                if m - 2 >= 1:
                    cs[m - 3] = cs[m - 3] - c
                else:
                    add_poly(binomial_power(z, 2 - m), -c)
            leftover = cs[0] if cs else 0
            if leftover != 0:
                if is_exact(leftover) or magnitude(leftover) > ctx.zero_tolerance * scale:
                    raise ResidueObstruction(
                        f"simple pole at {z} with coefficient {leftover} survives reduction; "
                        "input is not in R")
                dropped = max(dropped, magnitude(leftover))
            u_poles.append((z, tuple(ucs)))

        for d in range(len(poly) - 1, 1, -1):
            lc = poly[d]
            if lc == 0:
                continue
            m = d - 2
            if m >= len(u_poly):
                u_poly += [0] * (m + 1 - len(u_poly))
            u_poly[m] = u_poly[m] + lc
            poly[d] = 0
            poly[m] = poly[m] - lc * a
            if m >= 1:
                poly[m - 1] = poly[m - 1] - lc * m
        alpha = poly[1] if len(poly) > 1 else 0
        beta = poly[0] if poly else 0
        u = PoleExpansion(Polynomial(u_poly), tuple(u_poles), q.match_tol)
        return CohomologyClass((alpha, beta), ExactnessCertificate(u, dropped))


@dataclass(frozen=True)
class WaveBasis:
    """The basis ``1/p^2, f/p^2`` of ``R(p)/C(p)`` with their linear forms."""

    p: Polynomial
    f: Polynomial
    roots: tuple
    inv_p2: PoleExpansion
    f_over_p2: PoleExpansion
    inv_class: CohomologyClass
    f_class: CohomologyClass

    def canonical(self, c, d) -> PoleExpansion:
        return self.inv_p2 * c + self.f_over_p2 * d

    def over_p2(self, numerator: Polynomial, ctx=DEFAULT_CONTEXT) -> PoleExpansion:
        """Expansion of ``numerator / p^2`` on the stored root set."""
        return partial_fractions(numerator, [(z, 2) for z in self.roots], ctx,
                                 leading=self.p.lc() ** 2)


_BASIS_CACHE: dict = {}


def wave_basis(sd: SpectralDatum, ctx: PrecisionContext | None = None) -> WaveBasis:
    ctx = ctx or sd.ctx
    key = (id(sd), ctx)
    cached = _BASIS_CACHE.get(key)
    if cached is not None and cached[0] is sd:
        return cached[1]
    with ctx.workprec():
        p = sd.p
        clusters = cluster_roots(complex_roots(p, ctx), ctx) if p.degree > 0 else []
        if any(m > 1 for _, m in clusters):
            raise IllConditioned("wave polynomial has a repeated root")
        roots = tuple(z for z, _ in clusters)
        f = antiderivative_zero(p)
        inv_p2 = partial_fractions(Polynomial((1,)), [(z, 2) for z in roots], ctx,
                                   leading=p.lc() ** 2)
        f_over_p2 = partial_fractions(f, [(z, 2) for z in roots], ctx, leading=p.lc() ** 2)
        w = sd.weight
        basis = WaveBasis(p, f, roots, inv_p2, f_over_p2,
                          reduce_to_linear(inv_p2, w, ctx), reduce_to_linear(f_over_p2, w, ctx))
    if len(_BASIS_CACHE) > 64:
        _BASIS_CACHE.clear()
    _BASIS_CACHE[key] = (sd, basis)
    return basis


def wave_basis_coordinates(q: PoleExpansion, sd: SpectralDatum,
                           ctx: PrecisionContext | None = None) -> CohomologyClass:
    """Coordinates ``(c, d)`` with ``q ~ (c + d f)/p^2``.

    Solves the 2x2 system between the linear forms of ``q``, ``1/p^2`` and
    ``f/p^2``; the attached ``wave_certificate`` satisfies
    ``D(u) = q - (c + d f)/p^2``.
    """
    ctx = ctx or sd.ctx
    if isinstance(q, Polynomial):
        q = PoleExpansion(q)
    basis = wave_basis(sd, ctx)
    w = sd.weight
    with ctx.workprec():
        cls = reduce_to_linear(q, w, ctx)
        a1, b1 = basis.inv_class.linear_form
        a2, b2 = basis.f_class.linear_form
        al, be = cls.linear_form
        det = a1 * b2 - a2 * b1
        scale = max(magnitude(a1), magnitude(b1), 1) * max(magnitude(a2), magnitude(b2), 1)
        if magnitude(det) <= ctx.zero_tolerance * scale:
            raise SingularBasis(f"wave basis determinant {mpmath.nstr(magnitude(det), 5)}")
        c = exact_div(al * b2 - a2 * be, det)
        d = exact_div(a1 * be - al * b1, det)
        u = (cls.certificate.u - basis.inv_class.certificate.u * c
             - basis.f_class.certificate.u * d)
        dropped = max(magnitude(cls.certificate.dropped),
                      magnitude(basis.inv_class.certificate.dropped),
                      magnitude(basis.f_class.certificate.dropped))
        return CohomologyClass(cls.linear_form, cls.certificate, (c, d),
                               ExactnessCertificate(u, dropped))


def verify_certificate(q: PoleExpansion, cls: CohomologyClass, w: CubicWeight,
                       ctx: PrecisionContext = DEFAULT_CONTEXT, tol=None,
                       basis: WaveBasis | None = None) -> tuple[bool, object]:
    """Recombine ``D(u) + canonical`` and compare with ``q`` coefficient-wise.

    Returns ``(passed, max_relative_residual)``.  Wave coordinates are
    checked too when present, which needs ``basis``.
    """
    if isinstance(q, Polynomial):
        q = PoleExpansion(q)
    with ctx.workprec():
        tol = ctx.zero_tolerance if tol is None else tol
        scale = max(q.scale(), 1)
        alpha, beta = cls.linear_form
        lin = apply_D(cls.certificate.u, w) + Polynomial((beta, alpha))
        worst = magnitude(lin.coefficient_distance(q)) / scale
        if cls.wave_coords is not None:
            if basis is None:
                raise ValueError("wave coordinates need the WaveBasis to verify")
            c, d = cls.wave_coords
            canon = apply_D(cls.wave_certificate.u, w) + basis.canonical(c, d)
            worst = max(worst, magnitude(canon.coefficient_distance(q)) / scale)
        return bool(worst <= tol), worst


def _e_k_reflected_times(sd: SpectralDatum, k: int) -> Polynomial:
    """``e_k(-x) p(-x)``."""
    return e_basis(k).reflect() * sd.p.reflect()


def theorem_c_check(sd: SpectralDatum, k: int, tol=1e-8, ctx=None):
    """``e_k(-x) p(-x) ~ (-1)**n p_{n-k} / p^2`` with vanishing ``f/p^2`` part."""
    ctx = ctx or sd.ctx
    if not 0 <= k <= sd.n:
        raise ValueError("k must lie in 0..n")
    with ctx.workprec():
        q = _e_k_reflected_times(sd, k)
        cls = wave_basis_coordinates(q, sd, ctx)
        c, d = cls.wave_coords
        expected = sd.e_coeffs[sd.n - k] * (-1) ** sd.n
        res_c = magnitude(c - expected) / (1 + magnitude(sd.e_coeffs[sd.n - k]))
        res_d = magnitude(d)
        ok, cert_res = verify_certificate(q, cls, sd.weight, ctx, basis=wave_basis(sd, ctx))
        return make_check(
            f"theorem_c[k={k}]", "e_k(-x)p(-x) ~ (-1)^n p_{n-k}/p^2",
            max(res_c, res_d), tol,
            {"eig": sd.index, "k": k, "c": c, "d": d, "expected_c": expected,
             "certificate_residual": float(cert_res), "certificate_ok": ok})


def theorem_d0_check(sd: SpectralDatum, r: Polynomial, tol=1e-8, ctx=None):
    """``r(x) p(-x) ~ c/p^2`` for ``deg r <= n`` (no ``f/p^2`` component)."""
    ctx = ctx or sd.ctx
    if r.degree > sd.n:
        raise ValueError("deg r must not exceed n")
    with ctx.workprec():
        q = r * sd.p.reflect()
        if q.is_zero:
            return make_check("theorem_d0", "r(x)p(-x) ~ c/p^2", 0, tol,
                              {"eig": sd.index, "c": 0, "d": 0})
        cls = wave_basis_coordinates(q, sd, ctx)
        c, d = cls.wave_coords
        return make_check("theorem_d0", "r(x)p(-x) ~ c/p^2", magnitude(d), tol,
                          {"eig": sd.index, "c": c, "d": d})


def corollary_check(sd: SpectralDatum, contour_c=None, tol=1e-8, ctx=None, j=None):
    """Four-way agreement for the class of ``p^2(-x)``.

    Compares the reducer's ``c``, ``chi'(b)``, the self-pairing sum and the
    contour ratio ``l_j(p^2(-x)) / J_j`` (computed here when not supplied).
    Differences are measured relative to ``1 + |chi'(b)|``.
    """
    ctx = ctx or sd.ctx
    with ctx.workprec():
        q = sd.p.reflect() * sd.p.reflect()
        cls = wave_basis_coordinates(q, sd, ctx)
        c_red, d_red = cls.wave_coords
        if contour_c is None:
            from .contour import contour_ratio_c
            contour_c = contour_ratio_c(sd, ctx=ctx, j=j)
        values = {
            "reduction": c_red,
            "chi_prime": sd.chi_prime_at_b,
            "selfpair": sd.c_selfpair,
            "contour": contour_c,
        }
        scale = 1 + magnitude(sd.chi_prime_at_b)
        vals = list(values.values())
        worst = max(magnitude(x - y) for i, x in enumerate(vals) for y in vals[i + 1:])
        worst = max(worst, magnitude(d_red)) / scale
        detail = {"eig": sd.index, **values, "d": d_red}
        return make_check("corollary_four_way", "p^2(-x) ~ chi'(b)/p^2", worst, tol, detail)
