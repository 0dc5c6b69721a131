"""Contour quadrature for the functionals ``l_j(q) = int_{gamma_j} q e^h dx``.

Contours are polylines: a ray arriving from infinity in direction
``pi(1/3 + 2j/3)``, a vertex, and a ray leaving in direction
``pi(1 + 2j/3)``.  Poles near the path are bypassed by rectangular
detours.  Each straight piece is integrated by adaptive Gauss-Legendre
quadrature in python-flint ``acb`` arithmetic.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from math import factorial

import flint
import mpmath
from flint import acb, acb_poly

from .errors import IllConditioned, QuadratureFailure, ReconstructionMismatch
from .pfrac import PoleExpansion
from .poly import CubicWeight, Polynomial, derivative, e_basis, evaluate
from .report import make_check
from .scalars import DEFAULT_CONTEXT, PrecisionContext, magnitude, to_mp

__all__ = [
    "Sector",
    "Contour",
    "QuadratureResult",
    "theta_in",
    "theta_out",
    "build_contour",
    "integrate",
    "integrate_many",
    "l_functional",
    "J_value",
    "J_values",
    "contour_ratio_c",
    "y_solution",
    "y_ode_residual",
    "y_asymptotic_ratio",
    "dual_g1",
    "dual_g1_derivatives",
    "dual_g2",
    "dual_ode_residual",
    "taylor_reconstruct_p",
    "asymptotic_form_g",
    "asymptotics_check_g",
]

TRUNCATION_MARGIN_BITS = 32


def theta_in(j: int) -> float:
    return math.pi * (1 / 3 + 2 * j / 3)


def theta_out(j: int) -> float:
    return math.pi * (1 + 2 * j / 3)


@dataclass(frozen=True)
class Sector:
    """Half-plane ``H_j``: ``pi(-1/6 + 2j/3) < arg z < pi(5/6 + 2j/3)``."""

    j: int

    @property
    def bounds(self) -> tuple[float, float]:
        return math.pi * (-1 / 6 + 2 * self.j / 3), math.pi * (5 / 6 + 2 * self.j / 3)

    @property
    def bisector(self) -> float:
        return theta_in(self.j)

    def contains(self, z) -> bool:
        z = complex(z)
        if z == 0:
            return False
        lo, _ = self.bounds
        rel = (cmath.phase(z) - lo) % (2 * math.pi)
        return 0 < rel < math.pi


@dataclass(frozen=True)
class Contour:
    """Polyline ``points[0] -> points[1] -> ... -> points[-1]``.

    ``points[0]`` and ``points[-1]`` are the truncation endpoints; when
    ``endpoint`` is set the path is the half contour ending at that point.
    """

    j: int
    vertex: complex
    points: tuple
    truncation: tuple
    delta: float
    poles: tuple = ()
    endpoint: object = None

    @property
    def segments(self) -> list:
        return list(zip(self.points[:-1], self.points[1:]))

    def clearance(self) -> float:
        """Minimum distance from the path to any pole (``inf`` without poles)."""
        best = math.inf
        for z in self.poles:
            for A, B in self.segments:
                best = min(best, _point_segment_distance(z, A, B))
        return best


@dataclass(frozen=True)
class QuadratureResult:
    value: object
    error_estimate: float
    subdivisions: int
    detail: dict = field(default_factory=dict)


def _point_segment_distance(z: complex, A: complex, B: complex) -> float:
    d = B - A
    L2 = abs(d) ** 2
    if L2 == 0:
        return abs(z - A)
    s = max(0.0, min(1.0, ((z - A) * d.conjugate()).real / L2))
    return abs(z - (A + s * d))


def _clearance(z: complex) -> float:
    return max(0.1, 0.1 * (1 + abs(z)))


def _scan_ray(v: complex, theta: float, log_mag, drop: float, t_max: float = 1e3) -> tuple[float, float]:
    """Smallest ``T`` beyond which ``log_mag`` stays below its ray peak minus ``drop``.

    Returns ``(T, peak)``.  Scans on a grid that coarsens geometrically.
    """
    e = cmath.exp(1j * theta)
    t = 0.0
    peak = log_mag(v)
    prev = peak
    while t < t_max:
        dt = 0.1 if t < 10 else t / 100
        t += dt
        val = log_mag(v + t * e)
        peak = max(peak, val)
        if val < peak - drop and val < prev:
            return t, peak
        prev = val
    raise QuadratureFailure(f"integrand does not decay along direction {theta:.4f}")


def _detour_segment(A: complex, B: complex, poles, deltas) -> list:
    """Points replacing segment ``A -> B`` so that each pole keeps its clearance."""
    d = B - A
    L = abs(d)
    if L == 0:
        return [A, B]
    e = d / L
    near = []
    for z, dz in zip(poles, deltas):
        loc = (z - A) / e
        s, t = loc.real, loc.imag
        if abs(t) < dz and -dz < s < L + dz:
            near.append((s - dz, s + dz, t, dz))
    if not near:
        return [A, B]
    near.sort()
    groups = []
    for item in near:
        if groups and item[0] <= groups[-1][1]:
            g = groups[-1]
            g[1] = max(g[1], item[1])
            g[2].append(item)
        else:
            groups.append([item[0], item[1], [item]])
    pts = [A]
    for s1, s2, items in groups:
        s1, s2 = max(s1, 0.0), min(s2, L)
        offsets = {sign: max(dz + sign * t for _, _, t, dz in items) for sign in (1, -1)}
        sign = min(offsets, key=lambda k: (offsets[k], -k))
        Y = sign * offsets[sign]
        for s, y in ((s1, 0.0), (s1, Y), (s2, Y), (s2, 0.0)):
            p = A + e * complex(s, y)
            if abs(p - pts[-1]) > 1e-14:
                pts.append(p)
    if abs(B - pts[-1]) > 1e-14:
        pts.append(B)
    return pts


def _choose_vertex(v: complex, poles, deltas) -> complex:
    def ok(c):
        return all(abs(c - z) >= 2 * dz for z, dz in zip(poles, deltas))

    if ok(v):
        return v
    step = 2 * max(deltas)
    for ring in range(1, 40):
        for k in range(12):
            c = v + ring * step * cmath.exp(2j * math.pi * (k + 0.5) / 12)
            if ok(c):
                return c
    raise IllConditioned("no pole-free vertex near the requested point")


def default_log_magnitude(w: CubicWeight, u=0, num: Polynomial | None = None,
                          den: Polynomial | None = None):
    """Float estimate of ``log|num/den * exp(h - u x)|``."""
    a = complex(to_mp(w.a))
    uu = complex(to_mp(u))
    nc = [complex(to_mp(c)) for c in num.coeffs] if num is not None else None
    dc = [complex(to_mp(c)) for c in den.coeffs] if den is not None else None

    def horner(cs, x):
        acc = 0j
        for c in reversed(cs):
            acc = acc * x + c
        return acc

    def f(x: complex) -> float:
        val = (x ** 3 / 3 + (a - uu) * x).real
        if nc:
            m = abs(horner(nc, x))
            val += math.log(m) if m > 0 else -1e300
        if dc:
            m = abs(horner(dc, x))
            val -= math.log(m) if m > 0 else -1e300
        return val

    return f


def build_contour(j: int, poles=(), ctx: PrecisionContext = DEFAULT_CONTEXT,
                  w: CubicWeight = CubicWeight(0), vertex=0, endpoint=None, u=0,
                  log_mag=None) -> Contour:
    """Truncated, pole-avoiding polyline for ``gamma_j`` (or ``gamma_{j,x}``).

    With ``endpoint`` set, the path runs from infinity along ``theta_in(j)``
    straight to that point; otherwise from infinity along ``theta_in(j)`` to
    ``vertex`` and out along ``theta_out(j)``.  Rays are cut where the
    integrand magnitude falls ``mantissa_bits + 32`` bits below its peak.
    """
    if j not in (0, 1, 2):
        raise ValueError("contour index j must be 0, 1 or 2")
    poles_c = tuple(complex(to_mp(z)) for z in poles)
    deltas = [_clearance(z) for z in poles_c]
    log_mag = log_mag or default_log_magnitude(w, u)
    drop = (ctx.mantissa_bits + TRUNCATION_MARGIN_BITS) * math.log(2)
    if endpoint is not None:
        v = complex(to_mp(endpoint))
        for z, dz in zip(poles_c, deltas):
            if abs(v - z) < dz:
                raise IllConditioned("half-contour endpoint lies inside a pole clearance disc")
        T_in, _ = _scan_ray(v, theta_in(j), log_mag, drop)
        raw = [v + T_in * cmath.exp(1j * theta_in(j)), v]
        trunc = (T_in,)
    else:
        v = _choose_vertex(complex(to_mp(vertex)), poles_c, deltas) if poles_c else complex(to_mp(vertex))
        T_in, _ = _scan_ray(v, theta_in(j), log_mag, drop)
        T_out, _ = _scan_ray(v, theta_out(j), log_mag, drop)
        raw = [v + T_in * cmath.exp(1j * theta_in(j)), v, v + T_out * cmath.exp(1j * theta_out(j))]
        trunc = (T_in, T_out)
    scale = 1.0
    for _ in range(4):
        ds = [d * scale for d in deltas]
        pts = [raw[0]]
        for A, B in zip(raw[:-1], raw[1:]):
            pts.extend(_detour_segment(A, B, poles_c, ds)[1:])
        if endpoint is not None:
            # the float copy only routes the path; the integral must end exactly at x
            with ctx.workprec():
                pts[-1] = mpmath.mpc(to_mp(endpoint))
        c = Contour(j, v, tuple(pts), trunc, min(ds, default=0.0), poles_c, endpoint)
        if all(min(_point_segment_distance(z, A, B) for A, B in c.segments) >= 0.5 * dz
               for z, dz in zip(poles_c, ds)):
            return c
        scale /= 2
    raise IllConditioned("poles too dense to route the contour with the required clearance")


def _acb(z) -> acb:
    return acb(to_mp(z))


def _from_acb(x: acb):
    def part(r):
        m, e = r.mid().man_exp()
        return mpmath.mpf((int(m), int(e)))

    return mpmath.mpc(part(x.real), part(x.imag))



def _as_rational(q) -> tuple[Polynomial, Polynomial]:
    if isinstance(q, tuple):
        return q
    if isinstance(q, Polynomial):
        return q, Polynomial((1,))
    if isinstance(q, PoleExpansion):
        return q.to_rational()
    return Polynomial.constant(q), Polynomial((1,))


_RULES: dict = {}


def _gl_rule(degree: int, prec: int) -> tuple:
    """Gauss-Legendre nodes and weights on [-1, 1] as acb, ``3 * 2**(degree-1)`` points."""
    key = (degree, prec)
    if key not in _RULES:
        from mpmath.calculus.quadrature import GaussLegendre
        with mpmath.workprec(prec):
            pairs = GaussLegendre(mpmath.mp).calc_nodes(degree, prec)
            _RULES[key] = (tuple(acb(x) for x, _ in pairs), tuple(acb(w) for _, w in pairs))
    return _RULES[key]


def _rule_degree(target_bits: int) -> int:
    # pieces keep singularities at least one piece length away (ellipse parameter >= 2.4)
    need = target_bits / 2.5 + 8
    k = 3
    while 3 * 2 ** (k - 1) < need:
        k += 1
    return k


def _initial_pieces(A: complex, B: complex, poles) -> list:
    """Breakpoints so each piece is no longer than its distance to the nearest pole (and 1)."""
    L = abs(B - A)
    out = [0.0]
    s = 0.0
    while s < L:
        x = A + (B - A) * (s / L)
        d = min((abs(x - z) for z in poles), default=math.inf)
        step = max(min(1.0, 0.5 * d), 1e-3)
        s = min(L, s + step)
        out.append(s / L)
    return out


MAX_PIECES = 20000


def integrate(q, contour: Contour, w: CubicWeight, ctx: PrecisionContext = DEFAULT_CONTEXT,
              u=0, target_bits: int | None = None, log_mag=None) -> QuadratureResult:
    """``int q(x) exp(h(x) - u x) dx`` along ``contour``.

    ``q`` may be a Polynomial, a PoleExpansion or a ``(numerator,
    denominator)`` pair.  Each straight piece is integrated by adaptive
    Gauss-Legendre: a piece is accepted when the rule on the whole piece
    and on its two halves agree to ``2**-target_bits`` of the integrand
    peak (default ``mantissa_bits / 3``).  The error estimate sums those
    differences and the truncated tails.
    """
    num, den = _as_rational(q)
    return integrate_many([num], den, contour, w, ctx, u, target_bits, log_mag)[0]


def integrate_many(nums, den: Polynomial, contour: Contour, w: CubicWeight,
                   ctx: PrecisionContext = DEFAULT_CONTEXT, u=0, target_bits: int | None = None,
                   log_mag=None) -> list:
    """Integrals of ``num_i / den * exp(h - u x)`` for several numerators in one pass.

    Pieces are refined until every component meets the tolerance, with the
    budget set by the largest integrand peak.
    """
    target_bits = ctx.mantissa_bits // 3 if target_bits is None else target_bits
    if log_mag is None:
        mags = [default_log_magnitude(w, u, nm, den) for nm in nums]
        log_mag = (lambda x: max(m(x) for m in mags)) if len(mags) > 1 else mags[0]
    samples = [complex(p) for p in contour.points]
    for A, B in contour.segments:
        samples += [A + s * (B - A) for s in (0.25, 0.5, 0.75)]
    peak = max(log_mag(x) for x in samples)
    K = len(nums)
    wp = ctx.mantissa_bits + 32
    old = flint.ctx.prec
    flint.ctx.prec = wp
    try:
        with ctx.workprec():
            nodes, weights = _gl_rule(_rule_degree(target_bits), wp)
            Ns = [acb_poly([_acb(c) for c in nm.coeffs] or [acb(0)]) for nm in nums]
            Dn = acb_poly([_acb(c) for c in den.coeffs])
            E = acb_poly([acb(0), _acb(to_mp(w.a) - to_mp(u)), acb(0), acb(1) / 3])
            trivial_den = den.degree == 0

            def rule(a, b):
                mid = (a + b) / 2
                half = (b - a) / 2
                acc = [acb(0)] * K
                for x, wt in zip(nodes, weights):
                    t = mid + half * x
                    base = E(t).exp() * wt
                    if not trivial_den:
                        base = base / Dn(t)
                    for i in range(K):
                        acc[i] += Ns[i](t) * base
                return [v * half for v in acc]

            total_len = sum(abs(complex(B) - complex(A)) for A, B in contour.segments)
            budget = mpmath.ldexp(mpmath.exp(peak), -target_bits - 4)
            per_len = _acb(budget / total_len).real
            totals = [acb(0)] * K
            errs = [acb(0)] * K
            pieces = 0
            for A, B in contour.segments:
                a0, b0 = _acb(mpmath.mpc(A.real, A.imag)), _acb(mpmath.mpc(B.real, B.imag))
                cuts = _initial_pieces(complex(A), complex(B), contour.poles)
                stack = []
                for s0, s1 in zip(cuts[:-1], cuts[1:]):
                    pa = a0 + (b0 - a0) * _acb(mpmath.mpf(s0))
                    pb = a0 + (b0 - a0) * _acb(mpmath.mpf(s1))
                    stack.append((pa, pb, rule(pa, pb)))
                while stack:
                    pa, pb, whole = stack.pop()
                    pm = (pa + pb) / 2
                    left, right = rule(pa, pm), rule(pm, pb)
                    diffs = [abs(wh - l - r) for wh, l, r in zip(whole, left, right)]
                    pieces += 1
                    limit = (per_len * abs(pb - pa).real).mid()
                    if all(d.real.mid() <= limit for d in diffs):
                        for i in range(K):
                            totals[i] += left[i] + right[i]
                            errs[i] += diffs[i]
                    elif pieces > MAX_PIECES:
                        raise QuadratureFailure("subdivision budget exhausted")
                    else:
                        stack.append((pa, pm, left))
                        stack.append((pm, pb, right))
            values = [_from_acb(t) for t in totals]
            ests = [_from_acb(acb(e.real.mid())).real for e in errs]
    finally:
        flint.ctx.prec = old
    tail = mpmath.mpf(0)
    ends = [contour.points[0]] + ([] if contour.endpoint is not None else [contour.points[-1]])
    for p in ends:
        tail += mpmath.exp(log_mag(complex(p)))
    eps = mpmath.ldexp(1, -target_bits)
    out = []
    for value, est in zip(values, ests):
        est += tail
        goal = eps * max(abs(value), mpmath.exp(peak))
        if not mpmath.isfinite(value) or est > goal:
            raise QuadratureFailure(f"error estimate {mpmath.nstr(est, 3)} exceeds target "
                                    f"{mpmath.nstr(goal, 3)}")
        out.append(QuadratureResult(value, float(est), pieces,
                                    {"peak_log_magnitude": peak, "points": len(contour.points)}))
    return out


def _poles_of(q) -> tuple:
    if isinstance(q, PoleExpansion):
        return tuple(q.locations)
    return ()


def l_functional(q, j: int, w: CubicWeight, ctx: PrecisionContext = DEFAULT_CONTEXT,
                 poles=None, vertex=0, u=0, target_bits=None,
                 contour: Contour | None = None) -> QuadratureResult:
    """``l_j(q) = int_{gamma_j} q(x) exp(h(x) - u x) dx``.

    ``poles`` defaults to the pole set of a PoleExpansion; pass it
    explicitly for ``(numerator, denominator)`` pairs.
    """
    poles = _poles_of(q) if poles is None else tuple(poles)
    if contour is None:
        contour = build_contour(j, poles, ctx, w, vertex=vertex, u=u)
    return integrate(q, contour, w, ctx, u=u, target_bits=target_bits)


def _wave_roots(sd) -> tuple:
    from .cohomology import wave_basis
    return wave_basis(sd).roots


def _p_squared(sd) -> Polynomial:
    return sd.p * sd.p


def J_value(sd, j: int, ctx: PrecisionContext | None = None, vertex=0) -> QuadratureResult:
    """``J_j = l_j(1/p^2)``."""
    ctx = ctx or sd.ctx
    return l_functional((Polynomial((1,)), _p_squared(sd)), j, sd.weight, ctx,
                        poles=_wave_roots(sd), vertex=vertex)


def J_values(sd, ctx: PrecisionContext | None = None) -> list:
    return [J_value(sd, j, ctx) for j in range(3)]


def _best_j(Js) -> int:
    return max(range(len(Js)), key=lambda j: (magnitude(Js[j].value), -j))


def contour_ratio_c(sd, ctx: PrecisionContext | None = None, j: int | None = None,
                    Js: list | None = None):
    """``l_j(p^2(-x)) / J_j`` on the contour with the largest ``|J_j|`` by default."""
    ctx = ctx or sd.ctx
    if j is None:
        Js = Js or J_values(sd, ctx)
        j = _best_j(Js)
        J = Js[j]
    else:
        J = J_value(sd, j, ctx)
    pr = sd.p.reflect()
    contour = build_contour(j, _wave_roots(sd), ctx, sd.weight)
    num = integrate(pr * pr, contour, sd.weight, ctx)
    with ctx.workprec():
        return num.value / J.value


def y_solution(sd, j: int, x, ctx: PrecisionContext | None = None,
               target_bits: int | None = None) -> QuadratureResult:
    """``y_j(x) = p(x) int_{gamma_{j,x}} e^h / p^2``, the path arriving along ``theta_in(j)``."""
    ctx = ctx or sd.ctx
    contour = build_contour(j, _wave_roots(sd), ctx, sd.weight, endpoint=x)
    res = integrate((Polynomial((1,)), _p_squared(sd)), contour, sd.weight, ctx,
                    target_bits=target_bits)
    with ctx.workprec():
        px = evaluate(sd.p, to_mp(x))
        return QuadratureResult(px * res.value, float(magnitude(px)) * res.error_estimate,
                                res.subdivisions, res.detail)


def y_ode_residual(sd, j: int, x, ctx: PrecisionContext | None = None):
    """Relative residual of ``y'' - h'y' + (nx+b)y`` at ``x`` by centred differences.

    Step ``2**(-bits/4)``; the three quadratures are run near full precision
    so the division by the squared step stays accurate.
    """
    ctx = ctx or sd.ctx
    bits = ctx.mantissa_bits
    with ctx.workprec():
        x = to_mp(x)
        step = mpmath.ldexp(1, -(bits // 4))
        tb = bits - 24
        ym, y0, yp = (y_solution(sd, j, x + s * step, ctx, target_bits=tb).value for s in (-1, 0, 1))
        d1 = (yp - ym) / (2 * step)
        d2 = (yp - 2 * y0 + ym) / (step * step)
        hp = x * x + to_mp(sd.a)
        lin = (sd.n * x + sd.b) * y0
        res = d2 - hp * d1 + lin
        scale = abs(d2) + abs(hp * d1) + abs(lin)
        return abs(res) / scale if scale else abs(res)


def y_asymptotic_ratio(sd, j: int, x, ctx: PrecisionContext | None = None):
    """``y_j(x) x^(n+2) e^(-h(x))``, which tends to 1 inside ``H_j``."""
    ctx = ctx or sd.ctx
    y = y_solution(sd, j, x, ctx).value
    with ctx.workprec():
        x = to_mp(x)
        return y * x ** (sd.n + 2) * mpmath.exp(-to_mp(sd.weight(x)))


def _dual_vertex(sd, j: int, u, ctx, poles, num: Polynomial, den: Polynomial | None):
    """Vertex among ``0, +-sqrt(u - a)`` whose path has the lowest integrand peak."""
    with ctx.workprec():
        s = mpmath.sqrt(to_mp(u) - to_mp(sd.a))
    lm = default_log_magnitude(sd.weight, u, num, den)
    best = None
    for v in (0, s, -s):
        try:
            c = build_contour(j, poles, ctx, sd.weight, vertex=v, u=u, log_mag=lm)
        except (QuadratureFailure, IllConditioned):
            continue
        peak = max(lm(A + t * (B - A)) for A, B in c.segments for t in (0, 0.25, 0.5, 0.75, 1))
        if best is None or peak < best[0] - 1e-9:
            best = (peak, c)
    if best is None:
        raise QuadratureFailure("no admissible dual contour")
    return best[1]


def dual_g1_derivatives(sd, j: int, u, orders, ctx: PrecisionContext | None = None) -> list:
    """``d^k/du^k g1(u)`` for each ``k`` in ``orders``, differentiating under the integral."""
    ctx = ctx or sd.ctx
    pr = sd.p.reflect()
    nums = [Polynomial.monomial(k, (-1) ** k) * pr for k in orders]
    contour = _dual_vertex(sd, j, u, ctx, (), nums[0], None)
    return integrate_many(nums, Polynomial((1,)), contour, sd.weight, ctx, u=u)


def dual_g1(sd, j: int, u, ctx: PrecisionContext | None = None, k: int = 0) -> QuadratureResult:
    """``d^k/du^k int_{gamma_j} p(-x) e^(h - u x) dx``, differentiated under the integral."""
    return dual_g1_derivatives(sd, j, u, [k], ctx)[0]


def dual_g2(sd, j: int, u, ctx: PrecisionContext | None = None) -> QuadratureResult:
    """``int_{gamma_j} sum_r u^(n-r) p^(r)(x) e^(h - u x) / p^2(x) dx``."""
    ctx = ctx or sd.ctx
    with ctx.workprec():
        uu = to_mp(u)
        num = Polynomial()
        dr = sd.p
        for r in range(sd.n + 1):
            num = num + dr * uu ** (sd.n - r)
            dr = derivative(dr)
    den = _p_squared(sd)
    roots = _wave_roots(sd)
    contour = _dual_vertex(sd, j, u, ctx, roots, num, den)
    return integrate((num, den), contour, sd.weight, ctx, u=u)


def dual_ode_residual(sd, j: int, u, ctx: PrecisionContext | None = None):
    """Relative residual of ``u g'' - n g' - (u^2 - a u + b) g`` for ``g = g1``."""
    ctx = ctx or sd.ctx
    g0, g1, g2 = (r.value for r in dual_g1_derivatives(sd, j, u, range(3), ctx))
    with ctx.workprec():
        uu = to_mp(u)
        terms = (uu * g2, -sd.n * g1, -(uu * uu - to_mp(sd.a) * uu + sd.b) * g0)
        scale = sum(abs(t) for t in terms)
        res = abs(sum(terms))
        return res / scale if scale else res


def taylor_reconstruct_p(sd, j: int, ctx: PrecisionContext | None = None, tol=1e-8):
    """Rebuild ``alpha p`` from ``g^(s)(0)/s!`` and compare with ``p``.

    Returns ``(reconstruction, alpha, max_relative_error)`` where the error
    on e-coefficient ``m`` is measured against ``|alpha| (1 + |p_m|)``.
    Raises :class:`ReconstructionMismatch` above ``tol``.
    """
    ctx = ctx or sd.ctx
    n = sd.n
    taylor = [r.value for r in dual_g1_derivatives(sd, j, 0, range(n + 1), ctx)]
    with ctx.workprec():
        taylor = [t / factorial(s) for s, t in enumerate(taylor)]
        alpha = taylor[0] / factorial(n)
        e = [taylor[n - m] for m in range(n + 1)]
        recon = Polynomial(())
        for m, c in enumerate(e):
            recon = recon + e_basis(m) * c
        worst = max(abs(e[m] - alpha * sd.e_coeffs[m]) / (abs(alpha) * (1 + magnitude(sd.e_coeffs[m])))
                    for m in range(n + 1))
    if worst > tol:
        raise ReconstructionMismatch(f"Taylor reconstruction deviates by {mpmath.nstr(worst, 3)}")
    return recon, alpha, worst


def asymptotic_form_g(n: int, a, u, j: int = 2):
    """``i (-1)^(n+j') sqrt(pi) u^(n/2-1/4) exp(-2/3 u^(3/2) + a u^(1/2))``, principal branches."""
    jp = 0 if j == 2 else 1
    u = to_mp(u)
    return (1j * (-1) ** (n + jp) * mpmath.sqrt(mpmath.pi) * u ** (mpmath.mpf(n) / 2 - mpmath.mpf(1) / 4)
            * mpmath.exp(-mpmath.mpf(2) / 3 * u ** mpmath.mpf(1.5) + to_mp(a) * mpmath.sqrt(u)))


# arg u windows where the principal branch reproduces the stated continuation
_ARG_WINDOWS = {0: (math.pi / 3, math.pi), 1: (-math.pi, -math.pi / 3), 2: (-math.pi, math.pi)}
_DEFAULT_ARG = {0: 2 * math.pi / 3, 1: -2 * math.pi / 3, 2: 0.0}


def asymptotics_check_g(sd, j: int = 2, ctx: PrecisionContext | None = None,
                        moduli=(20, 40, 80), arg: float | None = None,
                        tol: float = 0.05, warn_above: float = 0.10):
    """Ratio of ``g1`` to its leading asymptotic form along a fixed ``arg u``.

    Passes when the deviation at the largest modulus is below ``tol`` and
    the deviations decrease; warns up to ``warn_above``.
    """
    ctx = ctx or sd.ctx
    arg = _DEFAULT_ARG[j] if arg is None else arg
    lo, hi = _ARG_WINDOWS[j]
    if not lo < arg < hi:
        raise ValueError(f"arg u must lie in ({lo:.4f}, {hi:.4f}) for j={j}")
    devs = []
    with ctx.workprec():
        for r in moduli:
            u = mpmath.mpf(r) * mpmath.expj(arg)
            g = dual_g1(sd, j, u, ctx).value
            devs.append(float(abs(g / asymptotic_form_g(sd.n, sd.a, u, j) - 1)))
    monotone = all(x > y for x, y in zip(devs, devs[1:]))
    residual = devs[-1] if monotone else max(devs[-1], warn_above + 1)
    return make_check(f"asymptotics_g[j={j}]", "g1(u) ~ i(-1)^(n+j') sqrt(pi) u^(n/2-1/4) e^(-2/3 u^(3/2) + a u^(1/2))",
                      residual, tol,
                      {"eig": sd.index, "moduli": list(moduli), "deviations": devs,
                       "arg_u": arg, "monotone": monotone,
                       "arg_window": [lo, hi]}, warn_above=warn_above)
