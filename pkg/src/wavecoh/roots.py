"""All complex roots of a polynomial by Aberth–Ehrlich simultaneous iteration."""

from __future__ import annotations

import mpmath

from .errors import NonConvergence
from .poly import Polynomial, derivative, evaluate
from .scalars import DEFAULT_CONTEXT, PrecisionContext, to_mp

__all__ = ["complex_roots", "cluster_roots", "root_residuals"]


def _initial_guesses(coeffs, n):
    lead = coeffs[n]
    center = -coeffs[n - 1] / (n * lead)
    # radius from the Fujiwara-style bound on the shifted polynomial
    shifted = Polynomial(coeffs).taylor_shift(center).coeffs
    radius = mpmath.mpf(0)
    for k in range(n):
        c = abs(shifted[k] / lead) if k < len(shifted) else 0
        if c:
            radius = max(radius, c ** (mpmath.mpf(1) / (n - k)))
    if radius == 0:
        radius = mpmath.mpf(1)
    phase = mpmath.mpf("0.4")
    return [center + radius * mpmath.expjpi(2 * mpmath.mpf(k) / n + phase)
            for k in range(n)]


def complex_roots(poly: Polynomial, ctx: PrecisionContext = DEFAULT_CONTEXT,
                  maxsteps: int = 4000) -> list:
    """Return all ``deg(poly)`` roots, repeated according to multiplicity.

    Iteration runs at twice the context precision so that roots of
    multiplicity two still come out accurate to about ``2**-mantissa_bits``;
    the returned values are rounded to the context precision.  Raises
    :class:`NonConvergence` when the residual target
    ``|poly(z)| <= zero_tolerance * max|coeff|`` is not met.
    """
    if poly.is_zero:
        raise ValueError("the zero polynomial has no finite root set")
    n = poly.degree
    if n == 0:
        return []
    wp = 2 * ctx.mantissa_bits
    with mpmath.workprec(wp):
        coeffs = [mpmath.mpc(to_mp(c)) for c in poly.coeffs]
        p = Polynomial(coeffs)
        dp = derivative(p)
        if n == 1:
            zs = [-coeffs[0] / coeffs[1]]
        else:
            zs = _initial_guesses(coeffs, n)
            tiny = mpmath.ldexp(1, -wp + 8)
            noise_unit = mpmath.ldexp(1, -wp + 16)
            abs_p = Polynomial([abs(c) for c in coeffs])
            for _ in range(maxsteps):
                biggest = mpmath.mpf(0)
                at_noise = True
                for k in range(n):
                    zk = zs[k]
                    pv = evaluate(p, zk)
                    if abs(pv) > noise_unit * evaluate(abs_p, abs(zk)):
                        at_noise = False
                    if pv == 0:
                        continue
                    dv = evaluate(dp, zk)
                    if dv == 0:
                        step = tiny * (1 + abs(zk))
                    else:
                        ratio = pv / dv
                        s = mpmath.fsum(1 / (zk - zs[i]) for i in range(n)
                                        if i != k and zs[i] != zk)
                        denom = 1 - ratio * s
                        step = ratio / denom if denom != 0 else ratio
                    zs[k] = zk - step
                    biggest = max(biggest, abs(step) / (1 + abs(zk)))
                if biggest <= tiny or at_noise:
                    break
            else:
                raise NonConvergence(f"Aberth iteration did not settle in {maxsteps} steps")
        scale = max(abs(c) for c in coeffs)
        residuals = [abs(evaluate(p, z)) for z in zs]
    with mpmath.workprec(ctx.mantissa_bits):
        target = ctx.zero_tolerance * scale
        worst = max(residuals)
        if worst > target:
            raise NonConvergence(
                f"root residual {mpmath.nstr(worst, 5)} exceeds "
                f"{mpmath.nstr(target, 5)} at {ctx.mantissa_bits} bits")
        return [+z for z in zs]


def cluster_roots(roots, ctx: PrecisionContext = DEFAULT_CONTEXT) -> list:
    """Merge roots closer than ``zero_tolerance * max(1, |z|)``.

    Returns ``[(location, order), ...]`` with each location the mean of its
    cluster, in a deterministic order (real part, then imaginary part).
    """
    remaining = list(roots)
    out = []
    while remaining:
        z = remaining.pop(0)
        group = [z]
        keep = []
        for w in remaining:
            if abs(w - z) <= ctx.zero_tolerance * max(1, abs(z)):
                group.append(w)
            else:
                keep.append(w)
        remaining = keep
        loc = mpmath.fsum(group) / len(group)
        out.append((loc, len(group)))
    return sorted(out, key=lambda t: _order_key(t[0]))


def _order_key(z):
    z = mpmath.mpc(z)
    return (round(float(z.real), 12), round(float(z.imag), 12))


def root_residuals(poly: Polynomial, roots) -> list:
    return [abs(evaluate(poly, z)) for z in roots]
