"""Wave polynomials: eigenpairs of the banded operator on polynomials of degree <= n.

The operator is ``A = d^2/dx^2 - h'(x) d/dx + n x`` acting on the basis
``e_k = x**k / k!`` by ``A e_k = e_{k-2} - a e_{k-1} + (n-k)(k+1) e_{k+1}``.
A wave polynomial of degree ``n`` exists for ``b`` exactly when ``b`` is a
root of ``chi(lambda) = det(A + lambda)``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from math import factorial

import mpmath

from .errors import ConditionWarning, InconsistentEigenvalue
from .poly import (CubicWeight, Polynomial, derivative, evaluate, exact_div, from_ebasis,
                   to_ebasis)
from .roots import cluster_roots, complex_roots
from .scalars import DEFAULT_CONTEXT, PrecisionContext, is_exact, magnitude, to_mp

__all__ = [
    "WaveOperator",
    "SpectralDatum",
    "char_poly",
    "spectrum",
    "wave_recurrence",
    "wave_polynomial",
    "c_selfpair",
    "chi_prime_at",
    "reversal",
    "spectral_data",
    "spectral_datum",
    "DEGENERACY_THRESHOLD",
]

DEGENERACY_THRESHOLD = 1e-6


@dataclass(frozen=True)
class WaveOperator:
    """The operator ``A`` restricted to polynomials of degree at most ``n``."""

    n: int
    a: object = 0

    def entry(self, m: int, k: int):
        """Matrix coefficient of ``e_m`` in ``A e_k``."""
        if k == m + 2:
            return 1
        if k == m + 1:
            return -self.a
        if k == m - 1:
            return (self.n - m + 1) * m
        return 0

    def matrix(self, lam=0) -> list:
        N = self.n + 1
        return [[self.entry(m, k) + (lam if m == k else 0) for k in range(N)]
                for m in range(N)]

    def apply(self, poly: Polynomial) -> Polynomial:
        """Apply ``A`` through the band rule in the e-basis."""
        N = self.n + 1
        c = to_ebasis(poly, N)
        out = [sum((self.entry(m, k) * c[k] for k in range(max(0, m - 1), min(N, m + 3))), 0)
               for m in range(N)]
        return from_ebasis(out)

    def apply_direct(self, poly: Polynomial) -> Polynomial:
        """Apply ``A`` as the differential operator ``y'' - h'y' + n x y``."""
        w = CubicWeight(self.a)
        dp = derivative(poly)
        return derivative(dp) - w.h_prime * dp + Polynomial((0, self.n)) * poly


def char_poly(n: int, a=0) -> Polynomial:
    """``det(A + lambda)`` as an exact monic polynomial in ``lambda``.

    ``A + lambda`` is upper Hessenberg with only two superdiagonals, so the
    leading principal minors obey a four-term recurrence (cofactor expansion
    along the last column).
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    op = WaveOperator(n, a)
    lam = Polynomial((0, 1))
    d = [Polynomial((1,))]  # d[k] = det of the leading k x k block
    for k in range(1, n + 2):
        m = k - 1  # new row/column index
        term = lam * d[k - 1]
        if k >= 2:
            term = term - d[k - 2] * (op.entry(m - 1, m) * op.entry(m, m - 1))
        if k >= 3:
            term = term + d[k - 3] * (op.entry(m - 2, m) * op.entry(m - 1, m - 2)
                                      * op.entry(m, m - 1))
        d.append(term)
    return d[n + 1]


def chi_prime_at(chi: Polynomial, b):
    return evaluate(derivative(chi), b)


def _eigen_order(item):
    b = to_mp(item[0])
    return (-round(float(b.real), 12), round(float(b.imag), 12))


def spectrum(n: int, a=0, ctx: PrecisionContext = DEFAULT_CONTEXT) -> list:
    """Distinct roots ``b`` of ``det(A + lambda)`` as ``[(b, multiplicity), ...]``.

    Ordered by decreasing real part, then increasing imaginary part; this
    order defines the eigenvalue index.  Multiplicities sum to ``n + 1``.
    Raises NonConvergence from the root finder.
    """
    chi = char_poly(n, a)
    with ctx.workprec():
        return sorted(cluster_roots(complex_roots(chi, ctx), ctx), key=_eigen_order)


def wave_recurrence(n: int, a, b) -> tuple[list, object]:
    """Solve rows ``m = n .. 1`` of ``(A + b) p = 0`` with ``p_n = n!``.

    Returns the e-basis coefficients ``p_0..p_n`` and the leftover row-0
    residual ``p_2 - a p_1 + b p_0``, which vanishes iff ``b`` is an
    eigenvalue.  Works over any field-like scalars (also symbolic ones).
    """
    p = [0] * (n + 3)
    p[n] = factorial(n)
    for m in range(n, 0, -1):
        rhs = p[m + 2] - a * p[m + 1] + b * p[m]
        p[m - 1] = exact_div(-rhs, (n - m + 1) * m)
    residual = p[2] - a * p[1] + b * p[0]
    return p[: n + 1], residual


def wave_polynomial(n: int, a, b, ctx: PrecisionContext = DEFAULT_CONTEXT) -> tuple[Polynomial, list]:
    """Monic wave polynomial for eigenvalue ``b``; returns ``(p, e_coeffs)``.

    Raises :class:`InconsistentEigenvalue` when the row-0 residual exceeds
    ``zero_tolerance`` relative to the coefficient scale.
    """
    with ctx.workprec():
        if not is_exact(b):
            b = to_mp(b)
            a = to_mp(a)
        e, residual = wave_recurrence(n, a, b)
        scale = max(magnitude(c) for c in e) * (1 + magnitude(a) + magnitude(b))
        if magnitude(residual) > ctx.zero_tolerance * scale:
            raise InconsistentEigenvalue(
                f"row-0 residual {mpmath.nstr(magnitude(residual), 5)} for b={b}")
        return from_ebasis(e), e


def c_selfpair(e_coeffs) -> object:
    """``(-1)**n (n!)**2 / p_n**2 * sum_s p_s p_{n-s}`` from e-basis coefficients."""
    n = len(e_coeffs) - 1
    total = sum((e_coeffs[s] * e_coeffs[n - s] for s in range(n + 1)), 0)
    val = exact_div(total * factorial(n) ** 2, e_coeffs[n] * e_coeffs[n])
    return val if n % 2 == 0 else -val


def reversal(e_coeffs) -> Polynomial:
    """``p*(x) = sum_s p_{n-s} e_s(x)``, the eigenvector of the transpose."""
    return from_ebasis(list(reversed(list(e_coeffs))))


@dataclass(frozen=True)
class SpectralDatum:
    """One eigenpair ``(b, p)`` with its invariants."""

    n: int
    a: object
    b: object
    multiplicity: int
    p: Polynomial
    e_coeffs: tuple
    chi: Polynomial
    chi_prime_at_b: object
    c_selfpair: object
    index: int = 0
    warnings: tuple = field(default=())
    ctx: PrecisionContext = DEFAULT_CONTEXT

    @property
    def weight(self) -> CubicWeight:
        return CubicWeight(self.a)

    @property
    def degenerate(self) -> bool:
        return magnitude(self.chi_prime_at_b) < DEGENERACY_THRESHOLD

    def ode_residual(self, x):
        """``p'' - (x^2 + a) p' + (n x + b) p`` at ``x``."""
        with self.ctx.workprec():
            dp = derivative(self.p)
            x = to_mp(x)
            return (evaluate(derivative(dp), x) - (x * x + to_mp(self.a)) * evaluate(dp, x)
                    + (self.n * x + self.b) * evaluate(self.p, x))


def spectral_data(n: int, a=0, ctx: PrecisionContext = DEFAULT_CONTEXT) -> list:
    """All distinct eigenpairs for ``(n, a)``, ordered like :func:`spectrum`."""
    chi = char_poly(n, a)
    out = []
    with ctx.workprec():
        for idx, (b, mult) in enumerate(spectrum(n, a, ctx)):
            p, e = wave_polynomial(n, a, b, ctx)
            cp = chi_prime_at(chi, b)
            notes = []
            if magnitude(cp) < DEGENERACY_THRESHOLD:
                msg = (f"near-degenerate eigenvalue b={mpmath.nstr(b, 8)} "
                       f"(|chi'(b)|={mpmath.nstr(magnitude(cp), 3)}, multiplicity {mult})")
                notes.append(msg)
                warnings.warn(msg, ConditionWarning, stacklevel=2)
            out.append(SpectralDatum(n=n, a=a, b=b, multiplicity=mult, p=p,
                                     e_coeffs=tuple(e), chi=chi, chi_prime_at_b=cp,
                                     c_selfpair=c_selfpair(e), index=idx,
                                     warnings=tuple(notes), ctx=ctx))
    return out


def spectral_datum(n: int, a=0, index: int = 0,
                   ctx: PrecisionContext = DEFAULT_CONTEXT) -> SpectralDatum:
    data = spectral_data(n, a, ctx)
    if not 0 <= index < len(data):
        raise IndexError(f"eigenvalue index {index} out of range (0..{len(data) - 1})")
    return data[index]
