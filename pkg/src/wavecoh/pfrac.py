"""Rational functions as polynomial part plus partial-fraction terms.

A :class:`PoleExpansion` stores, for every pole ``z``, the coefficients
``a_{z,1}, ..., a_{z,K}`` of ``a_{z,k} / (x - z)**k``.  The twisted
differential ``D(q) = q' + h'q`` acts on this form in closed form through
``h'(x) = (x - z)**2 + 2z(x - z) + (z**2 + a)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterable, Sequence


from .errors import IllConditioned
from .poly import CubicWeight, Polynomial, evaluate, exact_div
from .scalars import DEFAULT_CONTEXT, PrecisionContext, is_exact, magnitude, to_mp

__all__ = [
    "PoleExpansion",
    "partial_fractions",
    "apply_D",
    "D_of_pole",
    "D_of_monomial",
    "binomial_power",
]


def _same_location(z, w, tol) -> bool:
    if z is w or (is_exact(z) and is_exact(w) and z == w):
        return True
    return magnitude(z - w) <= tol * max(1, magnitude(z))


def binomial_power(z, e: int) -> Polynomial:
    """Monomial expansion of ``(x - z)**e`` for ``e >= 0``."""
    return Polynomial(comb(e, i) * (-z) ** (e - i) for i in range(e + 1))


@dataclass(frozen=True)
class PoleExpansion:
    """``polynomial + sum_z sum_k coeffs_z[k-1] / (x - z)**k``.

    ``poles`` is a tuple of ``(z, (a_1, ..., a_K))``.  Trailing zero
    coefficients are dropped and poles with no nonzero coefficient vanish.
    Pole locations are matched within ``match_tol`` when expansions combine.
    """

    polynomial: Polynomial = Polynomial()
    poles: tuple = ()
    match_tol: object = DEFAULT_CONTEXT.zero_tolerance

    def __post_init__(self):
        cleaned = []
        for z, cs in self.poles:
            cs = list(cs)
            while cs and cs[-1] == 0:
                cs.pop()
            if any(c != 0 for c in cs):
                cleaned.append((z, tuple(cs)))
        object.__setattr__(self, "poles", tuple(cleaned))

    @classmethod
    def from_polynomial(cls, poly: Polynomial) -> "PoleExpansion":
        return cls(poly)

    @classmethod
    def from_terms(cls, polynomial: Polynomial, terms: Iterable,
                   match_tol=DEFAULT_CONTEXT.zero_tolerance) -> "PoleExpansion":
        """Build from ``(z, k, coefficient)`` triples."""
        out = cls(polynomial, (), match_tol)
        for z, k, c in terms:
            out = out + cls(Polynomial(), ((z, (0,) * (k - 1) + (c,)),), match_tol)
        return out

    @property
    def terms(self) -> list:
        """``[(z, k, a_{z,k}), ...]`` for all nonzero coefficients."""
        return [(z, k + 1, c) for z, cs in self.poles for k, c in enumerate(cs) if c != 0]

    @property
    def locations(self) -> list:
        return [z for z, _ in self.poles]

    @property
    def max_order(self) -> int:
        return max((len(cs) for _, cs in self.poles), default=0)

    def scale(self):
        mags = [magnitude(c) for c in self.polynomial.coeffs]
        mags += [magnitude(c) for _, _, c in self.terms]
        return max(mags, default=0)

    # -- arithmetic --------------------------------------------------------
    def _merged(self, other: "PoleExpansion", sign: int) -> "PoleExpansion":
        poles = [(z, list(cs)) for z, cs in self.poles]
        for w, ds in other.poles:
            for z, cs in poles:
                if _same_location(z, w, self.match_tol):
                    cs.extend([0] * (len(ds) - len(cs)))
                    for i, d in enumerate(ds):
                        cs[i] = cs[i] + sign * d
                    break
            else:
                poles.append((w, [sign * d for d in ds]))
        poly = self.polynomial + other.polynomial if sign > 0 else self.polynomial - other.polynomial
        return PoleExpansion(poly, tuple((z, tuple(cs)) for z, cs in poles), self.match_tol)

    def __add__(self, other):
        if isinstance(other, Polynomial):
            other = PoleExpansion(other)
        elif not isinstance(other, PoleExpansion):
            other = PoleExpansion(Polynomial.constant(other))
        return self._merged(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Polynomial):
            other = PoleExpansion(other)
        elif not isinstance(other, PoleExpansion):
            other = PoleExpansion(Polynomial.constant(other))
        return self._merged(other, -1)

    def __neg__(self):
        return self * -1

    def __mul__(self, c):
        if isinstance(c, (Polynomial, PoleExpansion)):
            return NotImplemented
        return PoleExpansion(self.polynomial * c,
                             tuple((z, tuple(a * c for a in cs)) for z, cs in self.poles),
                             self.match_tol)

    __rmul__ = __mul__

    def __call__(self, x):
        x = x if is_exact(x) else to_mp(x)
        val = evaluate(self.polynomial, x)
        for z, cs in self.poles:
            t = x - z
            inv = exact_div(1, t)
            pw = inv
            for c in cs:
                val = val + c * pw
                pw = pw * inv
        return val

    def to_rational(self) -> tuple[Polynomial, Polynomial]:
        """Recombine over the common denominator ``prod (x - z)**K_z``."""
        den = Polynomial((1,))
        for z, cs in self.poles:
            den = den * binomial_power(z, len(cs))
        num = self.polynomial * den
        for i, (z, cs) in enumerate(self.poles):
            others = Polynomial((1,))
            for j, (w, ds) in enumerate(self.poles):
                if j != i:
                    others = others * binomial_power(w, len(ds))
            K = len(cs)
            for k, c in enumerate(cs, start=1):
                num = num + others * binomial_power(z, K - k) * c
        return num, den

    def coefficient_distance(self, other: "PoleExpansion") -> object:
        """Max coefficient difference after matching poles."""
        diff = self - other
        return diff.scale()

    def __repr__(self):
        return f"PoleExpansion(polynomial={self.polynomial!r}, terms={self.terms!r})"


def _series_inverse_linear(c, m: int, order: int) -> list:
    """Taylor coefficients in ``t`` of ``(c + t)**(-m)`` up to ``t**(order-1)``."""
    out = []
    for i in range(order):
        # binom(-m, i) c^{-m-i}
        coef = (-1) ** i * comb(m + i - 1, i)
        out.append(exact_div(coef, c ** (m + i)))
    return out


def _series_mul(a: Sequence, b: Sequence, order: int) -> list:
    out = [0] * order
    for i in range(min(order, len(a))):
        if a[i] == 0:
            continue
        for j in range(min(order - i, len(b))):
            out[i + j] = out[i + j] + a[i] * b[j]
    return out


def partial_fractions(numerator: Polynomial, denominator_roots: Sequence,
                      ctx: PrecisionContext = DEFAULT_CONTEXT,
                      leading=1) -> PoleExpansion:
    """Expand ``numerator / (leading * prod (x - z)**m)`` into simple fractions.

    ``denominator_roots`` is a sequence of ``(z, m)`` pairs.  Raises
    :class:`IllConditioned` if two distinct roots are within ``zero_tolerance``.
    """
    roots = list(denominator_roots)
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            zi, zj = roots[i][0], roots[j][0]
            if magnitude(zi - zj) <= ctx.zero_tolerance * max(1, magnitude(zi)):
                raise IllConditioned(f"poles {zi} and {zj} are not separated")
    if leading != 1:
        numerator = numerator / leading
    den = Polynomial((1,))
    for z, m in roots:
        den = den * binomial_power(z, m)
    quot, rem = divmod(numerator, den)
    poles = []
    for i, (z, m) in enumerate(roots):
        local = list(rem.taylor_shift(z).coeffs)[:m]
        local += [0] * (m - len(local))
        for j, (w, mw) in enumerate(roots):
            if j == i:
                continue
            local = _series_mul(local, _series_inverse_linear(z - w, mw, m), m)
        # coefficient of t^i gives a_{z, m-i}
        poles.append((z, tuple(reversed(local))))
    return PoleExpansion(quot, tuple(poles), ctx.zero_tolerance)


def D_of_monomial(m: int, w: CubicWeight) -> Polynomial:
    """``D(x**m) = m x**(m-1) + x**(m+2) + a x**m``."""
    out = [0] * (m + 3)
    if m > 0:
        out[m - 1] = m
    out[m] = w.a
    out[m + 2] = 1
    return Polynomial(out)


def D_of_pole(z, m: int, w: CubicWeight, match_tol=DEFAULT_CONTEXT.zero_tolerance) -> PoleExpansion:
    """``D(1/(x - z)**m)`` for ``m >= 1`` as a PoleExpansion.

    Uses ``-m/(x-z)**(m+1) + (z**2+a)/(x-z)**m + 2z/(x-z)**(m-1) + (x-z)**(2-m)``.
    """
    coeffs = {m + 1: -m, m: z * z + w.a, m - 1: 2 * z, m - 2: 1}
    poly = Polynomial()
    pole = [0] * (m + 1)
    for k, c in coeffs.items():
        if k >= 1:
            pole[k - 1] = pole[k - 1] + c
        else:
            poly = poly + binomial_power(z, -k) * c
    return PoleExpansion(poly, ((z, tuple(pole)),), match_tol)


def apply_D(q: PoleExpansion, w: CubicWeight) -> PoleExpansion:
    """``D(q) = q' + h' q`` computed termwise in closed form."""
    if isinstance(q, Polynomial):
        q = PoleExpansion(q)
    poly = q.polynomial
    out = PoleExpansion(Polynomial(k * c for k, c in enumerate(poly.coeffs) if k > 0)
                        + w.h_prime * poly, (), q.match_tol)
    for z, cs in q.poles:
        for k, c in enumerate(cs, start=1):
            if c != 0:
                out = out + D_of_pole(z, k, w, q.match_tol) * c
    return out
