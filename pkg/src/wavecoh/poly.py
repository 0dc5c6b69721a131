"""Dense univariate polynomials over exact or big-float scalars.

Coefficients are stored low degree first.  The e-basis ``e_k = x**k / k!``
is exposed through :func:`to_ebasis` / :func:`from_ebasis`; storage is always
monomial.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Sequence

from .scalars import is_exact, magnitude, to_mp

__all__ = [
    "Polynomial",
    "CubicWeight",
    "evaluate",
    "derivative",
    "antiderivative_zero",
    "to_ebasis",
    "from_ebasis",
    "e_basis",
]


def _is_zero(c) -> bool:
    return c == 0


def exact_div(a, b):
    """``a / b`` that stays exact when both operands are integers."""
    if isinstance(a, int) and isinstance(b, int):
        return Fraction(a, b)
    if isinstance(b, int) and is_exact(a):
        return a / Fraction(b)
    return a / b


def _unify(coeffs: Iterable) -> tuple:
    coeffs = tuple(coeffs)
    if all(is_exact(c) for c in coeffs):
        return coeffs
    return tuple(to_mp(c) for c in coeffs)


@dataclass(frozen=True)
class Polynomial:
    """Immutable dense polynomial ``sum(coeffs[k] * x**k)``.

    Trailing (exact) zeros are stripped, so the zero polynomial has
    ``coeffs == ()`` and degree -1.
    """

    coeffs: tuple = ()

    def __post_init__(self):
        cs = list(_unify(self.coeffs))
        while cs and _is_zero(cs[-1]):
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    # -- constructors ------------------------------------------------------
    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls((c,))

    @classmethod
    def monomial(cls, k: int, c=1) -> "Polynomial":
        return cls((0,) * k + (c,))

    @classmethod
    def x(cls) -> "Polynomial":
        return cls((0, 1))

    @classmethod
    def from_roots(cls, roots: Sequence) -> "Polynomial":
        out = cls((1,))
        for z in roots:
            out = out * cls((-z, 1))
        return out

    # -- basic properties --------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_exact(self) -> bool:
        return all(is_exact(c) for c in self.coeffs)

    def lc(self):
        return self.coeffs[-1] if self.coeffs else 0

    def __getitem__(self, k: int):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def scale(self):
        """Largest coefficient magnitude (0 for the zero polynomial)."""
        return max((magnitude(c) for c in self.coeffs), default=0)

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(self[k] + other[k] for k in range(n))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return Polynomial(c * other for c in self.coeffs)
        if self.is_zero or other.is_zero:
            return Polynomial()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if _is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Polynomial((1,))
        for _ in range(k):
            out = out * self
        return out

    def __truediv__(self, c):
        return Polynomial(exact_div(x, c) for x in self.coeffs)

    def __divmod__(self, other: "Polynomial"):
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dd = other.degree
        lc = other.lc()
        quot = [0] * max(len(rem) - dd, 0)
        for k in range(len(rem) - 1, dd - 1, -1):
            c = exact_div(rem[k], lc)
            quot[k - dd] = c
            for i in range(dd + 1):
                rem[k - dd + i] = rem[k - dd + i] - c * other.coeffs[i]
            rem[k] = 0  # cancelled exactly by construction
        return Polynomial(quot), Polynomial(rem[:dd])

    def __call__(self, x):
        return evaluate(self, x)

    def reflect(self) -> "Polynomial":
        """``p(-x)``."""
        return Polynomial(c if k % 2 == 0 else -c for k, c in enumerate(self.coeffs))

    def taylor_shift(self, z) -> "Polynomial":
        """Coefficients of ``p(z + t)`` as a polynomial in ``t``."""
        n = len(self.coeffs)
        out = [0] * n
        # out[i] = sum_k c_k * C(k, i) * z**(k-i)
        zpow = [1] * n
        for k in range(1, n):
            zpow[k] = zpow[k - 1] * z
        for k, c in enumerate(self.coeffs):
            if _is_zero(c):
                continue
            for i in range(k + 1):
                out[i] = out[i] + c * comb(k, i) * zpow[k - i]
        return Polynomial(out)

    def to_mp(self) -> "Polynomial":
        return Polynomial(tuple(to_mp(c) for c in self.coeffs) or ())

    def __repr__(self):
        return f"Polynomial({list(self.coeffs)!r})"


def evaluate(poly: Polynomial, x):
    """Horner evaluation; exact when both ``poly`` and ``x`` are exact."""
    if poly.is_zero:
        return 0 if is_exact(x) else to_mp(0)
    if not is_exact(x):
        x = to_mp(x)
    acc = poly.coeffs[-1]
    for c in reversed(poly.coeffs[:-1]):
        acc = acc * x + c
    return acc


def derivative(poly: Polynomial) -> Polynomial:
    return Polynomial(k * c for k, c in enumerate(poly.coeffs) if k > 0)


def antiderivative_zero(poly: Polynomial) -> Polynomial:
    """The antiderivative ``f`` with ``f(0) = 0``."""
    if poly.is_zero:
        return Polynomial()
    out = [0]
    for k, c in enumerate(poly.coeffs):
        out.append(c / Fraction(k + 1) if is_exact(c) else c / (k + 1))
    return Polynomial(out)


def to_ebasis(poly: Polynomial, length: int | None = None) -> list:
    """Coefficients in the basis ``e_k = x**k / k!`` (``s!`` times the monomial ones)."""
    n = len(poly.coeffs) if length is None else length
    return [poly[k] * factorial(k) for k in range(n)]


def from_ebasis(coeffs: Sequence) -> Polynomial:
    out = []
    for k, c in enumerate(coeffs):
        out.append(c / Fraction(factorial(k)) if is_exact(c) else c / factorial(k))
    return Polynomial(out)


def e_basis(k: int) -> Polynomial:
    return Polynomial.monomial(k, Fraction(1, factorial(k)))


@dataclass(frozen=True)
class CubicWeight:
    """The exponent ``h(x) = x**3/3 + a*x`` of the twisted differential."""

    a: object = 0

    @property
    def h(self) -> Polynomial:
        return Polynomial((0, self.a, 0, Fraction(1, 3)))

    @property
    def h_prime(self) -> Polynomial:
        return Polynomial((self.a, 0, 1))

    def __call__(self, x):
        return evaluate(self.h, x)

    def derivative_at(self, x):
        return x * x + self.a
