"""Scalar domains: exact (Gaussian) rationals and mpmath complex big-floats.

Exact values are ``int``, :class:`fractions.Fraction` or
:class:`GaussianRational`; everything else is an mpmath ``mpf``/``mpc``.
Arithmetic between the two promotes to mpmath at the ambient precision.
"""

from __future__ import annotations

import re
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

import mpmath

__all__ = [
    "PrecisionContext",
    "DEFAULT_CONTEXT",
    "GaussianRational",
    "is_exact",
    "to_mp",
    "parse_exact",
    "format_exact",
    "format_scalar",
    "magnitude",
]


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision and the threshold below which values count as zero.

    ``zero_tolerance`` defaults to ``2**(-mantissa_bits // 2)``.
    """

    mantissa_bits: int = 256
    zero_tolerance: float | None = field(default=None)

    def __post_init__(self):
        if int(self.mantissa_bits) != self.mantissa_bits or self.mantissa_bits < 64:
            raise ValueError("mantissa_bits must be an integer >= 64")
        tol = self.zero_tolerance
        if tol is None:
            tol = mpmath.ldexp(1, -(self.mantissa_bits // 2))
        tol = mpmath.mpf(tol)
        if not tol > 0:
            raise ValueError("zero_tolerance must be positive")
        if tol < mpmath.ldexp(1, -self.mantissa_bits + 8):
            raise ValueError("zero_tolerance is not resolvable at this precision")
        object.__setattr__(self, "zero_tolerance", tol)

    @property
    def eps(self):
        return mpmath.ldexp(1, -self.mantissa_bits)

    @contextmanager
    def workprec(self):
        with mpmath.workprec(self.mantissa_bits):
            yield self


DEFAULT_CONTEXT = PrecisionContext()


def _mp_type(x) -> bool:
    return isinstance(x, (mpmath.mpf, mpmath.mpc))


@dataclass(frozen=True)
class GaussianRational:
    """Exact complex number ``re + im*i`` with rational parts."""

    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, Rational):
            return cls(Fraction(x))
        raise TypeError(f"cannot coerce {x!r} to GaussianRational")

    def simplify(self):
        """Return a plain :class:`Fraction` when the imaginary part is zero."""
        return self.re if self.im == 0 else self

    def _mp(self):
        return mpmath.mpc(mpmath.mpf(self.re.numerator) / self.re.denominator,
                          mpmath.mpf(self.im.numerator) / self.im.denominator)

    def __add__(self, other):
        if _mp_type(other):
            return self._mp() + other
        if not isinstance(other, (GaussianRational, Rational)):
            return NotImplemented
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        if _mp_type(other):
            return self._mp() - other
        if not isinstance(other, (GaussianRational, Rational)):
            return NotImplemented
        return self + (-GaussianRational.coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if _mp_type(other):
            return self._mp() * other
        if not isinstance(other, (GaussianRational, Rational)):
            return NotImplemented
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if _mp_type(other):
            return self._mp() / other
        if not isinstance(other, (GaussianRational, Rational)):
            return NotImplemented
        o = GaussianRational.coerce(other)
        den = o.re * o.re + o.im * o.im
        if den == 0:
            raise ZeroDivisionError("GaussianRational division by zero")
        return GaussianRational((self.re * o.re + self.im * o.im) / den,
                                (self.im * o.re - self.re * o.im) / den)

    def __rtruediv__(self, other):
        if _mp_type(other):
            return other / self._mp()
        return GaussianRational.coerce(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = GaussianRational(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, Rational):
            return self.im == 0 and self.re == other
        if _mp_type(other):
            return self._mp() == other
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __abs__(self):
        return mpmath.sqrt(self.re * self.re + self.im * self.im)

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def __repr__(self):
        return f"GaussianRational({format_exact(self)!r})"


def is_exact(x) -> bool:
    return isinstance(x, (Rational, GaussianRational))


def to_mp(x):
    """Convert any scalar to an mpmath number at the ambient precision."""
    if isinstance(x, (mpmath.mpf, mpmath.mpc)):
        return x
    if isinstance(x, GaussianRational):
        return x._mp()
    if isinstance(x, Rational):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpmathify(x)


def magnitude(x):
    """``|x|`` as an mpmath real (exact inputs are converted)."""
    return abs(to_mp(x))


_RAT = r"[+-]?\d+(?:/\d+)?"
_IMAG = re.compile(r"^(?P<sign>[+-]?)(?P<mag>\d+(?:/\d+)?)?\*?i$")


def _split_terms(s: str) -> list[str]:
    # split at + or - that is not the leading sign
    out, cur = [], ""
    for i, ch in enumerate(s):
        if ch in "+-" and i > 0 and s[i - 1] not in "eE":
            out.append(cur)
            cur = ch
        else:
            cur += ch
    out.append(cur)
    return [t for t in out if t]


def parse_exact(text: str):
    """Parse ``"p/q"`` or ``"p/q+r/s*i"`` into a Fraction or GaussianRational.

    >>> parse_exact("-3/4")
    Fraction(-3, 4)
    >>> parse_exact("1/2-3*i")
    GaussianRational('1/2-3*i')
    """
    s = str(text).replace(" ", "")
    if not s:
        raise ValueError("empty scalar literal")
    re_part, im_part = Fraction(0), Fraction(0)
    for term in _split_terms(s):
        if term.endswith("i"):
            m = _IMAG.match(term)
            if not m:
                raise ValueError(f"bad imaginary term {term!r} in {text!r}")
            mag = Fraction(m.group("mag")) if m.group("mag") else Fraction(1)
            im_part += -mag if m.group("sign") == "-" else mag
        elif re.fullmatch(_RAT, term):
            re_part += Fraction(term)
        else:
            raise ValueError(f"bad rational term {term!r} in {text!r}")
    if im_part == 0:
        return re_part
    return GaussianRational(re_part, im_part)


def _frac_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_exact(x) -> str:
    if isinstance(x, GaussianRational):
        if x.im == 0:
            return _frac_str(x.re)
        im = x.im
        im_txt = ("" if abs(im) == 1 else _frac_str(abs(im)) + "*") + "i"
        sign = "-" if im < 0 else "+"
        if x.re == 0:
            return ("-" if im < 0 else "") + im_txt
        return f"{_frac_str(x.re)}{sign}{im_txt}"
    return _frac_str(Fraction(x))


def format_scalar(x, digits: int | None = None):
    """Serialize a scalar for reports: exact values as ``"p/q"`` strings,
    big-floats as ``{"re": ..., "im": ...}`` decimal strings at full precision."""
    if is_exact(x):
        return format_exact(x)
    z = mpmath.mpc(x)
    if digits is None:
        digits = max(15, int(mpmath.mp.prec * 0.30103))
    return {"re": mpmath.nstr(z.real, digits, min_fixed=-4, max_fixed=6),
            "im": mpmath.nstr(z.imag, digits, min_fixed=-4, max_fixed=6)}
