"""Numeric substrate shared by every other module.

Three precision modes are supported and never mixed:

* ``machine``  -- Python ``float`` / ``complex``
* ``mp:D``     -- mpmath numbers bound to a private context with ``D`` decimal digits
* ``exact``    -- :class:`fractions.Fraction` (gmpy2 ``mpq`` is accepted too)

A :class:`Precision` converts inputs into its own mode and supplies the few
transcendental functions the package needs (Gamma, exp, log, powers).
Values produced by different precisions are rejected by :func:`common_mode`
instead of being promoted silently.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Context, Decimal
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Any, Iterable

import gmpy2
from mpmath.ctx_mp import MPContext

__all__ = [
    "Precision",
    "PrecisionError",
    "PoleError",
    "BranchError",
    "MACHINE",
    "EXACT",
    "mp",
    "mode_of",
    "common_mode",
    "gamma",
    "pochhammer",
    "pow_principal",
    "parse_number",
    "format_sci",
    "format_fixed",
    "to_decimal",
]

DEFAULT_DIGITS = 32


class PrecisionError(TypeError):
    """Raised when values from different precision modes meet."""


class PoleError(ValueError):
    """Raised at a pole of Gamma (or of a Pochhammer quotient)."""


class BranchError(ValueError):
    """Raised for ``0 ** w`` with ``Re w <= 0``."""


@lru_cache(maxsize=None)
def _context(digits: int) -> MPContext:
    ctx = MPContext()
    ctx.dps = digits
    return ctx


@dataclass(frozen=True)
class Precision:
    """A precision mode: ``"machine"``, ``"mp"`` (with ``digits``) or ``"exact"``."""

    mode: str
    digits: int | None = None

    def __post_init__(self) -> None:
        if self.mode not in ("machine", "mp", "exact"):
            raise ValueError(f"unknown precision mode {self.mode!r}")
        if self.mode == "mp":
            if self.digits is None or self.digits < 16:
                raise ValueError("mp precision needs digits >= 16")
        elif self.digits is not None:
            raise ValueError(f"{self.mode} precision takes no digit count")

    @classmethod
    def parse(cls, text: str) -> "Precision":
        """Parse ``machine``, ``mp:D`` or ``rational``/``exact``."""
        text = text.strip().lower()
        if text == "machine":
            return MACHINE
        if text in ("rational", "exact"):
            return EXACT
        m = re.fullmatch(r"mp(?::(\d+))?", text)
        if m:
            return mp(int(m.group(1) or DEFAULT_DIGITS))
        raise ValueError(f"cannot parse precision {text!r}")

    def __str__(self) -> str:
        if self.mode == "mp":
            return f"mp:{self.digits}"
        return "rational" if self.mode == "exact" else "machine"

    @property
    def ctx(self) -> MPContext:
        if self.mode != "mp":
            raise PrecisionError(f"{self} has no mpmath context")
        return _context(self.digits)

    @property
    def eps(self) -> float:
        """Relative unit roundoff (0 for exact arithmetic)."""
        if self.mode == "machine":
            return 2.0**-52
        if self.mode == "mp":
            return 10.0 ** (1 - self.digits)
        return 0.0

    # -- conversion -------------------------------------------------------

    def owns(self, x: Any) -> bool:
        """True if ``x`` already is a native number of this mode."""
        return mode_of(x) in (self, None)

    def number(self, x: Any) -> Any:
        """Convert ``x`` to this mode.

        ints, exact rationals and strings are always accepted (they carry
        no rounding).  Floats are accepted only by machine mode and mpmath
        values only by the mp mode that created them.
        """
        if isinstance(x, str):
            return self.number(parse_number(x))
        if isinstance(x, bool):
            raise TypeError("bool is not a number here")
        src = mode_of(x)
        if src not in (None, EXACT, self):
            raise PrecisionError(f"cannot use a {src} value in {self} arithmetic")
        if self.mode == "exact":
            if isinstance(x, Rational):
                return Fraction(x)
            if isinstance(x, ExactComplex):
                return x
            raise PrecisionError(f"{type(x).__name__} is not exact")
        if self.mode == "machine":
            if isinstance(x, ExactComplex):
                return complex(float(x.real), float(x.imag))
            if isinstance(x, (complex,)):
                return x
            return float(x)
        ctx = self.ctx
        if isinstance(x, ExactComplex):
            return ctx.mpc(self.number(x.real), self.number(x.imag))
        if isinstance(x, (Fraction, _MPQ)):
            return ctx.mpf(int(x.numerator)) / int(x.denominator)
        if isinstance(x, (ctx.mpf, ctx.mpc)):
            return x
        return ctx.mpf(x)

    def complex(self, re_: Any, im: Any = 0) -> Any:
        if self.mode == "exact":
            return ExactComplex(Fraction(re_), Fraction(im))
        if self.mode == "machine":
            return complex(float(re_), float(im))
        return self.ctx.mpc(self.number(re_), self.number(im))

    def real_like(self, value: Any) -> Any:
        """``value`` (an int or Fraction) as a real number of this mode."""
        return self.number(Fraction(value))

    # -- elementary functions --------------------------------------------

    def sqrt(self, x: Any) -> Any:
        if self.mode == "mp":
            return self.ctx.sqrt(x)
        if self.mode == "machine":
            return cmath.sqrt(x) if isinstance(x, complex) or x < 0 else math.sqrt(x)
        return pow_principal(x, Fraction(1, 2), self)

    def exp(self, x: Any) -> Any:
        if self.mode == "mp":
            return self.ctx.exp(x)
        if self.mode == "machine":
            return cmath.exp(x) if isinstance(x, complex) else math.exp(x)
        if x == 0:
            return Fraction(1)
        raise PrecisionError("exp of a nonzero rational is irrational")

    def log(self, x: Any) -> Any:
        """Principal logarithm, imaginary part in (-pi, pi]."""
        if self.mode == "mp":
            return self.ctx.log(x)
        if self.mode == "machine":
            if isinstance(x, complex) or x < 0:
                return cmath.log(x)
            return math.log(x)
        if x == 1:
            return Fraction(0)
        raise PrecisionError("log of a rational other than 1 is irrational")

    def pi(self) -> Any:
        if self.mode == "mp":
            return +self.ctx.pi
        if self.mode == "machine":
            return math.pi
        raise PrecisionError("pi is not rational")

    def is_finite(self, x: Any) -> bool:
        if self.mode == "machine":
            return cmath.isfinite(x)
        if self.mode == "mp":
            return self.ctx.isfinite(x)
        return True


MACHINE = Precision("machine")
EXACT = Precision("exact")


def mp(digits: int = DEFAULT_DIGITS) -> Precision:
    return Precision("mp", digits)


class ExactComplex:
    """Gaussian rational ``re + i*im`` (used only for exact complex inputs).

    Just enough arithmetic for partial sums and transformation tables.
    """

    __slots__ = ("real", "imag")

    def __init__(self, real: Any, imag: Any = 0):
        self.real = Fraction(real)
        self.imag = Fraction(imag)

    @staticmethod
    def _lift(x: Any) -> "ExactComplex":
        if isinstance(x, ExactComplex):
            return x
        if isinstance(x, Rational):
            return ExactComplex(x, 0)
        raise PrecisionError(f"cannot mix {type(x).__name__} with exact complex")

    def __add__(self, other):
        o = self._lift(other)
        return ExactComplex(self.real + o.real, self.imag + o.imag)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return ExactComplex(self.real - o.real, self.imag - o.imag)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        return ExactComplex(
            self.real * o.real - self.imag * o.imag,
            self.real * o.imag + self.imag * o.real,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        d = o.real * o.real + o.imag * o.imag
        if d == 0:
            raise ZeroDivisionError("exact complex division by zero")
        return ExactComplex(
            (self.real * o.real + self.imag * o.imag) / d,
            (self.imag * o.real - self.real * o.imag) / d,
        )

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __neg__(self):
        return ExactComplex(-self.real, -self.imag)

    def __pos__(self):
        return self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return ExactComplex(1) / (self ** (-n))
        result, base = ExactComplex(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        try:
            o = self._lift(other)
        except PrecisionError:
            return NotImplemented
        return self.real == o.real and self.imag == o.imag

    def __hash__(self):
        return hash((self.real, self.imag))

    def __abs__(self):
        return math.sqrt(self.real * self.real + self.imag * self.imag)

    def conjugate(self):
        return ExactComplex(self.real, -self.imag)

    def __repr__(self):
        return f"ExactComplex({self.real}, {self.imag})"


_MPQ = type(gmpy2.mpq(1, 2))
_MPZ = type(gmpy2.mpz(1))


def mode_of(x: Any) -> Precision | None:
    """Precision mode that produced ``x``; ``None`` for ints (mode-neutral)."""
    if isinstance(x, bool):
        return None
    if isinstance(x, int):
        return None
    if isinstance(x, (Fraction, ExactComplex, _MPQ)):
        return EXACT
    if isinstance(x, _MPZ):
        return None
    if isinstance(x, (float, complex)):
        return MACHINE
    ctx = getattr(type(x), "context", None)
    if isinstance(ctx, MPContext):
        return mp(ctx.dps)
    raise TypeError(f"unsupported number type {type(x).__name__}")


def common_mode(values: Iterable[Any]) -> Precision | None:
    """The single mode shared by ``values``; raises on a mix."""
    found = None
    for v in values:
        m = mode_of(v)
        if m is None:
            continue
        if found is None:
            found = m
        elif m != found:
            raise PrecisionError(f"mixed precision modes {found} and {m}")
    return found


def _prec_for(x: Any, prec: Precision | None) -> Precision:
    if prec is not None:
        return prec
    return mode_of(x) or EXACT


# -- Gamma ------------------------------------------------------------------

_LANCZOS_G = 7
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def _lanczos_gamma(z: complex) -> complex:
    if z.real < 0.5:
        return cmath.pi / (cmath.sin(cmath.pi * z) * _lanczos_gamma(1 - z))
    z -= 1
    x = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        x += _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2 * math.pi) * t ** (z + 0.5) * cmath.exp(-t) * x


def _is_nonpositive_integer(x: Any) -> bool:
    im = getattr(x, "imag", 0)
    if im != 0:
        return False
    re_ = getattr(x, "real", x)
    return re_ <= 0 and re_ == int(re_)


def gamma(x: Any, prec: Precision | None = None) -> Any:
    """Gamma function in the active precision.

    Raises :class:`PoleError` at 0, -1, -2, ...
    """
    prec = _prec_for(x, prec)
    x = prec.number(x)
    if _is_nonpositive_integer(x):
        raise PoleError(f"Gamma has a pole at {x}")
    if prec.mode == "exact":
        if isinstance(x, Fraction) and x.denominator == 1:
            return Fraction(math.factorial(x.numerator - 1))
        raise PrecisionError(f"Gamma({x}) is not rational")
    if prec.mode == "machine":
        if isinstance(x, complex):
            return _lanczos_gamma(x)
        return math.gamma(x)
    return prec.ctx.gamma(x)


def pochhammer(a: Any, m: int) -> Any:
    """Rising factorial ``a (a+1) ... (a+m-1)``; ``(a)_0 = 1``.

    Product form, so it is well defined where Gamma has poles.
    """
    if m < 0:
        raise ValueError("pochhammer needs m >= 0")
    result = a * 0 + 1
    for i in range(m):
        result = result * (a + i)
    return result


def _exact_root(q: Fraction, n: int) -> Fraction | None:
    def iroot(v: int) -> int | None:
        r = round(v ** (1.0 / n)) if v < 2**1000 else None
        if r is None:
            lo, hi = 0, 1 << (v.bit_length() // n + 1)
            while lo < hi:
                mid = (lo + hi + 1) // 2
                if mid**n <= v:
                    lo = mid
                else:
                    hi = mid - 1
            r = lo
        for cand in (r - 1, r, r + 1):
            if cand >= 0 and cand**n == v:
                return cand
        return None

    num, den = iroot(q.numerator), iroot(q.denominator)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def pow_principal(base: Any, exponent: Any, prec: Precision | None = None) -> Any:
    """``exp(exponent * Log base)`` with the principal logarithm."""
    prec = _prec_for(base, prec)
    base = prec.number(base)
    exponent = prec.number(exponent)
    if base == 0:
        if getattr(exponent, "real", exponent) > 0:
            return base * 0
        raise BranchError("0 raised to a power with nonpositive real part")
    if prec.mode == "exact":
        if isinstance(base, Fraction) and isinstance(exponent, Fraction):
            if exponent.denominator == 1:
                return base ** exponent.numerator
            if base > 0:
                root = _exact_root(base, exponent.denominator)
                if root is not None:
                    return root ** exponent.numerator
        raise PrecisionError(f"{base}**{exponent} is not rational")
    if prec.mode == "mp":
        ctx = prec.ctx
        return ctx.exp(exponent * ctx.log(base))
    if isinstance(base, complex) or isinstance(exponent, complex) or base < 0:
        return cmath.exp(exponent * cmath.log(base))
    return math.exp(exponent * math.log(base))


# -- parsing and rendering ---------------------------------------------------

_REAL = r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?(?:/\d+)?"
_COMPLEX = re.compile(rf"^({_REAL})?(?:([+-](?:\d+(?:\.\d*)?|\.\d+)?(?:[eE][+-]?\d+)?(?:/\d+)?)[ij])?$")


def _parse_real(text: str) -> Fraction:
    if "/" in text:
        num, den = text.split("/")
        return Fraction(Decimal(num)) / Fraction(Decimal(den))
    return Fraction(Decimal(text))


def parse_number(text: str) -> Fraction | ExactComplex:
    """Parse ``p/q``, decimals and ``re+imi`` complex literals exactly.

    Decimal literals become the exact rational they denote.

    >>> parse_number("3/7")
    Fraction(3, 7)
    >>> parse_number("0.77")
    Fraction(77, 100)
    """
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty number")
    m = _COMPLEX.match(s)
    if not m or (m.group(1) is None and m.group(2) is None):
        raise ValueError(f"cannot parse number {text!r}")
    re_part = _parse_real(m.group(1)) if m.group(1) else Fraction(0)
    if m.group(2) is None:
        return re_part
    im_text = m.group(2)
    if im_text in ("+", "-"):
        im_text += "1"
    return ExactComplex(re_part, _parse_real(im_text))


def to_decimal(x: Any, digits: int) -> Decimal:
    """Real value ``x`` as a Decimal carrying at least ``digits`` digits."""
    if isinstance(x, (Fraction, _MPQ)):
        ctx = Context(prec=digits + 10)
        return ctx.divide(Decimal(x.numerator), Decimal(x.denominator))
    if isinstance(x, float):
        return Decimal(repr(x))
    if isinstance(x, int):
        return Decimal(x)
    ctx = getattr(type(x), "context", None)
    if isinstance(ctx, MPContext):
        return Decimal(ctx.nstr(x, digits + 10, min_fixed=1, max_fixed=0, strip_zeros=False))
    raise TypeError(f"cannot render {type(x).__name__}")


def _round_sig(d: Decimal, sig: int) -> Decimal:
    if d == 0:
        return Decimal(0)
    exp = d.adjusted()
    # the default context holds 28 digits; size it to the request
    ctx = Context(prec=sig + 2)
    return d.quantize(Decimal(1).scaleb(exp - sig + 1), rounding=ROUND_HALF_EVEN, context=ctx)


def format_sci(x: Any, sig: int = 13) -> str:
    """Round-half-even to ``sig`` significant digits: ``1.010165390611e5``.

    The exponent is omitted when it is zero.  Complex values render as
    ``re+imi``.
    """
    if isinstance(x, (complex, ExactComplex)) or type(x).__name__ == "mpc":
        re_, im = format_sci(x.real, sig), format_sci(x.imag, sig)
        sign = "" if im.startswith("-") else "+"
        return f"{re_}{sign}{im}i"
    d = _round_sig(to_decimal(x, sig), sig)
    if d == 0:
        return "0"
    # a carry (9.99 -> 10.0) adds a digit; rounding again drops it
    d = _round_sig(d, sig)
    exp = d.adjusted()
    mantissa = format(d.scaleb(-exp, context=Context(prec=sig + 2)), "f")
    return mantissa if exp == 0 else f"{mantissa}e{exp}"


def format_fixed(x: Any, places: int) -> str:
    """Round-half-even to ``places`` digits after the decimal point."""
    d = to_decimal(x, places + 40)
    ctx = Context(prec=max(d.adjusted(), 0) + places + 2)
    d = d.quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_EVEN, context=ctx)
    return format(d, "f")
