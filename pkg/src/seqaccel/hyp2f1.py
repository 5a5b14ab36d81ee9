"""Gaussian hypergeometric series 2F1(a, b; c; z).

Terms and partial sums, convergence classification, the term-growth
crossover, analytic continuation to 1 - z, the three linear
transformations, the c -> -m limit, a catalog of three-term recurrences
and an ``evaluate`` front end with several summation strategies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Callable

from .paths import PathSpec, walk
from .scalar import (
    EXACT,
    ExactComplex,
    PoleError,
    Precision,
    common_mode,
    gamma,
    mp,
    pow_principal,
)
from .transforms import KINDS, SequenceWindow

__all__ = [
    "Hyp2F1Params",
    "ConvergenceClass",
    "DegenerateParameterError",
    "NoConvergenceError",
    "CrossoverError",
    "Continuation",
    "EvalResult",
    "RECURRENCES",
    "SYMMETRY_PAIRS",
    "term",
    "term_ratio",
    "partial_sums",
    "crossover_index",
    "classify",
    "continue_1mz",
    "linear_transform",
    "limit_negative_integer_c",
    "recurrence_residual",
    "evaluate",
]

CROSSOVER_CAP = 10**6


class DegenerateParameterError(ValueError):
    """Parameters sit on an excluded set (for example ``c - a - b`` integral)."""


class NoConvergenceError(ArithmeticError):
    """Successive approximants never agreed to the requested tolerance."""


class CrossoverError(ValueError):
    """The term ratio never settles below one."""


@dataclass(frozen=True)
class Hyp2F1Params:
    """Parameters of 2F1(a, b; c; z); any real or complex scalars."""

    a: Any
    b: Any
    c: Any
    z: Any

    @classmethod
    def parse(cls, a: str, b: str, c: str, z: str) -> "Hyp2F1Params":
        return cls(*(EXACT.number(x) for x in (a, b, c, z)))

    def at(self, prec: Precision) -> "Hyp2F1Params":
        """Same parameters converted to ``prec``."""
        return Hyp2F1Params(*(prec.number(x) for x in (self.a, self.b, self.c, self.z)))

    def shifted(self, da: int = 0, db: int = 0, dc: int = 0) -> "Hyp2F1Params":
        return replace(self, a=self.a + da, b=self.b + db, c=self.c + dc)

    @property
    def mode(self) -> Precision | None:
        return common_mode((self.a, self.b, self.c, self.z))


def _prec(params: Hyp2F1Params, prec: Precision | None) -> Precision:
    if prec is not None:
        return prec
    return params.mode or EXACT


def _numeric(params: Hyp2F1Params, prec: Precision | None) -> Precision:
    """Like :func:`_prec` but never exact (for transcendental work)."""
    p = _prec(params, prec)
    return mp() if p.mode == "exact" else p


def _is_int(x: Any) -> bool:
    if getattr(x, "imag", 0) != 0:
        return False
    r = getattr(x, "real", x)
    return r == int(r)


def _nonpositive_int(x: Any) -> bool:
    return _is_int(x) and getattr(x, "real", x) <= 0


# -- terms ---------------------------------------------------------------------


def term_ratio(params: Hyp2F1Params, n: int, prec: Precision | None = None):
    """``(a+n)(b+n) z / ((c+n)(n+1))``, the factor taking term n to term n+1."""
    p = _prec(params, prec).number
    a, b, c, z = (p(x) for x in (params.a, params.b, params.c, params.z))
    den = (c + n) * (n + 1)
    if den == 0:
        raise PoleError(f"(c)_{n + 1} = 0")
    return (a + n) * (b + n) * z / den


def term(params: Hyp2F1Params, m: int, prec: Precision | None = None):
    """The m-th series term ``(a)_m (b)_m z^m / ((c)_m m!)``."""
    if m < 0:
        raise ValueError("term index must be nonnegative")
    p = _prec(params, prec)
    t = p.number(1)
    for n in range(m):
        t = t * term_ratio(params, n, p)
    return t


def partial_sums(params: Hyp2F1Params, n_max: int, skip: int = 0, prec: Precision | None = None) -> SequenceWindow:
    """``s_n = sum_{m=0}^{n+skip} term(m)`` for ``n = 0 .. n_max``."""
    if n_max < 0 or skip < 0:
        raise ValueError("n_max and skip must be nonnegative")
    p = _prec(params, prec)
    t = p.number(1)
    total = t
    sums = []
    for m in range(n_max + skip + 1):
        if m > 0:
            t = t * term_ratio(params, m - 1, p)
            total = total + t
        if m >= skip:
            sums.append(total)
    return SequenceWindow(tuple(sums), 0, {"skip": skip})


# -- crossover -----------------------------------------------------------------


def _exact(x: Any) -> Fraction | ExactComplex:
    """Exact rational image of a real or complex scalar (binary floats included)."""
    if isinstance(x, ExactComplex):
        return x
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    if isinstance(x, complex) or getattr(x, "imag", 0) != 0:
        return ExactComplex(_exact(x.real), _exact(x.imag))
    man, exp = x.man, x.exp  # mpf
    return Fraction(man) * Fraction(2) ** exp


def _parts(x: Any) -> tuple[Fraction, Fraction]:
    e = _exact(x)
    if isinstance(e, ExactComplex):
        return Fraction(e.real), Fraction(e.imag)
    return e, Fraction(0)


def _pmul(p: list, q: list) -> list:
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        for j, y in enumerate(q):
            out[i + j] += x * y
    return out


def _peval(p: list, n: int) -> Fraction:
    acc = Fraction(0)
    for coef in reversed(p):
        acc = acc * n + coef
    return acc


def _abs2_shift(x: Any) -> list:
    """Coefficients in n of ``|x + n|^2``."""
    r, i = _parts(x)
    return [r * r + i * i, 2 * r, Fraction(1)]


def crossover_index(params: Hyp2F1Params) -> int | None:
    """Smallest n with ``|term_ratio(n')| < 1`` for every ``n' >= n``.

    Returns ``None`` when that already holds from n = 0.  The comparison is
    done exactly on the quartic ``|(c+n)(n+1)|^2 - |(a+n)(b+n)z|^2``, scanning
    integers up to a bound on its largest real root.
    """
    zr, zi = _parts(params.z)
    z2 = zr * zr + zi * zi
    if z2 >= 1:
        raise CrossoverError("term ratio tends to |z| >= 1; no crossover")
    lhs = _pmul(_abs2_shift(params.c), [Fraction(1), Fraction(2), Fraction(1)])
    rhs = [z2 * v for v in _pmul(_abs2_shift(params.a), _abs2_shift(params.b))]
    poly = [x - y for x, y in zip(lhs, rhs)]
    lead = poly[-1]
    bound = 1 + max(abs(v / lead) for v in poly[:-1])
    top = math.ceil(bound)
    if top > CROSSOVER_CAP:
        raise CrossoverError(f"crossover search bound {top} exceeds {CROSSOVER_CAP}")
    last_bad = -1
    for n in range(top + 1):
        if _peval(poly, n) <= 0:
            last_bad = n
    return None if last_bad < 0 else last_bad + 1


# -- classification ------------------------------------------------------------


@dataclass(frozen=True)
class ConvergenceClass:
    kind: str
    detail: str = ""

    KINDS = (
        "terminating",
        "inside_unit_disk",
        "boundary_absolute",
        "boundary_conditional",
        "boundary_divergent",
        "outside_divergent",
    )


def _abs_z_vs_one(z: Any) -> int:
    """Sign of ``|z| - 1``, exact for rationals, within rounding otherwise."""
    mode = common_mode((z,))
    if mode is None or mode.mode == "exact":
        zr, zi = _parts(z)
        d = zr * zr + zi * zi - 1
        return (d > 0) - (d < 0)
    d = abs(z) - 1
    tol = 16 * mode.eps
    if abs(d) <= tol:
        return 0
    return 1 if d > 0 else -1


def classify(params: Hyp2F1Params) -> ConvergenceClass:
    if _nonpositive_int(params.a) or _nonpositive_int(params.b):
        return ConvergenceClass("terminating")
    side = _abs_z_vs_one(params.z)
    if side < 0:
        return ConvergenceClass("inside_unit_disk")
    if side > 0:
        return ConvergenceClass("outside_divergent")
    s = params.a + params.b - params.c
    re_s = getattr(s, "real", s)
    if re_s < 0:
        return ConvergenceClass("boundary_absolute")
    if re_s < 1 and params.z != 1:
        return ConvergenceClass("boundary_conditional")
    return ConvergenceClass("boundary_divergent", f"Re(a+b-c) = {re_s}")


# -- continuation and linear transformations ----------------------------------


@dataclass(frozen=True)
class Continuation:
    """``F = prefactor1 * F(params1) + prefactor2 * F(params2)``."""

    prefactor1: Any
    params1: Hyp2F1Params
    prefactor2: Any
    params2: Hyp2F1Params

    def recombine(self, f1: Any, f2: Any) -> Any:
        return self.prefactor1 * f1 + self.prefactor2 * f2


def continue_1mz(params: Hyp2F1Params, prec: Precision | None = None) -> Continuation:
    """Two-series decomposition in the argument ``1 - z``."""
    P = _numeric(params, prec)
    a, b, c, z = (P.number(x) for x in (params.a, params.b, params.c, params.z))
    s = c - a - b
    if _is_int(s):
        raise DegenerateParameterError("c - a - b is an integer")
    w = 1 - z
    g = lambda x: gamma(x, P)  # noqa: E731
    pre1 = g(c) * g(s) / (g(c - a) * g(c - b))
    pre2 = g(c) * g(-s) / (g(a) * g(b)) * pow_principal(w, s, P)
    return Continuation(pre1, Hyp2F1Params(a, b, 1 - s, w), pre2, Hyp2F1Params(c - a, c - b, s + 1, w))


def linear_transform(params: Hyp2F1Params, which: str, prec: Precision | None = None):
    """``(prefactor, new_params)`` with ``F(params) = prefactor * F(new_params)``.

    ``which`` is ``"LTr0"`` (argument z), ``"LTr1"`` or ``"LTr2"``
    (argument z/(z-1)).
    """
    P = _prec(params, prec)
    a, b, c, z = (P.number(x) for x in (params.a, params.b, params.c, params.z))
    if z == 1:
        raise DegenerateParameterError("linear transformations are singular at z = 1")
    w = 1 - z
    if which == "LTr0":
        return pow_principal(w, c - a - b, P), Hyp2F1Params(c - a, c - b, c, z)
    if which == "LTr1":
        return pow_principal(w, -a, P), Hyp2F1Params(a, c - b, c, z / (z - 1))
    if which == "LTr2":
        return pow_principal(w, -b, P), Hyp2F1Params(c - a, b, c, z / (z - 1))
    raise ValueError(f"unknown linear transformation {which!r}")


def limit_negative_integer_c(params: Hyp2F1Params, prec: Precision | None = None, **eval_kw) -> Any:
    """``lim_{c -> -m} F(a, b; c; z) / Gamma(c)`` for ``c = -m``.

    Equals ``(a)_{m+1} (b)_{m+1} z^{m+1} / (m+1)! * F(a+m+1, b+m+1; m+2; z)``.
    """
    if not _nonpositive_int(params.c):
        raise ValueError("c must be a nonpositive integer")
    m = -int(getattr(params.c, "real", params.c))
    if any(_nonpositive_int(x) and getattr(x, "real", x) >= -m for x in (params.a, params.b)):
        raise DegenerateParameterError("a or b is a nonpositive integer >= c")
    P = _numeric(params, prec)
    a, b, z = (P.number(x) for x in (params.a, params.b, params.z))
    if z == 0:
        return P.number(0)
    pre = P.number(1)
    for i in range(m + 1):
        pre = pre * (a + i) * (b + i) / (i + 1)
    pre = pre * z ** (m + 1)
    inner = evaluate(Hyp2F1Params(a + m + 1, b + m + 1, P.number(m + 2), z), "direct_sum", prec=P, **eval_kw)
    return pre * inner.value


# -- recurrence catalog --------------------------------------------------------

# Each relation is a list of (coefficient(a, b, c, z), (da, db, dc)); the
# residual is sum coefficient * F(a + da, b + db; c + dc; z).  Numbering
# within a family follows the printed order of the relations.

Coef = Callable[[Any, Any, Any, Any], Any]


def _rel(*terms: tuple[Coef, tuple[int, int, int]]) -> tuple:
    return terms


RECURRENCES: dict[str, tuple] = {
    "classical_1": _rel(
        (lambda a, b, c, z: c - a, (-1, 0, 0)),
        (lambda a, b, c, z: 2 * a - c - (a - b) * z, (0, 0, 0)),
        (lambda a, b, c, z: a * (z - 1), (1, 0, 0)),
    ),
    "classical_2": _rel(
        (lambda a, b, c, z: c - b, (0, -1, 0)),
        (lambda a, b, c, z: 2 * b - c - (b - a) * z, (0, 0, 0)),
        (lambda a, b, c, z: b * (z - 1), (0, 1, 0)),
    ),
    "classical_3": _rel(
        (lambda a, b, c, z: c * (1 - c) * (1 - z), (0, 0, -1)),
        (lambda a, b, c, z: c * (c - 1 - (2 * c - a - b - 1) * z), (0, 0, 0)),
        (lambda a, b, c, z: (c - a) * (c - b) * z, (0, 0, 1)),
    ),
    "classical_4": _rel(
        (lambda a, b, c, z: b - a, (0, 0, 0)),
        (lambda a, b, c, z: a, (1, 0, 0)),
        (lambda a, b, c, z: -b, (0, 1, 0)),
    ),
    "classical_5": _rel(
        (lambda a, b, c, z: b - c, (0, -1, 0)),
        (lambda a, b, c, z: c - a - b, (0, 0, 0)),
        (lambda a, b, c, z: a * (1 - z), (1, 0, 0)),
    ),
    "classical_6": _rel(
        (lambda a, b, c, z: c * (a - (c - b) * z), (0, 0, 0)),
        (lambda a, b, c, z: -a * c * (1 - z), (1, 0, 0)),
        (lambda a, b, c, z: (c - a) * (c - b) * z, (0, 0, 1)),
    ),
    "classical_7": _rel(
        (lambda a, b, c, z: 1 - c, (0, 0, -1)),
        (lambda a, b, c, z: c - a - 1, (0, 0, 0)),
        (lambda a, b, c, z: a, (1, 0, 0)),
    ),
    "classical_8": _rel(
        (lambda a, b, c, z: a - c, (-1, 0, 0)),
        (lambda a, b, c, z: c - a - b, (0, 0, 0)),
        (lambda a, b, c, z: b * (1 - z), (0, 1, 0)),
    ),
    "classical_9": _rel(
        (lambda a, b, c, z: a - c, (-1, 0, 0)),
        (lambda a, b, c, z: c - b, (0, -1, 0)),
        (lambda a, b, c, z: (b - a) * (1 - z), (0, 0, 0)),
    ),
    "classical_10": _rel(
        (lambda a, b, c, z: -c, (-1, 0, 0)),
        (lambda a, b, c, z: c * (1 - z), (0, 0, 0)),
        (lambda a, b, c, z: (c - b) * z, (0, 0, 1)),
    ),
    "classical_11": _rel(
        (lambda a, b, c, z: c - a, (-1, 0, 0)),
        (lambda a, b, c, z: -(c - 1) * (1 - z), (0, 0, -1)),
        (lambda a, b, c, z: a - 1 - (c - b - 1) * z, (0, 0, 0)),
    ),
    "classical_12": _rel(
        (lambda a, b, c, z: c * (b - (c - a) * z), (0, 0, 0)),
        (lambda a, b, c, z: -b * c * (1 - z), (0, 1, 0)),
        (lambda a, b, c, z: (c - a) * (c - b) * z, (0, 0, 1)),
    ),
    "classical_13": _rel(
        (lambda a, b, c, z: 1 - c, (0, 0, -1)),
        (lambda a, b, c, z: c - b - 1, (0, 0, 0)),
        (lambda a, b, c, z: b, (0, 1, 0)),
    ),
    "classical_14": _rel(
        (lambda a, b, c, z: -c, (0, -1, 0)),
        (lambda a, b, c, z: c * (1 - z), (0, 0, 0)),
        (lambda a, b, c, z: (c - a) * z, (0, 0, 1)),
    ),
    "classical_15": _rel(
        (lambda a, b, c, z: c - b, (0, -1, 0)),
        (lambda a, b, c, z: -(c - 1) * (1 - z), (0, 0, -1)),
        (lambda a, b, c, z: b - 1 - (c - a - 1) * z, (0, 0, 0)),
    ),
    # all three parameters shifted
    "abc_1": _rel(
        (lambda a, b, c, z: c * (1 - c), (-1, -1, -1)),
        (lambda a, b, c, z: c * (c - 1 - (a + b - 1) * z), (0, 0, 0)),
        (lambda a, b, c, z: a * b * z * (1 - z), (1, 1, 1)),
    ),
    "abc_2": _rel(
        (lambda a, b, c, z: c * (c - a - b * z), (0, 0, 0)),
        (lambda a, b, c, z: -c * (c - a), (-1, 0, 0)),
        (lambda a, b, c, z: a * b * z * (1 - z), (1, 1, 1)),
    ),
    "abc_3": _rel(
        (lambda a, b, c, z: 1 - c, (-1, -1, -1)),
        (lambda a, b, c, z: (a - 1) * (1 - z), (0, 0, 0)),
        (lambda a, b, c, z: c - a, (-1, 0, 0)),
    ),
    "abc_4": _rel(
        (lambda a, b, c, z: c, (1, 0, 0)),
        (lambda a, b, c, z: -c, (0, 0, 0)),
        (lambda a, b, c, z: -b * z, (1, 1, 1)),
    ),
    "abc_5": _rel(
        (lambda a, b, c, z: a * (1 - z), (1, 0, 0)),
        (lambda a, b, c, z: 1 - c, (-1, -1, -1)),
        (lambda a, b, c, z: c - a - 1 - (b - 1) * z, (0, 0, 0)),
    ),
    "abc_6": _rel(
        (lambda a, b, c, z: c * (c - b - a * z), (0, 0, 0)),
        (lambda a, b, c, z: -c * (c - b), (0, -1, 0)),
        (lambda a, b, c, z: a * b * z * (1 - z), (1, 1, 1)),
    ),
    "abc_7": _rel(
        (lambda a, b, c, z: 1 - c, (-1, -1, -1)),
        (lambda a, b, c, z: (b - 1) * (1 - z), (0, 0, 0)),
        (lambda a, b, c, z: c - b, (0, -1, 0)),
    ),
    "abc_8": _rel(
        (lambda a, b, c, z: c, (0, 1, 0)),
        (lambda a, b, c, z: -c, (0, 0, 0)),
        (lambda a, b, c, z: -a * z, (1, 1, 1)),
    ),
    "abc_9": _rel(
        (lambda a, b, c, z: b * (1 - z), (0, 1, 0)),
        (lambda a, b, c, z: 1 - c, (-1, -1, -1)),
        (lambda a, b, c, z: c - b - 1 - (a - 1) * z, (0, 0, 0)),
    ),
    # first and third parameter shifted
    "ac_1": _rel(
        # printed with the opposite sign on the first term, which is not an
        # identity; this is the form that follows from its derivation
        (lambda a, b, c, z: c * (1 - c), (-1, 0, -1)),
        (lambda a, b, c, z: c * (c - 1 + (a - b) * z), (0, 0, 0)),
        (lambda a, b, c, z: -a * (c - b) * z, (1, 0, 1)),
    ),
    "ac_2": _rel(
        (lambda a, b, c, z: c * (c - a + (a - b) * z), (0, 0, 0)),
        (lambda a, b, c, z: -c * (c - a), (-1, 0, 0)),
        (lambda a, b, c, z: -a * (c - b) * z, (1, 0, 1)),
    ),
    "ac_3": _rel(
        (lambda a, b, c, z: 1 - c, (-1, 0, -1)),
        (lambda a, b, c, z: a - 1, (0, 0, 0)),
        (lambda a, b, c, z: c - a, (-1, 0, 0)),
    ),
    "ac_4": _rel(
        (lambda a, b, c, z: c * (1 - z), (1, 0, 0)),
        (lambda a, b, c, z: -c, (0, 0, 0)),
        (lambda a, b, c, z: (c - b) * z, (1, 0, 1)),
    ),
    "ac_5": _rel(
        (lambda a, b, c, z: a * (1 - z), (1, 0, 0)),
        (lambda a, b, c, z: 1 - c, (-1, 0, -1)),
        (lambda a, b, c, z: c - a - 1 + (a - b) * z, (0, 0, 0)),
    ),
    "ac_6": _rel(
        (lambda a, b, c, z: c * (b + (a - b) * z), (0, 0, 0)),
        (lambda a, b, c, z: -b * c * (1 - z), (0, 1, 0)),
        (lambda a, b, c, z: -a * (c - b) * z, (1, 0, 1)),
    ),
    "ac_7": _rel(
        (lambda a, b, c, z: 1 - c, (-1, 0, -1)),
        (lambda a, b, c, z: c - b - 1, (0, 0, 0)),
        (lambda a, b, c, z: b * (1 - z), (0, 1, 0)),
    ),
    "ac_8": _rel(
        (lambda a, b, c, z: c, (0, -1, 0)),
        (lambda a, b, c, z: -c, (0, 0, 0)),
        (lambda a, b, c, z: a * z, (1, 0, 1)),
    ),
    "ac_9": _rel(
        (lambda a, b, c, z: c - b, (0, -1, 0)),
        (lambda a, b, c, z: 1 - c, (-1, 0, -1)),
        (lambda a, b, c, z: b - 1 + (a - b) * z, (0, 0, 0)),
    ),
    # second and third parameter shifted
    "bc_1": _rel(
        (lambda a, b, c, z: c * (1 - c), (0, -1, -1)),
        (lambda a, b, c, z: c * (c - 1 - (a - b) * z), (0, 0, 0)),
        (lambda a, b, c, z: -(c - a) * b * z, (0, 1, 1)),
    ),
    "bc_2": _rel(
        (lambda a, b, c, z: c * ((a - b) * z - a), (0, 0, 0)),
        (lambda a, b, c, z: a * c * (1 - z), (1, 0, 0)),
        (lambda a, b, c, z: (c - a) * b * z, (0, 1, 1)),
    ),
    "bc_3": _rel(
        (lambda a, b, c, z: 1 - c, (0, -1, -1)),
        (lambda a, b, c, z: c - a - 1, (0, 0, 0)),
        (lambda a, b, c, z: a * (1 - z), (1, 0, 0)),
    ),
    "bc_4": _rel(
        (lambda a, b, c, z: c, (-1, 0, 0)),
        (lambda a, b, c, z: -c, (0, 0, 0)),
        (lambda a, b, c, z: b * z, (0, 1, 1)),
    ),
    "bc_5": _rel(
        (lambda a, b, c, z: c - a, (-1, 0, 0)),
        (lambda a, b, c, z: 1 - c, (0, -1, -1)),
        (lambda a, b, c, z: a - 1 - (a - b) * z, (0, 0, 0)),
    ),
    "bc_6": _rel(
        (lambda a, b, c, z: c * (c - b - (a - b) * z), (0, 0, 0)),
        (lambda a, b, c, z: -c * (c - b), (0, -1, 0)),
        (lambda a, b, c, z: -(c - a) * b * z, (0, 1, 1)),
    ),
    "bc_7": _rel(
        (lambda a, b, c, z: 1 - c, (0, -1, -1)),
        (lambda a, b, c, z: b - 1, (0, 0, 0)),
        (lambda a, b, c, z: c - b, (0, -1, 0)),
    ),
    "bc_8": _rel(
        (lambda a, b, c, z: c * (1 - z), (0, 1, 0)),
        (lambda a, b, c, z: -c, (0, 0, 0)),
        (lambda a, b, c, z: (c - a) * z, (0, 1, 1)),
    ),
    "bc_9": _rel(
        (lambda a, b, c, z: b * (1 - z), (0, 1, 0)),
        (lambda a, b, c, z: 1 - c, (0, -1, -1)),
        (lambda a, b, c, z: c - b - 1 - (a - b) * z, (0, 0, 0)),
    ),
}

# relations mapped onto each other by a <-> b, up to an overall factor; the
# two-parameter families are printed in different orders
SYMMETRY_PAIRS = (
    [("classical_1", "classical_2"), ("ac_1", "bc_1")]
    + [(f"abc_{i}", f"abc_{i + 4}") for i in (2, 3, 4, 5)]
    + [(f"ac_{i}", f"bc_{i + 4}") for i in (2, 3, 4, 5)]
    + [(f"ac_{i + 4}", f"bc_{i}") for i in (2, 3, 4, 5)]
)

# the first ac relation exactly as printed, kept for regression tests
PRINTED_AC_1 = _rel(
    (lambda a, b, c, z: c * (1 - c), (-1, 0, -1)),
    (lambda a, b, c, z: -c * (c - 1 + (a - b) * z), (0, 0, 0)),
    (lambda a, b, c, z: a * (c - b) * z, (1, 0, 1)),
)


def recurrence_terms(rid: str | tuple, params: Hyp2F1Params, prec: Precision | None = None, **eval_kw) -> list:
    """The three products ``coefficient * F`` of a relation."""
    rel = RECURRENCES[rid] if isinstance(rid, str) else rid
    if prec is None and _prec(params, None) is EXACT and params.z == 0:
        # every series is 1; keep rational input exact
        return [coef(params.a, params.b, params.c, params.z) for coef, _ in rel]
    P = _numeric(params, prec)
    p = params.at(P)
    out = []
    for coef, (da, db, dc) in rel:
        f = evaluate(p.shifted(da, db, dc), "direct_sum", prec=P, **eval_kw).value
        out.append(coef(p.a, p.b, p.c, p.z) * f)
    return out


def recurrence_residual(rid: str | tuple, params: Hyp2F1Params, prec: Precision | None = None, **eval_kw) -> Any:
    """Left-hand side of a catalog relation; zero up to rounding."""
    t = recurrence_terms(rid, params, prec, **eval_kw)
    return t[0] + t[1] + t[2]


# -- evaluation ----------------------------------------------------------------


@dataclass
class EvalResult:
    value: Any
    diagnostics: dict = field(default_factory=dict)


def _direct(params: Hyp2F1Params, P: Precision, tol: float, max_terms: int) -> EvalResult:
    cls = classify(params)
    if cls.kind == "terminating":
        deg = min(
            -int(getattr(x, "real", x)) for x in (params.a, params.b) if _nonpositive_int(x)
        )
        s = partial_sums(params, deg, 0, P)
        return EvalResult(s.values[-1], {"terms": deg + 1, "class": cls.kind})
    if cls.kind != "inside_unit_disk":
        raise NoConvergenceError(f"direct summation diverges or is too slow ({cls.kind})")
    try:
        start = crossover_index(params) or 0
    except CrossoverError:
        start = 0
    t = P.number(1)
    total = t
    quiet = 0
    for n in range(max_terms):
        t = t * term_ratio(params, n, P)
        total = total + t
        if n >= start and abs(t) <= tol * abs(total):
            quiet += 1
            if quiet >= 3:
                return EvalResult(total, {"terms": n + 2, "class": cls.kind})
        else:
            quiet = 0
    raise NoConvergenceError(f"series not converged after {max_terms} terms")


def _accelerated(params, P, kind, skip, n_sums, tol, max_sums) -> EvalResult:
    if kind not in KINDS:
        raise ValueError(f"unknown transformation kind {kind!r}")
    fixed = n_sums is not None
    count = n_sums if fixed else 12
    best = None
    stale = 0
    while True:
        window = partial_sums(params, count - 1, skip, P)
        path = walk(kind, window, PathSpec.index_constant(0))
        last = path[-1]
        prev = path[-2] if len(path) > 1 else last
        err = abs(last.value - prev.value) / abs(last.value) if last.value != 0 else abs(last.value - prev.value)
        diag = {
            "skip": skip,
            "sums": count,
            "order": last.k,
            "start": last.n,
            "accuracy": err,
            "notes": [r.note for r in path if r.note],
        }
        if fixed or err <= tol:
            return EvalResult(last.value, diag)
        # rounding eventually swamps high orders; stop once the estimate
        # has not improved for a few steps
        if best is None or err < best:
            best, stale = err, 0
        else:
            stale += 1
        if count >= max_sums or stale >= 3:
            raise NoConvergenceError(
                f"{kind} estimate {float(err):.3g} after {count} sums (best {float(best):.3g})"
            )
        count = min(count + 8, max_sums)


def evaluate(
    params: Hyp2F1Params,
    strategy: str = "direct_sum",
    kind: str = "weniger_delta",
    *,
    skip: int | None = None,
    n_sums: int | None = None,
    prec: Precision | None = None,
    tol: float | None = None,
    max_terms: int = 100_000,
    max_sums: int = 200,
) -> EvalResult:
    """Value of 2F1 with diagnostics.

    ``strategy`` is one of ``direct_sum``, ``accelerate``,
    ``skip_then_accelerate`` and ``continue_then_sum``.  Acceleration walks
    the index-constant path from ``n0 = 0``; with ``n_sums`` given exactly
    that many partial sums are used, otherwise the count grows in steps of
    eight until the last two approximants agree to ``tol``, giving up when
    the agreement stops improving or ``max_sums`` is reached.
    """
    P = _numeric(params, prec)
    p = params.at(P)
    if tol is None:
        tol = 10 * P.eps
    if strategy == "direct_sum":
        return _direct(p, P, tol, max_terms)
    if strategy == "accelerate":
        return _accelerated(p, P, kind, skip or 0, n_sums, tol, max_sums)
    if strategy == "skip_then_accelerate":
        if skip is None:
            skip = crossover_index(params) or 0
        return _accelerated(p, P, kind, skip, n_sums, tol, max_sums)
    if strategy == "continue_then_sum":
        cont = continue_1mz(p, P)
        f1 = _direct(cont.params1, P, tol, max_terms)
        f2 = _direct(cont.params2, P, tol, max_terms)
        diag = {"terms": (f1.diagnostics["terms"], f2.diagnostics["terms"])}
        return EvalResult(cont.recombine(f1.value, f2.value), diag)
    raise ValueError(f"unknown strategy {strategy!r}")
