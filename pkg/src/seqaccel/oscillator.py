"""Renormalized perturbation coefficients of the anharmonic oscillator.

The ground-state energy of ``p^2 + x^2 + beta x^(2m)`` is re-expanded in the
renormalized coupling ``kappa``; its coefficients ``c_n`` come from an exact
rational recursion for an auxiliary table ``G_j^(n)``.  Partial sums of the
coefficients, summed with the delta transformation, approximate the
strong-coupling limit ``k_m``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from gmpy2 import lcm, mpq, mpz

from .scalar import Precision, format_sci, mp
from .transforms import weniger_delta

__all__ = [
    "OscCoeffs",
    "K3Approximant",
    "InsufficientCoefficientsError",
    "B_m",
    "renorm_coupling",
    "g_table",
    "coefficients",
    "coefficients_c3",
    "asymptotic_ratio",
    "k3_partial_sums",
    "k3_approximant",
    "export_rational",
    "export_decimal",
]


class InsufficientCoefficientsError(ValueError):
    pass


def B_m(m: int) -> Fraction:
    """``m (2m-1)!! / 2^(m-1)``; ``B_3 = 45/4``."""
    if m < 1:
        raise ValueError("m must be positive")
    dfact = math.prod(range(1, 2 * m, 2))
    return Fraction(m * dfact, 2 ** (m - 1))


def renorm_coupling(kappa: Any, m: int = 3, prec: Precision | None = None) -> Any:
    """``beta = kappa / (B_m (1 - kappa)^((m+1)/2))`` for ``0 <= kappa < 1``."""
    if not 0 <= kappa < 1:
        raise ValueError("kappa must lie in [0, 1)")
    P = prec or mp()
    k = P.number(kappa)
    if k == 0:
        return k
    return k / (P.number(B_m(m)) * P.exp(P.number(Fraction(m + 1, 2)) * P.log(1 - k)))


@dataclass(frozen=True)
class OscCoeffs:
    m: int
    c: tuple  # exact Fractions c_0 .. c_N

    @property
    def N(self) -> int:
        return len(self.c) - 1


@dataclass(frozen=True)
class K3Approximant:
    l: int  # noqa: E741
    n: int
    value: Any


def _g_rows(N: int, m: int):
    """Yield ``(n, numerators, denominator)`` for each level of the G table.

    Level n holds ``G_j^(n)`` for ``j = 0 .. n m`` as integer numerators over a
    common denominator, so the convolution sum becomes integer arithmetic.
    ``G_0^(n)`` is 1 at level 0 and 0 above.
    """
    inv_b = mpq(B_m(m).denominator, B_m(m).numerator)
    nums = [[mpz(1)]]
    dens = [mpz(1)]
    first: list = [None]  # G_1^(k) as rationals, k >= 1
    yield 0, nums[0], dens[0]
    for n in range(1, N + 1):
        top = n * m
        prev, prev_d = nums[n - 1], dens[n - 1]
        # weights of the convolution over a common denominator L
        L = mpz(1)
        for k in range(1, n):
            L = lcm(L, first[k].denominator * dens[n - k])
        w = [None] * n
        for k in range(1, n):
            f = first[k]
            w[k] = f.numerator * (L // (f.denominator * dens[n - k]))
        row = [mpq(0)] * (top + 2)
        # top-down: G_{j+1}^(n) is known when G_j^(n) is formed
        for j in range(top, 0, -1):
            acc = 2 * (j + 1) * (2 * j + 1) * row[j + 1]
            if 0 <= j - m < len(prev):
                acc += inv_b * mpq(prev[j - m], prev_d)
            if 0 <= j - 1 < len(prev):
                acc -= mpq(prev[j - 1], prev_d)
            if n > 1:
                conv = mpz(0)
                for k in range(1, n):
                    level = nums[n - k]
                    if j < len(level):
                        conv += w[k] * level[j]
                acc -= 2 * mpq(conv, L)
            row[j] = acc / (4 * j)
        row = row[: top + 1]
        row[0] = mpq(0)
        D = mpz(1)
        for x in row:
            D = lcm(D, x.denominator)
        nums.append([x.numerator * (D // x.denominator) for x in row])
        dens.append(D)
        first.append(row[1])
        yield n, nums[n], D


def g_table(N: int, m: int = 3) -> list[list[Fraction]]:
    """``G_j^(n)`` for ``n = 0 .. N`` as exact Fractions."""
    return [[Fraction(int(p), int(d)) for p in row] for _, row, d in _g_rows(N, m)]


def coefficients(N: int, m: int = 3) -> OscCoeffs:
    """Exact ``c_0 .. c_N`` with ``c_n = 2 (-1)^(n+1) G_1^(n)`` and ``c_0 = 1``."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    c = [Fraction(1)]
    for n, row, d in _g_rows(N, m):
        if n == 0:
            continue
        c.append(2 * (-1) ** (n + 1) * Fraction(int(row[1]), int(d)))
    return OscCoeffs(m, tuple(c))


def coefficients_c3(N: int) -> OscCoeffs:
    return coefficients(N, 3)


def asymptotic_ratio(n: int, c_n: Any, prec: Precision | None = None) -> Any:
    """``c_n`` divided by its leading large-n asymptotics.

    The asymptotic form is
    ``(-1)^(n+1) sqrt(128) / pi^2 * Gamma(2n + 1/2) * (64 / (45 pi^2))^n``.
    """
    P = prec or mp()
    ctx = P.ctx
    pi2 = ctx.pi**2
    lead = (-1) ** (n + 1) * ctx.sqrt(128) / pi2 * ctx.gamma(2 * n + ctx.mpf(0.5)) * (64 / (45 * pi2)) ** n
    return P.number(c_n) / lead


def k3_partial_sums(coeffs: OscCoeffs, l: int, count: int) -> list:  # noqa: E741
    """Unscaled exact sums ``sum_{nu=0}^{j+l} c_nu`` for ``j = 0 .. count-1``."""
    if l + count > len(coeffs.c):
        raise InsufficientCoefficientsError(f"need c_0 .. c_{l + count - 1}, have c_0 .. c_{coeffs.N}")
    acc = mpq(0)
    out = []
    for nu in range(l + count):
        c = coeffs.c[nu]
        acc += mpq(c.numerator, c.denominator)
        if nu >= l:
            out.append(acc)
    return out


def k3_approximant(l: int, n: int, coeffs: OscCoeffs, prec: Precision | None = None) -> K3Approximant:  # noqa: E741
    """``delta_n^(0)`` of the sums skipping ``l`` leading terms, times ``B_3^(1/4)``.

    The transformation is carried out in exact rational arithmetic: the
    partial sums reach ``10^1000`` in size while their transform is of order
    one, so any fixed working precision short of that is swamped by
    cancellation.  The result is rounded once into ``prec``.
    """
    if coeffs.m != 3:
        raise ValueError("the strong-coupling sums are defined for m = 3")
    if n < 0 or l < 0:
        raise ValueError("l and n must be nonnegative")
    P = prec or mp()
    sums = k3_partial_sums(coeffs, l, n + 2)
    exact = weniger_delta(1, sums, n, 0)
    scale = P.ctx.root(P.number(B_m(3)), 4)
    return K3Approximant(l, n, scale * P.number(exact))


def export_rational(coeffs: OscCoeffs) -> list[str]:
    """``"n p/q"`` lines (``"n p"`` for integers)."""
    out = []
    for n, c in enumerate(coeffs.c):
        text = str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
        out.append(f"{n} {text}")
    return out


def export_decimal(coeffs: OscCoeffs, digits: int = 10) -> list[str]:
    return [f"{n} {format_sci(c, digits)}" for n, c in enumerate(coeffs.c)]
