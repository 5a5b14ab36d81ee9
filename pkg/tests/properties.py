"""Randomized property checks.

Each ``check_*`` draws one case from a ``random.Random`` and asserts the
property; it returns False when the drawn case is degenerate (a breakdown
or a singular oracle system) and was skipped.  The hypothesis tests feed
them ``st.randoms()``; the acceptance suite runs them 1000 times each.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

from seqaccel.hyp2f1 import Hyp2F1Params, partial_sums, term, term_ratio
from seqaccel.paths import PathSpec, consumed, highest_order, walk
from seqaccel.transforms import (
    KINDS,
    BreakdownError,
    TransformTable,
    levin_d,
    levin_general,
    span,
    weniger_delta,
    weniger_general,
)


def _frac(rng: random.Random, lo: int = -9, hi: int = 9, den: int = 7, nonzero: bool = False) -> Fraction:
    while True:
        x = Fraction(rng.randint(lo * den, hi * den), rng.randint(1, den))
        if x or not nonzero:
            return x


def _rising(x, m: int):
    out = Fraction(1)
    for i in range(m):
        out *= x + i
    return out


# -- quasi-linearity ---------------------------------------------------------------


def check_quasi_linearity(rng: random.Random) -> bool:
    """``T(a s + b) = a T(s) + b`` entrywise, breakdowns included."""
    kind = rng.choice(KINDS)
    size = rng.randint(3, 7)
    s = [_frac(rng) for _ in range(size)]
    a, b = _frac(rng, nonzero=True), _frac(rng)
    t1 = TransformTable.build(kind, s)
    t2 = TransformTable.build(kind, [a * x + b for x in s])
    for (k, n), v in t1.entries():
        assert t2.is_valid(k, n), (kind, k, n)
        if t1.auxiliary(k):
            continue
        assert t2[k, n] == a * v + b, (kind, k, n)
    assert len(t1.entries()) == len(t2.entries())
    return True


# -- model sequences ---------------------------------------------------------------


def check_model_exactness(rng: random.Random) -> bool:
    """Aitken, Levin and Weniger return the limit of their model sequences."""
    which = rng.choice(("aitken", "levin", "weniger", "levin_d", "weniger_delta"))
    s = _frac(rng)
    if which == "aitken":
        # s_n = s + c q^n is exact for A_1
        c, q = _frac(rng, nonzero=True), _frac(rng, -3, 3, 5, nonzero=True)
        if q == 1:
            return False
        seq = [s + c * q**n for n in range(6)]
        table = TransformTable.build("aitken", seq)
        n = rng.randint(0, 3)
        assert table[1, n] == s
        return True
    k = rng.randint(1, 5)
    cs = [_frac(rng, nonzero=(j == 0)) for j in range(k)]
    zeta = rng.randint(1, 4)
    if which in ("levin", "weniger"):
        # s_n = s + omega_n * sum_j c_j / g_j(zeta + n), omega arbitrary
        g = (lambda x, j: x**j) if which == "levin" else _rising
        omega = [_frac(rng, nonzero=True) for _ in range(k + 1)]
        seq = [s + omega[n] * sum(c / g(zeta + n, j) for j, c in enumerate(cs)) for n in range(k + 1)]
        fn = levin_general if which == "levin" else weniger_general
        try:
            value = fn(zeta, seq, omega, k, 0)
        except BreakdownError:
            # e.g. k = 1 with omega_0 = omega_1: the transform is undefined
            return False
        assert value == s
        return True
    # remainder r_n = (Delta s_n) h(n), h(n) = sum_j c_j / g_j(zeta + n):
    # r_{n+1} = r_n (1 + 1/h(n))
    g = (lambda x, j: x**j) if which == "levin_d" else _rising
    r = _frac(rng, nonzero=True)
    seq = []
    for n in range(k + 2):
        seq.append(s + r)
        h = sum(c / g(zeta + n, j) for j, c in enumerate(cs))
        if h == 0 or h == -1:
            return False
        r = r * (1 + 1 / h)
    fn = levin_d if which == "levin_d" else weniger_delta
    try:
        assert fn(zeta, seq, k, 0) == s
    except BreakdownError:
        return False
    return True


# -- epsilon / Pade ----------------------------------------------------------------


def _solve(A: list[list[Fraction]], b: list[Fraction]) -> list[Fraction] | None:
    n = len(b)
    M = [row[:] + [rhs] for row, rhs in zip(A, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col] / M[col][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [M[i][n] / M[i][i] for i in range(n)]


def pade_value(coef: list[Fraction], L: int, M: int, x: Fraction) -> Fraction | None:
    """``[L/M](x)`` from the linear system for the denominator ``1 + q_1 x + ...``."""
    if M == 0:
        return sum(c * x**j for j, c in enumerate(coef[: L + 1]))
    a = lambda j: coef[j] if j >= 0 else Fraction(0)  # noqa: E731
    A = [[a(L + i - j) for j in range(1, M + 1)] for i in range(1, M + 1)]
    q = _solve(A, [-a(L + i) for i in range(1, M + 1)])
    if q is None:
        return None
    q = [Fraction(1), *q]
    p = [sum(q[j] * a(i - j) for j in range(min(i, M) + 1)) for i in range(L + 1)]
    den = sum(qj * x**j for j, qj in enumerate(q))
    if den == 0:
        return None
    return sum(pi * x**i for i, pi in enumerate(p)) / den


def check_epsilon_pade(rng: random.Random) -> bool:
    """``eps_{2k}^{(n)} = [n+k / k]`` at the point where the partial sums are taken."""
    size = rng.randint(3, 8)
    coef = [_frac(rng, nonzero=True) for _ in range(size)]
    x = _frac(rng, -2, 2, 5, nonzero=True)
    sums, acc = [], Fraction(0)
    for j, c in enumerate(coef):
        acc += c * x**j
        sums.append(acc)
    table = TransformTable.build("epsilon", sums)
    k = rng.randint(0, (size - 1) // 2)
    n = rng.randint(0, size - 1 - 2 * k)
    expect = pade_value(coef, n + k, k, x)
    if expect is None or not table.is_valid(2 * k, n):
        return False
    assert table[2 * k, n] == expect, (k, n)
    return True


# -- accuracy through order --------------------------------------------------------


def check_accuracy_through_order(rng: random.Random) -> bool:
    """``|f(z) - T_k^(n)| / |z|^(k+n+2)`` stays bounded as ``z -> 0``."""
    kind = rng.choice(("levin_d", "weniger_delta"))
    k, n = rng.randint(1, 4), rng.randint(0, 2)
    degree = k + n + 8
    coef = [_frac(rng, nonzero=True) for _ in range(degree + 1)]
    fn = levin_d if kind == "levin_d" else weniger_delta
    ratios = []
    for e in range(1, 7):
        z = Fraction(1, 10**e)
        f = sum(c * z**j for j, c in enumerate(coef))
        sums, acc = [], Fraction(0)
        for j in range(n + k + 2):
            acc += coef[j] * z**j
            sums.append(acc)
        try:
            t = fn(1, sums, k, n)
        except BreakdownError:
            return False
        ratios.append(abs(f - t) / z ** (k + n + 2))
    # z = 1/10 .. 1/10^6; an error one order lower would grow the ratio
    # tenfold per step, while a bounded ratio settles to a constant
    tiny = Fraction(1, 10**40)
    assert ratios[5] <= 2 * ratios[4] + tiny, [float(r) for r in ratios]
    assert ratios[4] <= 2 * ratios[3] + tiny, [float(r) for r in ratios]
    return True


# -- term ratio --------------------------------------------------------------------


def check_term_ratio_law(rng: random.Random) -> bool:
    """``t_{m+1} = t_m (a+m)(b+m) z / ((c+m)(m+1))`` and ``s_m - s_{m-1} = t_m``."""
    a, b, z = _frac(rng), _frac(rng), _frac(rng, -2, 2)
    c = _frac(rng)
    while c <= 0 and c.denominator == 1:
        c = _frac(rng)
    p = Hyp2F1Params(a, b, c, z)
    m = rng.randint(0, 12)
    expect = (a + m) * (b + m) * z / ((c + m) * (m + 1))
    assert term_ratio(p, m) == expect
    assert term(p, m + 1) == term(p, m) * expect
    w = partial_sums(p, m + 1)
    assert w[m + 1] - w[m] == term(p, m + 1)
    assert math.isclose(float(term(p, 0)), 1.0)
    return True


# -- selector bookkeeping ----------------------------------------------------------


def check_selector_bookkeeping(rng: random.Random) -> bool:
    """Highest-order entries consume exactly ``s_{n0} .. s_m``."""
    kind = rng.choice(KINDS)
    m = rng.randint(0, 40)
    k, n = highest_order(kind, m)
    if kind in ("levin_d", "weniger_delta"):
        if m >= 1:
            assert consumed(kind, k, n) == range(0, m + 1)
    else:
        assert n + span(kind, k) == m
        step = 2 if kind in ("epsilon", "theta") else 1
        assert span(kind, k + step) > m
        if kind in ("epsilon", "theta"):
            assert k % 2 == 0
    # a path over a random window: every emitted entry ends at its s_m
    n0 = rng.randint(0, 3)
    size = rng.randint(3, 9)
    seq = [Fraction(rng.randint(1, 50), rng.randint(1, 9)) for _ in range(n0 + size)]
    refs = walk(kind, seq, PathSpec.index_constant(n0))
    assert [r.m for r in refs] == list(range(n0, n0 + size))
    for r in refs:
        assert r.inputs.start >= n0 and r.inputs.stop - 1 == r.m
    return True


CHECKS = {
    "quasi-linearity": check_quasi_linearity,
    "model exactness": check_model_exactness,
    "epsilon = Pade": check_epsilon_pade,
    "accuracy through order": check_accuracy_through_order,
    "term-ratio law": check_term_ratio_law,
    "selector bookkeeping": check_selector_bookkeeping,
}
