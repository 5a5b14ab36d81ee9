"""Sequence transformations and their progressively built tables.

Every kernel is written against plain field arithmetic, so the same code
runs on floats, complex numbers, mpmath values and exact rationals.

Table convention: ``T[k, n]`` is the order-``k`` transform whose input
string starts at ``s_n``.  ``T[0, n] == s_n`` for every kind.  Each kind
consumes ``s_n .. s_{n + span(k)}``:

=================  ==========================
aitken             ``2k``
epsilon            ``k``
theta              ``3k/2`` (even k), ``(3k-1)/2 + 1`` (odd k)
iterated_theta     ``3k``
levin_d            ``k + 1``
weniger_delta      ``k + 1``
=================  ==========================
"""

from __future__ import annotations

import math
from fractions import Fraction
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Iterable, Sequence

from .scalar import common_mode

__all__ = [
    "KINDS",
    "Status",
    "BreakdownError",
    "SequenceWindow",
    "TransformTable",
    "span",
    "aitken_iterated",
    "wynn_epsilon",
    "brezinski_theta",
    "iterated_theta",
    "levin_general",
    "weniger_general",
    "levin_d",
    "weniger_delta",
    "delta_remainders",
]

KINDS = ("aitken", "epsilon", "theta", "iterated_theta", "levin_d", "weniger_delta")


class BreakdownError(ArithmeticError):
    """A zero denominator made a transform undefined."""


class Status(Enum):
    VALID = "valid"
    BREAKDOWN = "breakdown"


@dataclass(frozen=True)
class SequenceWindow:
    """Consecutive sequence elements ``s_start, s_start+1, ...``.

    ``meta`` carries bookkeeping such as the number of skipped series terms.
    """

    values: tuple
    start: int = 0
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        if len(self.values) < 1:
            raise ValueError("a window needs at least one element")
        if self.start < 0:
            raise ValueError("start index must be nonnegative")
        object.__setattr__(self, "values", tuple(self.values))
        common_mode(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, n: int) -> Any:
        """Element ``s_n`` by absolute index."""
        i = n - self.start
        if not 0 <= i < len(self.values):
            raise IndexError(f"s_{n} is outside the window")
        return self.values[i]

    @property
    def last(self) -> int:
        return self.start + len(self.values) - 1

    def map(self, fn: Callable[[Any], Any]) -> "SequenceWindow":
        return SequenceWindow(tuple(fn(v) for v in self.values), self.start, self.meta)


def _as_window(seq: SequenceWindow | Iterable[Any]) -> SequenceWindow:
    if isinstance(seq, SequenceWindow):
        return seq
    return SequenceWindow(tuple(seq))


def span(kind: str, k: int) -> int:
    """Number of elements beyond ``s_n`` consumed by ``T[k, n]``."""
    if k == 0:
        return 0
    if kind == "aitken":
        return 2 * k
    if kind == "epsilon":
        return k
    if kind == "theta":
        return 3 * k // 2 if k % 2 == 0 else 3 * (k - 1) // 2 + 1
    if kind == "iterated_theta":
        return 3 * k
    if kind in ("levin_d", "weniger_delta"):
        return k + 1
    raise ValueError(f"unknown transformation kind {kind!r}")


def _zero(x: Any) -> bool:
    return x == 0


# -- Levin-type kernels -------------------------------------------------------


def delta_remainders(s: SequenceWindow) -> dict[int, Any]:
    """``omega_n = s_{n+1} - s_n`` for every index where it is defined."""
    return {n: s[n + 1] - s[n] for n in range(s.start, s.last)}


def _levin_type(weight: Callable[[Any, int], Any], zeta, s, omega, k: int, n: int):
    if k < 0:
        raise ValueError("order must be nonnegative")
    if k == 0:
        # the single-term ratio collapses; only omega_n must be nonzero
        if _zero(omega[n]):
            raise BreakdownError(f"omega_{n} = 0")
        return s[n]
    num = den = None
    base = zeta + n + k
    # rational zeta keeps the weights exact; they are rounded once, into the
    # mode of the sequence
    exact = isinstance(zeta, (int, Fraction))
    mode = common_mode([s[n], omega[n]]) if exact else None
    if mode is None:
        lift = lambda x: x  # noqa: E731
    elif mode.mode == "exact":
        # keep gmpy2 rationals in gmpy2 arithmetic
        lift = type(s[n]) if not isinstance(s[n], Fraction) else (lambda x: x)
    else:
        lift = mode.number
    for j in range(k + 1):
        w_j = omega[n + j]
        if _zero(w_j):
            raise BreakdownError(f"omega_{n + j} = 0")
        if exact:
            c = lift(Fraction((-1) ** j * math.comb(k, j) * weight(zeta + n + j, k - 1), weight(base, k - 1)))
        else:
            c = (-1) ** j * math.comb(k, j) * weight(zeta + n + j, k - 1) / weight(base, k - 1)
        term = c / w_j
        num = term * s[n + j] if num is None else num + term * s[n + j]
        den = term if den is None else den + term
    if _zero(den):
        raise BreakdownError(f"vanishing denominator sum at k={k}, n={n}")
    return num / den


def _power(x, m: int):
    return x**m


def _rising(x, m: int):
    result = x * 0 + 1
    for i in range(m):
        result = result * (x + i)
    return result


def _zeta_like(zeta, s: SequenceWindow):
    if zeta is None:
        zeta = 1
    if zeta <= 0:
        raise ValueError("zeta must be positive")
    return zeta


def levin_general(zeta, s, omega, k: int, n: int):
    """Levin's transformation with explicit remainder estimates.

    ``omega`` maps index to estimate (a dict, list or window).
    Raises :class:`BreakdownError` for a zero estimate or a zero
    denominator sum.
    """
    s = _as_window(s)
    return _levin_type(_power, _zeta_like(zeta, s), s, omega, k, n)


def weniger_general(zeta, s, omega, k: int, n: int):
    """Factorial-series analogue of :func:`levin_general` (Pochhammer weights)."""
    s = _as_window(s)
    return _levin_type(_rising, _zeta_like(zeta, s), s, omega, k, n)


def levin_d(zeta, s, k: int, n: int):
    """Levin d transform, ``omega_n = Delta s_n``; needs ``s_{n+k+1}``."""
    s = _as_window(s)
    if n + k + 1 > s.last:
        raise IndexError(f"d_{k}^({n}) needs s_{n + k + 1}")
    return levin_general(zeta, s, delta_remainders(s), k, n)


def weniger_delta(zeta, s, k: int, n: int):
    """Weniger delta transform, ``omega_n = Delta s_n``; needs ``s_{n+k+1}``."""
    s = _as_window(s)
    if n + k + 1 > s.last:
        raise IndexError(f"delta_{k}^({n}) needs s_{n + k + 1}")
    return weniger_general(zeta, s, delta_remainders(s), k, n)


# -- tables -------------------------------------------------------------------


class TransformTable:
    """Table ``T[k, n]`` of one transformation kind, grown one element at a time.

    Each :meth:`append` adds ``s_m`` and fills the anti-diagonal of entries
    whose last consumed element is ``s_m``.  Entries hit by a zero
    denominator, and every entry depending on them, are marked
    :attr:`Status.BREAKDOWN` instead of aborting the table.
    """

    def __init__(self, kind: str, start: int = 0, zeta=1):
        if kind not in KINDS:
            raise ValueError(f"unknown transformation kind {kind!r}")
        self.kind = kind
        self.start = start
        self.zeta = zeta
        self.s: list = []
        self._values: dict[tuple[int, int], Any] = {}
        self._status: dict[tuple[int, int], Status] = {}
        self._extend = getattr(self, f"_extend_{kind}")

    @classmethod
    def build(cls, kind: str, seq, zeta=1) -> "TransformTable":
        window = _as_window(seq)
        table = cls(kind, window.start, zeta)
        table.extend(window.values)
        return table

    # -- access ----------------------------------------------------------

    @property
    def last(self) -> int:
        """Absolute index of the newest element."""
        return self.start + len(self.s) - 1

    def __contains__(self, key: tuple[int, int]) -> bool:
        return key in self._status

    def status(self, k: int, n: int) -> Status:
        return self._status[k, n]

    def is_valid(self, k: int, n: int) -> bool:
        return self._status.get((k, n)) is Status.VALID

    def __getitem__(self, key: tuple[int, int]):
        st = self._status.get(key)
        if st is None:
            raise KeyError(f"{self.kind} entry {key} not computed")
        if st is Status.BREAKDOWN:
            raise BreakdownError(f"{self.kind} entry {key} broke down")
        return self._values[key]

    def entries(self):
        """``((k, n), value)`` for every valid entry."""
        return [(key, self._values[key]) for key, st in self._status.items() if st is Status.VALID]

    def auxiliary(self, k: int) -> bool:
        """Odd epsilon/theta columns are intermediate quantities."""
        return self.kind in ("epsilon", "theta") and k % 2 == 1

    # -- growth ----------------------------------------------------------

    def extend(self, values: Iterable[Any]) -> None:
        for v in values:
            self.append(v)

    def append(self, value) -> None:
        if self.s:
            common_mode((self.s[0], value))
        self.s.append(value)
        m = self.last
        self._set(0, m, value)
        self._extend(m)

    def _set(self, k: int, n: int, value) -> None:
        self._values[k, n] = value
        self._status[k, n] = Status.VALID

    def _fail(self, k: int, n: int) -> None:
        self._values[k, n] = None
        self._status[k, n] = Status.BREAKDOWN

    def _get(self, k: int, n: int):
        """Entry value or ``None`` (breakdown); boundary ``k = -1`` is zero."""
        if k == -1:
            return 0
        return self._values[k, n]

    def _compute(self, k: int, n: int, fn: Callable[..., Any], *deps) -> None:
        args = [self._get(kk, nn) for kk, nn in deps]
        if any(a is None for a in args):
            self._fail(k, n)
            return
        try:
            value = fn(*args)
        except (ZeroDivisionError, BreakdownError):
            self._fail(k, n)
            return
        if value is None:
            self._fail(k, n)
        else:
            self._set(k, n, value)

    # kind-specific anti-diagonal fills; m is the index of the newest element

    def _extend_aitken(self, m: int) -> None:
        k = 1
        while m - 2 * k >= self.start:
            n = m - 2 * k
            self._compute(k, n, _aitken_step, (k - 1, n), (k - 1, n + 1), (k - 1, n + 2))
            k += 1

    def _extend_epsilon(self, m: int) -> None:
        for k in range(1, m - self.start + 1):
            n = m - k
            self._compute(k, n, _epsilon_step, (k - 2, n + 1), (k - 1, n), (k - 1, n + 1))

    def _extend_theta(self, m: int) -> None:
        k = 1
        while m - span("theta", k) >= self.start:
            n = m - span("theta", k)
            if k % 2 == 1:
                self._compute(k, n, _epsilon_step, (k - 2, n + 1), (k - 1, n), (k - 1, n + 1))
            else:
                deps = ((k - 2, n + 1), (k - 2, n + 2), (k - 1, n), (k - 1, n + 1), (k - 1, n + 2))
                self._compute(k, n, _theta_even_step, *deps)
            k += 1

    def _extend_iterated_theta(self, m: int) -> None:
        k = 1
        while m - 3 * k >= self.start:
            n = m - 3 * k
            deps = [(k - 1, n + i) for i in range(4)]
            self._compute(k, n, _theta_iter_step, *deps)
            k += 1

    def _extend_levin(self, m: int, kernel) -> None:
        if m - 1 < self.start:
            return
        window = SequenceWindow(tuple(self.s), self.start)
        omega = delta_remainders(window)
        for k in range(1, m - self.start):
            n = m - k - 1
            try:
                self._set(k, n, kernel(self.zeta, window, omega, k, n))
            except (ZeroDivisionError, BreakdownError):
                self._fail(k, n)

    def _extend_levin_d(self, m: int) -> None:
        self._extend_levin(m, levin_general)

    def _extend_weniger_delta(self, m: int) -> None:
        self._extend_levin(m, weniger_general)


def _aitken_step(a0, a1, a2):
    d2 = a2 - 2 * a1 + a0
    if _zero(d2):
        return None
    d1 = a1 - a0
    return a0 - d1 * d1 / d2


def _epsilon_step(prev2, e0, e1):
    d = e1 - e0
    if _zero(d):
        return None
    return prev2 + 1 / d


def _theta_even_step(t0_1, t0_2, t1_0, t1_1, t1_2):
    # theta_{2k+2}^(n) = theta_{2k}^(n+1)
    #   + Delta theta_{2k}^(n+1) * Delta theta_{2k+1}^(n+1) / Delta^2 theta_{2k+1}^(n)
    d2 = t1_2 - 2 * t1_1 + t1_0
    if _zero(d2):
        return None
    return t0_1 + (t0_2 - t0_1) * (t1_2 - t1_1) / d2


def _theta_iter_step(j0, j1, j2, j3):
    d0, d1, d2 = j1 - j0, j2 - j1, j3 - j2
    dd0, dd1 = d1 - d0, d2 - d1
    den = d2 * dd0 - d0 * dd1
    if _zero(den):
        return None
    return j1 - d0 * d1 * dd1 / den


# -- whole-table convenience wrappers ------------------------------------------


def aitken_iterated(window) -> TransformTable:
    """Iterated Aitken Delta^2 table."""
    return TransformTable.build("aitken", window)


def wynn_epsilon(window) -> TransformTable:
    """Wynn epsilon table; odd columns are auxiliary."""
    return TransformTable.build("epsilon", window)


def brezinski_theta(window) -> TransformTable:
    """Brezinski theta table; odd columns are auxiliary."""
    return TransformTable.build("theta", window)


def iterated_theta(window) -> TransformTable:
    """Table of the iterated closed-form theta_2 transformation."""
    return TransformTable.build("iterated_theta", window)


def levin_d_table(window, zeta=1) -> TransformTable:
    return TransformTable.build("levin_d", window, zeta)


def weniger_delta_table(window, zeta=1) -> TransformTable:
    return TransformTable.build("weniger_delta", window, zeta)
