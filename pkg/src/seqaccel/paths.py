"""Paths through transformation tables and highest-order selectors."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .transforms import KINDS, SequenceWindow, TransformTable, span, _as_window

__all__ = [
    "PathSpec",
    "ApproximantRef",
    "EmptyPathError",
    "highest_order",
    "staircase_pade",
    "walk",
    "consumed",
]


class EmptyPathError(ValueError):
    """No valid table entry lies on the requested path."""


@dataclass(frozen=True)
class PathSpec:
    """Order-constant (fixed ``k``) or index-constant (fixed ``n0``) traversal."""

    kind: str
    value: int = 0

    def __post_init__(self) -> None:
        if self.kind not in ("order", "index"):
            raise ValueError("path kind must be 'order' or 'index'")
        if self.value < 0:
            raise ValueError("path parameter must be nonnegative")

    @classmethod
    def order_constant(cls, k: int) -> "PathSpec":
        return cls("order", k)

    @classmethod
    def index_constant(cls, n0: int = 0) -> "PathSpec":
        return cls("index", n0)

    @classmethod
    def parse(cls, text: str) -> "PathSpec":
        """``"index:N0"`` or ``"order:K"``."""
        kind, _, num = text.partition(":")
        if kind not in ("index", "order") or not num.strip().isdigit():
            raise ValueError(f"bad path {text!r}; expected index:N0 or order:K")
        return cls(kind, int(num))

    def __str__(self) -> str:
        return f"{self.kind}:{self.value}"


@dataclass(frozen=True)
class ApproximantRef:
    kind: str
    k: int
    n: int
    value: Any
    inputs: range
    # m is the last sequence index available when the entry was emitted
    m: int | None = None
    note: str = field(default="", compare=False)


def consumed(kind: str, k: int, n: int) -> range:
    """Indices of the sequence elements entering ``T[k, n]``.

    Levin-type entries also consume ``s_{n+k+1}`` through the remainder
    estimate ``omega_{n+k} = Delta s_{n+k}``.
    """
    if kind in ("levin_d", "weniger_delta"):
        return range(n, n + k + 2)
    return range(n, n + span(kind, k) + 1)


def highest_order(kind: str, m: int) -> tuple[int, int]:
    """Entry of highest order computable from ``s_0 .. s_m``.

    For the Levin-type kinds the last row of a table built from
    ``s_0 .. s_m`` is ``T[m - 1, 0]``; ``m = 0`` gives ``(0, 0)``.
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    if kind == "epsilon":
        return 2 * (m // 2), m - 2 * (m // 2)
    if kind == "aitken":
        return m // 2, m - 2 * (m // 2)
    if kind == "theta":
        return 2 * (m // 3), m - 3 * (m // 3)
    if kind == "iterated_theta":
        return m // 3, m - 3 * (m // 3)
    if kind in ("levin_d", "weniger_delta"):
        return max(m - 1, 0), 0
    raise ValueError(f"unknown transformation kind {kind!r}")


def staircase_pade(m: int) -> tuple[int, int]:
    """Padé degrees ``[m - m//2 / m//2]`` of the staircase sequence."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    return m - m // 2, m // 2


def _index_candidates(kind: str, n0: int, m: int):
    """Entries whose last input is ``s_m``, highest order first.

    The first candidate is the selector's choice for ``s_{n0} .. s_m``; the
    rest are the lower orders on the same anti-diagonal, used as fallbacks.
    """
    k0, shift = highest_order(kind, m - n0)
    if kind in ("levin_d", "weniger_delta"):
        if m == n0:
            return [(0, n0)]
        return [(k, m - k - 1) for k in range(k0, -1, -1) if m - k - 1 >= n0]
    out = []
    for k in range(k0, -1, -1):
        if kind in ("epsilon", "theta") and k % 2 == 1:
            continue
        n = m - span(kind, k)
        if n >= n0:
            out.append((k, n))
    return out


def walk(kind: str, window: SequenceWindow | Any, spec: PathSpec) -> list[ApproximantRef]:
    """Approximants along ``spec`` in the order new elements arrive.

    Index-constant paths emit, for each prefix ``s_{n0} .. s_m``, the entry
    named by :func:`highest_order` applied to that prefix.  A broken-down
    entry is replaced by the next lower valid order using the same inputs,
    with a note.  Order-constant paths emit ``T[k, n]`` for ``n = n0,
    n0 + 1, ...`` until the inputs run out.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown transformation kind {kind!r}")
    window = _as_window(window)
    table = TransformTable.build(kind, window)
    out: list[ApproximantRef] = []
    if spec.kind == "order":
        k = spec.value
        n = window.start
        while n + span(kind, k) <= window.last:
            if table.is_valid(k, n):
                out.append(ApproximantRef(kind, k, n, table[k, n], consumed(kind, k, n), n + span(kind, k)))
            n += 1
    else:
        n0 = spec.value
        if n0 < window.start:
            raise ValueError("index-constant start precedes the window")
        for m in range(n0, window.last + 1):
            cands = _index_candidates(kind, n0, m)
            k0, n_sel = cands[0]
            for k, n in cands:
                if table.is_valid(k, n):
                    note = "" if (k, n) == (k0, n_sel) else f"breakdown at ({k0}, {n_sel})"
                    used = consumed(kind, k, n) if m > n0 else range(n0, n0 + 1)
                    out.append(ApproximantRef(kind, k, n, table[k, n], used, m, note))
                    break
    if not out:
        raise EmptyPathError(f"no valid {kind} entry on path {spec}")
    return out
