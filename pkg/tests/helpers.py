"""Digit-agreement helpers shared by the test modules."""

from __future__ import annotations

import re
from decimal import Decimal
from typing import Any

from seqaccel.scalar import to_decimal

_CPLX = re.compile(r"^([+-]?[\d.]+(?:e[+-]?\d+)?)([+-][\d.]+(?:e[+-]?\d+)?)i$")


def _parts(printed: str) -> list[str]:
    m = _CPLX.match(printed)
    return [m.group(1), m.group(2)] if m else [printed]


def _sig_digits(text: str) -> int:
    mant = text.split("e")[0].lstrip("+-").replace(".", "").lstrip("0")
    return len(mant)


def _agrees(x: Any, text: str, sig: int | None) -> bool:
    d = Decimal(text)
    if sig is None:
        # half a unit in the last printed place
        quantum = Decimal(1).scaleb(d.as_tuple().exponent)
    else:
        quantum = Decimal(1).scaleb(d.adjusted() - sig + 1)
    return abs(to_decimal(x, 40) - d) <= quantum / 2


def agrees(x: Any, printed: str, sig: int | None = None) -> bool:
    """``x`` rounds to ``printed`` at its last printed place, or at ``sig`` digits.

    Complex ``re+imi`` strings compare both parts.
    """
    parts = _parts(printed)
    if len(parts) == 2:
        return _agrees(x.real, parts[0], sig) and _agrees(x.imag, parts[1], sig)
    return _agrees(x, parts[0], sig)


def digits_of_agreement(x: Any, printed: str) -> int:
    """Largest significant-digit count at which ``x`` agrees with ``printed``."""
    top = max(_sig_digits(p) for p in _parts(printed))
    for sig in range(top, 0, -1):
        if agrees(x, printed, sig):
            return sig
    return 0
