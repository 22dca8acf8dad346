"""Calendar quarters with ordered arithmetic."""
from __future__ import annotations

import re
from dataclasses import dataclass

from .exceptions import DataError

_QUARTER_RE = re.compile(r"^\s*(\d{4})\s*[Qq:]\s*([1-4])\s*$")


@dataclass(frozen=True, order=True)
class Quarter:
    year: int
    q: int

    def __post_init__(self):
        if self.q not in (1, 2, 3, 4):
            raise DataError(f"quarter index must be 1..4, got {self.q}")

    @classmethod
    def parse(cls, text: str) -> "Quarter":
        """Parse ``YYYYQn`` (``YYYY:n`` is accepted too)."""
        m = _QUARTER_RE.match(str(text))
        if m is None:
            raise DataError(f"malformed quarter {text!r}, expected YYYYQn")
        return cls(int(m.group(1)), int(m.group(2)))

    @classmethod
    def from_ordinal(cls, n: int) -> "Quarter":
        year, idx = divmod(n, 4)
        return cls(year, idx + 1)

    @property
    def ordinal(self) -> int:
        return 4 * self.year + (self.q - 1)

    def __add__(self, n: int) -> "Quarter":
        if not isinstance(n, int):
            return NotImplemented
        return Quarter.from_ordinal(self.ordinal + n)

    def __sub__(self, other):
        if isinstance(other, Quarter):
            return self.ordinal - other.ordinal
        if isinstance(other, int):
            return Quarter.from_ordinal(self.ordinal - other)
        return NotImplemented

    def succ(self) -> "Quarter":
        return self + 1

    def __str__(self) -> str:
        return f"{self.year}Q{self.q}"

    def __repr__(self) -> str:
        return f"Quarter({self})"


def as_quarter(value) -> Quarter:
    return value if isinstance(value, Quarter) else Quarter.parse(value)


def distance(a: Quarter, b: Quarter) -> int:
    """Number of quarters from ``a`` to ``b`` (negative if ``b`` precedes ``a``)."""
    return b.ordinal - a.ordinal


def quarter_range(first: Quarter, last: Quarter) -> list[Quarter]:
    """Inclusive range of quarters."""
    return [Quarter.from_ordinal(n) for n in range(first.ordinal, last.ordinal + 1)]
