"""Typed cell values and the total string-to-value parser.

Every table cell is one of three variants: Number (exact decimal magnitude
plus an optional unit), Text, or Empty.  Numbers compare by magnitude only;
the raw source string is kept for surface rendering but never participates
in equality.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from decimal import Decimal
from enum import Enum

EMPTY_MARKERS = frozenset({"", "-", "n/a"})
CURRENCY_SYMBOLS = "$€£¥"

# Plain decimal literal, optionally signed, with optional 3-digit grouping.
# Exponent forms ("1e5") deliberately fall through to Text.
_GROUPED = re.compile(r"[+-]?\d{1,3}(?:,\d{3})+(?:\.\d+)?")
_PLAIN = re.compile(r"[+-]?(?:\d+(?:\.\d+)?|\.\d+)")


class Kind(str, Enum):
    NUMBER = "number"
    TEXT = "text"
    EMPTY = "empty"


@dataclass(frozen=True)
class Value:
    pass


@dataclass(frozen=True)
class Number(Value):
    magnitude: Decimal
    unit: str | None = field(default=None, compare=False)
    raw: str | None = field(default=None, compare=False)

    @property
    def kind(self):
        return Kind.NUMBER

    def __str__(self):
        return self.surface()

    def surface(self) -> str:
        """Canonical rendering: no separators, integers without a point."""
        text = format_decimal(self.magnitude)
        if self.unit == "%":
            text += "%"
        return text


@dataclass(frozen=True)
class Text(Value):
    text: str

    @property
    def kind(self):
        return Kind.TEXT

    def __str__(self):
        return self.text

    def surface(self) -> str:
        return self.text


@dataclass(frozen=True)
class Empty(Value):
    @property
    def kind(self):
        return Kind.EMPTY

    def __str__(self):
        return ""

    def surface(self) -> str:
        return ""


EMPTY = Empty()


def format_decimal(d: Decimal) -> str:
    """Canonical decimal string: plain notation, no trailing zeros."""
    text = format(d, "f")
    if "." in text:
        text = text.rstrip("0").rstrip(".")
    return text


def parse_value(raw: str) -> Value:
    """Parse one cell string.  Total: every input yields a Value.

    Blank, "-" and "n/a" (case-insensitive, after stripping) are Empty.
    A decimal literal, optionally with thousands separators, a leading
    currency symbol, or a trailing percent sign, is a Number; the percent
    sign is retained as the unit.  Anything else is Text, stripped.
    """
    stripped = raw.strip()
    if stripped.lower() in EMPTY_MARKERS:
        return EMPTY

    candidate = stripped
    unit = None
    if candidate.endswith("%"):
        candidate = candidate[:-1].rstrip()
        unit = "%"
    if candidate[:1] in CURRENCY_SYMBOLS:
        candidate = candidate[1:].lstrip()

    for pattern in (_GROUPED, _PLAIN):
        if pattern.fullmatch(candidate):
            magnitude = Decimal(candidate.replace(",", ""))
            return Number(magnitude, unit=unit, raw=stripped)
    return Text(stripped)
