"""Value comparison semantics shared by the executors.

Filters and aggregations compare exactly; only the claim roots
(eq/not_eq/greater/less) apply the relative numeric tolerance, so tiny
arithmetic noise never flips a verified label.
"""
from __future__ import annotations

from decimal import Decimal

from ..values import Empty, Number, Text, Value

REL_TOL = Decimal("1e-9")


def values_equal(a: Value, b: Value) -> bool:
    """Exact equality: Numbers by magnitude, Text by string.  Empty equals
    only Empty; kinds never cross."""
    if isinstance(a, Number) and isinstance(b, Number):
        return a.magnitude == b.magnitude
    if isinstance(a, Text) and isinstance(b, Text):
        return a.text == b.text
    return isinstance(a, Empty) and isinstance(b, Empty)


def values_less(a: Value, b: Value) -> bool | None:
    """a < b, or None when the pair is incomparable (Empty or mixed kinds).
    Text compares lexicographically."""
    if isinstance(a, Number) and isinstance(b, Number):
        return a.magnitude < b.magnitude
    if isinstance(a, Text) and isinstance(b, Text):
        return a.text < b.text
    return None


def decimals_close(x: Decimal, y: Decimal) -> bool:
    if x == y:
        return True
    return abs(x - y) <= REL_TOL * max(abs(x), abs(y))


def scalars_equal(a: Value, b: Value) -> bool:
    """Claim-root equality: tolerant for Numbers, exact for Text."""
    if isinstance(a, Number) and isinstance(b, Number):
        return decimals_close(a.magnitude, b.magnitude)
    if isinstance(a, Text) and isinstance(b, Text):
        return a.text == b.text
    return isinstance(a, Empty) and isinstance(b, Empty)


def scalars_less(a: Value, b: Value) -> bool:
    """Claim-root strict order; approximately-equal numbers are not less.
    Incomparable pairs are False (the claim simply does not hold)."""
    if isinstance(a, Number) and isinstance(b, Number):
        if decimals_close(a.magnitude, b.magnitude):
            return False
        return a.magnitude < b.magnitude
    if isinstance(a, Text) and isinstance(b, Text):
        return a.text < b.text
    return False


def value_sort_key(v: Value):
    """Sort key for non-Empty cells: Numbers before Text, then by value."""
    if isinstance(v, Number):
        return (0, v.magnitude, "")
    return (1, Decimal(0), v.surface())
