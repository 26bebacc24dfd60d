"""Parsing and formatting of exact rationals.

The on-disk and command-line syntax for a rational is ``num/den`` (or a bare
integer). Decimal notation is rejected everywhere so that no value silently
passes through binary floating point on its way into an exact predicate.
"""

from __future__ import annotations

from fractions import Fraction

__all__ = ["parse_rational", "format_rational"]


def parse_rational(text: str) -> Fraction:
    """Parse ``"a/b"`` or ``"a"`` into a ``Fraction``; reject decimals."""
    s = text.strip()
    if not s:
        raise ValueError("empty rational literal")
    if any(c in s for c in ".eE"):
        raise ValueError(f"decimal notation rejected, use num/den: {text!r}")
    parts = s.split("/")
    if len(parts) == 1:
        return Fraction(int(parts[0]))
    if len(parts) == 2:
        return Fraction(int(parts[0]), int(parts[1]))
    raise ValueError(f"malformed rational literal: {text!r}")


def format_rational(q: Fraction) -> str:
    """Canonical ``num/den`` form (denominator always present)."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"
