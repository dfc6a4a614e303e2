"""Exact rational wire format: "num/den" strings, decimals rejected."""

from __future__ import annotations

from fractions import Fraction


def parse_rational(text: str | int) -> Fraction:
    """Parse "num/den" or a plain integer literal into an exact Fraction.

    Decimal and scientific notation are rejected: exactness is a contract,
    not a convenience.
    """
    if isinstance(text, int):
        return Fraction(text)
    s = str(text).strip()
    if "." in s or "e" in s.lower():
        raise ValueError(f"decimal literal rejected, use num/den form: {text!r}")
    if "/" in s:
        num, _, den = s.partition("/")
        try:
            return Fraction(int(num), int(den))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad rational literal {text!r}: {exc}") from None
    try:
        return Fraction(int(s))
    except ValueError:
        raise ValueError(f"bad rational literal {text!r}") from None


def format_rational(q: Fraction | int) -> str:
    """Canonical text form: lowest terms, no slash for integers."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"
