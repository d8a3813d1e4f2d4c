"""Currency amounts as integer cents, rendered as decimal strings at boundaries."""

from __future__ import annotations

import re

_PRICE_RE = re.compile(r"^-?\d+(\.\d{1,2})?$")


def cents_from_str(text: str) -> int:
    """Parse a decimal currency string ("54.9", "54.90", "-30") into cents."""
    text = text.strip()
    if not _PRICE_RE.match(text):
        raise ValueError(f"not a currency amount: {text!r}")
    negative = text.startswith("-")
    if negative:
        text = text[1:]
    if "." in text:
        whole, frac = text.split(".")
        frac = frac.ljust(2, "0")
    else:
        whole, frac = text, "00"
    cents = int(whole) * 100 + int(frac)
    return -cents if negative else cents


def format_cents(cents: int) -> str:
    """Render cents as a plain decimal string with two places ("54.90")."""
    sign = "-" if cents < 0 else ""
    cents = abs(cents)
    return f"{sign}{cents // 100}.{cents % 100:02d}"
