"""JavaScript number conversions.

Printed output must match what a JavaScript engine prints, so number
formatting follows the ECMAScript Number-to-String algorithm: shortest
round-trip digits, plain decimal notation for exponents in [-6, 21), and
exponent notation outside that range.
"""

from __future__ import annotations

import math
import re

_DECIMAL = re.compile(r"[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")
_WHITESPACE = " \t\n\r\f\v                 　﻿"


def format_number(x: float) -> str:
    """Render a float exactly the way JavaScript's String() does."""
    if math.isnan(x):
        return "NaN"
    if x == math.inf:
        return "Infinity"
    if x == -math.inf:
        return "-Infinity"
    if x == 0.0:
        return "0"
    sign = "-" if x < 0 else ""
    digits, n = _shortest_digits(abs(x))
    k = len(digits)
    if k <= n <= 21:
        body = digits + "0" * (n - k)
    elif 0 < n <= 21:
        body = digits[:n] + "." + digits[n:]
    elif -6 < n <= 0:
        body = "0." + "0" * (-n) + digits
    else:
        exp = n - 1
        mant = digits[0] + ("." + digits[1:] if k > 1 else "")
        body = f"{mant}e{'+' if exp >= 0 else '-'}{abs(exp)}"
    return sign + body


def _shortest_digits(x: float) -> tuple[str, int]:
    """Digits s and exponent n of x = 0.s * 10**n, with s free of edge zeros."""
    r = repr(x)
    if "e" in r:
        mantissa, exp_text = r.split("e")
        exp = int(exp_text)
    else:
        mantissa, exp = r, 0
    if "." in mantissa:
        whole, frac = mantissa.split(".")
        digits = whole + frac
        point = len(whole)
    else:
        digits = mantissa
        point = len(mantissa)
    stripped = digits.lstrip("0")
    point -= len(digits) - len(stripped)
    digits = stripped.rstrip("0")
    return digits, point + exp


def is_negative_zero(x: float) -> bool:
    return x == 0.0 and math.copysign(1.0, x) < 0


def to_number(text: str) -> float:
    """JavaScript's ToNumber on a string: trimmed numeric literal or NaN."""
    trimmed = text.strip(_WHITESPACE)
    if trimmed == "":
        return 0.0
    sign = 1.0
    body = trimmed
    if body[0] in "+-":
        sign = -1.0 if body[0] == "-" else 1.0
        body = body[1:]
        if body == "":
            return math.nan
    if body == "Infinity":
        return sign * math.inf
    lowered = body.lower()
    try:
        if lowered.startswith("0x") and len(body) > 2 and sign == 1.0 and trimmed == body:
            return float(int(body[2:], 16))
        if lowered.startswith("0o") and len(body) > 2 and sign == 1.0 and trimmed == body:
            return float(int(body[2:], 8))
        if lowered.startswith("0b") and len(body) > 2 and sign == 1.0 and trimmed == body:
            return float(int(body[2:], 2))
    except ValueError:
        return math.nan
    if _DECIMAL.match(body):
        try:
            return sign * float(body)
        except ValueError:
            return math.nan
    return math.nan
