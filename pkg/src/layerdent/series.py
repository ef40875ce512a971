"""Truncated power-series arithmetic on coefficient lists.

A series is a sequence ``[s0, s1, ..., sn]``.  Every helper uses only
``+ - * /`` so it works for floats and for exact rationals alike.
"""

from __future__ import annotations

from collections.abc import Sequence
from typing import Any

Series = Sequence[Any]


def poly_eval(coeffs: Series, x: Any) -> Any:
    """Horner evaluation of ``sum coeffs[k] x^k``."""
    total = coeffs[-1] * 1
    for c in reversed(coeffs[:-1]):
        total = total * x + c
    return total


def series_mul(p: Series, q: Series, n: int) -> list[Any]:
    """Product of two series truncated after ``x^n``."""
    out = [p[0] * 0] * (n + 1)
    for i, pi in enumerate(p[: n + 1]):
        for j, qj in enumerate(q[: n + 1 - i]):
            out[i + j] = out[i + j] + pi * qj
    return out


def series_pow(g: Series, p: Any, n: int) -> list[Any]:
    """``g(x)^p`` truncated after ``x^n`` for a series with ``g[0] == 1``.

    Uses the J.C.P. Miller recurrence, valid for any real exponent.
    """
    g = list(g) + [g[0] * 0] * (n + 1 - len(g))
    f = [g[0] / g[0]]
    for k in range(1, n + 1):
        acc = g[0] * 0
        for j in range(1, k + 1):
            acc = acc + ((p + 1) * j - k) * g[j] * f[k - j]
        f.append(acc / k)
    return f


def series_quotient(num: Series, den: Series, n: int) -> list[Any]:
    """``num(x) / den(x)`` truncated after ``x^n``; ``den[0]`` must be non-zero."""
    num = list(num) + [num[0] * 0] * (n + 1 - len(num))
    den = list(den) + [den[0] * 0] * (n + 1 - len(den))
    out: list[Any] = []
    for k in range(n + 1):
        acc = num[k]
        for j in range(1, k + 1):
            acc = acc - den[j] * out[k - j]
        out.append(acc / den[0])
    return out


def series_revert4(c: Series) -> tuple[Any, Any, Any, Any]:
    """Reversion coefficients of ``y = x (1 + c1 x + c2 x^2 + c3 x^3 + c4 x^4)``.

    *c* is ``(c1, c2, c3, c4)``; returns ``(d1, d2, d3, d4)`` such that
    ``x = y (1 + d1 y + ... + d4 y^4) + O(y^6)``.
    """
    c1, c2, c3, c4 = c
    d1 = -c1
    d2 = 2 * c1**2 - c2
    d3 = -5 * c1**3 + 5 * c1 * c2 - c3
    d4 = 14 * c1**4 - 21 * c1**2 * c2 + 6 * c1 * c3 + 3 * c2**2 - c4
    return d1, d2, d3, d4
