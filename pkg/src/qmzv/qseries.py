"""Truncated q-series oracle: the independent numeric ground truth.

An admissible word u_{k_1} u_0^{z_1} ... u_{k_d} u_0^{z_d} is evaluated as

    sum over m_1 > ... > m_d > 0 of
        prod_j  C(m_j - m_{j+1} - 1, z_j) * q^{m_j k_j} / (1 - q^{m_j})^{k_j}

with m_{d+1} = 0, truncated at a fixed order.  Only tuples with
sum m_j k_j <= order contribute, and the enumeration prunes on that bound
at every nesting level.  All series coefficients are exact integers;
rational weights from linear combinations are handled by clearing a common
denominator.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, gcd

from .products import stuffle
from .words import DomainError, LinComb, Word, blocks, format_word, is_admissible

_cache: dict = {}


@dataclass(frozen=True)
class Series:
    """Integer power series truncated at q^order (constant term separate)."""

    order: int
    const: int
    coeffs: tuple  # coefficients of q^1 .. q^order

    def __add__(self, other: "Series") -> "Series":
        n = min(self.order, other.order)
        return Series(n, self.const + other.const,
                      tuple(a + b for a, b in zip(self.coeffs[:n], other.coeffs[:n])))

    def scale(self, c: int) -> "Series":
        return Series(self.order, c * self.const, tuple(c * a for a in self.coeffs))

    def __mul__(self, other: "Series") -> "Series":
        n = min(self.order, other.order)
        a = (self.const,) + self.coeffs
        b = (other.const,) + other.coeffs
        out = [0] * (n + 1)
        for i in range(n + 1):
            ai = a[i]
            if not ai:
                continue
            for j in range(0, n + 1 - i):
                if b[j]:
                    out[i + j] += ai * b[j]
        return Series(n, out[0], tuple(out[1:]))

    def is_zero(self) -> bool:
        return self.const == 0 and not any(self.coeffs)

    def __str__(self) -> str:
        parts = []
        if self.const:
            parts.append(str(self.const))
        for i, c in enumerate(self.coeffs, start=1):
            if not c:
                continue
            q = "q" if i == 1 else f"q^{i}"
            parts.append(q if c == 1 else f"{c}{q}")
        if not parts:
            parts.append("0")
        parts.append(f"O(q^{self.order + 1})")
        return " + ".join(parts)


def zero_series(order: int) -> Series:
    return Series(order, 0, (0,) * order)


def _geometric_power(m: int, k: int, order: int) -> list:
    """Sparse coefficients of q^{mk} / (1 - q^m)^k: [(exponent, coeff), ...]."""
    out = []
    i = 0
    while m * (k + i) <= order:
        out.append((m * (k + i), comb(i + k - 1, k - 1)))
        i += 1
    return out


def zeta_series(w: Word, order: int) -> Series:
    """Coefficient-exact truncation of the q-expansion of an admissible word."""
    w = tuple(w)
    if order < 1:
        raise DomainError(f"order must be >= 1, got {order}")
    if not is_admissible(w):
        raise DomainError(f"word {format_word(w)!r} starts with u_0")
    key = (w, order)
    hit = _cache.get(key)
    if hit is not None:
        return hit
    if not w:
        result = Series(order, 1, (0,) * order)
        _cache[key] = result
        return result

    bs = blocks(w)
    d = len(bs)
    # min_tail[j] = least possible value of sum_{i >= j} m_i k_i
    min_tail = [0] * (d + 1)
    for j in range(d - 1, -1, -1):
        min_tail[j] = min_tail[j + 1] + (d - j) * bs[j][0]
    total = [0] * (order + 1)

    def emit(poly: list, weight: int) -> None:
        for i, c in enumerate(poly):
            if c:
                total[i] += weight * c

    def rec(j: int, m_j: int, used: int, poly: list) -> None:
        # m_j is chosen and its geometric factor already folded into poly;
        # the binomial weight C(m_j - m_{j+1} - 1, z_j) still depends on
        # the next level (with m_{d+1} = 0 at the innermost one).
        k_j, z_j = bs[j]
        if j == d - 1:
            if z_j <= m_j - 1:
                emit(poly, comb(m_j - 1, z_j))
            return
        k_next = bs[j + 1][0]
        high = (order - used - min_tail[j + 2]) // k_next
        high = min(high, m_j - 1 - z_j)  # gap must fit z_j zeros
        for m_next in range(d - j - 1, high + 1):
            weight = comb(m_j - m_next - 1, z_j)
            stepped = [0] * (order + 1)
            for exp, coeff in _geometric_power(m_next, k_next, order):
                cw = coeff * weight
                for i in range(0, order + 1 - exp):
                    if poly[i]:
                        stepped[i + exp] += poly[i] * cw
            rec(j + 1, m_next, used + m_next * k_next, stepped)

    k_0 = bs[0][0]
    high = (order - min_tail[1]) // k_0
    for m_0 in range(d, high + 1):
        poly = [0] * (order + 1)
        for exp, coeff in _geometric_power(m_0, k_0, order):
            poly[exp] = coeff
        rec(0, m_0, m_0 * k_0, poly)

    result = Series(order, total[0], tuple(total[1:]))
    _cache[key] = result
    return result


def lincomb_series(c: LinComb, order: int) -> tuple:
    """Evaluate a rational combination of words after clearing denominators;
    returns (Series, cleared_denominator)."""
    lcm = 1
    for _, coeff in c.items():
        lcm = lcm * coeff.denominator // gcd(lcm, coeff.denominator)
    acc = zero_series(order)
    for w, coeff in c.items():
        acc = acc + zeta_series(w, order).scale(int(coeff * lcm))
    return acc, lcm


def check_relation_vanishes(g: LinComb, order: int) -> bool:
    """True iff the coefficient-weighted sum of series is 0 to the given order."""
    acc, _ = lincomb_series(g, order)
    return acc.is_zero()


def check_homomorphism(a: Word, b: Word, order: int) -> bool:
    """True iff series(a) * series(b) matches the series of stuffle(a, b)."""
    lhs = zeta_series(a, order) * zeta_series(b, order)
    rhs, lcm = lincomb_series(stuffle(a, b), order)
    return lhs.scale(lcm) == rhs
