"""Words over the letters u_0, u_1, u_2, ..., their statistics, and duality.

A word is stored as a tuple of non-negative integer subscripts; ``()`` is the
empty word.  An *admissible* word does not start with subscript 0; every
non-empty admissible word has a unique block form

    u_{k_1} u_0^{z_1} ... u_{k_d} u_0^{z_d},   k_i >= 1, z_i >= 0,

on which the duality involution ``tau`` acts by

    tau: u_{k_1} u_0^{z_1} ... u_{k_d} u_0^{z_d}
             |->  u_{z_d+1} u_0^{k_d-1} ... u_{z_1+1} u_0^{k_1-1}.

An *index* is a tuple of strictly positive integers (the zero-free skeleton).

Exact rational linear combinations of words (or indices) are held in
:class:`LinComb`; coefficients are ``fractions.Fraction`` (or int), zero
coefficients are never stored, and iteration is lexicographic on the raw
subscript sequences so that all output is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

Word = tuple  # tuple of non-negative ints
Index = tuple  # tuple of strictly positive ints

EMPTY_WORD: Word = ()


class WordParseError(ValueError):
    """Raised for malformed word text; the message names the offending token."""


class DomainError(ValueError):
    """An argument is outside the mathematical domain of an operation."""


def parse_word(text: str) -> Word:
    """Parse comma-separated subscripts; the empty string is the empty word."""
    if text.strip() == "":
        return ()
    letters = []
    for token in text.split(","):
        tok = token.strip()
        try:
            value = int(tok)
        except ValueError:
            raise WordParseError(f"malformed token {tok!r} in word {text!r}") from None
        if value < 0:
            raise WordParseError(f"negative subscript {tok!r} in word {text!r}")
        letters.append(value)
    return tuple(letters)


def format_word(w: Word) -> str:
    return ",".join(str(j) for j in w)


def pretty_word(w: Word) -> str:
    """Human-oriented rendering, e.g. (2, 0, 1) -> 'u2 u0 u1'; '1' for the empty word."""
    if not w:
        return "1"
    return " ".join(f"u{j}" for j in w)


@dataclass(frozen=True)
class WordStats:
    length: int
    depth: int
    zeros: int
    weight: int


def word_stats(w: Word) -> WordStats:
    depth = sum(1 for j in w if j >= 1)
    zeros = len(w) - depth
    weight = sum(w) + zeros
    return WordStats(length=len(w), depth=depth, zeros=zeros, weight=weight)


def is_admissible(w: Word) -> bool:
    return not w or w[0] != 0


def blocks(w: Word) -> list:
    """Canonical block form [(k_1, z_1), ..., (k_d, z_d)] of an admissible word."""
    if not is_admissible(w):
        raise DomainError(f"word {format_word(w)!r} starts with u_0")
    out = []
    i = 0
    n = len(w)
    while i < n:
        k = w[i]
        i += 1
        z = 0
        while i < n and w[i] == 0:
            z += 1
            i += 1
        out.append((k, z))
    return out


def from_blocks(bs: Iterable) -> Word:
    letters = []
    for k, z in bs:
        letters.append(k)
        letters.extend([0] * z)
    return tuple(letters)


def tau(w: Word) -> Word:
    """Duality involution on admissible words; tau of the empty word is itself."""
    if not w:
        return ()
    bs = blocks(w)
    return from_blocks((z + 1, k - 1) for k, z in reversed(bs))


def reverse_index(i: Index) -> Index:
    return tuple(reversed(i))


# ---------------------------------------------------------------------------
# Linear combinations
# ---------------------------------------------------------------------------

Coeff = Union[int, Fraction]


def _key_kind(key) -> str:
    # 'seq' for word/index keys, 'pair' for (n, ell) index-pair keys
    if isinstance(key, tuple) and len(key) == 2 and isinstance(key[0], tuple) and isinstance(key[1], tuple):
        return "pair"
    return "seq"


class LinComb:
    """A finite formal sum of keys with exact rational coefficients.

    Keys are words/indices (tuples of ints) or index pairs (pairs of tuples);
    a single LinComb never mixes the two kinds.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping = None):
        d = {}
        if terms:
            for key, coeff in terms.items():
                if coeff:
                    d[key] = Fraction(coeff)
        self._terms = d

    @classmethod
    def single(cls, key, coeff: Coeff = 1) -> "LinComb":
        return cls({key: coeff})

    @classmethod
    def zero(cls) -> "LinComb":
        return cls()

    @classmethod
    def from_raw(cls, terms: dict) -> "LinComb":
        """Wrap a dict that is already zero-purged with Fraction/int values."""
        out = cls.__new__(cls)
        out._terms = {k: Fraction(v) for k, v in terms.items() if v}
        return out

    def items(self) -> Iterator:
        return iter(sorted(self._terms.items()))

    def keys(self):
        return sorted(self._terms)

    def get(self, key, default=0):
        return self._terms.get(key, default)

    def __contains__(self, key) -> bool:
        return key in self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinComb):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def _check_compatible(self, other: "LinComb") -> None:
        if self._terms and other._terms:
            k1 = _key_kind(next(iter(self._terms)))
            k2 = _key_kind(next(iter(other._terms)))
            if k1 != k2:
                raise TypeError(f"mixed key universes: {k1} vs {k2}")

    def combine(self, other: "LinComb", scalar: Coeff = 1) -> "LinComb":
        """Return self + scalar*other with zero coefficients purged."""
        self._check_compatible(other)
        d = dict(self._terms)
        s = Fraction(scalar)
        for key, coeff in other._terms.items():
            new = d.get(key, 0) + s * coeff
            if new:
                d[key] = new
            else:
                d.pop(key, None)
        return LinComb.from_raw(d)

    def __add__(self, other: "LinComb") -> "LinComb":
        return self.combine(other, 1)

    def __sub__(self, other: "LinComb") -> "LinComb":
        return self.combine(other, -1)

    def __neg__(self) -> "LinComb":
        return self.scale(-1)

    def scale(self, scalar: Coeff) -> "LinComb":
        s = Fraction(scalar)
        if not s:
            return LinComb()
        return LinComb.from_raw({k: s * c for k, c in self._terms.items()})

    def __mul__(self, scalar: Coeff) -> "LinComb":
        return self.scale(scalar)

    __rmul__ = __mul__

    def map_keys(self, fn) -> "LinComb":
        d = {}
        for key, coeff in self._terms.items():
            new_key = fn(key)
            d[new_key] = d.get(new_key, 0) + coeff
        return LinComb.from_raw(d)

    def restrict(self, predicate) -> "LinComb":
        return LinComb.from_raw({k: c for k, c in self._terms.items() if predicate(k)})

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for key, coeff in self.items():
            if _key_kind(key) == "pair":
                shown = f"({format_word(key[0])})|({format_word(key[1])})"
            else:
                shown = format_word(key)
            parts.append(f"{coeff}*{shown}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"LinComb({dict(sorted(self._terms.items()))!r})"


def lincomb_combine(a: LinComb, b: LinComb, scalar: Coeff) -> LinComb:
    """a + scalar*b, purging zeros; mixed key universes raise TypeError."""
    return a.combine(b, scalar)
