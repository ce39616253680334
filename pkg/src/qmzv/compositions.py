"""Enumerators for compositions, index pairs, kernel generators, and bases.

All enumerators return lexicographically sorted, duplicate-free sequences.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

from .products import box_index_recursive, stuffle_index
from .words import DomainError, Index, LinComb


def part(r: int, s: int) -> list:
    """All ordered s-tuples of non-negative integers summing to r, sorted.

    For s <= 0 the result is the single empty tuple (whatever r is).
    """
    if s <= 0:
        return [()]
    out = []
    for cuts in itertools.combinations(range(r + s - 1), s - 1):
        marks = (-1,) + cuts + (r + s - 1,)
        out.append(tuple(marks[i] - marks[i - 1] - 1 for i in range(1, len(marks))))
    out.sort()
    return out


def ppart(r: int, s: int) -> list:
    """All compositions of r into exactly s positive parts, sorted.

    For s <= 0 or r < s the result is the single empty tuple; the count is
    C(r-1, s-1) when 1 <= s <= r.
    """
    if s <= 0 or r < s:
        return [()]
    return sorted(tuple(x + 1 for x in p) for p in part(r - s, s))


def indices_of(z: int, d: int) -> list:
    """All indices in Z_{>0}^d of total z+d, sorted; count C(z+d-1, d-1)."""
    if z < 0:
        raise DomainError(f"zero budget must be >= 0, got {z}")
    if d < 1:
        raise DomainError(f"length must be >= 1, got {d}")
    return [p for p in ppart(z + d, d) if p]


def index_pairs(z: int, d: int, s_min: int = 1) -> list:
    """All pairs (n, ell) with len(n) in [s_min, min(z,d)], len(ell) = d,
    |n| + |ell| = z + d; sorted by n-length, then lexicographically."""
    if s_min < 1:
        raise DomainError(f"minimum n-length must be >= 1, got {s_min}")
    pairs = []
    for s in range(s_min, min(z, d) + 1):
        for comp in ppart(z + d, d + s):
            if comp:
                pairs.append((comp[:s], comp[s:]))
    return pairs


def index_pair_count(z: int, d: int) -> int:
    """Closed form for len(index_pairs(z, d, 1))."""
    return sum(comb(z + d - 1, d + j - 1) for j in range(1, min(z, d) + 1))


@dataclass(frozen=True)
class KernelGenerator:
    """One (composition, split) kernel element for the box map on index pairs.

    With ell = the first d parts, n1 = parts d..split, n2 = parts split..end,
    the induced combination over index-pair keys is

        (n1, n2 box ell) - (n1 * n2, ell).
    """

    z: int
    d: int
    composition: Index
    split: int

    @property
    def ell(self) -> Index:
        return self.composition[: self.d]

    @property
    def n1(self) -> Index:
        return self.composition[self.d : self.split]

    @property
    def n2(self) -> Index:
        return self.composition[self.split :]

    def pair_lincomb(self) -> LinComb:
        acc: dict = {}
        for term, coeff in box_index_recursive(self.n2, self.ell).items():
            key = (self.n1, term)
            acc[key] = acc.get(key, 0) + coeff
        for term, coeff in stuffle_index(self.n1, self.n2).items():
            key = (term, self.ell)
            acc[key] = acc.get(key, 0) - coeff
        return LinComb.from_raw(acc)


def kernel_generators(z: int, d: int) -> list:
    """The (composition, split) kernel family, in deterministic order.

    Defined for 1 <= z <= d; for z = 1 the family is empty.
    """
    if not 1 <= z <= d:
        raise DomainError(f"kernel family needs 1 <= z <= d, got ({z}, {d})")
    out = []
    for t in range(d + 2, z + d + 1):
        for comp in ppart(z + d, t):
            for split in range(d + 1, t):
                out.append(KernelGenerator(z=z, d=d, composition=comp, split=split))
    return out


def plain_basis(z: int, d: int) -> list:
    """Indices (l_1,...,l_d) with sum_{k=j}^{d} l_k <= min(z, d-j+1) + d - j
    for every 1 <= j <= d; sorted.

    This is the explicit characterization; the printed recursion (kept in
    :func:`plain_basis_recursive` for comparison) produces a strict superset.
    """
    if not 1 <= z <= d:
        raise DomainError(f"plain basis needs 1 <= z <= d, got ({z}, {d})")
    bound = [min(z, d - j + 1) + d - j for j in range(1, d + 1)]

    def extend(prefix, j):
        # prefix holds l_j..l_d reversed; build from the right end
        if j == 0:
            yield tuple(reversed(prefix))
            return
        tail = sum(prefix)
        for l in range(1, bound[j - 1] - tail + 1):
            prefix.append(l)
            yield from extend(prefix, j - 1)
            prefix.pop()

    return sorted(extend([], d))


def plain_basis_recursive(z: int, d: int) -> list:
    """Diagnostic: the recursive construction as printed (superset of plain_basis)."""
    if not 1 <= z <= d:
        raise DomainError(f"plain basis needs 1 <= z <= d, got ({z}, {d})")
    if z == 1:
        return [(1,) * d]
    prev = plain_basis_recursive(z - (1 if z == d else 0), d - 1)
    out = set()
    for w in prev:
        for l in range(1, z + d - (sum(w) + 0) + 1):
            # weight of a zero-free word is the sum of its parts
            if l <= z + d - sum(w):
                out.add((l,) + w)
    return sorted(out)


def conjectured_basis(z: int, d: int) -> list:
    """Pairs (n, ell) with ell in plain_basis(z, d), |n| + |ell| = z + d, and
    ell_1 > z - d + delta where delta = 1 iff n = (1); sorted.

    The single pair ((1,), (1,)) at z = d = 1 is kept even though the strict
    inequality would drop it: the span there is one-dimensional and this is
    its only generator.
    """
    if not 1 <= z <= d:
        raise DomainError(f"conjectured basis needs 1 <= z <= d, got ({z}, {d})")
    if (z, d) == (1, 1):
        return [((1,), (1,))]
    out = []
    for ell in plain_basis(z, d):
        rest = z + d - sum(ell)
        if rest < 1:
            continue
        for s in range(1, min(z, d) + 1):
            for n in ppart(rest, s):
                if not n:
                    continue
                delta = 1 if n == (1,) else 0
                if ell[0] > z - d + delta:
                    out.append((n, ell))
    return sorted(out)


def conjectured_basis_size(z: int, d: int) -> int:
    """Expected cardinality C(z+d-1, min(z,d)-1)."""
    return comb(z + d - 1, min(z, d) - 1)
