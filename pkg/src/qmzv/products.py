"""Stuffle and box products, depth layers, the exponent embedding, and h-sums.

The stuffle product is the quasi-shuffle recursion

    u_{j1} W1 * u_{j2} W2 = u_{j1}(W1 * u_{j2}W2) + u_{j2}(u_{j1}W1 * W2)
                            + u_{j1+j2}(W1 * W2),

with the empty word as neutral element.  The box product of two admissible
words is the minimal-depth layer of their stuffle product; for zero-free
words (indices) it has an equivalent fast recursion that merges every letter
of the shorter word into the longer one, order preserved.

Memo tables live inside a single product call and never persist, so results
are independent of call history.
"""

from __future__ import annotations

from .words import DomainError, Index, LinComb, Word, format_word, is_admissible, word_stats


def _stuffle_raw(a: Word, b: Word, memo: dict) -> dict:
    if not a:
        return {b: 1}
    if not b:
        return {a: 1}
    key = (a, b)
    hit = memo.get(key)
    if hit is not None:
        return hit
    j1, t1 = a[0], a[1:]
    j2, t2 = b[0], b[1:]
    out: dict = {}
    for w, c in _stuffle_raw(t1, b, memo).items():
        k = (j1,) + w
        out[k] = out.get(k, 0) + c
    for w, c in _stuffle_raw(a, t2, memo).items():
        k = (j2,) + w
        out[k] = out.get(k, 0) + c
    for w, c in _stuffle_raw(t1, t2, memo).items():
        k = (j1 + j2,) + w
        out[k] = out.get(k, 0) + c
    memo[key] = out
    return out


def stuffle(a: Word, b: Word) -> LinComb:
    """Stuffle product of two words; all coefficients are positive integers."""
    return LinComb.from_raw(dict(_stuffle_raw(tuple(a), tuple(b), {})))


def stuffle_index(a: Index, b: Index) -> LinComb:
    """Stuffle product at index level (same recursion on the parts)."""
    return stuffle(tuple(a), tuple(b))


def stuffle_lincomb(a: LinComb, b: LinComb) -> LinComb:
    """Bilinear extension of the stuffle product."""
    memo: dict = {}
    acc: dict = {}
    for wa, ca in a.items():
        for wb, cb in b.items():
            c = ca * cb
            for w, m in _stuffle_raw(wa, wb, memo).items():
                new = acc.get(w, 0) + c * m
                if new:
                    acc[w] = new
                else:
                    acc.pop(w, None)
    return LinComb.from_raw(acc)


def stuffle_many(words) -> LinComb:
    """Iterated stuffle product of a sequence of words (empty product = empty word)."""
    acc = LinComb.single(())
    for w in words:
        acc = stuffle_lincomb(acc, LinComb.single(tuple(w)))
    return acc


def depth_decompose(c: LinComb) -> dict:
    """Partition a combination of words by depth; the parts sum back to ``c``."""
    parts: dict = {}
    for w, coeff in c.items():
        d = word_stats(w).depth
        parts.setdefault(d, {})[w] = coeff
    return {d: LinComb.from_raw(terms) for d, terms in sorted(parts.items())}


def box(a: Word, b: Word) -> LinComb:
    """Box product of admissible words: the depth-max{d1,d2} stuffle layer."""
    a, b = tuple(a), tuple(b)
    if not is_admissible(a):
        raise DomainError(f"left factor {format_word(a)!r} starts with u_0")
    if not is_admissible(b):
        raise DomainError(f"right factor {format_word(b)!r} starts with u_0")
    d = max(word_stats(a).depth, word_stats(b).depth)
    return depth_decompose(stuffle(a, b)).get(d, LinComb())


def _box_index_raw(a: Index, b: Index, memo: dict) -> dict:
    s, r = len(a), len(b)
    if s > r:
        return {}
    if not a:
        return {b: 1}
    key = (a, b)
    hit = memo.get(key)
    if hit is not None:
        return hit
    out: dict = {}
    # skip the first letter of b
    for w, c in _box_index_raw(a, b[1:], memo).items():
        k = (b[0],) + w
        out[k] = out.get(k, 0) + c
    # merge the first letters
    for w, c in _box_index_raw(a[1:], b[1:], memo).items():
        k = (a[0] + b[0],) + w
        out[k] = out.get(k, 0) + c
    memo[key] = out
    return out


def box_index_recursive(a: Index, b: Index) -> LinComb:
    """Index-level box recursion; empty when len(a) > len(b), per its first branch.

    Agrees with the minimal-length layer of ``stuffle_index`` whenever
    len(a) <= len(b).
    """
    return LinComb.from_raw(dict(_box_index_raw(tuple(a), tuple(b), {})))


def box_index_lincomb(a: LinComb, b: LinComb) -> LinComb:
    """Bilinear extension of the index-level box recursion."""
    memo: dict = {}
    acc: dict = {}
    for wa, ca in a.items():
        for wb, cb in b.items():
            c = ca * cb
            for w, m in _box_index_raw(wa, wb, memo).items():
                new = acc.get(w, 0) + c * m
                if new:
                    acc[w] = new
                else:
                    acc.pop(w, None)
    return LinComb.from_raw(acc)


def concat(prefix: Word, c: LinComb) -> LinComb:
    """Concatenate a fixed word in front of every term."""
    prefix = tuple(prefix)
    return c.map_keys(lambda w: prefix + w)


def concat_right(c: LinComb, suffix: Word) -> LinComb:
    suffix = tuple(suffix)
    return c.map_keys(lambda w: w + suffix)


def psi(k: Index, c: LinComb) -> LinComb:
    """Embed zero-free length-d words into zero-decorated words.

    Sends u_{m_1}...u_{m_d} to u_{m_1} u_0^{k_d-1} ... u_{m_d} u_0^{k_1-1},
    extended linearly; every key of ``c`` must be zero-free of length len(k).
    """
    k = tuple(k)
    d = len(k)
    if any(part < 1 for part in k):
        raise DomainError(f"exponent index {k} has a part < 1")
    rev = tuple(reversed(k))

    def embed(w: Word) -> Word:
        if len(w) != d:
            raise DomainError(f"word {format_word(w)!r} has length {len(w)}, expected {d}")
        if any(j == 0 for j in w):
            raise DomainError(f"word {format_word(w)!r} contains u_0")
        letters = []
        for i, m in enumerate(w):
            letters.append(m)
            letters.extend([0] * (rev[i] - 1))
        return tuple(letters)

    return c.map_keys(embed)


def h_sum(a: int, b: int) -> LinComb:
    """h(a,b) = sum over j1+j2=a-1 of u_1^{j1+1} (u_1^{j2} * u_0^b)."""
    if a < 1:
        raise DomainError(f"h-sum needs a >= 1, got {a}")
    if b < 0:
        raise DomainError(f"h-sum needs b >= 0, got {b}")
    total = LinComb()
    zeros = (0,) * b
    for j1 in range(a):
        j2 = a - 1 - j1
        inner = stuffle((1,) * j2, zeros)
        total = total + concat((1,) * (j1 + 1), inner)
    return total
