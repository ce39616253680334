"""Weight-bounded model of the word algebra modulo product-duality relations.

Relations of the shape  W1 * (W2 - tau(W2))  are enumerated below a weight
budget; membership questions ("is this word congruent to a combination of
allowed words?") are decided by exact linear algebra over that generator
family.  A positive answer comes with a replayable certificate and is
re-verified exactly before being returned; a negative answer only means
"not found within the budget" and never refutes anything.

The stuffle product merges u_j with u_0 and so can lower weight: the ideal
is weight-filtered, not graded, which is why the budget is explicit.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from math import gcd
from typing import Optional

import numpy as np

from . import linalg
from .compositions import index_pairs, part, ppart
from .products import stuffle, stuffle_lincomb
from .words import (
    DomainError,
    LinComb,
    Word,
    format_word,
    is_admissible,
    pretty_word,
    tau,
    word_stats,
)


# ---------------------------------------------------------------------------
# Word enumeration
# ---------------------------------------------------------------------------

def words_of_weight(w: int) -> list:
    """All admissible words of weight exactly w, sorted; counts follow
    a_w = 3 a_{w-1} - a_{w-2} from w = 3 on."""
    if w < 0:
        raise DomainError(f"weight must be >= 0, got {w}")
    if w == 0:
        return [()]
    out = []
    for d in range(1, w + 1):
        for k_total in range(d, w + 1):
            z_total = w - k_total
            for k in ppart(k_total, d):
                if not k:
                    continue
                for z in part(z_total, d):
                    letters = []
                    for k_i, z_i in zip(k, z):
                        letters.append(k_i)
                        letters.extend([0] * z_i)
                    out.append(tuple(letters))
    out.sort()
    return out


def admissible_words(max_weight: int, min_weight: int = 0) -> list:
    out = []
    for w in range(min_weight, max_weight + 1):
        out.extend(words_of_weight(w))
    return out


# ---------------------------------------------------------------------------
# The relation family below a weight budget
# ---------------------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def _generator(w1: Word, w2: Word) -> LinComb:
    return stuffle(w1, w2) - stuffle(w1, tau(w2))


@dataclass(frozen=True)
class RelationBasis:
    """All generators W1 * (W2 - tau(W2)) with wt(W1) + wt(W2) <= budget.

    W2 runs over admissible non-self-dual words taken once per duality orbit
    (the lexicographically smaller of W2, tau(W2)); W1 over all admissible
    words including the empty one.  Deterministic order throughout.
    """

    budget: int
    pairs: tuple
    generators: tuple
    columns: tuple  # admissible nonempty words of weight <= budget, sorted

    def generator_for(self, w1: Word, w2: Word) -> LinComb:
        return _generator(w1, w2)


_basis_cache: dict = {}


def relation_basis(budget: int) -> RelationBasis:
    if budget < 1:
        raise DomainError(f"budget must be >= 1, got {budget}")
    hit = _basis_cache.get(budget)
    if hit is not None:
        return hit
    pairs = []
    for wt2 in range(2, budget + 1):
        for w2 in words_of_weight(wt2):
            t = tau(w2)
            if w2 >= t:
                continue
            for wt1 in range(0, budget - wt2 + 1):
                for w1 in words_of_weight(wt1):
                    pairs.append((w1, w2))
    generators = tuple(_generator(w1, w2) for w1, w2 in pairs)
    columns = tuple(admissible_words(budget, 1))
    basis = RelationBasis(budget=budget, pairs=tuple(pairs),
                          generators=generators, columns=columns)
    _basis_cache[budget] = basis
    return basis


def relation_matrix(basis: RelationBasis) -> linalg.QMatrix:
    return linalg.matrix_from_lincombs(list(basis.generators), basis.columns)


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MembershipCertificate:
    """target - representative = sum of coeff * (W1 * (W2 - tau(W2)))."""

    target: Word
    representative: LinComb
    relation_terms: tuple  # ((w1, w2, Fraction), ...)
    budget: int

    def verify(self) -> bool:
        """Replay the certificate from scratch, exactly.

        All coefficients are scaled by their common denominator so the check
        runs in integer arithmetic (generator coefficients are integers).
        """
        lcm = 1
        for _, coeff in self.representative.items():
            lcm = lcm * coeff.denominator // gcd(lcm, coeff.denominator)
        for _, _, coeff in self.relation_terms:
            lcm = lcm * coeff.denominator // gcd(lcm, coeff.denominator)
        acc: dict = {self.target: lcm}

        def add(lc: LinComb, scale: int) -> None:
            if not scale:
                return
            for key, coeff in lc.items():
                new = acc.get(key, 0) + scale * int(coeff)
                if new:
                    acc[key] = new
                else:
                    acc.pop(key, None)

        add(self.representative.scale(lcm), -1)
        for w1, w2, coeff in self.relation_terms:
            add(_generator(w1, w2), -int(coeff * lcm))
        return not acc

    def export_text(self) -> str:
        lines = [f"target: {pretty_word(self.target)}",
                 f"budget: {self.budget}",
                 f"representative: {self.representative}"]
        for w1, w2, coeff in self.relation_terms:
            lines.append(f"{coeff} * [{pretty_word(w1)}] * ([{pretty_word(w2)}] - tau[{pretty_word(w2)}])")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# The solver: generator span + allowed-word coordinates
# ---------------------------------------------------------------------------

class MembershipSolver:
    """Answers many membership queries against one relation budget.

    The generator columns are absorbed once per prime into a mod-p transform;
    each distinct allowed-word set then extends a copy of that base with unit
    columns (cheap), and individual targets reduce to one matrix-vector
    product.  Candidates are rationally reconstructed and re-verified
    exactly; on failure the query is re-solved exactly on the modular
    support.
    """

    def __init__(self, budget: int, seed: int = 0):
        self.basis = relation_basis(budget)
        self.seed = seed
        self.columns = self.basis.columns
        self.col_index = {w: j for j, w in enumerate(self.columns)}
        self.n = len(self.columns)
        self._bases: dict = {}  # prime -> TransformRREF with generators absorbed
        self._ext_key = None
        self._ext: dict = {}  # prime -> extended transform
        self._dense_gen: dict = {}  # prime -> list of dense generator columns

    # -- base and extension management ------------------------------------

    def _gen_vector(self, lc: LinComb, p: int) -> np.ndarray:
        v = np.zeros(self.n, dtype=np.float64)
        for wkey, coeff in lc.items():
            v[self.col_index[wkey]] = int(coeff) % p
        return v

    def _base(self, p: int) -> linalg.TransformRREF:
        base = self._bases.get(p)
        if base is None:
            base = linalg.TransformRREF(self.n, p)
            ids = [("g", gi) for gi in range(len(self.basis.generators))]
            for start in range(0, len(ids), 512):
                chunk = ids[start:start + 512]
                V = np.zeros((self.n, len(chunk)), dtype=np.float64)
                for j, (_, gi) in enumerate(chunk):
                    for wkey, coeff in self.basis.generators[gi].items():
                        V[self.col_index[wkey], j] = int(coeff) % p
                base.absorb_block(chunk, V=V)
            self._bases[p] = base
        return base

    def _extended(self, allowed_idx: tuple, p: int) -> linalg.TransformRREF:
        if self._ext_key != allowed_idx:
            self._ext_key = allowed_idx
            self._ext = {}
        ext = self._ext.get(p)
        if ext is None:
            ext = self._base(p).copy()
            ext.absorb_block([("a", j) for j in allowed_idx], unit_indices=list(allowed_idx))
            self._ext[p] = ext
        return ext

    # -- queries -----------------------------------------------------------

    def _allowed_key(self, allowed) -> tuple:
        return tuple(sorted(self.col_index[w] for w in allowed))

    def solve(self, target: Word, allowed) -> Optional[MembershipCertificate]:
        """Certificate for target = allowed-combination + relation-combination."""
        target = tuple(target)
        if target not in self.col_index:
            raise DomainError(f"target {format_word(target)!r} exceeds the weight budget")
        allowed_idx = self._allowed_key(allowed)
        solutions = []
        misses = 0
        for p in itertools.islice(linalg.prime_sequence(self.seed), 12):
            ext = self._extended(allowed_idx, p)
            sol = ext.solve_unit(self.col_index[target])
            if sol is None:
                # not solvable mod p; a second prime confirms the negative
                misses += 1
                if misses >= 2:
                    return None
                continue
            solutions.append((p, sol))
            cert = self._reconstruct(target, solutions)
            if cert is not None and cert.verify():
                return cert
        # the coefficients outgrew the combined modulus; an exact solve on the
        # modular support settles small systems
        if solutions and len(solutions[-1][1]) <= 150:
            return self._exact_on_support(target, solutions[-1][1])
        return None

    def solve_lincomb(self, target_lc: LinComb, allowed,
                      label: Word = ()) -> Optional[MembershipCertificate]:
        """Like :meth:`solve` for a rational combination of words; the
        returned certificate carries ``label`` as its target and satisfies
        label - representative - relations = label - target_lc (i.e. it
        witnesses target_lc = representative + relations)."""
        allowed_idx = self._allowed_key(allowed)
        lcm = 1
        for _, coeff in target_lc.items():
            lcm = lcm * coeff.denominator // gcd(lcm, coeff.denominator)
        solutions = []
        misses = 0
        for p in itertools.islice(linalg.prime_sequence(self.seed), 12):
            ext = self._extended(allowed_idx, p)
            t = np.zeros(self.n, dtype=np.float64)
            inv = pow(lcm % p, -1, p)
            for wkey, coeff in target_lc.items():
                t[self.col_index[wkey]] = int(coeff * lcm) % p * inv % p
            sol = ext.solve(t)
            if sol is None:
                misses += 1
                if misses >= 2:
                    return None
                continue
            solutions.append((p, sol))
            cert = self._reconstruct(label, solutions)
            if cert is not None:
                residual = target_lc - cert.representative
                for w1, w2, coeff in cert.relation_terms:
                    residual = residual.combine(_generator(w1, w2), -coeff)
                if not residual:
                    return cert
        return None

    def _reconstruct(self, target: Word, solutions) -> Optional[MembershipCertificate]:
        keys = set()
        for _, sol in solutions:
            keys.update(sol)
        rep: dict = {}
        rel = []
        for col_id in keys:
            residue, modulus = 0, 1
            for p, sol in solutions:
                residue, modulus = linalg.crt_pair(residue, modulus, sol.get(col_id, 0), p)
            fr = linalg.rational_reconstruct(residue, modulus)
            if fr is None:
                return None
            if not fr:
                continue
            kind, idx = col_id
            if kind == "a":
                rep[self.columns[idx]] = fr
            else:
                w1, w2 = self.basis.pairs[idx]
                rel.append((w1, w2, fr))
        rel.sort(key=lambda t: (t[0], t[1]))
        return MembershipCertificate(target=target, representative=LinComb.from_raw(rep),
                                     relation_terms=tuple(rel), budget=self.basis.budget)

    def _exact_on_support(self, target: Word, sol: dict) -> Optional[MembershipCertificate]:
        gen_ids = sorted(idx for kind, idx in sol if kind == "g")
        allowed_ids = sorted(idx for kind, idx in sol if kind == "a")
        rows = [self.basis.generators[i] for i in gen_ids]
        rows += [LinComb.single(self.columns[j]) for j in allowed_ids]
        keys = set()
        for r in rows:
            keys.update(r.keys())
        keys.add(target)
        cols = sorted(keys)
        m = linalg.matrix_from_lincombs(rows, cols)
        coeffs = linalg.solve_membership(m, LinComb.single(target), seed=self.seed)
        if coeffs is None:
            return None
        rel = []
        rep: dict = {}
        for c, i in zip(coeffs[: len(gen_ids)], gen_ids):
            if c:
                w1, w2 = self.basis.pairs[i]
                rel.append((w1, w2, c))
        for c, j in zip(coeffs[len(gen_ids):], allowed_ids):
            if c:
                rep[self.columns[j]] = c
        rel.sort(key=lambda t: (t[0], t[1]))
        cert = MembershipCertificate(target=target, representative=LinComb.from_raw(rep),
                                     relation_terms=tuple(rel), budget=self.basis.budget)
        return cert if cert.verify() else None


_solver_cache: dict = {}


def get_solver(budget: int, seed: int = 0) -> MembershipSolver:
    key = (budget, seed)
    solver = _solver_cache.get(key)
    if solver is None:
        solver = MembershipSolver(budget, seed)
        _solver_cache[key] = solver
    return solver


# ---------------------------------------------------------------------------
# Allowed-word families and the two membership statements
# ---------------------------------------------------------------------------

def allowed_zero_free(depth_cap: int, weight_cap: int, budget: int) -> list:
    return [w for w in admissible_words(min(weight_cap, budget), 1)
            if word_stats(w).zeros == 0 and word_stats(w).depth <= depth_cap]


def allowed_filtration(z: int, d: int, w: int, budget: int) -> list:
    """Words spanning the target space of the refined reduction.

    A word is allowed when it has (a) the same caps at lower weight, or
    (b) strictly fewer zeros with zeros+depth at most z+d, or (c) the same
    zero count with zeros+depth dropped by one.  Variant (b) carries depth
    up to z+d-zeros: the worked reductions push depth up by exactly as much
    as they push zeros down, and the one-letter example u_2 u_0 at
    (z,d,w) = (1,1,3) is decidable only with it (its class is not in the
    span of the (a)+(c) words, as the series oracle certifies).
    """
    out = []
    for word in admissible_words(min(w, budget), 1):
        st = word_stats(word)
        if st.zeros <= z and st.depth <= d and st.weight <= w - 1:
            out.append(word)
        elif st.zeros <= z - 1 and st.zeros + st.depth <= z + d and st.weight <= w:
            out.append(word)
        elif st.zeros <= z and st.zeros + st.depth <= z + d - 1 and st.weight <= w:
            out.append(word)
    return out


def membership_bachmann(target: Word, budget: Optional[int] = None,
                        seed: int = 0) -> Optional[MembershipCertificate]:
    """Reduce an admissible word to the zero-free subspace, if possible
    within the budget: allowed words are zero-free of depth <= zeros+depth
    of the target and weight <= its weight."""
    target = tuple(target)
    if not is_admissible(target):
        raise DomainError(f"target {format_word(target)!r} starts with u_0")
    st = word_stats(target)
    if budget is None:
        budget = st.weight
    if budget < st.weight:
        raise DomainError(f"budget {budget} below target weight {st.weight}")
    if st.zeros == 0:
        return MembershipCertificate(target=target, representative=LinComb.single(target),
                                     relation_terms=(), budget=budget)
    solver = get_solver(budget, seed)
    allowed = allowed_zero_free(st.zeros + st.depth, st.weight, budget)
    return solver.solve(target, allowed)


def membership_F(target: Word, z: int, d: int, w: int,
                 budget: Optional[int] = None, seed: int = 0) -> Optional[MembershipCertificate]:
    """Certificate that the target lies in the refined-reduction space for
    (z, d, w): lower weight at the same caps, or zeros+depth reduced by one."""
    target = tuple(target)
    if not is_admissible(target):
        raise DomainError(f"target {format_word(target)!r} starts with u_0")
    if min(z, d, w) < 1:
        raise DomainError(f"need z, d, w >= 1, got ({z}, {d}, {w})")
    st = word_stats(target)
    if st.zeros > z or st.depth > d or st.weight > w:
        raise DomainError(
            f"target stats ({st.zeros}, {st.depth}, {st.weight}) exceed ({z}, {d}, {w})")
    if budget is None:
        budget = w
    if budget < w:
        raise DomainError(f"budget {budget} below weight {w}")
    solver = get_solver(budget, seed)
    allowed = allowed_filtration(z, d, w, budget)
    return solver.solve(target, allowed)


# ---------------------------------------------------------------------------
# Depth-one closed form
# ---------------------------------------------------------------------------

def _h_tau_image(a: int, b: int) -> LinComb:
    """Zero-free duality image of h(a, b), summed term by term."""
    acc: dict = {}
    for j1 in range(a):
        j2 = a - 1 - j1
        for n in part(b, j2 + 1):
            eps_ranges = [range(0, min(1, n[p]) + 1) for p in range(1, j2 + 1)]
            for eps in itertools.product(*eps_ranges):
                word = tuple(n[p] - eps[p - 1] + 1 for p in range(j2, 0, -1))
                word += (n[0] + 1,) + (1,) * j1
                acc[word] = acc.get(word, 0) + 1
    return LinComb.from_raw(acc)


def dep1_reduce(k: int, z: int) -> LinComb:
    """Fully expanded zero-free representative of u_k u_0^z from the
    depth-one closed form (alternating iterated products of 1-runs against
    duality images of h-sums)."""
    if k < 1:
        raise DomainError(f"need k >= 1, got {k}")
    if z < 0:
        raise DomainError(f"need z >= 0, got {z}")
    if z == 0:
        return LinComb.single((k,))
    total = _h_tau_image(z + 1, k - 1).scale(1 if z % 2 == 0 else -1)
    for j in range(1, z + 1):
        for total_l in range(j, z + 1):
            for ells in ppart(total_l, j):
                if not ells:
                    continue
                sign = 1 if (z - j) % 2 == 0 else -1
                base = _h_tau_image(z + 1 - total_l, k - 1)
                prod = base
                for l in ells:
                    prod = stuffle_lincomb(LinComb.single((1,) * l), prod)
                total = total.combine(prod, sign)
    return total


# ---------------------------------------------------------------------------
# Relation families for the below-diagonal strategy
# ---------------------------------------------------------------------------

def _interleave(tops, zero_runs) -> Word:
    letters = []
    for t, r in zip(tops, zero_runs):
        letters.append(t)
        letters.extend([0] * r)
    return tuple(letters)


def s2_parameters(z: int, d: int, k) -> list:
    """Deterministic enumeration of (n, ell, k', m) for the duality-image
    stuffle family.

    The two stated sum conditions (|m| + |k'| = len(n) + |k| and the weights
    of the two interleaved words adding to w) force every entry of m to be
    positive: a zero entry merges into a u_0-run and inflates the weight.
    """
    k = tuple(k)
    params = []
    for n, ell in index_pairs(z, d, 1):
        s = len(n)
        for kp in itertools.product(*[range(1, kj + 1) for kj in k]):
            m_total = s + sum(k) - sum(kp)
            if m_total < s or m_total > s + d - z:
                continue
            for m in ppart(m_total, s):
                if m:
                    params.append((n, ell, kp, m))
    return params


def s2_generator(n, ell, kp, m) -> LinComb:
    """tau of the stuffle of the two duality images, fully expanded."""
    w1 = _interleave(m, tuple(x - 1 for x in reversed(n)))
    w2 = _interleave(kp, tuple(x - 1 for x in reversed(ell)))
    product = stuffle(tau(w1), tau(w2))
    return product.map_keys(tau)


def s3_parameters(z: int, d: int, k) -> list:
    k = tuple(k)
    arrangements = sorted(set(itertools.permutations(k)))
    params = []
    for sigma in arrangements:
        for split in range(1, d):
            for e in part(z, d):
                params.append((sigma, split, e))
    return params


def s3_generator(sigma, split, e) -> LinComb:
    left = _interleave(sigma[:split], e[:split])
    right = _interleave(sigma[split:], e[split:])
    return stuffle(left, right)


def relation_family_S23(z: int, d: int, k, which: int) -> list:
    """Expanded generator families for the z < d strategy (variant 2 or 3)."""
    k = tuple(k)
    if not (1 <= z < d):
        raise DomainError(f"family defined for 1 <= z < d, got ({z}, {d})")
    if len(k) != d or any(kj < 1 for kj in k):
        raise DomainError(f"k must be a positive index of length {d}, got {k}")
    if which == 2:
        return [s2_generator(*p) for p in s2_parameters(z, d, k)]
    if which == 3:
        return [s3_generator(*p) for p in s3_parameters(z, d, k)]
    raise DomainError(f"variant must be 2 or 3, got {which}")
