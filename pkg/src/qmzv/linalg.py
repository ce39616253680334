"""Exact sparse linear algebra over Q with a fast modular screen.

Protocol
--------
Every question (rank, row-span membership) is answered in two phases:

* a *modular screen* over a word-size prime, run on dense float64 arrays
  (all intermediate values stay below 2^53, so float64 arithmetic is exact);
* an *exact phase* that certifies the screen.  A successful pivot search
  modulo p exhibits an r x r minor with det != 0 (mod p), hence != 0 over Q,
  so modular ranks are rigorous lower bounds.  Rank upper bounds are
  certified by an exactly verified integer nullspace; membership
  certificates are rationally reconstructed and re-multiplied exactly.

Internal screening primes sit just below 2^19 so that a dot product of up
to 32768 residues fits in 2^53.  ``rank_modular`` also accepts arbitrary
primes (e.g. 62-bit ones) through a pure-Python elimination path.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Optional, Sequence

import numpy as np

from .words import LinComb


class MatrixConstructionError(ValueError):
    pass


class PrimeDividesDenominator(ArithmeticError):
    """Retry signal: the chosen prime divides a stored denominator."""


class InternalInconsistencyError(RuntimeError):
    """A modular-phase candidate failed exact verification irrecoverably."""


# ---------------------------------------------------------------------------
# Primes
# ---------------------------------------------------------------------------

def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _primes_below(limit: int, count: int) -> tuple:
    out = []
    n = limit - 1
    if n % 2 == 0:
        n -= 1
    while len(out) < count:
        if _is_prime(n):
            out.append(n)
        n -= 2
    return tuple(out)


#: Fixed descending sequence of screening primes just below 2^19.  With
#: p < 2^19 a float64 dot product of up to 32768 residues stays below 2^53.
SCREEN_PRIMES = _primes_below(1 << 19, 64)

#: Largest prime admissible in the float64 fast paths.
MAX_SCREEN_PRIME = 1 << 19


def prime_sequence(seed: int = 0):
    """Deterministic iterator over the fixed screening primes, rotated by seed."""
    k = len(SCREEN_PRIMES)
    for i in range(k):
        yield SCREEN_PRIMES[(seed + i) % k]


# ---------------------------------------------------------------------------
# QMatrix
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QMatrix:
    """Immutable sparse rational matrix with labelled columns.

    ``rows[i]`` is a tuple of (column index, Fraction) pairs sorted by column;
    ``columns`` holds the column labels (words, indices, or index pairs).
    """

    rows: tuple
    columns: tuple

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.columns)

    def dump(self) -> str:
        """One line per stored entry: 'row col value'."""
        lines = []
        for i, row in enumerate(self.rows):
            for j, v in row:
                lines.append(f"{i} {j} {v}")
        return "\n".join(lines)


def matrix_from_lincombs(rows: Sequence[LinComb], columns: Sequence) -> QMatrix:
    index = {key: j for j, key in enumerate(columns)}
    if len(index) != len(columns):
        raise MatrixConstructionError("duplicate column labels")
    built = []
    for lc in rows:
        entries = []
        for key, coeff in lc.items():
            j = index.get(key)
            if j is None:
                raise MatrixConstructionError(f"key {key!r} is not among the column labels")
            entries.append((j, Fraction(coeff)))
        entries.sort()
        built.append(tuple(entries))
    return QMatrix(rows=tuple(built), columns=tuple(columns))


def _integer_rows(m: QMatrix) -> tuple:
    """Clear denominators row by row; returns (int_rows, scales) with
    int_rows[i] = scales[i] * rows[i] entrywise."""
    int_rows = []
    scales = []
    for row in m.rows:
        lcm = 1
        for _, v in row:
            lcm = lcm * v.denominator // gcd(lcm, v.denominator)
        int_rows.append(tuple((j, int(v * lcm)) for j, v in row))
        scales.append(lcm)
    return tuple(int_rows), tuple(scales)


# ---------------------------------------------------------------------------
# Dense modular kernels (float64; exact for p < 2^20)
# ---------------------------------------------------------------------------

def _dense_modp(int_rows, ncols: int, p: int) -> np.ndarray:
    A = np.zeros((len(int_rows), ncols), dtype=np.float64)
    for i, row in enumerate(int_rows):
        for j, v in row:
            A[i, j] = v % p
    return A


def _row_echelon_modp(A: np.ndarray, p: int, reduce_above: bool = False):
    """In-place elimination mod p; returns (rank, pivot_cols, row_perm).

    ``row_perm[i]`` is the original index of row i after pivoting; with
    ``reduce_above`` the result is in fully reduced form.
    """
    m, n = A.shape
    perm = np.arange(m)
    r = 0
    pivot_cols = []
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
            perm[[r, i]] = perm[[i, r]]
        inv = pow(int(A[r, c]), p - 2, p)
        A[r] = (A[r] * inv) % p
        if reduce_above:
            f = A[:, c].copy()
            f[r] = 0.0
        else:
            f = np.zeros(m)
            f[r + 1 :] = A[r + 1 :, c]
        nzr = np.nonzero(f)[0]
        if nzr.size:
            A[nzr] = (A[nzr] - np.outer(f[nzr], A[r])) % p
        pivot_cols.append(c)
        r += 1
    return r, pivot_cols, perm


def _rank_modp_chunked(int_rows, ncols: int, p: int, chunk: int = 384):
    """Rank mod p without materializing the full dense matrix.

    Maintains a reduced row-echelon basis; each chunk is reduced against it
    with one exact float64 matmul, then echelonized.  The chunk size keeps
    the per-pivot elimination cheap (that term scales with rank*chunk*ncols,
    the matmul term does not depend on the chunk size).  Returns
    (rank, pivot_row_indices, pivot_cols, basis) where ``basis`` is the
    reduced echelon basis (rank x ncols).
    """
    basis = np.zeros((0, ncols), dtype=np.float64)
    pivot_cols: list = []
    pivot_rows: list = []
    nrows = len(int_rows)
    for start in range(0, nrows, chunk):
        if len(pivot_cols) == ncols:
            break  # full column rank; later rows cannot add to it
        rows = int_rows[start : start + chunk]
        C = _dense_modp(rows, ncols, p)
        if basis.shape[0]:
            coeff = C[:, pivot_cols]
            if np.any(coeff):
                C = (C - coeff @ basis) % p
        r, new_cols, perm = _row_echelon_modp(C, p, reduce_above=True)
        if r == 0:
            continue
        new_rows = C[:r]
        if basis.shape[0]:
            coeff = basis[:, new_cols]
            if np.any(coeff):
                basis = (basis - coeff @ new_rows) % p
        basis = np.vstack([basis, new_rows])
        pivot_cols.extend(new_cols)
        pivot_rows.extend(start + perm[i] for i in range(r))
        order = np.argsort(pivot_cols)
        pivot_cols = [pivot_cols[i] for i in order]
        pivot_rows = [pivot_rows[i] for i in order]
        basis = basis[order]
    return len(pivot_cols), pivot_rows, pivot_cols, basis


def _rank_modp_python(int_rows, p: int) -> int:
    """Sparse elimination mod an arbitrary prime, pure Python."""
    pivots: dict = {}
    rank = 0
    for row in int_rows:
        work = {}
        for j, v in row:
            v %= p
            if v:
                work[j] = v
        while work:
            c = min(work)
            piv = pivots.get(c)
            if piv is None:
                inv = pow(work[c], p - 2, p)
                work = {j: v * inv % p for j, v in work.items()}
                work = {j: v for j, v in work.items() if v}
                pivots[c] = work
                rank += 1
                break
            f = work.pop(c)
            for j, v in piv.items():
                if j == c:
                    continue
                new = (work.get(j, 0) - f * v) % p
                if new:
                    work[j] = new
                else:
                    work.pop(j, None)
    return rank


def rank_modular(m: QMatrix, prime: int) -> int:
    """Rank of ``m`` reduced mod ``prime``; always <= the rank over Q."""
    int_rows, _ = _integer_rows(m)
    for row in m.rows:
        for _, v in row:
            if v.denominator % prime == 0:
                raise PrimeDividesDenominator(f"prime {prime} divides a denominator")
    if not m.rows or not m.columns:
        return 0
    if prime < MAX_SCREEN_PRIME:
        rank, _, _, _ = _rank_modp_chunked(int_rows, m.ncols, prime)
        return rank
    return _rank_modp_python(int_rows, prime)


# ---------------------------------------------------------------------------
# Exact rank (fraction-free elimination)
# ---------------------------------------------------------------------------

def rank_exact(m: QMatrix) -> int:
    """Rank over Q by fraction-free (determinant-division) elimination."""
    int_rows, _ = _integer_rows(m)
    rows = [dict(r) for r in int_rows if r]
    rank = 0
    prev = 1
    while rows:
        # Markowitz-style: pivot in the sparsest row, smallest column
        rows.sort(key=len)
        pivot_row = rows.pop(0)
        c = min(pivot_row)
        piv = pivot_row[c]
        rank += 1
        new_rows = []
        for row in rows:
            f = row.get(c)
            if f is None:
                out = {j: v * piv // prev for j, v in row.items()}
            else:
                out = {}
                for j in set(row) | set(pivot_row):
                    val = row.get(j, 0) * piv - f * pivot_row.get(j, 0)
                    if val:
                        out[j] = val // prev
                out.pop(c, None)
            if out:
                new_rows.append(out)
        rows = new_rows
        prev = piv
    return rank


# ---------------------------------------------------------------------------
# Rational reconstruction and CRT
# ---------------------------------------------------------------------------

def rational_reconstruct(a: int, m: int) -> Optional[Fraction]:
    """Find p/q = a (mod m) with |p|, q <= sqrt(m/2), or None."""
    a %= m
    if a == 0:
        return Fraction(0)
    bound = isqrt(m // 2)
    r0, r1 = m, a
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if abs(s1) > bound or r1 == 0 and s1 == 0:
        return None
    if s1 == 0:
        return None
    if gcd(r1, abs(s1)) != 1:
        return None
    if s1 < 0:
        return Fraction(-r1, -s1)
    return Fraction(r1, s1)


def crt_pair(r1: int, m1: int, r2: int, m2: int) -> tuple:
    """Combine residues; moduli must be coprime."""
    inv = pow(m1 % m2, -1, m2)
    t = (r2 - r1) % m2 * inv % m2
    return r1 + m1 * t, m1 * m2


# ---------------------------------------------------------------------------
# Certified rank (modular pivots + exact nullspace)
# ---------------------------------------------------------------------------

def _kernel_basis_modp(basis: np.ndarray, pivot_cols, ncols: int, p: int):
    """Unit-form kernel vectors of the row space of an RREF basis, mod p."""
    free_cols = [c for c in range(ncols) if c not in set(pivot_cols)]
    vectors = []
    for f in free_cols:
        v = [0] * ncols
        v[f] = 1
        col = basis[:, f]
        for idx, c in enumerate(pivot_cols):
            if col[idx]:
                v[c] = int(-col[idx]) % p
        vectors.append(v)
    return free_cols, vectors


def _verify_integer_nullspace(int_rows, null_int_cols) -> bool:
    """Exactly check that every row is orthogonal to every integer vector."""
    if not null_int_cols:
        return True
    ncols = len(null_int_cols[0])
    max_n = max((max(abs(x) for x in col) if col else 0) for col in null_int_cols)
    max_m = max((max(abs(v) for _, v in row) if row else 0) for row in int_rows) if int_rows else 0
    max_nnz = max((len(row) for row in int_rows), default=0)
    if max_n and max_m and max_n * max_m * max_nnz < (1 << 62):
        N = np.array(null_int_cols, dtype=np.int64).T  # ncols x k
        for row in int_rows:
            if not row:
                continue
            idx = np.fromiter((j for j, _ in row), dtype=np.int64, count=len(row))
            val = np.fromiter((v for _, v in row), dtype=np.int64, count=len(row))
            if np.any(val @ N[idx]):
                return False
        return True
    for row in int_rows:
        for col in null_int_cols:
            if sum(v * col[j] for j, v in row):
                return False
    return True


def rank_certified(m: QMatrix, seed: int = 0, exact: bool = True, max_primes: int = 4):
    """Return (rank, certified) where ``certified`` means proven over Q.

    The modular rank is always a rigorous lower bound; it is certified as the
    exact rank either because it is full, or because an exactly verified
    integer nullspace of complementary dimension exists.  With ``exact``
    false only the screen runs.
    """
    if not m.rows or not m.columns:
        return 0, True
    int_rows, _ = _integer_rows(m)
    primes = prime_sequence(seed)
    p = next(primes)
    rank, pivot_rows, pivot_cols, basis = _rank_modp_chunked(int_rows, m.ncols, p)
    if rank == min(m.nrows, m.ncols):
        return rank, True
    if not exact:
        return rank, False

    # residue tables for the kernel entries, extended by CRT on demand
    free_cols, vectors = _kernel_basis_modp(basis, pivot_cols, m.ncols, p)
    residues = [[(v, p) for v in vec] for vec in vectors]
    for attempt in range(max_primes):
        null_int_cols = []
        ok = True
        for vec_res in residues:
            frs = []
            for r, mod in vec_res:
                fr = rational_reconstruct(r, mod)
                if fr is None:
                    ok = False
                    break
                frs.append(fr)
            if not ok:
                break
            lcm = 1
            for fr in frs:
                lcm = lcm * fr.denominator // gcd(lcm, fr.denominator)
            null_int_cols.append([int(fr * lcm) for fr in frs])
        if ok and _verify_integer_nullspace(int_rows, null_int_cols):
            return rank, True
        # add another prime and retry
        p2 = next(primes)
        r2, pr2, pc2, basis2 = _rank_modp_chunked(int_rows, m.ncols, p2)
        if r2 != rank or pc2 != pivot_cols:
            # prime disagreement: restart from the larger-rank screen
            if r2 > rank:
                rank, pivot_cols, basis = r2, pc2, basis2
                free_cols, vectors = _kernel_basis_modp(basis, pivot_cols, m.ncols, p2)
                residues = [[(v, p2) for v in vec] for vec in vectors]
                if rank == min(m.nrows, m.ncols):
                    return rank, True
            continue
        _, vectors2 = _kernel_basis_modp(basis2, pc2, m.ncols, p2)
        for vec_res, vec2 in zip(residues, vectors2):
            for i, ((r1, m1), v2) in enumerate(zip(vec_res, vec2)):
                vec_res[i] = crt_pair(r1, m1, v2 % p2, p2)
    return rank_exact(m), True


# ---------------------------------------------------------------------------
# Row-span membership
# ---------------------------------------------------------------------------

def _target_vector(m: QMatrix, target: LinComb):
    index = {key: j for j, key in enumerate(m.columns)}
    vec = {}
    for key, coeff in target.items():
        j = index.get(key)
        if j is None:
            raise MatrixConstructionError(f"target key {key!r} is not among the column labels")
        vec[j] = Fraction(coeff)
    return vec


def _verify_combination(m: QMatrix, coeffs, target: LinComb) -> bool:
    acc: dict = {}
    for c, row in zip(coeffs, m.rows):
        if not c:
            continue
        for j, v in row:
            new = acc.get(j, 0) + c * v
            if new:
                acc[j] = new
            else:
                acc.pop(j, None)
    want = _target_vector(m, target)
    return acc == want


def _solve_exact_fraction(m: QMatrix, target: LinComb, support=None):
    """Exact Gaussian solve of c . m = target, optionally restricted to a
    subset of rows; returns a full-length coefficient list or None."""
    rows = list(range(m.nrows)) if support is None else sorted(support)
    # columns of the system = rows of m; equations = matrix columns
    cols_with_entries = sorted({j for i in rows for j, _ in m.rows[i]} | set(_target_vector(m, target)))
    col_pos = {j: i for i, j in enumerate(cols_with_entries)}
    n_eq = len(cols_with_entries)
    aug = []
    tvec = _target_vector(m, target)
    for eq in range(n_eq):
        aug.append([Fraction(0)] * (len(rows) + 1))
    for k, i in enumerate(rows):
        for j, v in m.rows[i]:
            aug[col_pos[j]][k] = v
    for j, v in tvec.items():
        aug[col_pos[j]][len(rows)] = v
    # forward elimination with partial (first nonzero) pivoting
    piv_of_col: dict = {}
    r = 0
    for c in range(len(rows)):
        pr = None
        for i in range(r, n_eq):
            if aug[i][c]:
                pr = i
                break
        if pr is None:
            continue
        aug[r], aug[pr] = aug[pr], aug[r]
        pv = aug[r][c]
        aug[r] = [x / pv for x in aug[r]]
        for i in range(n_eq):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        piv_of_col[c] = r
        r += 1
    for i in range(r, n_eq):
        if aug[i][len(rows)]:
            return None
    coeffs = [Fraction(0)] * m.nrows
    for c, pr in piv_of_col.items():
        coeffs[rows[c]] = aug[pr][len(rows)]
    return coeffs


def solve_membership(m: QMatrix, target: LinComb, seed: int = 0,
                     certify_absence: bool = False):
    """Exact coefficients c with c . m = target, or None.

    Candidates are found modulo screening primes, rationally reconstructed,
    and re-multiplied exactly before being returned; a failed reconstruction
    escalates through more primes and finally falls back to exact
    elimination.  Absence is decided by agreement of three primes unless
    ``certify_absence`` asks for the exact fallback.
    """
    if not m.rows:
        return [] if not target else None
    int_rows, scales = _integer_rows(m)
    tvec = _target_vector(m, target)
    t_lcm = 1
    for v in tvec.values():
        t_lcm = t_lcm * v.denominator // gcd(t_lcm, v.denominator)
    t_int = {j: int(v * t_lcm) for j, v in tvec.items()}

    primes = prime_sequence(seed)
    residues = None
    modulus = None
    pivot_sig = None
    absent_votes = 0
    for _ in range(8):
        p = next(primes)
        A = np.zeros((m.ncols, m.nrows + 1), dtype=np.float64)
        for i, row in enumerate(int_rows):
            for j, v in row:
                A[j, i] = v % p
        for j, v in t_int.items():
            A[j, m.nrows] = v % p
        rank, pivot_cols, _ = _row_echelon_modp(A, p, reduce_above=True)
        if pivot_cols and pivot_cols[-1] == m.nrows:
            absent_votes += 1
            if absent_votes >= 3 and not certify_absence:
                return None
            if certify_absence:
                break
            continue
        sol = [0] * m.nrows
        for r_i, c in enumerate(pivot_cols):
            sol[c] = int(A[r_i, m.nrows]) % p
        if residues is None or pivot_sig != tuple(pivot_cols):
            residues = [(s, p) for s in sol]
            modulus = p
            pivot_sig = tuple(pivot_cols)
        else:
            residues = [crt_pair(r, mod, s, p) for (r, mod), s in zip(residues, sol)]
            modulus *= p
        candidate = []
        ok = True
        for r, mod in residues:
            fr = rational_reconstruct(r, mod)
            if fr is None:
                ok = False
                break
            candidate.append(fr)
        if ok:
            # c' solves c'.(scale*row) = t_lcm*target, so row coeff = c'*scale/t_lcm
            coeffs = [fr * scale / t_lcm for fr, scale in zip(candidate, scales)]
            if _verify_combination(m, coeffs, target):
                return coeffs
    coeffs = _solve_exact_fraction(m, target)
    if coeffs is None:
        return None
    if not _verify_combination(m, coeffs, target):
        raise InternalInconsistencyError("exact solve failed re-multiplication")
    return coeffs


# ---------------------------------------------------------------------------
# Incremental transform engine (built once, solves many targets)
# ---------------------------------------------------------------------------

class TransformRREF:
    """Maintains T with T @ A in reduced echelon form as columns of A arrive.

    Columns are absorbed one at a time (dense vectors or unit columns); the
    engine then answers 'is t in the span of the absorbed columns, and with
    which coefficients' for many targets.  All arithmetic is mod p in exact
    float64; n is capped so dot products stay below 2^53.
    """

    def __init__(self, n: int, p: int):
        if p >= MAX_SCREEN_PRIME:
            raise ValueError("transform engine needs a screening prime below 2^19")
        if n > 8192:
            raise ValueError("transform engine capped at 8192 rows")
        self.n = n
        self.p = p
        self.T = np.eye(n, dtype=np.float64)
        self.is_pivot_row = np.zeros(n, dtype=bool)
        self.pivot_row_of_col: dict = {}
        self.ncols = 0

    def copy(self) -> "TransformRREF":
        dup = TransformRREF.__new__(TransformRREF)
        dup.n, dup.p = self.n, self.p
        dup.T = self.T.copy()
        dup.is_pivot_row = self.is_pivot_row.copy()
        dup.pivot_row_of_col = dict(self.pivot_row_of_col)
        dup.ncols = self.ncols
        return dup

    @property
    def rank(self) -> int:
        return len(self.pivot_row_of_col)

    def reduce_vec(self, v: np.ndarray) -> np.ndarray:
        return (self.T @ v) % self.p

    def absorb(self, col_id, v: np.ndarray = None, unit_index: int = None):
        """Absorb one column (dense vector v, or the unit vector e_j)."""
        p = self.p
        if unit_index is not None:
            w = self.T[:, unit_index].copy()
        else:
            w = self.reduce_vec(v)
        self.ncols += 1
        cand = np.nonzero((w != 0) & ~self.is_pivot_row)[0]
        if cand.size == 0:
            return None
        i = int(cand[0])
        inv = pow(int(w[i]), p - 2, p)
        self.T[i] = (self.T[i] * inv) % p
        f = w.copy()
        f[i] = 0.0
        nz = np.nonzero(f)[0]
        if nz.size > self.n // 2:
            # dense update in place, no fancy-indexing copies
            self.T -= np.outer(f, self.T[i])
            self.T %= p
        elif nz.size:
            block = self.T[nz]
            block -= np.outer(f[nz], self.T[i])
            block %= p
            self.T[nz] = block
        self.is_pivot_row[i] = True
        self.pivot_row_of_col[col_id] = i
        return i

    def solve_unit(self, index: int):
        """Like :meth:`solve` for the unit target e_index (column extraction)."""
        y = self.T[:, index]
        if np.any(y[~self.is_pivot_row]):
            return None
        out = {}
        for col_id, i in self.pivot_row_of_col.items():
            if y[i]:
                out[col_id] = int(y[i])
        return out

    def absorb_block(self, col_ids, V: np.ndarray = None, unit_indices=None,
                     panel: int = 64) -> None:
        """Absorb many columns at once with panel-blocked transform updates.

        Equivalent to absorbing the columns one by one, but the transform T
        is updated once per panel through a rank-k matmul (exact: products
        stay below 2^38 and panel sums below 2^53).
        """
        p = self.p
        total = len(col_ids)
        pos = 0
        while pos < total:
            width = min(panel, total - pos)
            if unit_indices is not None:
                W = self.T[:, unit_indices[pos:pos + width]].copy()
            else:
                W = (self.T @ V[:, pos:pos + width]) % p
            C = np.zeros((self.n, 0), dtype=np.float64)
            piv_rows: list = []
            for j in range(width):
                w = W[:, j]
                cand = np.nonzero((w != 0) & ~self.is_pivot_row)[0]
                self.ncols += 1
                if cand.size == 0:
                    # dependent on earlier columns; nothing to record
                    continue
                i = int(cand[0])
                alpha = pow(int(w[i]), p - 2, p)
                g = (-alpha * w) % p
                g[i] = (alpha - 1) % p
                # update the panel transform P = I + C E^T by E = I + g e_i^T
                if piv_rows:
                    C = (C + np.outer(g, C[i, :])) % p
                C = np.hstack([C, g[:, None]])
                piv_rows.append(i)
                # update remaining panel columns by E
                if j + 1 < width:
                    rest = W[:, j + 1:]
                    rest += np.outer(g, rest[i, :])
                    rest %= p
                self.is_pivot_row[i] = True
                self.pivot_row_of_col[col_ids[pos + j]] = i
            if piv_rows:
                self.T += C @ self.T[piv_rows, :]
                self.T %= p
            pos += width

    def solve(self, t: np.ndarray):
        """Coefficients {col_id: residue} with A x = t (mod p), or None."""
        y = self.reduce_vec(t)
        if np.any(y[~self.is_pivot_row]):
            return None
        out = {}
        for col_id, i in self.pivot_row_of_col.items():
            if y[i]:
                out[col_id] = int(y[i])
        return out
