"""Dimension verification for box-product spans and the kernel family.

Every table cell is an exact-rank question about a sparse integer matrix:
rows are box products of index pairs (or kernel-family combinations over
index-pair keys), columns are the monomial labels.  Cells run through the
modular screen and, unless modular mode is forced, get certified exactly
(full-rank modular results already certify; deficient ranks are certified
by a verified integer nullspace, with fraction-free elimination as the
final fallback).
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import comb
from typing import Optional

from . import linalg
from .compositions import (
    conjectured_basis,
    conjectured_basis_size,
    index_pairs,
    indices_of,
    kernel_generators,
)
from .products import box_index_recursive, concat
from .words import DomainError, LinComb


@dataclass(frozen=True)
class DimensionReport:
    z: int
    d: int
    s_min: int
    computed_rank: int
    conjectured: int
    mode: str  # 'modular-screen' | 'exact-certified'
    elapsed: float = 0.0

    @property
    def matches(self) -> bool:
        return self.computed_rank == self.conjectured

    def record(self) -> dict:
        return {
            "z": self.z,
            "d": self.d,
            "s_min": self.s_min,
            "rank": self.computed_rank,
            "conjectured": self.conjectured,
            "mode": self.mode,
            "elapsed": round(self.elapsed, 6),
        }


def conjectured_boxspan_dim(z: int, d: int, s_min: int = 1) -> int:
    """C(z+d-1, z-s_min) for z <= d; C(z+d-1, d-1) for z > d at s_min = 1."""
    if z <= d:
        return comb(z + d - 1, z - s_min) if s_min <= z else 0
    if s_min != 1:
        raise DomainError("for z > d only s_min = 1 is defined")
    return comb(z + d - 1, d - 1)


def conjectured_kernel_dim(z: int, d: int) -> int:
    return sum(comb(z + d - 1, d + j - 1) for j in range(2, z + 1))


def boxspan_matrix(z: int, d: int, s_min: int = 1) -> linalg.QMatrix:
    rows = [box_index_recursive(n, ell) for n, ell in index_pairs(z, d, s_min)]
    return linalg.matrix_from_lincombs(rows, indices_of(z, d))


def kernel_matrix(z: int, d: int) -> linalg.QMatrix:
    rows = [g.pair_lincomb() for g in kernel_generators(z, d)]
    return linalg.matrix_from_lincombs(rows, index_pairs(z, d, 1))


def _ranked_report(m: linalg.QMatrix, z: int, d: int, s_min: int, conjectured: int,
                   mode: str, seed: int) -> DimensionReport:
    start = time.monotonic()
    if mode == "modular":
        rank, _ = linalg.rank_certified(m, seed=seed, exact=False)
        used = "modular-screen"
    elif mode == "exact":
        rank, certified = linalg.rank_certified(m, seed=seed, exact=True)
        used = "exact-certified"
    elif mode == "auto":
        rank, certified = linalg.rank_certified(m, seed=seed, exact=True)
        used = "exact-certified" if certified else "modular-screen"
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return DimensionReport(z=z, d=d, s_min=s_min, computed_rank=rank,
                           conjectured=conjectured, mode=used,
                           elapsed=time.monotonic() - start)


def dim_boxspan(z: int, d: int, s_min: int = 1, mode: str = "auto",
                seed: int = 0) -> DimensionReport:
    if z < 1 or d < 1:
        raise DomainError(f"need z, d >= 1, got ({z}, {d})")
    conjectured = conjectured_boxspan_dim(z, d, s_min)
    return _ranked_report(boxspan_matrix(z, d, s_min), z, d, s_min, conjectured, mode, seed)


def kernel_dim(z: int, d: int, mode: str = "auto", seed: int = 0) -> DimensionReport:
    if not 1 <= z <= d:
        raise DomainError(f"kernel family needs 1 <= z <= d, got ({z}, {d})")
    conjectured = conjectured_kernel_dim(z, d)
    return _ranked_report(kernel_matrix(z, d), z, d, 0, conjectured, mode, seed)


def verify_kernel_containment(z: int, d: int) -> bool:
    """True iff every kernel generator maps to the zero combination under
    (n, ell) -> u_n box u_ell."""
    for g in kernel_generators(z, d):
        image = LinComb()
        for (n, ell), coeff in g.pair_lincomb().items():
            image = image.combine(box_index_recursive(n, ell), coeff)
        if image:
            return False
    return True


def verify_conjectured_basis(z: int, d: int, seed: int = 0) -> bool:
    """True iff the conjectured basis has the predicted size and full rank
    (exact-certified)."""
    basis = conjectured_basis(z, d)
    if len(basis) != conjectured_basis_size(z, d):
        return False
    rows = [box_index_recursive(n, ell) for n, ell in basis]
    m = linalg.matrix_from_lincombs(rows, indices_of(z, d))
    rank, certified = linalg.rank_certified(m, seed=seed, exact=True)
    return certified and rank == len(basis)


# ---------------------------------------------------------------------------
# Identity suite
# ---------------------------------------------------------------------------

@dataclass
class IdentityReport:
    family: str
    cases: int = 0
    mismatches: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def check(self, label: str, lhs: LinComb, rhs: LinComb) -> None:
        self.cases += 1
        if lhs != rhs:
            diff = lhs - rhs
            self.mismatches.append(f"{label}: lhs - rhs = {diff}")


def _ones(n: int) -> tuple:
    return (1,) * n


def _sign(exponent: int) -> int:
    return 1 if exponent % 2 == 0 else -1


def _box(a, b) -> LinComb:
    return box_index_recursive(tuple(a), tuple(b))


def _square_word(d_max: int) -> IdentityReport:
    rep = IdentityReport("square-word")
    for d in range(1, d_max + 1):
        rep.check(f"d={d}", LinComb.single((2,) * d), _box(_ones(d), _ones(d)))
    return rep


def _tall_letter(d_max: int) -> IdentityReport:
    rep = IdentityReport("tall-letter")
    for d in range(1, d_max + 1):
        for j in range(d):
            lhs = LinComb.single(_ones(j) + (1 + d,) + _ones(d - j - 1))
            rhs = LinComb()
            for a in range(1, d + 1):
                term = _box(_ones(a), _ones(j) + (1 + d - a,) + _ones(d - j - 1))
                rhs = rhs.combine(term, _sign(a - 1))
            rep.check(f"d={d},j={j}", lhs, rhs)
    return rep


def _leading_one_three(d_max: int) -> IdentityReport:
    rep = IdentityReport("leading-one-three")
    for d in range(2, d_max + 1):
        for j in range(d - 1):
            lhs = LinComb.single((1,) + (2,) * j + (3,) + (2,) * (d - j - 2))
            rhs = LinComb()
            for a in range(1, j + 2):
                left = _ones(j - a + 1) + (2,) + _ones(d - j - 2)
                rhs = rhs.combine(_box(left, (a,) + _ones(d - 1)), _sign(a + 1))
            for a in range(1, j + 3):
                rhs = rhs.combine(_box(_ones(d - a + 1), (a,) + _ones(d - 1)), _sign(a + 1))
            rep.check(f"d={d},j={j}", lhs, rhs)
    return rep


def _double_head_case(d: int, mu1: int, mu2: int) -> tuple:
    """LHS and RHS of the double-head reduction at (d, mu1, mu2)."""
    if mu1 == 1:
        lhs = concat((1, mu2), _box(_ones(d - mu2 + 1), _ones(d - 2)))
        rhs = concat((1, mu2 - 1) if mu2 > 1 else (1, 0),
                     _box(_ones(d - mu2 + 2), _ones(d - 2))).scale(-1)
        for a in range(0, mu2 - 2):
            for b in range(0, a + 2):
                term = _box(_ones(d - mu2 + b + 2), (2 + a - b, mu2 - 2 - a) + _ones(d - 2))
                rhs = rhs.combine(term, -_sign(b))
            for b in range(0, a + 1):
                term = _box(_ones(a - b) + (2,) + _ones(d - mu2 + 1),
                            (1 + b, mu2 - 2 - a) + _ones(d - 2))
                rhs = rhs.combine(term, _sign(a + b))
        return lhs, rhs
    lhs = concat((mu1, mu2), _box(_ones(d - mu1 - mu2 + 2), _ones(d - 2)))
    rhs = LinComb()
    for a in range(mu2, d - mu1 + 3):
        term = _box(_ones(d - mu1 - a + 3), (mu1 - 1, a) + _ones(d - 2))
        rhs = rhs.combine(term, _sign(mu2 + a))
    rhs = rhs.combine(concat((mu1 - 1, mu2), _box(_ones(d - mu1 - mu2 + 3), _ones(d - 2))), -1)
    rhs = rhs.combine(LinComb.single((mu1 - 1, d - mu1 + 3) + _ones(d - 2)),
                      _sign(d - mu1 + 1 - mu2))
    return lhs, rhs


def _double_head(d_max: int) -> IdentityReport:
    rep = IdentityReport("double-head-reduction")
    for d in range(2, d_max + 1):
        for mu1 in range(1, d + 2):
            for mu2 in range(1, d + 3 - mu1):
                lhs, rhs = _double_head_case(d, mu1, mu2)
                rep.check(f"d={d},mu=({mu1},{mu2})", lhs, rhs)
    return rep


def _double_head_monomial(d_max: int) -> IdentityReport:
    # boundary mu1 + mu2 = d + 2, where the left side is the plain monomial
    rep = IdentityReport("double-head-monomial")
    for d in range(2, d_max + 1):
        for j in range(0, d + 1):
            mu1, mu2 = 1 + j, d - j + 1
            lhs, rhs = _double_head_case(d, mu1, mu2)
            expected = LinComb.single((mu1, mu2) + _ones(d - 2))
            rep.check(f"d={d},j={j} (lhs is monomial)", lhs, expected)
            rep.check(f"d={d},j={j}", lhs, rhs)
    return rep


def _two_one_prefix(d_max: int) -> IdentityReport:
    rep = IdentityReport("two-one-prefix")
    for d in range(3, d_max + 1):
        for j in range(0, d - 2):
            lhs = LinComb.single((2, 1) + (2,) * j + (3,) + (2,) * (d - j - 3))
            rhs = LinComb()
            for a in range(2, j + 3):
                term = _box(_ones(j - a + 2) + (2,) + _ones(d - j - 3), (a,) + _ones(d - 1))
                rhs = rhs.combine(term, _sign(a))
            for a in range(1, j + 4):
                rhs = rhs.combine(_box(_ones(d - a + 1), (a,) + _ones(d - 1)), _sign(a))
            for a in range(2, j + 2):
                for b in range(2, j + 4 - a):
                    term = _box(_ones(j - (a + b) + 3) + (2,) + _ones(d - j - 3),
                                (a, b) + _ones(d - 2))
                    rhs = rhs.combine(term, -_sign(a + b))
            rhs = rhs.combine(concat((2, j + 3), _box(_ones(d - j - 3), _ones(d - 2))),
                              _sign(j + 3))
            for a in range(2, j + 2):
                b = j + 3 - a
                if b < 2:
                    continue
                if d - j - 4 >= 0:
                    rhs = rhs.combine(
                        concat((a + 2, b + 1), _box(_ones(d - j - 4), _ones(d - 2))),
                        _sign(j + 3))
                rhs = rhs.combine(
                    concat((a + 2, b), _box(_ones(d - j - 3), _ones(d - 2))),
                    _sign(j + 3))
            rep.check(f"d={d},j={j}", lhs, rhs)
    return rep


def identity_suite(d_max: int) -> list:
    """Exact symbolic verification of the monomial-in-box-span identities."""
    if d_max < 1:
        raise DomainError(f"d_max must be >= 1, got {d_max}")
    return [
        _square_word(d_max),
        _tall_letter(d_max),
        _leading_one_three(d_max),
        _double_head(d_max),
        _double_head_monomial(d_max),
        _two_one_prefix(d_max),
    ]


# ---------------------------------------------------------------------------
# Cached grid evaluation (used by the CLI)
# ---------------------------------------------------------------------------

class CellCache:
    """Content-addressed JSON cache for dimension reports."""

    def __init__(self, directory: Optional[str]):
        self.directory = directory
        if directory:
            os.makedirs(directory, exist_ok=True)

    @staticmethod
    def _content_hash(m: linalg.QMatrix) -> str:
        h = hashlib.sha256()
        h.update(m.dump().encode())
        return h.hexdigest()[:24]

    def key(self, kind: str, z: int, d: int, s_min: int, mode: str, seed: int,
            m: linalg.QMatrix) -> str:
        return f"{kind}-{z}-{d}-{s_min}-{mode}-{seed}-{self._content_hash(m)}"

    def get(self, key: str) -> Optional[DimensionReport]:
        if not self.directory:
            return None
        path = os.path.join(self.directory, key + ".json")
        if not os.path.exists(path):
            return None
        with open(path) as fh:
            raw = json.load(fh)
        return DimensionReport(z=raw["z"], d=raw["d"], s_min=raw["s_min"],
                               computed_rank=raw["rank"], conjectured=raw["conjectured"],
                               mode=raw["mode"], elapsed=raw["elapsed"])

    def put(self, key: str, report: DimensionReport) -> None:
        if not self.directory:
            return
        path = os.path.join(self.directory, key + ".json")
        with open(path, "w") as fh:
            json.dump(report.record(), fh)


def boxspan_grid(zmax: int, dmax: int, s_min: int, mode: str = "auto", seed: int = 0,
                 jobs: int = 1, cache: Optional[CellCache] = None,
                 deadline: Optional[float] = None) -> tuple:
    """Reports for all 2 <= z <= d <= dmax, z <= zmax; deterministic order.

    Returns (reports, complete); cells skipped past the deadline are omitted
    and ``complete`` is False.
    """
    cells = [(z, d) for d in range(2, dmax + 1) for z in range(2, min(z_top(d, zmax), zmax) + 1)]

    def run(cell):
        z, d = cell
        if deadline is not None and time.monotonic() > deadline:
            return cell, None
        if cache is not None:
            m = boxspan_matrix(z, d, s_min)
            key = cache.key("boxspan", z, d, s_min, mode, seed, m)
            hit = cache.get(key)
            if hit is not None:
                return cell, hit
            rep = _ranked_report(m, z, d, s_min, conjectured_boxspan_dim(z, d, s_min), mode, seed)
            cache.put(key, rep)
            return cell, rep
        return cell, dim_boxspan(z, d, s_min, mode=mode, seed=seed)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = dict(pool.map(run, cells))
    else:
        results = dict(run(c) for c in cells)
    reports = [results[c] for c in cells if results[c] is not None]
    return reports, len(reports) == len(cells)


def z_top(d: int, zmax: int) -> int:
    return min(d, zmax)


def kernel_grid(zmax: int, dmax: int, mode: str = "auto", seed: int = 0,
                jobs: int = 1, deadline: Optional[float] = None) -> tuple:
    """Kernel-dimension reports for 2 <= z <= d <= dmax (appendix order)."""
    cells = [(z, d) for d in range(2, dmax + 1) for z in range(2, min(d, zmax) + 1)]

    def run(cell):
        z, d = cell
        if deadline is not None and time.monotonic() > deadline:
            return cell, None
        return cell, kernel_dim(z, d, mode=mode, seed=seed)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = dict(pool.map(run, cells))
    else:
        results = dict(run(c) for c in cells)
    reports = [results[c] for c in cells if results[c] is not None]
    return reports, len(reports) == len(cells)
