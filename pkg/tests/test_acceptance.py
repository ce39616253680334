"""Acceptance gate: every numbered criterion at its stated tolerance.

Each test prints one PASS line on success.  The extended (z, d <= 8) table
and kernel checks are gated behind QMZV_EXTENDED=1; everything else runs by
default.  All equality checks are exact (integer or rational); there are no
numeric tolerances anywhere.
"""

import os
import random
import time
from math import comb

import pytest

from qmzv import spanlab
from qmzv.cli import latex_table, table_caption
from qmzv.compositions import conjectured_basis
from qmzv.products import (
    box,
    box_index_lincomb,
    box_index_recursive,
    psi,
    stuffle,
    stuffle_index,
    stuffle_lincomb,
)
from qmzv.qseries import check_homomorphism, zeta_series
from qmzv.words import LinComb, from_blocks, reverse_index, tau, word_stats
from qmzv.workbench import (
    dep1_reduce,
    get_solver,
    membership_F,
    membership_bachmann,
    words_of_weight,
)

EXTENDED = os.environ.get("QMZV_EXTENDED") == "1"

# the published table values: dim = C(z+d-1, z-s_min) for z <= d
SPOT_CELLS = {(2, 2, 1): 3, (3, 3, 1): 10, (4, 4, 1): 35,
              (3, 5, 2): 7, (4, 6, 3): 9, (6, 6, 6): 1, (2, 2, 3): 0}

KERNEL_LISTING = {(2, 2): 1, (2, 3): 1, (3, 3): 6, (2, 4): 1, (3, 4): 7, (4, 4): 29,
                  (2, 5): 1, (3, 5): 8, (4, 5): 37, (5, 5): 130,
                  (2, 6): 1, (3, 6): 9, (4, 6): 46, (5, 6): 176, (6, 6): 562}

KERNEL_LISTING_EXT = {(2, 7): 1, (3, 7): 10, (4, 7): 56, (5, 7): 232, (6, 7): 794,
                      (7, 7): 2380, (2, 8): 1, (3, 8): 11, (4, 8): 67, (5, 8): 299,
                      (6, 8): 1093, (7, 8): 3473, (8, 8): 9949}


def test_criterion_1_table_reproduction():
    start = time.monotonic()
    for s_min in range(1, 7):
        reports, complete = spanlab.boxspan_grid(6, 6, s_min, mode="auto")
        assert complete
        for r in reports:
            expected = comb(r.z + r.d - 1, r.z - s_min) if s_min <= r.z else 0
            assert r.computed_rank == expected, (r.z, r.d, s_min)
            assert r.conjectured == expected
            assert r.mode == "exact-certified"
    for (z, d, s), value in SPOT_CELLS.items():
        assert spanlab.dim_boxspan(z, d, s).computed_rank == value
    elapsed = time.monotonic() - start
    assert elapsed < 300, f"table reproduction took {elapsed:.0f}s"
    print(f"\nPASS criterion 1: dim tables 2<=z<=d<=6, s_min<=6 exact ({elapsed:.0f}s)")


@pytest.mark.skipif(not EXTENDED, reason="extended range gated by QMZV_EXTENDED=1")
def test_criterion_2_table_reproduction_extended():
    start = time.monotonic()
    for s_min in range(1, 9):
        reports, complete = spanlab.boxspan_grid(8, 8, s_min, mode="modular")
        assert complete
        for r in reports:
            expected = comb(r.z + r.d - 1, r.z - s_min) if s_min <= r.z else 0
            assert r.computed_rank == expected, (r.z, r.d, s_min)
    assert spanlab.dim_boxspan(8, 8, 1, mode="modular").computed_rank == 6435
    elapsed = time.monotonic() - start
    assert elapsed < 7200
    print(f"\nPASS criterion 2: extended tables z,d<=8 ({elapsed:.0f}s, modular mode)")


def _expected_table_body(zmax: int, dmax: int, s_min: int) -> str:
    lines = ["\\begin{tabular}{|" + "c|" * (zmax - 1) + "c|}", " \\hline"]
    lines.append("d$\\backslash$ z&" + "&".join(str(z) for z in range(2, zmax + 1))
                 + "\\\\ \\hline")
    for d in range(2, dmax + 1):
        row = str(d)
        for z in range(2, zmax + 1):
            if z <= d:
                v = comb(z + d - 1, z - s_min) if s_min <= z else 0
                row += f"&{v}\\ \\textcolor{{blue}}{{{v}}} "
            else:
                row += "&-"
        lines.append(row + "\\\\ \\hline")
    lines.append("\\end{tabular}")
    return "\n".join(lines)


def test_criterion_1_latex_table_bodies():
    for s_min in (1, 2, 6):
        reports, _ = spanlab.boxspan_grid(6, 6, s_min, mode="auto")
        text = latex_table(reports, 2, 6, 2, 6, table_caption(s_min))
        assert _expected_table_body(6, 6, s_min) in text
    print("\nPASS criterion 1 (format): LaTeX tabular bodies cell-exact for z,d<=6")


@pytest.mark.skipif(not EXTENDED, reason="extended range gated by QMZV_EXTENDED=1")
def test_criterion_2_latex_byte_identity_with_published_figure():
    reports, _ = spanlab.boxspan_grid(8, 8, 1, mode="modular")
    text = latex_table(reports, 2, 8, 2, 8, table_caption(1))
    published_body = (
        "\\begin{tabular}{|c|c|c|c|c|c|c|c|}\n"
        " \\hline\n"
        "d$\\backslash$ z&2&3&4&5&6&7&8\\\\ \\hline\n"
        "2&3\\ \\textcolor{blue}{3} &-&-&-&-&-&-\\\\ \\hline\n"
        "3&4\\ \\textcolor{blue}{4} &10\\ \\textcolor{blue}{10} &-&-&-&-&-\\\\ \\hline\n"
        "4&5\\ \\textcolor{blue}{5} &15\\ \\textcolor{blue}{15} &35\\ \\textcolor{blue}{35} "
        "&-&-&-&-\\\\ \\hline\n"
        "5&6\\ \\textcolor{blue}{6} &21\\ \\textcolor{blue}{21} &56\\ \\textcolor{blue}{56} "
        "&126\\ \\textcolor{blue}{126} &-&-&-\\\\ \\hline\n"
        "6&7\\ \\textcolor{blue}{7} &28\\ \\textcolor{blue}{28} &84\\ \\textcolor{blue}{84} "
        "&210\\ \\textcolor{blue}{210} &462\\ \\textcolor{blue}{462} &-&-\\\\ \\hline\n"
        "7&8\\ \\textcolor{blue}{8} &36\\ \\textcolor{blue}{36} &120\\ \\textcolor{blue}{120} "
        "&330\\ \\textcolor{blue}{330} &792\\ \\textcolor{blue}{792} "
        "&1716\\ \\textcolor{blue}{1716} &-\\\\ \\hline\n"
        "8&9\\ \\textcolor{blue}{9} &45\\ \\textcolor{blue}{45} &165\\ \\textcolor{blue}{165} "
        "&495\\ \\textcolor{blue}{495} &1287\\ \\textcolor{blue}{1287} "
        "&3003\\ \\textcolor{blue}{3003} &6435\\ \\textcolor{blue}{6435} \\\\ \\hline\n"
        "\\end{tabular}")
    assert published_body in text
    print("\nPASS criterion 2 (format): 8x8 tabular body byte-identical to the published figure")


def test_criterion_3_kernel_dimensions():
    reports, complete = spanlab.kernel_grid(6, 6, mode="auto")
    assert complete
    seen = {}
    for r in reports:
        assert r.mode == "exact-certified"
        seen[(r.z, r.d)] = r.computed_rank
        assert r.conjectured == KERNEL_LISTING[(r.z, r.d)]
    assert seen == KERNEL_LISTING
    print("\nPASS criterion 3: kernel dimensions 2<=z<=d<=6 match the listing")


@pytest.mark.skipif(not EXTENDED, reason="extended range gated by QMZV_EXTENDED=1")
def test_criterion_3_kernel_dimensions_extended():
    start = time.monotonic()
    reports, complete = spanlab.kernel_grid(8, 8, mode="modular")
    assert complete
    listing = dict(KERNEL_LISTING)
    listing.update(KERNEL_LISTING_EXT)
    for r in reports:
        assert r.computed_rank == listing[(r.z, r.d)], (r.z, r.d)
    print(f"\nPASS criterion 3 (extended): kernel dims z,d<=8 ({time.monotonic()-start:.0f}s)")


def test_criterion_4_kernel_containment():
    for d in range(1, 7):
        for z in range(1, d + 1):
            assert spanlab.verify_kernel_containment(z, d), (z, d)
    print("\nPASS criterion 4: kernel generators map to zero under the box map (z<=d<=6)")


def test_criterion_5_conjectured_basis():
    for d in range(1, 7):
        for z in range(1, d + 1):
            basis = conjectured_basis(z, d)
            assert len(basis) == comb(z + d - 1, min(z, d) - 1), (z, d)
            assert spanlab.verify_conjectured_basis(z, d), (z, d)
    print("\nPASS criterion 5: |B_{z,d}| and full rank (exact-certified) for z<=d<=6")


def test_criterion_6_identity_suite():
    start = time.monotonic()
    reports = spanlab.identity_suite(8)
    for r in reports:
        assert r.passed, (r.family, r.mismatches[:2])
    elapsed = time.monotonic() - start
    assert elapsed < 60, f"identity suite took {elapsed:.0f}s"
    total = sum(r.cases for r in reports)
    print(f"\nPASS criterion 6: {total} identity cases over 6 families, d<=8 ({elapsed:.1f}s)")


def _random_index(rng, lo, hi, kmax=3):
    return tuple(rng.randint(1, kmax) for _ in range(rng.randint(lo, hi)))


def test_criterion_7_property_suites():
    rng = random.Random(97)
    # stuffle commutativity / associativity
    for _ in range(200):
        a = _random_index(rng, 1, 3)
        b = _random_index(rng, 1, 3)
        assert stuffle(a, b) == stuffle(b, a)
    for _ in range(200):
        a, b, c = (_random_index(rng, 1, 2) for _ in range(3))
        assert stuffle_lincomb(stuffle(a, b), LinComb.single(c)) == \
            stuffle_lincomb(LinComb.single(a), stuffle(b, c))
    # tau involution and the stat-transform law
    for _ in range(200):
        word = from_blocks((rng.randint(1, 3), rng.randint(0, 2))
                           for _ in range(rng.randint(1, 4)))
        st = word_stats(word)
        image = tau(word)
        ist = word_stats(image)
        assert tau(image) == word
        assert (ist.depth, ist.weight) == (st.depth, st.weight)
        assert ist.zeros == st.weight - st.zeros - st.depth
    # box = minimal-depth layer of the stuffle
    for _ in range(200):
        la = rng.randint(1, 3)
        lb = rng.randint(la, 4)
        a, b = _random_index(rng, la, la), _random_index(rng, lb, lb)
        layer = LinComb.from_raw({w: c for w, c in stuffle_index(a, b).items()
                                  if len(w) == lb})
        assert box(a, b) == layer
        assert box_index_recursive(a, b) == layer
    # box/stuffle bridge
    for _ in range(200):
        n1 = _random_index(rng, 1, 2)
        n2 = _random_index(rng, 1, 2)
        ell = _random_index(rng, len(n1) + len(n2), len(n1) + len(n2) + 1)
        assert box_index_lincomb(LinComb.single(n1), box_index_recursive(n2, ell)) == \
            box_index_lincomb(stuffle_index(n1, n2), LinComb.single(ell))
    # reversal symmetry
    for _ in range(200):
        s = rng.randint(1, 3)
        n = _random_index(rng, s, s)
        ell = _random_index(rng, s, 4)
        assert box_index_recursive(reverse_index(n), reverse_index(ell)) == \
            box_index_recursive(n, ell).map_keys(reverse_index)
    # exponent-embedding compatibility
    for _ in range(200):
        s = rng.randint(1, 2)
        d = rng.randint(s, 3)
        n = _random_index(rng, s, s)
        ell = _random_index(rng, d, d)
        k = _random_index(rng, d, d)
        embedded = psi(k, LinComb.single(ell)).keys()[0]
        assert box(n, embedded) == psi(k, box_index_recursive(n, ell))
    print("\nPASS criterion 7: six property suites, 200 randomized cases each")


def test_criterion_8_series_oracle():
    for w in range(1, 7):
        for word in words_of_weight(w):
            assert zeta_series(word, 25) == zeta_series(tau(word), 25), word
    rng = random.Random(98)
    pool = [w for k in range(1, 6) for w in words_of_weight(k)]
    for _ in range(100):
        a, b = rng.choice(pool), rng.choice(pool)
        assert check_homomorphism(a, b, 25), (a, b)
    print("\nPASS criterion 8: series duality (wt<=6) and homomorphism (100 pairs), order 25")


def test_criterion_9_zero_free_reduction_desk_check():
    start = time.monotonic()
    targets = []
    for w in range(2, 9):
        for word in words_of_weight(w):
            st = word_stats(word)
            if st.zeros >= 1 and st.zeros + st.depth <= 6:
                targets.append((w, st.zeros + st.depth, word))
    # group by weight and depth cap so solver state is reused
    targets.sort()
    failures = []
    for w, _, word in targets:
        cert = membership_bachmann(word, budget=w)
        if cert is None or not cert.verify():
            failures.append(word)
    elapsed = time.monotonic() - start
    assert not failures, failures[:5]
    assert elapsed < 600, f"desk check took {elapsed:.0f}s"
    print(f"\nPASS criterion 9: {len(targets)} reductions at budget = weight, "
          f"all certificates replay ({elapsed:.0f}s)")


def test_criterion_10_refined_desk_check():
    start = time.monotonic()
    groups = {}
    for w in range(2, 9):
        for word in words_of_weight(w):
            st = word_stats(word)
            if st.zeros >= 1 and 1 <= st.depth <= 4:
                groups.setdefault((w, st.zeros, st.depth), []).append(word)
    failures = []
    escalated = 0
    total = 0
    for (w, z, d), members in sorted(groups.items()):
        for word in members:
            total += 1
            cert = membership_F(word, z, d, w, budget=w)
            if cert is None:
                cert = membership_F(word, z, d, w, budget=w + 1)
                if cert is not None:
                    escalated += 1
            if cert is None or not cert.verify():
                failures.append(word)
    elapsed = time.monotonic() - start
    assert not failures, failures[:5]
    print(f"\nPASS criterion 10: {total} refined memberships (depth<=4, wt<=8) "
          f"at budget <= weight+1 ({escalated} needed the +1 slack; {elapsed:.0f}s)")


def test_criterion_11_depth_one_closed_form():
    assert dep1_reduce(2, 2) == LinComb({(4,): 1, (3, 1): -1, (2, 2): -1,
                                         (2, 1): -1, (1, 2): -1})
    checked = 0
    for k in range(1, 5):
        for z in range(1, 5):
            word = (k,) + (0,) * z
            w = k + z
            rep = dep1_reduce(k, z)
            for rep_word, _ in rep.items():
                assert word_stats(rep_word).zeros == 0
            cert = membership_bachmann(word, budget=w)
            assert cert is not None, (k, z)
            solver = get_solver(w)
            inner = solver.solve_lincomb(rep - cert.representative, allowed=[])
            assert inner is not None, (k, z)
            checked += 1
    print(f"\nPASS criterion 11: depth-one closed form matches the worked example "
          f"verbatim; {checked} representative pairs agree modulo the relation span")
