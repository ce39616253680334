import random

import pytest

from qmzv.products import stuffle
from qmzv.qseries import (
    check_homomorphism,
    check_relation_vanishes,
    lincomb_series,
    zeta_series,
)
from qmzv.words import DomainError, LinComb, from_blocks, tau, word_stats
from qmzv.workbench import admissible_words, relation_basis


def test_series_u1():
    s = zeta_series((1,), 5)
    assert s.const == 0
    assert s.coeffs == (1, 2, 2, 3, 2)  # divisor counts
    assert str(s) == "q + 2q^2 + 2q^3 + 3q^4 + 2q^5 + O(q^6)"


def test_series_empty_word():
    s = zeta_series((), 4)
    assert s.const == 1 and not any(s.coeffs)


def test_series_rejects_inadmissible_and_bad_order():
    with pytest.raises(DomainError):
        zeta_series((0, 1), 5)
    with pytest.raises(DomainError):
        zeta_series((1,), 0)


def test_series_coefficients_nonnegative():
    rng = random.Random(31)
    for _ in range(50):
        d = rng.randint(1, 3)
        w = from_blocks((rng.randint(1, 3), rng.randint(0, 2)) for _ in range(d))
        s = zeta_series(w, 15)
        assert all(c >= 0 for c in s.coeffs)
        assert s.const == 0


def test_duality_pair_u1u0_u2():
    assert zeta_series((1, 0), 20) == zeta_series((2,), 20)


def test_tau_invariance_weight_up_to_6_order_25():
    for w in admissible_words(6, 1):
        assert zeta_series(w, 25) == zeta_series(tau(w), 25)


def test_homomorphism_examples():
    assert check_homomorphism((1,), (1,), 15)
    assert check_homomorphism((), (3,), 10)
    assert check_homomorphism((2,), (1, 2), 12)


def test_homomorphism_random_pairs():
    rng = random.Random(32)
    words = admissible_words(5, 1)
    for _ in range(100):
        a, b = rng.choice(words), rng.choice(words)
        assert check_homomorphism(a, b, 20)


def test_relation_vanishes_examples():
    assert check_relation_vanishes(LinComb({(1, 0): 1, (2,): -1}), 25)
    gen = stuffle((1,), (1, 0)) - stuffle((1,), (2,))
    assert check_relation_vanishes(gen, 25)
    assert not check_relation_vanishes(LinComb({(1,): 1, (2,): -1}), 25)


def test_relation_basis_annihilated_sample():
    basis = relation_basis(4)
    for gen in basis.generators:
        assert check_relation_vanishes(gen, 25)
    rng = random.Random(33)
    big = relation_basis(6)
    for gen in rng.sample(list(big.generators), 25):
        assert check_relation_vanishes(gen, 25)


def test_series_multiplication_constants():
    one = zeta_series((), 6)
    s = zeta_series((2,), 6)
    assert one * s == s
    assert (s * s).const == 0


def test_lincomb_series_denominator_clearing():
    from fractions import Fraction
    c = LinComb({(1,): Fraction(1, 2), (2,): Fraction(1, 3)})
    acc, lcm = lincomb_series(c, 8)
    assert lcm == 6
    direct = zeta_series((1,), 8).scale(3) + zeta_series((2,), 8).scale(2)
    assert acc == direct
