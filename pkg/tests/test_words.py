import random

import pytest
from fractions import Fraction

from qmzv.words import (
    DomainError,
    LinComb,
    WordParseError,
    blocks,
    format_word,
    from_blocks,
    is_admissible,
    lincomb_combine,
    parse_word,
    reverse_index,
    tau,
    word_stats,
)


def test_parse_word_examples():
    assert parse_word("2,0,1") == (2, 0, 1)
    assert parse_word("") == ()
    assert parse_word("1,0,0,0,1") == (1, 0, 0, 0, 1)
    assert parse_word(" 3 , 1 ") == (3, 1)


def test_parse_word_errors_name_token():
    with pytest.raises(WordParseError, match="x"):
        parse_word("1,x,2")
    with pytest.raises(WordParseError, match="-2"):
        parse_word("1,-2")


def test_parse_format_round_trip():
    rng = random.Random(1)
    for _ in range(200):
        w = tuple(rng.randint(0, 5) for _ in range(rng.randint(0, 8)))
        assert parse_word(format_word(w)) == w


def test_word_stats_examples():
    assert word_stats((2, 0)) == word_stats((2, 0))
    st = word_stats((2, 0))
    assert (st.length, st.depth, st.zeros, st.weight) == (2, 1, 1, 3)
    st = word_stats(())
    assert (st.length, st.depth, st.zeros, st.weight) == (0, 0, 0, 0)
    st = word_stats((1, 0, 1, 0, 0))
    assert (st.length, st.depth, st.zeros, st.weight) == (5, 2, 3, 5)


def test_stats_identities():
    rng = random.Random(2)
    for _ in range(300):
        w = tuple(rng.randint(0, 4) for _ in range(rng.randint(0, 9)))
        st = word_stats(w)
        assert st.length == st.depth + st.zeros
        assert st.weight >= st.depth
        all_ones = all(j == 1 for j in w if j >= 1)
        assert (st.weight == st.depth + st.zeros) == all_ones or st.depth == 0


def test_tau_examples():
    assert tau((3, 2)) == (1, 0, 1, 0, 0)
    assert tau(()) == ()
    assert tau((2, 0, 1)) == (1, 2, 0)


def test_tau_rejects_inadmissible():
    with pytest.raises(DomainError):
        tau((0, 1))
    assert not is_admissible((0,))
    assert is_admissible(())


def _random_admissible(rng, max_weight=12):
    d = rng.randint(1, 4)
    word = []
    weight = 0
    for i in range(d):
        k = rng.randint(1, 3)
        z = rng.randint(0, 2)
        word.append((k, z))
        weight += k + z
        if weight >= max_weight:
            break
    return from_blocks(word)


def test_tau_involution_and_stat_law_500_cases():
    rng = random.Random(3)
    for _ in range(500):
        w = _random_admissible(rng)
        st = word_stats(w)
        t = tau(w)
        assert tau(t) == w
        ts = word_stats(t)
        assert ts.depth == st.depth
        assert ts.weight == st.weight
        assert ts.zeros == st.weight - st.zeros - st.depth


def test_blocks_round_trip():
    w = (3, 0, 0, 1, 2, 0)
    assert from_blocks(blocks(w)) == w
    assert blocks((1,)) == [(1, 0)]


def test_reverse_index():
    assert reverse_index((1, 2, 3)) == (3, 2, 1)
    assert reverse_index(()) == ()
    assert reverse_index((4, 4)) == (4, 4)
    assert reverse_index(reverse_index((5, 1, 2))) == (5, 1, 2)


def test_lincomb_combine_examples():
    a = LinComb({(1,): 1})
    assert not lincomb_combine(a, a, -1)
    b = LinComb({(2,): Fraction(2, 3)})
    assert lincomb_combine(LinComb(), b, 3) == LinComb({(2,): 2})
    c = lincomb_combine(LinComb({(1, 1): 1}), LinComb({(2,): 1}), Fraction(1, 2))
    assert c == LinComb({(1, 1): 1, (2,): Fraction(1, 2)})


def test_lincomb_mixed_universes_rejected():
    words = LinComb({(1, 2): 1})
    pairs = LinComb({((1,), (1, 1)): 1})
    with pytest.raises(TypeError):
        lincomb_combine(words, pairs, 1)


def test_lincomb_algebra_laws():
    rng = random.Random(4)

    def rand_lc():
        return LinComb({tuple(rng.randint(0, 3) for _ in range(rng.randint(1, 3))):
                        Fraction(rng.randint(-4, 4), rng.randint(1, 4))
                        for _ in range(rng.randint(0, 4))})

    for _ in range(200):
        a, b, c = rand_lc(), rand_lc(), rand_lc()
        s = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
        assert a + b == b + a
        assert (a + b) + c == a + (b + c)
        assert (a + b).scale(s) == a.scale(s) + b.scale(s)


def test_lincomb_serialization_sorted():
    lc = LinComb({(2,): Fraction(1, 2), (1, 0): 3})
    assert str(lc) == "3*1,0 + 1/2*2"
    assert str(LinComb()) == "0"
