import numpy as np
import pytest
import sympy

import oracles
from dedekind_residue.numfield import make_field
from dedekind_residue.splitting import (
    LocalSplitting, UnsupportedIndexDivisor, dedekind_index_test, enumerate_prime_powers,
    load_overrides, parse_overrides, sieve_primes, split_prime, split_table, squarefree_decomposition,
    strict_limit)


def test_strict_limit():
    assert strict_limit(10) == 9
    assert strict_limit(10.5) == 10
    assert strict_limit(2) == 1


def test_sieve_matches_sympy():
    assert sieve_primes(11).tolist() == [2, 3, 5, 7]
    assert sieve_primes(2).tolist() == []
    got = sieve_primes(200_003)
    assert got.tolist() == list(sympy.primerange(2, 200_003))
    assert len(sieve_primes(10**6)) == 78498


def test_gaussian_splitting():
    K = make_field((1, 0, 1))
    assert split_prime(K, 2).factors == ((1, 2),)
    assert split_prime(K, 3).factors == ((2, 1),)
    assert split_prime(K, 5).factors == ((1, 1), (1, 1))
    assert str(split_prime(K, 7)) == "2^1"


def test_norm_stream_gaussian_below_10():
    K = make_field((1, 0, 1))
    assert [t.norm for t in enumerate_prime_powers(K, 10)] == [2, 4, 8, 9, 5, 5]


def test_cubic_against_sympy():
    K = make_field((-1, -1, 0, 1))
    for p in sympy.primerange(2, 3000):
        loc = split_prime(K, p)
        assert sum(f * e for f, e in loc.factors) == 3
        if p != 23:
            assert [f for f, _ in loc.factors] == oracles.residue_degrees((-1, -1, 0, 1), p)
    assert split_prime(K, 23).factors == ((1, 1), (1, 2))


def test_dedekind_criterion():
    assert dedekind_index_test((3, 0, 1), 2) is True
    assert dedekind_index_test((1, 0, 1), 2) is False
    assert dedekind_index_test((-5, 0, 1), 2) is True  # Z[sqrt 5] has index 2
    assert dedekind_index_test((-2, 0, 1), 2) is False


def test_index_divisor_handling():
    K = make_field((3, 0, 1))
    # the quadratic path knows the answer anyway; the flag is still raised
    loc = split_prime(K, 2)
    assert loc.index_divisor and loc.factors == ((2, 1),)
    with pytest.raises(UnsupportedIndexDivisor) as exc:
        split_prime(K, 2, method="polynomial")
    assert exc.value.p == 2
    loose = split_prime(K, 2, method="polynomial", strict=False)
    assert not loose.known and str(loose) == "?"


def test_cubic_index_divisor_needs_override():
    # x^3 + x^2 - 2x + 8: 2 is a common index divisor, it splits completely
    K = make_field((8, -2, 1, 1))
    with pytest.raises(UnsupportedIndexDivisor):
        split_table(K, 50)
    ov = parse_overrides("2: 1^1 1^1 1^1  # totally split\n")
    table = split_table(K, 50, ov)
    assert table.local(0).factors == ((1, 1), (1, 1), (1, 1))


def test_squarefree_decomposition_mod_p():
    # (x+1)^2 (x+2) over F_3, coefficients constant first
    f = [2, 5 % 3, 4 % 3, 1]
    parts = squarefree_decomposition(f, 3)
    assert sorted((len(g) - 1, e) for g, e in parts) == [(1, 1), (1, 2)]
    # x^3 - 1 = (x - 1)^3 in F_3 needs the p-th root step
    parts = squarefree_decomposition([2, 0, 0, 1], 3)
    assert [(len(g) - 1, e) for g, e in parts] == [(1, 3)]


def test_parse_overrides():
    ov = parse_overrides("# header\n2: 1^2 1\n\n7 : 2^1\n")
    assert ov == {2: ((1, 2), (1, 1)), 7: ((2, 1),)}
    with pytest.raises(ValueError):
        parse_overrides("2 1^2")
    with pytest.raises(ValueError):
        parse_overrides("2: 0^1")


def test_load_overrides_checks_degree(tmp_path):
    p = tmp_path / "ov.txt"
    p.write_text("2: 1^2\n")
    assert load_overrides(p, 2) == {2: ((1, 2),)}
    with pytest.raises(ValueError):
        load_overrides(p, 3)


def test_table_thread_and_block_invariance():
    K = make_field((-1, -1, 0, 1))
    a = split_table(K, 300_000, threads=1)
    b = split_table(K, 300_000, threads=4, block=1 << 12)
    for name in ("primes", "offsets", "degrees", "ramification", "index_divisor"):
        assert np.array_equal(getattr(a, name), getattr(b, name))


def test_table_matches_pointwise():
    K = make_field((1, 1, 1))
    table = split_table(K, 2000, method="polynomial", strict=False)
    for i in range(len(table)):
        p = int(table.primes[i])
        assert table.local(i) == split_prime(K, p, method="polynomial", strict=False)


def test_local_splitting_str():
    assert str(LocalSplitting(5, ((1, 1), (1, 1)))) == "1^1 1^1"
