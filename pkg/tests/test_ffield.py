import random

import numpy as np
import pytest

from k3lab import ffield
from k3lab.ffield import ExtField, ext_field_build, prime_field, prime_sieve, quad_char


def exhaustive_squares(K):
    sq = set()
    for x in K.elements():
        if x != K.zero():
            sq.add(K.mul(x, x))
    return sq


def test_quad_char_examples():
    assert quad_char(prime_field(5), 4) == 1
    # squares mod 7 are {1, 2, 4}
    F7 = prime_field(7)
    assert exhaustive_squares(F7) == {(1,), (2,), (4,)}
    assert quad_char(F7, 3) == -1
    assert quad_char(F7, 0) == 0


def test_char_table_matches_exhaustive_squaring():
    for p, f in [(3, 2), (5, 2), (7, 2), (3, 3), (5, 3), (3, 4)]:
        K = ext_field_build(p, f)
        sq = exhaustive_squares(K)
        for x in K.elements():
            want = 0 if x == K.zero() else (1 if x in sq else -1)
            assert quad_char(K, x) == want, (p, f, x)


def test_build_examples():
    F3 = ext_field_build(3, 1)
    assert F3.modulus == (0, 1)
    with pytest.raises(ValueError):
        ext_field_build(2, 5)
    with pytest.raises(ValueError):
        ext_field_build(9, 1)
    F9 = ext_field_build(3, 2)
    assert int((F9.char_table == 1).sum()) == 4  # (q-1)/2


def test_table_budget():
    with pytest.raises(ValueError):
        ext_field_build(101, 4, table_budget=10**6)


def test_prime_sieve():
    assert prime_sieve(10) == [2, 3, 5, 7]
    assert prime_sieve(2) == [2]
    primes = prime_sieve(10**5)
    assert len(primes) == 9592
    # cross-check a slice by trial division
    for p in primes[::500]:
        assert ffield.is_prime(p)


def test_character_orthogonality():
    for p, f in [(3, 2), (7, 2), (97, 2), (3, 4), (5, 3), (13, 1), (9973, 1)]:
        K = ext_field_build(p, f)
        assert int(K.char_table.astype(np.int64).sum()) == 0, (p, f)
        assert int((K.char_table == 1).sum()) == (K.q - 1) // 2


def test_multiplicativity_random():
    rng = random.Random(7)
    for p, f in [(11, 1), (5, 2), (3, 3)]:
        K = ext_field_build(p, f)
        for _ in range(200):
            x = K.elem_of_index(rng.randrange(1, K.q))
            y = K.elem_of_index(rng.randrange(1, K.q))
            assert quad_char(K, K.mul(x, y)) == quad_char(K, x) * quad_char(K, y)


def test_euler_criterion_exhaustive():
    for p in prime_sieve(997):
        if p == 2:
            continue
        K = prime_field(p)
        for x in range(p):
            e = pow(x, (p - 1) // 2, p)
            want = 0 if x == 0 else (1 if e == 1 else -1)
            assert quad_char(K, x) == want


def test_build_deterministic():
    K1 = ext_field_build(7, 2)
    ffield._FIELD_CACHE.clear()
    K2 = ext_field_build(7, 2)
    assert K1.modulus == K2.modulus
    assert np.array_equal(K1.char_table, K2.char_table)


def test_scalar_arithmetic():
    K = ext_field_build(5, 2)
    a = K.elem((2, 3))
    b = K.elem((4, 1))
    assert K.mul(a, K.inv(a)) == K.one()
    assert K.add(a, K.neg(a)) == K.zero()
    assert K.mul(a, b) == K.mul(b, a)
    assert K.pow(a, K.q - 1) == K.one()
    with pytest.raises(ZeroDivisionError):
        K.inv(K.zero())


def test_vmul_matches_scalar():
    rng = random.Random(3)
    for p, f in [(7, 1), (5, 2), (3, 3)]:
        K = ext_field_build(p, f)
        xs = [K.elem_of_index(rng.randrange(K.q)) for _ in range(50)]
        ys = [K.elem_of_index(rng.randrange(K.q)) for _ in range(50)]
        A, B = K.varray(xs), K.varray(ys)
        got = K.vmul(A, B)
        for i, (x, y) in enumerate(zip(xs, ys)):
            want = K.mul(x, y)
            assert K.vindex(got[i : i + 1])[0] == K.index_of(want)


def test_index_roundtrip():
    K = ext_field_build(3, 3)
    for i in range(K.q):
        assert K.index_of(K.elem_of_index(i)) == i


def test_irreducibility_helper():
    # t^2 + 1 over F_3 irreducible, over F_5 not
    assert ffield.poly_is_irreducible([1, 0, 1], 3)
    assert not ffield.poly_is_irreducible([1, 0, 1], 5)
    assert ffield.poly_is_irreducible([1, 1, 0, 0, 1], 2)  # t^4+t+1 over F_2
