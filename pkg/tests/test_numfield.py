import pytest

from k3lab.ffield import prime_field, prime_sieve, quad_char
from k3lab.models import K5, QQ
from k3lab.numfield import (
    BadPrimeError,
    NfElem,
    RamifiedPrimeError,
    factor_prime,
    kronecker,
    poly_discriminant,
    residue_reduce,
    splits_in_gaussian_ext,
)


def test_discriminant_of_base_cubic():
    assert K5.disc == 321  # 3 * 107
    assert poly_discriminant([1, 0, 1]) == -4
    assert poly_discriminant([-1, 0, 0, 0, 0, 1]) == 3125


def test_factor_prime_rational_field():
    (slot,) = factor_prime(QQ, 13)
    assert (slot.p, slot.f, slot.index, slot.norm) == (13, 1, 0, 13)
    assert slot.local_root == (0,)


def test_factor_prime_cubic_mod2():
    # m = t^3 + t^2 + 1 mod 2, no roots in F_2: one slot of degree 3
    slots = factor_prime(K5, 2)
    assert [(s.f, s.norm) for s in slots] == [(3, 8)]
    m2 = [c % 2 for c in K5.m]
    assert all(sum(c * r**i for i, c in enumerate(m2)) % 2 != 0 for r in (0, 1))


def test_factor_prime_cubic_mod29():
    slots = factor_prime(K5, 29)
    assert [(s.f, s.index) for s in slots] == [(1, 0), (2, 1)]
    # unique degree-1 prime of norm 29
    assert slots[0].norm == 29


def test_factor_ramified_rejected():
    for p in (3, 107):
        with pytest.raises(RamifiedPrimeError):
            factor_prime(K5, p)


def test_residue_degrees_sum_exhaustive():
    for p in prime_sieve(10**4):
        if K5.disc % p == 0:
            continue
        slots = factor_prime(K5, p)
        assert sum(s.f for s in slots) == 3
        assert [s.index for s in slots] == list(range(len(slots)))


def test_local_root_is_a_root():
    for p in prime_sieve(200):
        if p == 2 or K5.disc % p == 0:
            continue
        for slot in factor_prime(K5, p):
            if slot.norm > 10**4:
                continue
            K = slot.residue_field()
            acc = K.zero()
            for c in reversed(K5.m):
                acc = K.add(K.mul(acc, slot.local_root), K.elem(c))
            assert acc == K.zero(), (p, slot.f)


def test_residue_reduce_rational():
    slot = factor_prime(QQ, 7)[0]
    assert residue_reduce(NfElem.rational(5), slot) == (5,)
    slot2 = factor_prime(QQ, 2)[0]
    with pytest.raises(BadPrimeError):
        residue_reduce(NfElem.rational(1, 2), slot2)


def test_residue_reduce_alpha_at_29():
    # alpha = (-26 t^2 - 23 t + 16)/9 at the degree-1 slot over 29
    slot = factor_prime(K5, 29)[0]
    r = slot.local_root[0]
    expected = (-26 * r * r - 23 * r + 16) * pow(9, 27, 29) % 29
    alpha = NfElem(num=(16, -23, -26), den=9)
    assert residue_reduce(alpha, slot) == (expected,)


def test_splits_in_gaussian_ext():
    assert splits_in_gaussian_ext(factor_prime(QQ, 13)[0]) == "split"
    assert splits_in_gaussian_ext(factor_prime(QQ, 7)[0]) == "inert"
    assert splits_in_gaussian_ext(factor_prime(K5, 29)[0]) == "split"
    # agreement with chi(-1) in the residue field, all slots of norm <= 10^4
    for p in prime_sieve(100):
        if p == 2 or K5.disc % p == 0:
            continue
        for slot in factor_prime(K5, p):
            if slot.norm > 10**4:
                continue
            K = slot.residue_field()
            chi = quad_char(K, K.neg(K.one()))
            want = "split" if chi == 1 else "inert"
            assert splits_in_gaussian_ext(slot) == want


def test_kronecker():
    assert kronecker(-1, 5) == 1
    assert kronecker(-1, 7) == -1
    assert kronecker(-1974, 5) == quad_char(prime_field(5), -1974 % 5)
    assert kronecker(10, 5) == 0
    assert kronecker(7, 2) == 1   # 7 = -1 mod 8
    assert kronecker(3, 2) == -1
    assert kronecker(6, 2) == 0


def test_kronecker_matches_quad_char_sampled():
    import random

    rng = random.Random(11)
    primes = [p for p in prime_sieve(10**5) if p > 2]
    for _ in range(100):
        p = rng.choice(primes)
        D = rng.randrange(-10**6, 10**6)
        if D % p == 0:
            continue
        assert kronecker(D, p) == quad_char(prime_field(p), D % p)


def test_nfelem_normalisation():
    x = NfElem(num=(2, 4), den=6)
    assert x.num == (1, 2) and x.den == 3
    y = NfElem(num=(3,), den=-6)
    assert y.num == (-1,) and y.den == 2
    z = NfElem(num=(0, 0), den=5)
    assert z.num == () and z.den == 1
    with pytest.raises(ZeroDivisionError):
        NfElem(num=(1,), den=0)
