import random

import pytest

from k3lab.counting import (
    BadReductionError,
    ap_elliptic,
    count_double_cover_raw,
    count_hyperelliptic_odd,
    count_resolved,
    count_roots_mod_p,
    frobenius_fixed_nodes,
)
from k3lab.ffield import ext_field_build, prime_field, prime_sieve, quad_char
from k3lab.models import K5, QQ, ReducedBranch, catalog, get, good_prime, reduce_branch
from k3lab.numfield import factor_prime

from oracles import (
    branch_component_callables,
    naive_ap,
    naive_double_cover_count,
    naive_hyperelliptic_count,
)


def slot_q(p):
    return factor_prime(QQ, p)[0]


def z6_branch(K, scale=1):
    return ReducedBranch(K=K, scale=scale if K.f == 1 else K.elem(scale),
                         components=[(6, {(0, 0, 6): 1 if K.f == 1 else K.one()})])


def test_z6_closed_forms():
    for p in (5, 13, 101):
        K = prime_field(p)
        assert count_double_cover_raw(z6_branch(K)) == 2 * p * p + p + 1
        n = next(x for x in range(2, p) if quad_char(K, x) == -1)
        assert count_double_cover_raw(z6_branch(K, scale=n)) == p + 1


def test_nonhomogeneous_rejected():
    K = prime_field(5)
    with pytest.raises(ValueError):
        count_double_cover_raw(ReducedBranch(K=K, scale=1, components=[(6, {(0, 0, 5): 1})]))
    with pytest.raises(ValueError):
        count_double_cover_raw(ReducedBranch(K=K, scale=1, components=[(5, {(0, 0, 5): 1})]))


def test_raw_count_matches_naive_prime_fields():
    x1 = get("X1")
    for p in (3, 5, 7, 11, 13):
        rb = reduce_branch(x1, slot_q(p))
        want = naive_double_cover_count(branch_component_callables(rb), rb.K)
        assert count_double_cover_raw(rb) == want, p


def test_raw_count_matches_naive_ext_fields():
    # X1's sextic pushed into small extension fields exercises the digit path
    x1 = get("X1")
    for p, f in [(3, 2), (5, 2), (3, 3), (7, 2)]:
        K = ext_field_build(p, f)
        comps = []
        for comp in x1.branch.components:
            mono = {exp: K.elem(c.num[0] if c.num else 0) for exp, c in comp.monomials}
            comps.append((comp.degree, mono))
        rb = ReducedBranch(K=K, scale=K.one(), components=comps)
        want = naive_double_cover_count(branch_component_callables(rb), K)
        assert count_double_cover_raw(rb) == want, (p, f)


def test_raw_count_matches_naive_x5_slots():
    # exercises coefficient reduction at slots of every residue degree
    x5 = get("X5")
    for p in (5, 13, 23):
        for slot in factor_prime(K5, p):
            if slot.norm > 200 or not good_prime(x5, slot):
                continue
            rb = reduce_branch(x5, slot)
            want = naive_double_cover_count(branch_component_callables(rb), rb.K)
            assert count_double_cover_raw(rb) == want, (p, slot.f)


def test_scaling_invariance():
    # scaling the sextic by a sixth power leaves every character value fixed
    x1 = get("X1")
    for p in (7, 11):
        K = prime_field(p)
        rb = reduce_branch(x1, slot_q(p))
        lam = 3 % p
        scaled = ReducedBranch(K=K, scale=rb.scale * pow(lam, 6, p) % p,
                               components=rb.components)
        assert count_double_cover_raw(scaled) == count_double_cover_raw(rb)


def test_hyperelliptic_examples():
    g = (-1, 0, 0, 0, 0, 1)  # x^5 - 1
    assert count_hyperelliptic_odd(g, prime_field(3)) == 4
    for p in (7, 11, 13):
        K = prime_field(p)
        assert count_hyperelliptic_odd(g, K) == naive_hyperelliptic_count(g, K)
    for p, f in [(3, 2), (7, 2), (11, 2)]:
        K = ext_field_build(p, f)
        assert count_hyperelliptic_odd(g, K) == naive_hyperelliptic_count(g, K)


def test_hyperelliptic_rejects_nonsquarefree():
    with pytest.raises(BadReductionError):
        count_hyperelliptic_odd((0, 0, 0, 1), prime_field(7))  # x^3
    with pytest.raises(BadReductionError):
        count_hyperelliptic_odd((-1, 0, 0, 0, 0, 1), prime_field(5))  # x^5-1 mod 5
    with pytest.raises(ValueError):
        count_hyperelliptic_odd((1, 0, 0, 0, 1), prime_field(7))  # even degree


def test_hyperelliptic_weil_bound():
    g = (-1, 0, 0, 0, 0, 1)
    for p in prime_sieve(200):
        if p in (2, 5):
            continue
        n = count_hyperelliptic_odd(g, prime_field(p))
        assert (n - p - 1) ** 2 <= 16 * p  # genus 2


def test_ap_examples():
    e1, e2 = get("E1"), get("E2")
    assert ap_elliptic(e1, 3) == 0
    # frozen from the exhaustive oracle: affine points (0,0), (2,0), (3,0)
    # plus infinity, so #E1(F_5) = 4 and a_5 = 2
    assert ap_elliptic(e1, 5) == 2
    # a_p(E2) = 0 iff p inert in Q(sqrt(-2))
    from k3lab.numfield import kronecker

    for p in (3, 5, 7, 11, 13):
        ap = ap_elliptic(e2, p)
        assert (ap == 0) == (kronecker(-2, p) == -1), p


def test_ap_matches_naive():
    for curve in (get("E1"), get("E2")):
        for p in prime_sieve(50):
            if p == 2:
                continue
            assert ap_elliptic(curve, p) == naive_ap(curve.poly, p), (curve.name, p)


def test_ap_bad_prime():
    with pytest.raises(BadReductionError):
        ap_elliptic(get("E1"), 2)


def test_count_roots_mod_p():
    rng = random.Random(5)
    for _ in range(50):
        coeffs = tuple(rng.randrange(-9, 10) for _ in range(4))
        if all(c == 0 for c in coeffs):
            continue
        p = rng.choice([3, 5, 7, 11, 13, 101])
        brute = sum(1 for x in range(p)
                    if sum(c * x**i for i, c in enumerate(coeffs)) % p == 0)
        filt = [c % p for c in coeffs]
        if all(c == 0 for c in filt):
            continue
        assert count_roots_mod_p(coeffs, p) == brute, (coeffs, p)


def test_count_resolved_x1():
    x1 = get("X1")
    slot = slot_q(7)
    raw = count_double_cover_raw(reduce_branch(x1, slot))
    assert count_resolved(x1, slot) == raw + 7 * 15


def test_count_resolved_x5_norm29():
    x5 = get("X5")
    slot = factor_prime(K5, 29)[0]
    raw = count_double_cover_raw(reduce_branch(x5, slot))
    assert count_resolved(x5, slot) == raw + 29 * 15


def test_count_resolved_rejects_bad():
    with pytest.raises(BadReductionError):
        count_resolved(get("X1"), slot_q(3))


def test_fixed_nodes_x4_congruence():
    # the four stored cubics are all cyclic of conductor 9: 3 + 12 iff
    # p = +-1 mod 9, else 3
    x4 = get("X4")
    for p in prime_sieve(200):
        if p in (2, 3):
            continue
        fixed = frobenius_fixed_nodes(x4, slot_q(p))
        want = 15 if p % 9 in (1, 8) else 3
        assert fixed == want, p


def test_weil_bound_resolved():
    for name in ("X1", "X4", "X6t"):
        spec = get(name)
        for p in prime_sieve(60):
            slot = slot_q(p)
            if not good_prime(spec, slot):
                continue
            n = count_resolved(spec, slot)
            assert abs(n - 1 - p * p) <= 22 * p, (name, p)
