import random
from fractions import Fraction

import pytest

from k3lab.models import catalog, get
from k3lab.monodromy import (
    CharacterDesc,
    PredictorScopeError,
    SignedPermutation,
    all_signed_permutations,
    block_gram,
    block_matrix,
    component_group_order,
    det_exact,
    is_gram_orthogonal,
    jump_character_predict,
    mat_mul,
    sgn_2d,
    verify_centralizer,
    verify_normalizer_det,
)

from oracles import cofactor_det, inversion_sign


def test_sgn_examples():
    assert sgn_2d(SignedPermutation(pi=(0,), a=(1,))) == -1
    assert sgn_2d(SignedPermutation(pi=(1, 0), a=(0, 0))) == 1


def test_sgn_matches_inversion_count_exhaustive_d3():
    for s in all_signed_permutations(3):
        assert sgn_2d(s) == inversion_sign(s.embed_s2d())


def test_sgn_is_homomorphism():
    for d in (1, 2, 3):
        G = all_signed_permutations(d)
        assert len(G) == 2**d * [1, 2, 6][d - 1]
        for s in G:
            for t in G[:: max(1, len(G) // 12)]:
                assert sgn_2d(s * t) == sgn_2d(s) * sgn_2d(t)


def test_group_law_and_inverse():
    rng = random.Random(1)
    G = all_signed_permutations(3)
    e = SignedPermutation.identity(3)
    for _ in range(60):
        s, t, u = (rng.choice(G) for _ in range(3))
        assert (s * t) * u == s * (t * u)
        assert s * s.inverse() == e
        assert s.inverse() * s == e


def test_block_matrix_examples():
    e = SignedPermutation.identity(1)
    assert block_matrix(e, 3) == [[1 if i == j else 0 for j in range(6)] for i in range(6)]
    swap = SignedPermutation(pi=(0,), a=(1,))
    assert block_matrix(swap, 1) == [[0, 1], [1, 0]]
    s = SignedPermutation(pi=(1, 0), a=(1, 0))
    M = block_matrix(s, 2)
    G = block_gram(2, 2)
    assert is_gram_orthogonal(M, G)
    assert det_exact(M) == sgn_2d(s) ** 2


def test_block_matrix_is_homomorphism():
    for d, b in [(2, 1), (2, 2), (3, 1)]:
        G = all_signed_permutations(d)
        for s in G:
            for t in G[:: max(1, len(G) // 8)]:
                assert block_matrix(s * t, b) == mat_mul(block_matrix(s, b), block_matrix(t, b))


def test_conjugation_is_central():
    for d in (1, 2, 3):
        conj = SignedPermutation(pi=tuple(range(d)), a=(1,) * d)
        for s in all_signed_permutations(d):
            assert conj * s == s * conj


def test_det_exact_examples():
    assert det_exact([[1, 0], [0, 1]]) == 1
    assert det_exact([[0, 1], [1, 0]]) == -1
    assert det_exact([[2, 0], [0, 3]]) == 6
    assert det_exact([[1, 2], [2, 4]]) == 0
    assert det_exact([[Fraction(1, 2), 0], [0, Fraction(1, 3)]]) == Fraction(1, 6)


def test_det_exact_matches_cofactor():
    rng = random.Random(42)
    for n in range(1, 7):
        for _ in range(12):
            M = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)]
            assert det_exact(M) == cofactor_det(M), M


def test_verify_normalizer_det_budget():
    r = verify_normalizer_det(1, 3)
    assert r.checked == 2 and r.ok
    assert det_exact(block_matrix(SignedPermutation(pi=(0,), a=(1,)), 3)) == -1
    r = verify_normalizer_det(2, 1)
    assert r.checked == 8 and r.ok
    r = verify_normalizer_det(3, 2)
    assert r.checked == 48 and r.ok
    with pytest.raises(ValueError):
        verify_normalizer_det(5, 1)


def test_verify_centralizer():
    r = verify_centralizer(1, 1, trials=3)
    assert r.ok and r.checked == 3
    r = verify_centralizer(2, 2, trials=4)
    assert r.ok
    r = verify_centralizer(3, 3, trials=2)
    assert r.ok


def test_catalog_galois_groups_have_stated_order():
    for name in ("X1", "X2", "X3", "X4", "X5"):
        endo = get(name).endo
        gens = [SignedPermutation(pi=pi, a=a) for pi, a in endo.galois_gens]
        group = {SignedPermutation.identity(endo.d)}
        frontier = list(group)
        while frontier:
            nxt = []
            for g in frontier:
                for h in gens:
                    e = g * h
                    if e not in group:
                        group.add(e)
                        nxt.append(e)
            frontier = nxt
        assert len(group) == endo.kE_over_k, name
        assert len(group) <= 2**endo.d * [1, 2, 6, 24][endo.d - 1]


def test_jump_character_acceptance_values():
    want = {"X1": ("KRONECKER", -1), "X2": ("KRONECKER", 5),
            "X3": ("TRIVIAL", None), "X4": ("KRONECKER", -1)}
    for name, (kind, param) in want.items():
        spec = get(name)
        ch = jump_character_predict(spec.endo, spec.picard_rank)
        assert (ch.kind, ch.param) == (kind, param), name
    orders = [component_group_order(get(n).endo) for n in ("X1", "X2", "X3", "X4", "X5")]
    assert orders == [(2, "exact"), (4, "exact"), (4, "exact"), (6, "exact"), (2, "exact")]


def test_jump_character_parity_rule():
    # (22 - rho)/[E:Q] even forces the trivial character
    from k3lab.models import EndoFieldDesc

    e163 = EndoFieldDesc(name="Q(sqrt(-163))", kind="imag_quadratic", degree=2, d=1,
                         galois_gens=(((0,), (1,)),), kE_over_k=2, delta=163)
    assert jump_character_predict(e163, 18).kind == "TRIVIAL"
    assert jump_character_predict(e163, 16).param == -163
    for rho, degree, d in [(18, 2, 1), (14, 4, 2), (16, 2, 1), (10, 4, 2)]:
        gens = None
        if degree == 2:
            gens = (((0,), (1,)),)
        else:
            gens = (((1, 0), (0, 1)),)
        endo = EndoFieldDesc(name="synthetic", kind="imag_quadratic" if degree == 2 else "cyclic",
                             degree=degree, d=d, galois_gens=gens, kE_over_k=degree,
                             delta=7, quad_subfield_disc=5)
        ch = jump_character_predict(endo, rho)
        if ((22 - rho) // degree) % 2 == 0:
            assert ch.kind == "TRIVIAL", (rho, degree)
        else:
            assert ch.kind == "KRONECKER", (rho, degree)


def test_rm_rejected():
    with pytest.raises(PredictorScopeError):
        jump_character_predict(get("X6").endo, 16)
    assert component_group_order(get("X6").endo) == (2, "lower-bound-divisor")


def test_character_evaluation():
    from k3lab.models import K5, QQ
    from k3lab.numfield import factor_prime, splits_in_gaussian_ext

    ch = CharacterDesc(kind="KRONECKER", param=-1)
    for p in (5, 7, 13, 23, 29):
        for slot in (factor_prime(QQ, p) + factor_prime(K5, p)):
            if slot.norm % 2 == 0 or slot.norm > 10**4:
                continue
            want = 1 if splits_in_gaussian_ext(slot) == "split" else -1
            assert ch.evaluate(slot) == want, slot.key
    assert CharacterDesc(kind="TRIVIAL").evaluate(factor_prime(QQ, 11)[0]) == 1
