"""Raw point counts over finite fields: double covers of P^2, hyperelliptic
and elliptic curves, eliminant root counting and node-resolved K3 counts.

Double-cover counts follow the convention fixed by the twist identity,

    #X'(F_q) = sum over P in P^2(F_q) of (1 + chi(f(P))),

so branch points contribute exactly one point (chi(0) = 0).  The sum runs
over the affine chart z = 1 in y-blocks (vectorised Horner in x), then the
line z = 0, then the point (1:0:0).

Counting loops for degree-1 residue fields work on plain residue arrays;
higher-degree fields (they are small: slot norms are capped upstream) use
the digit-array arithmetic of ExtField.
"""

from __future__ import annotations

import numpy as np

from .ffield import poly_gcd, poly_pow_mod, poly_sub, poly_trim
from .models import CurveSpec, ReducedBranch, catalog, good_prime, node_census, rational_node_points, reduce_branch

# aim for about this many grid entries per y-block
_BLOCK_ENTRIES = 1 << 22


class NonHomogeneousError(ValueError):
    pass


class BadReductionError(ValueError):
    pass


def _check_sextic(components):
    total = 0
    for degree, mono in components:
        total += degree
        for (i, j, k) in mono:
            if i + j + k != degree:
                raise NonHomogeneousError("component monomial of wrong degree")
    if total != 6:
        raise NonHomogeneousError("branch components do not multiply to degree 6")


# -- degree-1 path ----------------------------------------------------------


def _xcoef_arrays_f1(degree, mono, ypow, p):
    """Coefficient arrays c_i(y) of x^i for the chart z = 1."""
    out = []
    for i in range(degree + 1):
        acc = None
        for (mi, mj, _mk), c in mono.items():
            if mi != i:
                continue
            term = c * ypow[mj] % p
            acc = term if acc is None else (acc + term) % p
        out.append(acc)
    return out


def _count_raw_f1(K, scale, components):
    p = K.p
    ch = K.char_table
    x = np.arange(p, dtype=np.int64)
    ypow = [np.ones(p, dtype=np.int64), x.copy()]
    for _ in range(2, 7):
        ypow.append(ypow[-1] * x % p)
    comp_coeffs = [(deg, _xcoef_arrays_f1(deg, mono, ypow, p)) for deg, mono in components]

    chi_sum = 0
    block = max(1, min(p, _BLOCK_ENTRIES // p))
    for lo in range(0, p, block):
        hi = min(p, lo + block)
        F = None
        for deg, coefs in comp_coeffs:
            V = np.zeros((hi - lo, p), dtype=np.int64)
            if coefs[deg] is not None:
                V += coefs[deg][lo:hi, None]
            for i in range(deg - 1, -1, -1):
                V = V * x[None, :] % p
                if coefs[i] is not None:
                    V = (V + coefs[i][lo:hi, None]) % p
            F = V if F is None else F * V % p
        if scale != 1:
            F = F * scale % p
        chi_sum += int(ch[F].sum())

    # line z = 0, points (x : 1 : 0)
    F0 = None
    for deg, mono in components:
        V = np.zeros(p, dtype=np.int64)
        for (i, j, k), c in mono.items():
            if k == 0:
                V = (V + c * ypow[i]) % p
        F0 = V if F0 is None else F0 * V % p
    if scale != 1:
        F0 = F0 * scale % p
    chi_sum += int(ch[F0].sum())

    # point (1 : 0 : 0)
    v = scale % p
    for deg, mono in components:
        v = v * mono.get((deg, 0, 0), 0) % p
    chi_sum += int(ch[v])

    q = p
    return q * q + q + 1 + chi_sum


# -- general path (digit arrays, small q) -----------------------------------


def _elements_range(K, lo, hi):
    idx = np.arange(lo, hi, dtype=np.int64)
    digits = []
    for _ in range(K.f):
        idx, r = np.divmod(idx, K.p)
        digits.append(r)
    return np.stack(digits, axis=-1)


def _vec_const(K, c, shape):
    out = np.zeros(shape + (K.f,), dtype=np.int64)
    out[...] = np.array(c, dtype=np.int64)
    return out


def _count_raw_ext(K, scale, components):
    q = K.q
    X = _elements_range(K, 0, q)  # (q, f)
    scale_e = K.elem(scale) if not isinstance(scale, tuple) else scale
    chi_sum = 0
    one = K.one()

    def comp_value_row(deg, mono, yv, zv):
        # coefficients of x^i with y = yv, z = zv fixed
        coefs = [None] * (deg + 1)
        for (i, j, k), c in mono.items():
            ce = K.elem(c) if not isinstance(c, tuple) else c
            term = K.mul(ce, K.mul(K.pow(yv, j), K.pow(zv, k)))
            coefs[i] = term if coefs[i] is None else K.add(coefs[i], term)
        V = _vec_const(K, coefs[deg] if coefs[deg] is not None else K.zero(), (q,))
        for i in range(deg - 1, -1, -1):
            V = K.vmul(V, X)
            if coefs[i] is not None:
                V = (V + np.array(coefs[i], dtype=np.int64)) % K.p
        return V

    zero = K.zero()
    for yi in range(q):
        yv = K.elem_of_index(yi)
        F = None
        for deg, mono in components:
            V = comp_value_row(deg, mono, yv, one)
            F = V if F is None else K.vmul(F, V)
        F = K.vmul(F, np.array(scale_e, dtype=np.int64))
        chi_sum += int(K.char_table[K.vindex(F)].sum())
    # line z = 0: (x : 1 : 0)
    F = None
    for deg, mono in components:
        V = comp_value_row(deg, mono, one, zero)
        F = V if F is None else K.vmul(F, V)
    F = K.vmul(F, np.array(scale_e, dtype=np.int64))
    chi_sum += int(K.char_table[K.vindex(F)].sum())
    # point (1 : 0 : 0)
    v = scale_e
    for deg, mono in components:
        c = mono.get((deg, 0, 0))
        ce = K.elem(c if c is not None else 0) if not isinstance(c, tuple) else c
        v = K.mul(v, ce)
    chi_sum += int(K.char_table[K.index_of(v)])
    return q * q + q + 1 + chi_sum


def count_double_cover_raw(rb: ReducedBranch):
    """#X'(F_q) of the singular double cover w^2 = f over P^2(F_q)."""
    _check_sextic(rb.components)
    K = rb.K
    if K.f == 1:
        comps = [(deg, mono) for deg, mono in rb.components]
        return _count_raw_f1(K, rb.scale, comps)
    return _count_raw_ext(K, rb.scale, rb.components)


# -- curves -----------------------------------------------------------------


def _poly_over_K_gcd_degree(g, K):
    """deg gcd(g, g') over K, via scalar field arithmetic (tiny degrees)."""
    a = [K.elem(c) if not isinstance(c, tuple) else c for c in g]
    b = [K.mul(K.elem(i), c) for i, c in enumerate(a)][1:]

    def trim(v):
        while v and all(x == 0 for x in v[-1]):
            v.pop()
        return v

    trim(a)
    trim(b)
    while b:
        # a mod b
        inv = K.inv(b[-1])
        while len(a) >= len(b):
            c = K.mul(a[-1], inv)
            sh = len(a) - len(b)
            for i, bc in enumerate(b):
                a[sh + i] = K.sub(a[sh + i], K.mul(c, bc))
            trim(a)
            if not a:
                break
        a, b = b, a
    return len(a) - 1


def count_hyperelliptic_odd(g, K):
    """#C(F_q) for C : w^2 = g(x), deg g odd (one point at infinity)."""
    if (len(g) - 1) % 2 == 0:
        raise ValueError("defining polynomial must have odd degree")
    if _poly_over_K_gcd_degree(g, K) > 0:
        raise BadReductionError(f"polynomial not squarefree over F_{K.q}")
    p = K.p
    if K.f == 1:
        x = np.arange(p, dtype=np.int64)
        v = np.full(p, g[-1] % p, dtype=np.int64)
        for c in reversed(g[:-1]):
            v = (v * x + c) % p
        return 1 + p + int(K.char_table[v].sum())
    q = K.q
    total = 1 + q
    gel = [np.array(K.elem(c) if not isinstance(c, tuple) else c, dtype=np.int64) for c in g]
    block = max(K.p, min(q, _BLOCK_ENTRIES // 4))
    for lo in range(0, q, block):
        hi = min(q, lo + block)
        X = _elements_range(K, lo, hi)
        v = np.broadcast_to(gel[-1], X.shape).copy()
        for c in reversed(gel[:-1]):
            v = K.vmul(v, X)
            v = (v + c) % K.p
        total += int(K.char_table[K.vindex(v)].sum())
    return total


def ap_elliptic(curve, p):
    """Frobenius trace a_p = p + 1 - #E(F_p) for E : y^2 = cubic(x)."""
    if isinstance(curve, CurveSpec):
        poly, disc = curve.poly, curve.disc
    else:
        poly, disc = curve
    if (2 * disc) % p == 0:
        raise BadReductionError(f"p = {p} is a bad prime for the curve")
    from .ffield import prime_field

    K = prime_field(p)
    x = np.arange(p, dtype=np.int64)
    v = np.full(p, poly[-1] % p, dtype=np.int64)
    for c in reversed(poly[:-1]):
        v = (v * x + c) % p
    ap = -int(K.char_table[v].sum())
    assert ap * ap <= 4 * p, "Hasse bound violated"
    return ap


# -- nodes ------------------------------------------------------------------


def count_roots_mod_p(coeffs, p):
    """Number of distinct roots of an integer polynomial mod p, as
    deg gcd(x^p - x, s)."""
    s = [c % p for c in coeffs]
    poly_trim(s)
    if len(s) <= 1:
        return 0
    xp = poly_pow_mod([0, 1], p, s, p)
    g = poly_gcd(poly_sub(xp, [0, 1], p), s, p)
    return len(g) - 1


def frobenius_fixed_nodes(spec, slot):
    """Number of Frobenius-fixed nodes of the reduced branch curve."""
    census = node_census(spec)
    fixed = census.rational_count
    if census.eliminants:
        if slot.f != 1:
            raise ValueError("eliminant censuses only apply over prime fields")
        for s in census.eliminants:
            fixed += count_roots_mod_p(s, slot.p)
    return fixed


def count_resolved(spec, slot):
    """#X(F_q) of the minimal desingularisation: the raw count plus q for
    each Frobenius-fixed node (its exceptional curve is a smooth conic,
    q + 1 points in place of 1)."""
    if not good_prime(spec, slot):
        raise BadReductionError(f"{spec.name} has bad reduction at slot {slot.key}")
    census = node_census(spec)
    if spec.kind == "DOUBLE_COVER" and all(c.degree == 1 for c in spec.branch.components):
        pts = rational_node_points(spec, slot)
        if len(pts) != census.rational_count:
            raise BadReductionError(
                f"nodes collide at slot {slot.key}: {len(pts)} < {census.rational_count}")
    fixed = frobenius_fixed_nodes(spec, slot)
    raw = count_double_cover_raw(reduce_branch(spec, slot))
    return raw + slot.norm * fixed
