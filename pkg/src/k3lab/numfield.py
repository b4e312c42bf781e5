"""Arithmetic of the base number field k = Q[t]/(m(t)): prime factorization,
residue-field reduction, splitting in k(i), and Kronecker symbols.

The catalog only needs deg m in {1, 3}; the factorization code handles any
squarefree splitting pattern that occurs there (all-linear, linear times
quadratic, irreducible).  Factor ordering is deterministic: ascending degree,
then lexicographic on the monic coefficient tuple read low-to-high, so slot
indices are stable across runs and machines.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd

import numpy as np

from . import ffield
from .ffield import (
    DEFAULT_TABLE_BUDGET,
    ext_field_build,
    is_prime,
    poly_eval,
    poly_gcd,
    poly_mod,
    poly_pow_mod,
    poly_sub,
    poly_trim,
)


def _int_resultant(a, b):
    """Resultant of integer polynomials (coeff lists low->high), exact."""
    a = [Fraction(c) for c in a]
    b = [Fraction(c) for c in b]
    res = Fraction(1)
    while True:
        while b and b[-1] == 0:
            b.pop()
        if not b:
            return 0
        db = len(b) - 1
        if db == 0:
            da = len(a) - 1
            res *= b[0] ** da
            assert res.denominator == 1
            return int(res)
        # a mod b with resultant bookkeeping
        da = len(a) - 1
        r = list(a)
        lead = b[-1]
        while len(r) - 1 >= db and any(r):
            c = r[-1] / lead
            shift = len(r) - 1 - db
            for i, bc in enumerate(b):
                r[shift + i] -= c * bc
            while r and r[-1] == 0:
                r.pop()
        dr = len(r) - 1 if r else -1
        if dr < 0:
            return 0
        res *= (-1) ** (da * db) * lead ** (da - dr)
        a, b = b, r


def poly_discriminant(m):
    """Discriminant of a monic integer polynomial."""
    n = len(m) - 1
    dm = [i * c for i, c in enumerate(m)][1:]
    r = _int_resultant(m, dm)
    sign = (-1) ** (n * (n - 1) // 2)
    return sign * r  # leading coefficient is 1


@dataclass(frozen=True)
class NumberFieldDesc:
    """Base field Q[t]/(m), m monic irreducible with integer coefficients.

    For k = Q use m = t (the degree-1 convention)."""

    m: tuple  # coefficients low -> high, monic
    name: str = "Q"

    @property
    def degree(self):
        return len(self.m) - 1

    @cached_property
    def disc(self):
        if self.degree == 1:
            return 1
        return poly_discriminant(list(self.m))


QQ = NumberFieldDesc(m=(0, 1), name="Q")


@dataclass(frozen=True)
class NfElem:
    """Element of the base field: numerator polynomial in t over Z divided
    by a positive integer, in lowest terms (content coprime to denominator)."""

    num: tuple  # integer coefficients, low -> high, length <= deg m
    den: int = 1

    def __post_init__(self):
        if self.den == 0:
            raise ZeroDivisionError("zero denominator")
        num, den = list(self.num), self.den
        if den < 0:
            num, den = [-c for c in num], -den
        g = gcd(den, *[abs(c) for c in num]) if num else den
        if g > 1:
            num = [c // g for c in num]
            den //= g
        while num and num[-1] == 0:
            num.pop()
        object.__setattr__(self, "num", tuple(num))
        object.__setattr__(self, "den", den)

    @classmethod
    def rational(cls, a, b=1):
        return cls(num=(a,), den=b)

    def __str__(self):
        if not self.num:
            return "0"
        terms = []
        for i, c in enumerate(self.num):
            if c == 0:
                continue
            if i == 0:
                terms.append(f"{c}")
            elif i == 1:
                terms.append(f"{c}*t")
            else:
                terms.append(f"{c}*t^{i}")
        s = " + ".join(terms).replace("+ -", "- ")
        if self.den != 1:
            s = f"({s})/{self.den}"
        return s


class RamifiedPrimeError(ValueError):
    pass


class BadPrimeError(ValueError):
    pass


@dataclass
class PrimeSlot:
    """One prime of the base field over the rational prime p: residue degree
    f, position `index` in the deterministic factor order, norm p^f, and the
    monic irreducible factor of m mod p it corresponds to."""

    p: int
    f: int
    index: int
    norm: int
    factor: tuple  # coefficients low -> high over F_p, monic
    nfield: NumberFieldDesc = field(repr=False, default=QQ)
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def key(self):
        return (self.norm, self.p, self.index)

    def residue_field(self, table_budget=DEFAULT_TABLE_BUDGET):
        K = self._cache.get("field")
        if K is None:
            K = ext_field_build(self.p, self.f, table_budget)
            self._cache["field"] = K
        return K

    @property
    def local_root(self):
        """Image of t in the residue field: the smallest-index root of this
        slot's factor of m."""
        root = self._cache.get("root")
        if root is None:
            K = self.residue_field()
            if self.f == 1:
                # factor is t + c
                root = K.elem(-self.factor[0])
            else:
                A = K.all_elements_array()
                acc = np.zeros_like(A)
                acc[:, 0] = self.factor[-1]
                for c in reversed(self.factor[:-1]):
                    acc = K.vmul(acc, A)
                    acc[:, 0] = (acc[:, 0] + c) % K.p
                roots = np.nonzero(~acc.any(axis=1))[0]
                root = K.elem_of_index(int(roots.min()))
            self._cache["root"] = root
        return root


def _roots_of_split_product(g, p):
    """Roots of a monic polynomial over F_p known to split into distinct
    linear factors.  Deterministic (fixed shift sequence)."""
    g = list(g)
    deg = len(g) - 1
    if deg == 0:
        return []
    if deg == 1:
        return [(-g[0]) % p]
    if p < 50:
        return sorted(x for x in range(p) if poly_eval(g, x, p) == 0)
    for c in range(p):
        # h = gcd((x + c)^((p-1)/2) - 1, g)
        e = poly_pow_mod([c, 1], (p - 1) // 2, g, p)
        e = poly_sub(e, [1], p)
        h = poly_gcd(e, g, p)
        dh = len(h) - 1
        if 0 < dh < deg:
            rest_num = poly_sub(g, [0], p)  # copy
            quot = _poly_divide_exact(rest_num, h, p)
            return sorted(_roots_of_split_product(h, p) + _roots_of_split_product(quot, p))
    raise RuntimeError("split polynomial did not split")  # unreachable


def _poly_divide_exact(a, b, p):
    """a // b over F_p, assuming exact division; b monic."""
    a = [c % p for c in a]
    out = [0] * (len(a) - len(b) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = a[i + len(b) - 1] % p
        out[i] = c
        if c:
            for j, bc in enumerate(b):
                a[i + j] = (a[i + j] - c * bc) % p
    return out


def factor_prime(K: NumberFieldDesc, p):
    """Prime slots of K over p, one per irreducible factor of m mod p.

    Raises RamifiedPrimeError when p divides disc(m)."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if K.degree > 1 and K.disc % p == 0:
        raise RamifiedPrimeError(f"prime {p} ramifies in {K.name} (divides disc {K.disc})")
    m = [c % p for c in K.m]
    n = K.degree
    if n == 1:
        return [PrimeSlot(p=p, f=1, index=0, norm=p, factor=(0, 1), nfield=K)]
    # distinct-degree step: linear part = gcd(x^p - x, m)
    xp = poly_pow_mod([0, 1], p, m, p)
    lin = poly_gcd(poly_sub(xp, [0, 1], p), m, p)
    roots = _roots_of_split_product(lin, p)
    factors = [((-r) % p, 1) for r in roots]
    rest = m if not roots else _poly_divide_exact(m, _lin_product(roots, p), p)
    poly_trim(rest)
    drest = len(rest) - 1
    if drest in (2, 3):
        factors.append(tuple(rest))
    elif drest not in (0, -1):
        raise NotImplementedError("unsupported splitting pattern")
    factors.sort(key=lambda fac: (len(fac) - 1, fac))
    slots = []
    for i, fac in enumerate(factors):
        f = len(fac) - 1
        slots.append(PrimeSlot(p=p, f=f, index=i, norm=p**f, factor=fac, nfield=K))
    assert sum(s.f for s in slots) == n
    return slots


def _lin_product(roots, p):
    out = [1]
    for r in roots:
        nxt = [0] * (len(out) + 1)
        for i, c in enumerate(out):
            nxt[i] = (nxt[i] - r * c) % p
            nxt[i + 1] = (nxt[i + 1] + c) % p
        out = nxt
    return out


def residue_reduce(x: NfElem, slot: PrimeSlot):
    """Image of x in the residue field of the slot, as a coefficient tuple."""
    if x.den % slot.p == 0:
        raise BadPrimeError(f"denominator {x.den} divisible by p = {slot.p}")
    K = slot.residue_field()
    root = slot.local_root
    acc = K.zero()
    for c in reversed(x.num):
        acc = K.mul(acc, root)
        acc = K.add(acc, K.elem(c))
    inv_den = K.inv(K.elem(x.den))
    return K.mul(acc, inv_den)


def splits_in_gaussian_ext(slot: PrimeSlot):
    """'split' iff the slot splits in k(i), i.e. norm = 1 mod 4."""
    if slot.norm % 2 == 0:
        raise ValueError("norm must be odd")
    return "split" if slot.norm % 4 == 1 else "inert"


def kronecker(D, p):
    """Kronecker symbol (D/p) for prime p."""
    if p == 2:
        if D % 2 == 0:
            return 0
        return 1 if D % 8 in (1, 7) else -1
    r = D % p
    if r == 0:
        return 0
    return 1 if pow(r, (p - 1) // 2, p) == 1 else -1
