"""Prime-field and extension-field arithmetic with table-based quadratic
characters.

Fields of every residue degree share one representation: `ExtField` holds a
monic irreducible modulus over F_p and represents elements as coefficient
tuples in the polynomial basis (degree-1 fields get the modulus t, so the
same code path serves F_p itself).  The quadratic character is precomputed
into a flat int8 table of length q, indexed by sum(e_i * p**i); the counting
loops only ever do table lookups.

Characteristic 2 is rejected at construction: every catalog model is a
double cover w^2 = f, which degenerates at p = 2.
"""

from __future__ import annotations

import itertools

import numpy as np

# Largest table (= field size) we are willing to materialise, ~16M entries.
DEFAULT_TABLE_BUDGET = 1 << 24


def prime_sieve(bound):
    """All primes <= bound, ascending."""
    if bound < 2:
        return []
    flags = np.ones(bound + 1, dtype=bool)
    flags[:2] = False
    for i in range(2, int(bound**0.5) + 1):
        if flags[i]:
            flags[i * i :: i] = False
    return [int(p) for p in np.nonzero(flags)[0]]


def is_prime(n):
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# ---------------------------------------------------------------------------
# dense univariate polynomial helpers over F_p
# (coefficient lists low -> high, also used by numfield)


def poly_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mod(a, m, p):
    """a mod m over F_p; m need not be monic."""
    a = [c % p for c in a]
    poly_trim(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
        poly_trim(a)
    return a


def poly_mul_mod(a, b, m, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return poly_mod(out, m, p)


def poly_pow_mod(base, e, m, p):
    acc = [1]
    base = poly_mod(list(base), m, p)
    while e:
        if e & 1:
            acc = poly_mul_mod(acc, base, m, p)
        base = poly_mul_mod(base, base, m, p)
        e >>= 1
    return acc


def poly_gcd(a, b, p):
    a = [c % p for c in a]
    b = [c % p for c in b]
    poly_trim(a)
    poly_trim(b)
    while b:
        a = poly_mod(a, b, p)
        a, b = b, a
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [c * inv % p for c in a]
    return a


def poly_eval(a, x, p):
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % p
    return acc


def poly_sub(a, b, p):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return poly_trim([(x - y) % p for x, y in zip(a, b)])


def poly_is_irreducible(coeffs, p):
    """Irreducibility of a monic polynomial over F_p (Rabin test)."""
    f = len(coeffs) - 1
    if f == 1:
        return True
    x = [0, 1]
    xq = poly_pow_mod(x, p**f, coeffs, p)
    if poly_sub(xq, x, p):
        return False
    for ell in {d for d in range(2, f + 1) if f % d == 0 and is_prime(d)}:
        xe = poly_pow_mod(x, p ** (f // ell), coeffs, p)
        g = poly_gcd(poly_sub(xe, x, p), coeffs, p)
        if len(g) - 1 > 0:
            return False
    return True


# ---------------------------------------------------------------------------


class ExtField:
    """F_{p^f} in the polynomial basis, with a precomputed character table.

    Elements are tuples of f ints in [0, p).  `char_table[index_of(x)]` is
    +1 for nonzero squares, -1 for nonsquares and 0 at x = 0.
    """

    def __init__(self, p, f, modulus, char_table):
        self.p = p
        self.f = f
        self.q = p**f
        self.modulus = modulus  # coeffs low -> high, monic, length f+1
        self.char_table = char_table
        # reduction row: t^f = sum(red[i] * t^i)
        self.red = tuple((-c) % p for c in modulus[:f])
        self._pow_base = tuple(p**i for i in range(f))

    # -- scalar element arithmetic -----------------------------------------

    def elem(self, x):
        """Coerce an int or coefficient tuple into canonical form."""
        if isinstance(x, tuple):
            if len(x) != self.f:
                raise ValueError("coefficient vector has wrong length")
            return tuple(c % self.p for c in x)
        return (x % self.p,) + (0,) * (self.f - 1)

    def zero(self):
        return (0,) * self.f

    def one(self):
        return self.elem(1)

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple((x - y) % self.p for x, y in zip(a, b))

    def neg(self, a):
        return tuple((-x) % self.p for x in a)

    def mul(self, a, b):
        p, f = self.p, self.f
        if f == 1:
            return (a[0] * b[0] % p,)
        conv = [0] * (2 * f - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    conv[i + j] += x * y
        for d in range(2 * f - 2, f - 1, -1):
            c = conv[d] % p
            if c:
                for i, r in enumerate(self.red):
                    conv[d - f + i] += c * r
        return tuple(c % p for c in conv[:f])

    def pow(self, a, e):
        acc, base = self.one(), a
        e = int(e)
        while e:
            if e & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            e >>= 1
        return acc

    def inv(self, a):
        if all(c == 0 for c in a):
            raise ZeroDivisionError("inverse of zero")
        return self.pow(a, self.q - 2)

    def index_of(self, a):
        return sum(c * w for c, w in zip(a, self._pow_base))

    def elem_of_index(self, i):
        out = []
        for _ in range(self.f):
            i, r = divmod(i, self.p)
            out.append(r)
        return tuple(out)

    def elements(self):
        for i in range(self.q):
            yield self.elem_of_index(i)

    # -- vectorised arithmetic on numpy digit arrays ------------------------
    # Arrays have shape (..., f) with int64 entries in [0, p); f == 1 hot
    # paths in `counting` bypass these and work on plain residue arrays.

    def varray(self, elems):
        return np.array([list(e) for e in elems], dtype=np.int64)

    def vmul(self, A, B):
        p, f = self.p, self.f
        if f == 1:
            return (A * B) % p
        A, B = np.broadcast_arrays(A, B)
        conv = [None] * (2 * f - 1)
        for i in range(f):
            for j in range(f):
                term = A[..., i] * B[..., j] % p
                d = i + j
                conv[d] = term if conv[d] is None else (conv[d] + term)
        for d in range(2 * f - 2, f - 1, -1):
            c = conv[d] % p
            for i, r in enumerate(self.red):
                if r:
                    conv[d - f + i] = conv[d - f + i] + c * r
        return np.stack([conv[i] % p for i in range(f)], axis=-1)

    def vadd(self, A, B):
        return (A + B) % self.p

    def vindex(self, A):
        idx = A[..., 0].astype(np.int64).copy()
        for i in range(1, self.f):
            idx += A[..., i].astype(np.int64) * self._pow_base[i]
        return idx

    def all_elements_array(self):
        """(q, f) array enumerating every element in index order."""
        idx = np.arange(self.q, dtype=np.int64)
        digits = []
        for _ in range(self.f):
            idx, r = np.divmod(idx, self.p)
            digits.append(r)
        return np.stack(digits, axis=-1)

    def __repr__(self):
        return f"ExtField(p={self.p}, f={self.f})"


def _lex_smallest_irreducible(p, f):
    """Lexicographically smallest monic irreducible of degree f over F_p,
    comparing coefficient tuples from the t^(f-1) coefficient down to the
    constant term."""
    if f == 1:
        return (0, 1)  # the polynomial t
    for tup in itertools.product(range(p), repeat=f):
        coeffs = tuple(tup[f - 1 - i] for i in range(f)) + (1,)
        if f in (2, 3):
            # degrees 2 and 3: irreducible iff rootless
            if all(poly_eval(list(coeffs), x, p) for x in range(p)):
                return coeffs
        elif poly_is_irreducible(list(coeffs), p):
            return coeffs
    raise RuntimeError("no irreducible polynomial found")  # unreachable


def _build_char_table(p, f, modulus):
    q = p**f
    if f == 1:
        table = np.full(q, -1, dtype=np.int8)
        r = np.arange(q, dtype=np.int64)
        table[r * r % p] = 1
        table[0] = 0
        return table
    # chi_q(x) = chi_p(Norm(x)) with Norm = prod of the Frobenius orbit;
    # Frobenius is F_p-linear, given on the basis by t^(p*i) mod modulus
    field = ExtField(p, f, modulus, None)
    frob = np.zeros((f, f), dtype=np.int64)
    for i in range(f):
        col = poly_pow_mod([0, 1], p * i, list(modulus), p)
        for j, c in enumerate(col):
            frob[i, j] = c
    chi_p = _build_char_table(p, 1, (0, 1))
    table = np.empty(q, dtype=np.int8)
    chunk = max(p, (1 << 22) // f)
    for lo in range(0, q, chunk):
        hi = min(q, lo + chunk)
        idx = np.arange(lo, hi, dtype=np.int64)
        digits = []
        for _ in range(f):
            idx, r = np.divmod(idx, p)
            digits.append(r)
        x = np.stack(digits, axis=-1)
        acc = x
        cur = x
        for _ in range(f - 1):
            cur = cur @ frob % p
            acc = field.vmul(acc, cur)
        table[lo:hi] = chi_p[acc[..., 0]]
    table[0] = 0
    return table


_FIELD_CACHE = {}
_FIELD_CACHE_LIMIT = 8


def ext_field_build(p, f, table_budget=DEFAULT_TABLE_BUDGET):
    """Construct F_{p^f} with the lexicographically smallest modulus and a
    fully populated character table.  Deterministic across runs."""
    key = (p, f)
    if key in _FIELD_CACHE:
        return _FIELD_CACHE[key]
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p == 2:
        raise ValueError("even characteristic rejected: double covers degenerate at p = 2")
    if f < 1:
        raise ValueError("extension degree must be >= 1")
    if p**f > table_budget:
        raise ValueError(f"field size {p}^{f} exceeds table budget {table_budget}")
    modulus = _lex_smallest_irreducible(p, f)
    field = ExtField(p, f, modulus, _build_char_table(p, f, modulus))
    field.char_table.setflags(write=False)
    if len(_FIELD_CACHE) >= _FIELD_CACHE_LIMIT:
        _FIELD_CACHE.pop(next(iter(_FIELD_CACHE)))
    _FIELD_CACHE[key] = field
    return field


def prime_field(p, table_budget=DEFAULT_TABLE_BUDGET):
    """F_p as a degree-1 ExtField (modulus t)."""
    return ext_field_build(p, 1, table_budget)


def quad_char(K, x):
    """Quadratic character of x in K: 0 at zero, +1 on nonzero squares,
    -1 otherwise.  Multiplicative on nonzero arguments."""
    return int(K.char_table[K.index_of(K.elem(x))])
