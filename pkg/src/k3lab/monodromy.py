"""Exact model of the CM component-group combinatorics: the signed
permutation group (Z/2Z)^d x| S_d acting on d eigenspace pairs, its block
matrices and their determinants, centralizer/normalizer verification, and
the jump-character / component-group predictors.

Everything here is exact integer or rational arithmetic; no floats.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from .numfield import kronecker


@dataclass(frozen=True)
class SignedPermutation:
    """Element (pi, a) of (Z/2Z)^d x| S_d acting on d eigenspace pairs:
    pair i goes to pair pi(i), with the pair members swapped iff a_i = 1
    (flip bits indexed by the source pair).

    Composition applies the right factor first:
    (pi, a) * (pi', a') = (pi o pi', a' + a o pi')."""

    pi: tuple  # images, 0-indexed: i -> pi[i]
    a: tuple  # flip bits in {0, 1}

    def __post_init__(self):
        if sorted(self.pi) != list(range(len(self.pi))):
            raise ValueError("pi is not a permutation")
        if len(self.a) != len(self.pi) or any(b not in (0, 1) for b in self.a):
            raise ValueError("flip vector must be 0/1 of length d")

    @property
    def d(self):
        return len(self.pi)

    @classmethod
    def identity(cls, d):
        return cls(pi=tuple(range(d)), a=(0,) * d)

    def __mul__(self, other):
        if self.d != other.d:
            raise ValueError("mismatched degrees")
        pi = tuple(self.pi[other.pi[i]] for i in range(self.d))
        a = tuple((other.a[i] + self.a[other.pi[i]]) % 2 for i in range(self.d))
        return SignedPermutation(pi=pi, a=a)

    def inverse(self):
        inv = [0] * self.d
        for i, im in enumerate(self.pi):
            inv[im] = i
        a = tuple(self.a[inv[i]] for i in range(self.d))
        return SignedPermutation(pi=tuple(inv), a=a)

    def embed_s2d(self):
        """Image in S_{2d} under pair i -> {2i, 2i+1} (0-indexed)."""
        img = [0] * (2 * self.d)
        for i in range(self.d):
            j = self.pi[i]
            if self.a[i] == 0:
                img[2 * i], img[2 * i + 1] = 2 * j, 2 * j + 1
            else:
                img[2 * i], img[2 * i + 1] = 2 * j + 1, 2 * j
        return tuple(img)


def all_signed_permutations(d):
    """The full group, |G| = 2^d d!."""
    out = []
    for perm in itertools.permutations(range(d)):
        for bits in itertools.product((0, 1), repeat=d):
            out.append(SignedPermutation(pi=perm, a=bits))
    return out


def perm_sign(images):
    """Sign of a permutation given as a tuple of images, by cycle counting."""
    n = len(images)
    seen = [False] * n
    sign = 1
    for start in range(n):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = images[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def sgn_2d(s: SignedPermutation):
    """Sign of the natural permutation action on the 2d pair members."""
    return perm_sign(s.embed_s2d())


def block_matrix(s: SignedPermutation, b):
    """The 2db x 2db 0/1 matrix sending basis vector v_{i,j} to v_{pi(i),j}
    or v*_{pi(i),j} according to a_i, and v*_{i,j} accordingly.  Basis order:
    v_{1,1..b}, v*_{1,1..b}, v_{2,1..b}, ...  (acting on column vectors)."""
    if b < 1:
        raise ValueError("block dimension must be >= 1")
    d = s.d
    n = 2 * d * b
    M = [[0] * n for _ in range(n)]

    def col(i, star, j):
        return 2 * i * b + (b if star else 0) + j

    for i in range(d):
        tgt = s.pi[i]
        flip = s.a[i]
        for j in range(b):
            M[col(tgt, flip == 1, j)][col(i, False, j)] = 1
            M[col(tgt, flip == 0, j)][col(i, True, j)] = 1
    return M


def block_gram(d, b):
    """Block-diagonal symmetric form with d blocks [[0, I_b], [I_b, 0]]."""
    n = 2 * d * b
    G = [[0] * n for _ in range(n)]
    for i in range(d):
        for j in range(b):
            G[2 * i * b + j][2 * i * b + b + j] = 1
            G[2 * i * b + b + j][2 * i * b + j] = 1
    return G


def mat_mul(A, B):
    n, m, k = len(A), len(B[0]), len(B)
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        for t in range(k):
            a = Ai[t]
            if a:
                Bt = B[t]
                row = out[i]
                for j in range(m):
                    row[j] += a * Bt[j]
    return out


def mat_transpose(A):
    return [list(r) for r in zip(*A)]


def det_exact(M):
    """Exact determinant of an integer or rational matrix.

    Integer matrices run fraction-free Bareiss elimination; rational inputs
    are scaled row-wise to integers first."""
    n = len(M)
    if any(len(r) != n for r in M):
        raise ValueError("matrix must be square")
    scale = Fraction(1)
    A = []
    for row in M:
        fracs = [Fraction(x) for x in row]
        lcm = 1
        for x in fracs:
            lcm = lcm * x.denominator // _gcd(lcm, x.denominator)
        scale /= lcm
        A.append([int(x * lcm) for x in fracs])
    # Bareiss
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for r in range(k + 1, n):
                if A[r][k] != 0:
                    A[k], A[r] = A[r], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
            A[i][k] = 0
        prev = A[k][k]
    det = sign * A[n - 1][n - 1]
    result = scale * det
    return int(result) if result.denominator == 1 else result


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@dataclass
class VerificationReport:
    checked: int
    violations: list

    @property
    def ok(self):
        return not self.violations


def is_gram_orthogonal(M, G):
    """M^t G M == G, exact."""
    return mat_mul(mat_transpose(M), mat_mul(G, M)) == G


def verify_normalizer_det(d, b):
    """For every signed permutation: the block matrix preserves the block
    Gram form and det = sgn^b.  Expected: no violations."""
    if d > 4 or b > 3:
        raise ValueError("exhaustion budget is d <= 4, b <= 3")
    G = block_gram(d, b)
    report = VerificationReport(checked=0, violations=[])
    for s in all_signed_permutations(d):
        M = block_matrix(s, b)
        report.checked += 1
        if not is_gram_orthogonal(M, G):
            report.violations.append((s, "not orthogonal"))
        if det_exact(M) != sgn_2d(s) ** b:
            report.violations.append((s, "determinant law fails"))
    return report


def verify_centralizer(d, b, trials, seed=0):
    """Random rational blocks G_i with inverse-transpose partners assemble to
    Gram-orthogonal maps; a perturbed partner must fail."""
    rng = random.Random(seed)
    G = block_gram(d, b)
    n = 2 * d * b
    report = VerificationReport(checked=0, violations=[])

    def random_invertible():
        while True:
            B = [[Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(b)]
                 for _ in range(b)]
            if det_exact(B) != 0:
                return B

    for _ in range(trials):
        blocks = [random_invertible() for _ in range(d)]
        M = [[Fraction(0)] * n for _ in range(n)]
        for i, B in enumerate(blocks):
            Binv_t = mat_transpose(_mat_inverse(B))
            for r in range(b):
                for c in range(b):
                    M[2 * i * b + r][2 * i * b + c] = B[r][c]
                    M[2 * i * b + b + r][2 * i * b + b + c] = Binv_t[r][c]
        report.checked += 1
        if not is_gram_orthogonal(M, G):
            report.violations.append((blocks, "centralizer element not orthogonal"))
        # negative control: perturb one partner entry
        M[b][b] += 1
        if is_gram_orthogonal(M, G):
            report.violations.append((blocks, "perturbed element stayed orthogonal"))
    return report


def _mat_inverse(B):
    n = len(B)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(B)]
    for k in range(n):
        piv = next(r for r in range(k, n) if A[r][k] != 0)
        A[k], A[piv] = A[piv], A[k]
        pv = A[k][k]
        A[k] = [x / pv for x in A[k]]
        for r in range(n):
            if r != k and A[r][k] != 0:
                f = A[r][k]
                A[r] = [x - f * y for x, y in zip(A[r], A[k])]
    return [row[n:] for row in A]


# ---------------------------------------------------------------------------
# predictors


@dataclass(frozen=True)
class CharacterDesc:
    """Symbolic jump character: printable by the CLI and evaluable at primes."""

    kind: str  # TRIVIAL | KRONECKER | QUADRATIC_SUBFIELD | SIGN_OF_ACTION
    param: object = None

    def display(self):
        if self.kind == "TRIVIAL":
            return "1"
        if self.kind == "KRONECKER":
            return f"({self.param}/.)"
        if self.kind == "QUADRATIC_SUBFIELD":
            return f"quadratic character of {self.param}"
        return f"sign character of {self.param}"

    def evaluate(self, slot):
        """Value at an unramified prime slot; +-1 (0 only at ramified p)."""
        if self.kind == "TRIVIAL":
            return 1
        if self.kind == "KRONECKER":
            return kronecker(self.param, slot.p) ** slot.f
        raise ValueError(f"{self.kind} characters are symbolic only")


class PredictorScopeError(ValueError):
    pass


def jump_character_predict(endo, rho):
    """Predicted jump character from the endomorphism field and the Picard
    rank: trivial when (22 - rho)/[E:Q] is even, otherwise the sign character
    of the Galois action on the conjugate pairs.

    CM fields only; RM descriptors are out of the predictor's scope."""
    if not endo.is_cm:
        raise PredictorScopeError(
            "the jump-character predictor applies to CM endomorphism fields only")
    r = 22 - rho
    if r <= 0 or r % endo.degree != 0:
        raise ValueError(f"dim T = {r} is not a positive multiple of [E:Q] = {endo.degree}")
    if (r // endo.degree) % 2 == 0:
        return CharacterDesc(kind="TRIVIAL")
    gens = [SignedPermutation(pi=pi, a=a) for pi, a in endo.galois_gens]
    if all(sgn_2d(g) == 1 for g in gens):
        # sign character kills every generator
        return CharacterDesc(kind="TRIVIAL")
    if endo.kind == "imag_quadratic":
        return CharacterDesc(kind="KRONECKER", param=-endo.delta)
    if endo.quad_subfield_disc is not None:
        return CharacterDesc(kind="KRONECKER", param=endo.quad_subfield_disc)
    if endo.kind == "cyclic":
        return CharacterDesc(kind="QUADRATIC_SUBFIELD",
                             param=f"the unique quadratic subfield of {endo.name}")
    return CharacterDesc(kind="SIGN_OF_ACTION", param=endo.name)


def component_group_order(endo):
    """[kE : k] with an `exact` flag for CM kinds (the component group is
    Gal(kE/k) there); otherwise a lower-bound divisor."""
    flag = "exact" if endo.is_cm else "lower-bound-divisor"
    return endo.kE_over_k, flag
