"""The surface and curve catalog: defining data, endomorphism-field
metadata, bad-prime detection and node censuses for the double covers.

Node data for the two line-plus-cubic branches ships as precomputed
constants.  For the X4 branch the cubic factor splits into three conjugate
lines over the cyclic cubic field of discriminant 81, so its sextic is a
6-line arrangement with 15 nodes: 3 rational and 12 lying in four cubic
Galois orbits, each indexed by the roots of one stored eliminant.  That
exhausts Picard rank 16 = 1 + 15, so X4 carries the exact node-orbit trace
model.  The X6t cubic is smooth: 12 nodes only (10 rational, one quadratic
orbit), leaving rank 3 of the Neron-Severi group unexplained; its trace
model is experimental and tagged as such.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .numfield import (
    QQ,
    BadPrimeError,
    NfElem,
    NumberFieldDesc,
    PrimeSlot,
    residue_reduce,
)

# ---------------------------------------------------------------------------
# branch curves of double covers


@dataclass(frozen=True)
class BranchComponent:
    """One factor of the branch sextic: a homogeneous polynomial in x, y, z
    with coefficients in the base field."""

    degree: int
    monomials: tuple  # ((i, j, k), NfElem) pairs, i + j + k = degree

    @classmethod
    def line(cls, a, b, c):
        coeffs = [x if isinstance(x, NfElem) else NfElem.rational(x) for x in (a, b, c)]
        mono = []
        for exp, co in zip(((1, 0, 0), (0, 1, 0), (0, 0, 1)), coeffs):
            if co.num:
                mono.append((exp, co))
        return cls(degree=1, monomials=tuple(mono))

    @classmethod
    def from_dict(cls, degree, d):
        mono = tuple(sorted((exp, NfElem.rational(c) if not isinstance(c, NfElem) else c)
                            for exp, c in d.items() if c))
        for (i, j, k), _ in mono:
            if i + j + k != degree:
                raise ValueError("component is not homogeneous of the stated degree")
        return cls(degree=degree, monomials=mono)

    def coeff_triple(self):
        """(a, b, c) for a linear component a*x + b*y + c*z."""
        assert self.degree == 1
        out = {exp: co for exp, co in self.monomials}
        zero = NfElem.rational(0)
        return (out.get((1, 0, 0), zero), out.get((0, 1, 0), zero), out.get((0, 0, 1), zero))


@dataclass(frozen=True)
class Branch:
    """Branch sextic as scale * product(components)."""

    scale: NfElem
    components: tuple

    def __post_init__(self):
        if sum(c.degree for c in self.components) != 6:
            raise ValueError("branch components must multiply to degree 6")


@dataclass(frozen=True)
class NodeCensus:
    """Node bookkeeping for a double-cover branch: rational nodes reduce to
    rational points at every good slot; each non-rational Galois orbit is
    indexed by the roots of one squarefree integer eliminant."""

    rational_count: int
    eliminants: tuple = ()  # integer coefficient tuples, low -> high


# ---------------------------------------------------------------------------
# endomorphism-field metadata


@dataclass(frozen=True)
class EndoFieldDesc:
    """Endomorphism field E with the action of Gal(kE/k) on the 2d conjugate
    eigenvalue pairs, given by signed-permutation generators (pi, a)."""

    name: str
    kind: str  # imag_quadratic | cyclic | general | rm_quadratic
    degree: int  # [E : Q]
    d: int  # number of conjugate pairs ([E_0 : Q] in the CM case)
    galois_gens: tuple  # ((pi, a), ...) with pi, a tuples of length d
    kE_over_k: int
    conjectural: bool = False
    delta: int = None  # E = Q(sqrt(-delta)) for imag_quadratic
    quad_subfield_disc: int = None  # D with Q(sqrt(D)) the quadratic subfield of kE/k
    rm_disc: int = None  # E = Q(sqrt(D)) for rm_quadratic

    @property
    def is_cm(self):
        return self.kind in ("imag_quadratic", "cyclic", "general")


# ---------------------------------------------------------------------------
# catalog entries


@dataclass(frozen=True)
class AlgTraceModel:
    """How the Neron-Severi part of the Frobenius trace is modelled.

    rational16   : 16 Frobenius-fixed classes (hyperplane + 15 rational
                   exceptional curves), trace 16q; requires rho = 16.
    node_orbits  : hyperplane + one exceptional class per Frobenius-fixed
                   node, trace (1 + #fixed)q; exact when rank is exhausted.
    experimental : node_orbits plus an empirically fitted character term for
                   classes the catalog cannot account for; records are
                   tagged `uncalibrated`.
    none         : the surface kind needs no NS model (Kummer trace routes).
    """

    kind: str
    extra_char: int = None  # experimental: Kronecker modulus of the fitted term


@dataclass(frozen=True)
class SurfaceSpec:
    name: str
    kind: str  # DOUBLE_COVER | KUMMER_PRODUCT | KUMMER_JACOBIAN | TWIST
    base_field: NumberFieldDesc
    picard_rank: int
    endo: EndoFieldDesc
    alg_trace: AlgTraceModel
    equation: str
    branch: Branch = None  # DOUBLE_COVER
    hyper_poly: tuple = None  # KUMMER_JACOBIAN: odd squarefree g, coeffs low -> high
    curve_names: tuple = None  # KUMMER_PRODUCT
    twist_base: str = None  # TWIST
    twist_factor: int = None
    census: NodeCensus = None
    bad_primes: frozenset = frozenset()
    tag_moduli: tuple = ()
    tag_gauss: bool = False

    @property
    def dim_t(self):
        return 22 - self.picard_rank


@dataclass(frozen=True)
class CurveSpec:
    name: str
    kind: str  # elliptic | hyperelliptic
    poly: tuple  # y^2 = poly(x), coeffs low -> high
    disc: int
    equation: str
    cm_by: str = None


class Catalog:
    def __init__(self, surfaces, curves):
        self.surfaces = surfaces
        self.curves = curves
        self._by_name = {s.name: s for s in surfaces}
        self._by_name.update({c.name: c for c in curves})

    def get(self, name):
        key = name.strip()
        for cand in (key, key.upper(), key.capitalize(), key.replace("~", "t")):
            if cand in self._by_name:
                return self._by_name[cand]
        raise KeyError(f"no catalog entry named {name!r}")

    def entries(self):
        return list(self.surfaces) + list(self.curves)


K5 = NumberFieldDesc(m=(1, -4, -1, 1), name="Q[t]/(t^3-t^2-4t+1)")


def _nf(coeffs, den):
    return NfElem(num=tuple(coeffs), den=den)


@lru_cache(maxsize=1)
def catalog():
    """All catalog entries: surfaces X1..X6 and X6t plus curves C, E1, E2."""
    one = NfElem.rational(1)
    xyz = (BranchComponent.line(1, 0, 0), BranchComponent.line(0, 1, 0),
           BranchComponent.line(0, 0, 1))

    x1 = SurfaceSpec(
        name="X1",
        kind="DOUBLE_COVER",
        base_field=QQ,
        picard_rank=16,
        endo=EndoFieldDesc(
            name="Q(i)", kind="imag_quadratic", degree=2, d=1,
            galois_gens=((((0,), (1,))),), kE_over_k=2, delta=1,
            quad_subfield_disc=-1),
        alg_trace=AlgTraceModel(kind="rational16"),
        equation="w^2 = x y z (x+y+z)(x+2y+3z)(5x+8y+20z)",
        branch=Branch(scale=one, components=xyz + (
            BranchComponent.line(1, 1, 1),
            BranchComponent.line(1, 2, 3),
            BranchComponent.line(5, 8, 20))),
        census=NodeCensus(rational_count=15),
        bad_primes=frozenset({2}),
        tag_moduli=(4,),
        tag_gauss=True,
    )

    x2 = SurfaceSpec(
        name="X2",
        kind="KUMMER_JACOBIAN",
        base_field=QQ,
        picard_rank=18,
        endo=EndoFieldDesc(
            name="Q(zeta5)", kind="cyclic", degree=4, d=2,
            galois_gens=(((1, 0), (0, 1)),), kE_over_k=4,
            quad_subfield_disc=5),
        alg_trace=AlgTraceModel(kind="none"),
        equation="Kum(Jac(C)), C: w^2 = x^5 - 1",
        hyper_poly=(-1, 0, 0, 0, 0, 1),
        bad_primes=frozenset({2, 5}),
        tag_moduli=(5,),
    )

    x3 = SurfaceSpec(
        name="X3",
        kind="KUMMER_PRODUCT",
        base_field=QQ,
        picard_rank=18,
        endo=EndoFieldDesc(
            name="Q(sqrt2, i)", kind="general", degree=4, d=2,
            galois_gens=(((1, 0), (0, 0)), ((0, 1), (1, 1))), kE_over_k=4),
        alg_trace=AlgTraceModel(kind="none"),
        equation="Kum(E1 x E2)",
        curve_names=("E1", "E2"),
        bad_primes=frozenset({2}),
        tag_moduli=(8,),
    )

    x4_cubic = BranchComponent.from_dict(3, {
        (3, 0, 0): 1, (2, 0, 1): -3, (1, 2, 0): -3, (1, 1, 1): -3,
        (0, 3, 0): 1, (0, 2, 1): 9, (0, 1, 2): 6, (0, 0, 3): 1})
    x4 = SurfaceSpec(
        name="X4",
        kind="DOUBLE_COVER",
        base_field=QQ,
        picard_rank=16,
        endo=EndoFieldDesc(
            name="Q(zeta9 + zeta9^-1, i)", kind="cyclic", degree=6, d=3,
            galois_gens=(((1, 2, 0), (0, 0, 1)),), kE_over_k=6,
            conjectural=True, quad_subfield_disc=-1),
        alg_trace=AlgTraceModel(kind="node_orbits"),
        equation="w^2 = x y z (x^3-3x^2z-3xy^2-3xyz+y^3+9y^2z+6yz^2+z^3)",
        branch=Branch(scale=one, components=xyz + (x4_cubic,)),
        census=NodeCensus(
            rational_count=3,
            eliminants=((1, 6, 9, 1), (1, 0, -3, 1), (1, -3, 0, 1), (-1, -3, 0, 1))),
        bad_primes=frozenset({2, 3}),
        tag_moduli=(4, 9),
    )

    alpha = _nf((16, -23, -26), 9)
    beta = _nf((95, 125, -61), 121)
    gamma = _nf((11, -4, -1), 9)
    delta = _nf((149, 5, -46), 121)
    x5 = SurfaceSpec(
        name="X5",
        kind="DOUBLE_COVER",
        base_field=K5,
        picard_rank=16,
        endo=EndoFieldDesc(
            name="k(i)", kind="general", degree=6, d=3,
            galois_gens=(((0, 1, 2), (1, 1, 1)),), kE_over_k=2,
            conjectural=True, quad_subfield_disc=-1),
        alg_trace=AlgTraceModel(kind="rational16"),
        equation="w^2 = x y z (x+y+z)(x+alpha y+beta z)(x+gamma y+delta z) over k",
        branch=Branch(scale=one, components=xyz + (
            BranchComponent.line(1, 1, 1),
            BranchComponent.line(1, alpha, beta),
            BranchComponent.line(1, gamma, delta))),
        census=NodeCensus(rational_count=15),
        bad_primes=frozenset({2, 3, 11, 107}),
        tag_moduli=(4,),
        tag_gauss=True,
    )

    x6_endo = EndoFieldDesc(
        name="Q(sqrt3)", kind="rm_quadratic", degree=2, d=2,
        galois_gens=(), kE_over_k=2, conjectural=True, rm_disc=3)
    x6t_cubic = BranchComponent.from_dict(3, {
        (3, 0, 0): 1, (2, 0, 1): -14, (1, 2, 0): 11, (1, 0, 2): -1,
        (0, 3, 0): 12, (0, 2, 1): -14, (0, 1, 2): -12, (0, 0, 3): 14})
    x6t_census = NodeCensus(rational_count=10, eliminants=((12, -1, 1),))
    x6t_bad = frozenset({2, 3, 5, 7, 11, 13, 17, 47})
    x6t = SurfaceSpec(
        name="X6t",
        kind="DOUBLE_COVER",
        base_field=QQ,
        picard_rank=16,
        endo=x6_endo,
        alg_trace=AlgTraceModel(kind="experimental", extra_char=-42),
        equation="w^2 = x y z (x^3-14x^2z+11xy^2-xz^2+12y^3-14y^2z-12yz^2+14z^3)",
        branch=Branch(scale=one, components=xyz + (x6t_cubic,)),
        census=x6t_census,
        bad_primes=x6t_bad,
        tag_moduli=(12,),
    )

    x6 = SurfaceSpec(
        name="X6",
        kind="TWIST",
        base_field=QQ,
        picard_rank=16,
        endo=x6_endo,
        alg_trace=AlgTraceModel(kind="experimental", extra_char=-42),
        equation="w^2 = -1974 x y z (x^3-14x^2z+11xy^2-xz^2+12y^3-14y^2z-12yz^2+14z^3)",
        branch=Branch(scale=NfElem.rational(-1974), components=x6t.branch.components),
        twist_base="X6t",
        twist_factor=-1974,
        census=x6t_census,
        bad_primes=x6t_bad,
        tag_moduli=(12,),
    )

    curve_c = CurveSpec(
        name="C", kind="hyperelliptic", poly=(-1, 0, 0, 0, 0, 1), disc=3125,
        equation="w^2 = x^5 - 1")
    e1 = CurveSpec(
        name="E1", kind="elliptic", poly=(0, 1, 0, 1), disc=-4,
        equation="y^2 = x^3 + x", cm_by="Q(i)")
    e2 = CurveSpec(
        name="E2", kind="elliptic", poly=(0, 2, 4, 1), disc=32,
        equation="y^2 = x^3 + 4x^2 + 2x", cm_by="Q(sqrt-2)")

    return Catalog(surfaces=(x1, x2, x3, x4, x5, x6, x6t),
                   curves=(curve_c, e1, e2))


def get(name):
    return catalog().get(name)


# ---------------------------------------------------------------------------
# per-slot goodness and reduction


def _reduced_lines(spec, slot):
    out = []
    for comp in spec.branch.components:
        if comp.degree != 1:
            return None
        a, b, c = comp.coeff_triple()
        out.append(tuple(residue_reduce(v, slot) for v in (a, b, c)))
    return out


def _lines_general_position(lines, K):
    """6 reduced lines pairwise distinct and no three concurrent."""
    n = len(lines)
    zero = K.zero()

    def det3(i, j, k):
        (a1, b1, c1), (a2, b2, c2), (a3, b3, c3) = lines[i], lines[j], lines[k]
        t1 = K.mul(a1, K.sub(K.mul(b2, c3), K.mul(b3, c2)))
        t2 = K.mul(b1, K.sub(K.mul(a2, c3), K.mul(a3, c2)))
        t3 = K.mul(c1, K.sub(K.mul(a2, b3), K.mul(a3, b2)))
        return K.add(K.sub(t1, t2), t3)

    for i in range(n):
        for j in range(i + 1, n):
            (a1, b1, c1), (a2, b2, c2) = lines[i], lines[j]
            minors = (K.sub(K.mul(a1, b2), K.mul(a2, b1)),
                      K.sub(K.mul(a1, c2), K.mul(a2, c1)),
                      K.sub(K.mul(b1, c2), K.mul(b2, c1)))
            if all(m == zero for m in minors):
                return False
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                if det3(i, j, k) == zero:
                    return False
    return True


def good_prime(spec, slot: PrimeSlot):
    """Conservative goodness: reject p = 2, catalogued bad primes, and any
    per-slot degeneracy of the defining data."""
    p = slot.p
    if isinstance(spec, CurveSpec):
        return (2 * spec.disc) % p != 0
    if p == 2 or p in spec.bad_primes:
        return False
    if spec.kind == "TWIST":
        if spec.twist_factor % p == 0:
            return False
        return good_prime(catalog().get(spec.twist_base), slot)
    if spec.kind == "DOUBLE_COVER":
        try:
            lines = _reduced_lines(spec, slot)
        except BadPrimeError:
            return False
        if lines is not None:
            return _lines_general_position(lines, slot.residue_field())
        # line + cubic branches: the catalogued bad-prime set is complete
        return True
    return True


def node_census(spec) -> NodeCensus:
    if spec.kind not in ("DOUBLE_COVER", "TWIST") or spec.census is None:
        raise ValueError(f"no node model for {spec.name}")
    return spec.census


def rational_node_points(spec, slot):
    """The pairwise intersection points of a 6-line branch, reduced to the
    residue field and normalised; used to verify they stay distinct."""
    lines = _reduced_lines(spec, slot)
    K = slot.residue_field()
    pts = set()
    n = len(lines)
    for i in range(n):
        for j in range(i + 1, n):
            (a1, b1, c1), (a2, b2, c2) = lines[i], lines[j]
            # cross product
            x = K.sub(K.mul(b1, c2), K.mul(b2, c1))
            y = K.sub(K.mul(c1, a2), K.mul(c2, a1))
            z = K.sub(K.mul(a1, b2), K.mul(a2, b1))
            for lead in (x, y, z):
                if lead != K.zero():
                    inv = K.inv(lead)
                    pts.add((K.mul(x, inv), K.mul(y, inv), K.mul(z, inv)))
                    break
            else:
                raise ValueError("parallel lines in node computation")
    return pts


@dataclass
class ReducedBranch:
    """Branch data pushed into one residue field, ready for counting.

    For degree-1 fields coefficients are plain ints; otherwise coefficient
    tuples in the polynomial basis."""

    K: object
    scale: object
    components: list  # (degree, {(i, j, k): coeff})


def reduce_branch(spec, slot) -> ReducedBranch:
    if spec.kind == "TWIST":
        base = catalog().get(spec.twist_base)
        branch = Branch(scale=spec.branch.scale, components=base.branch.components)
    elif spec.kind == "DOUBLE_COVER":
        branch = spec.branch
    else:
        raise ValueError(f"{spec.name} has no branch sextic")
    K = slot.residue_field()

    def red(v):
        e = residue_reduce(v, slot)
        return e[0] if K.f == 1 else e

    comps = []
    for comp in branch.components:
        comps.append((comp.degree, {exp: red(co) for exp, co in comp.monomials}))
    return ReducedBranch(K=K, scale=red(branch.scale), components=comps)
