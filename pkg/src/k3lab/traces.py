"""Normalized Frobenius traces on the transcendental lattice, and the
parallel resumable trace survey with its append-only CSV cache.

Trace dispatch per surface kind (q = slot norm, traces exact rationals):

    KUMMER_PRODUCT   tau = a_p(E1) a_p(E2) / p
    KUMMER_JACOBIAN  tau = 0 unless p = 1 mod 5, else (e2 - 2p)/p with e2
                     the second elementary symmetric function of the
                     Frobenius eigenvalues on H^1 of the genus-2 curve
    DOUBLE_COVER     tau = (#X(F_q) - 1 - q^2 - t_alg q)/q, t_alg from the
                     surface's algebraic-trace model
    TWIST            tau = (D/p) * tau_base

Cache format: ASCII CSV, header
`surface,p,f,index,norm,tags,trace_num,trace_den`, one record per line in
ascending (norm, p, index) order, final line `#sha256=<hex>` over all
preceding bytes, rewritten whenever records are appended.
"""

from __future__ import annotations

import hashlib
import logging
import multiprocessing
import os
from dataclasses import dataclass
from fractions import Fraction

from .counting import (
    ap_elliptic,
    count_hyperelliptic_odd,
    count_resolved,
    frobenius_fixed_nodes,
)
from .ffield import ext_field_build, prime_field, prime_sieve
from .models import catalog, good_prime
from .numfield import RamifiedPrimeError, factor_prime, kronecker, splits_in_gaussian_ext

log = logging.getLogger("k3lab.survey")

CACHE_HEADER = "surface,p,f,index,norm,tags,trace_num,trace_den"


class AnomalyError(RuntimeError):
    """A computed count violates a structural bound (e.g. the Weil bound);
    the data cannot be trusted and the survey must stop."""


class CacheError(RuntimeError):
    pass


@dataclass(frozen=True)
class TraceRecord:
    surface: str
    p: int
    f: int
    index: int
    norm: int
    tags: tuple
    trace: Fraction

    @property
    def key(self):
        return (self.norm, self.p, self.index)

    def csv_line(self):
        return (f"{self.surface},{self.p},{self.f},{self.index},{self.norm},"
                f"{';'.join(self.tags)},{self.trace.numerator},{self.trace.denominator}")

    @classmethod
    def from_csv_line(cls, line):
        parts = line.split(",")
        if len(parts) != 8:
            raise ValueError("malformed record line")
        surface, p, f, index, norm, tags, num, den = parts
        return cls(surface=surface, p=int(p), f=int(f), index=int(index),
                   norm=int(norm), tags=tuple(t for t in tags.split(";") if t),
                   trace=Fraction(int(num), int(den)))


def e2_from_counts(n1, n2, p):
    """Second elementary symmetric function of the Frobenius eigenvalues on
    H^1 of a curve, from point counts over F_p and F_{p^2}:
    e2 = (s1^2 - s2)/2, s1 = p + 1 - n1, s2 = p^2 + 1 - n2."""
    s1 = p + 1 - n1
    s2 = p * p + 1 - n2
    if (s1 * s1 - s2) % 2 != 0:
        raise AnomalyError(f"inconsistent curve counts at p={p}: parity violation")
    return (s1 * s1 - s2) // 2


def _tags_for(spec, slot, uncalibrated):
    tags = [f"mod{m}={slot.norm % m}" for m in spec.tag_moduli]
    if spec.tag_gauss:
        tags.append(f"gauss={splits_in_gaussian_ext(slot)}")
    if uncalibrated:
        tags.append("uncalibrated")
    return tuple(sorted(tags))


def _algebraic_trace(spec, slot):
    model = spec.alg_trace
    if model.kind == "rational16":
        return 16
    if model.kind == "node_orbits":
        return 1 + frobenius_fixed_nodes(spec, slot)
    if model.kind == "experimental":
        return 1 + frobenius_fixed_nodes(spec, slot) + kronecker(model.extra_char, slot.p)
    raise ValueError(f"{spec.name} has no algebraic trace model")


def trace_transcendental(spec, slot):
    """TraceRecord for one good slot.  Raises AnomalyError on structural
    violations, BadReductionError for bad slots."""
    q, p = slot.norm, slot.p
    uncalibrated = spec.alg_trace.kind == "experimental"
    cat = catalog()

    if spec.kind == "KUMMER_PRODUCT":
        c1, c2 = (cat.get(n) for n in spec.curve_names)
        tau = Fraction(ap_elliptic(c1, p) * ap_elliptic(c2, p), p)
    elif spec.kind == "KUMMER_JACOBIAN":
        if p % 5 != 1:
            tau = Fraction(0)
        else:
            n1 = count_hyperelliptic_odd(spec.hyper_poly, prime_field(p))
            n2 = count_hyperelliptic_odd(spec.hyper_poly, ext_field_build(p, 2))
            tau = Fraction(e2_from_counts(n1, n2, p) - 2 * p, p)
    elif spec.kind == "DOUBLE_COVER":
        resolved = count_resolved(spec, slot)
        if abs(resolved - 1 - q * q) > 22 * q:
            raise AnomalyError(f"{spec.name} at {slot.key}: resolved count violates the Weil bound")
        tau = Fraction(resolved - 1 - q * q - _algebraic_trace(spec, slot) * q, q)
    elif spec.kind == "TWIST":
        base = cat.get(spec.twist_base)
        base_rec = trace_transcendental(base, slot)
        tau = kronecker(spec.twist_factor, p) * base_rec.trace
    else:
        raise ValueError(f"unknown surface kind {spec.kind}")

    if tau.denominator not in (1, p):
        raise AnomalyError(f"{spec.name} at {slot.key}: trace denominator {tau.denominator}")
    if not uncalibrated and abs(tau) > spec.dim_t:
        raise AnomalyError(f"{spec.name} at {slot.key}: |trace| = {abs(tau)} exceeds dim T")
    return TraceRecord(surface=spec.name, p=p, f=slot.f, index=slot.index, norm=q,
                       tags=_tags_for(spec, slot, uncalibrated), trace=tau)


# ---------------------------------------------------------------------------
# slot enumeration and the survey


def enumerate_slots(spec, norm_bound):
    """All slots of the base field with norm <= bound, ascending
    (norm, p, index); ramified primes are skipped (logged by the survey)."""
    slots, ramified = [], []
    for p in prime_sieve(norm_bound):
        try:
            sl = factor_prime(spec.base_field, p)
        except RamifiedPrimeError:
            ramified.append(p)
            continue
        slots.extend(s for s in sl if s.norm <= norm_bound)
    slots.sort(key=lambda s: s.key)
    return slots, ramified


def _compute_records(surface_name, slot_keys):
    """Worker: records for the slot identities (p, f, index)."""
    spec = catalog().get(surface_name)
    out = []
    by_p = {}
    for p, f, index in slot_keys:
        if p not in by_p:
            by_p[p] = factor_prime(spec.base_field, p)
        slot = next(s for s in by_p[p] if s.f == f and s.index == index)
        rec = trace_transcendental(spec, slot)
        out.append((rec.p, rec.f, rec.index, rec.norm, rec.tags, rec.trace.numerator,
                    rec.trace.denominator))
    return out


def _chunk(seq, n):
    for i in range(0, len(seq), n):
        yield seq[i : i + n]


@dataclass
class SurveyResult:
    records: list  # ascending records with norm <= bound
    new_count: int
    skipped: list  # (key, reason)
    cache_path: str = None


def survey(spec, norm_bound, workers=1, cache=None):
    """Survey all good slots with norm <= norm_bound.

    Emits records in ascending (norm, p, index) order regardless of worker
    count.  An existing cache is extended, never recomputed; identical
    reruns leave the file byte-identical."""
    if norm_bound < 3:
        raise ValueError("norm bound must be >= 3")
    existing = read_cache(cache, surface=spec.name) if cache and os.path.exists(cache) else []
    known = {r.key for r in existing}

    slots, ramified = enumerate_slots(spec, norm_bound)
    skipped = [((p, 1, 0), "ramified in the base field") for p in ramified]
    good_slots = []
    for s in slots:
        if s.key in known:
            good_slots.append((s, False))
        elif good_prime(spec, s):
            good_slots.append((s, True))
        else:
            skipped.append((s.key, "bad reduction"))
            log.info("skipping bad slot %s for %s", s.key, spec.name)

    todo = [s for s, fresh in good_slots if fresh]
    new_records = []
    if todo:
        keys = [(s.p, s.f, s.index) for s in todo]
        if workers > 1:
            chunksize = max(1, len(keys) // (workers * 8) or 1)
            ctx = multiprocessing.get_context("fork")
            with ctx.Pool(workers) as pool:
                parts = pool.starmap(
                    _compute_records,
                    [(spec.name, ck) for ck in _chunk(keys, chunksize)])
        else:
            parts = [_compute_records(spec.name, keys)]
        for part in parts:
            for p, f, index, norm, tags, num, den in part:
                new_records.append(TraceRecord(
                    surface=spec.name, p=p, f=f, index=index, norm=norm,
                    tags=tuple(tags), trace=Fraction(num, den)))
    new_records.sort(key=lambda r: r.key)

    if cache and new_records:
        append_cache(cache, spec.name, existing, new_records)

    merged = sorted(existing + new_records, key=lambda r: r.key)
    emitted = [r for r in merged if r.norm <= norm_bound]
    return SurveyResult(records=emitted, new_count=len(new_records),
                        skipped=skipped, cache_path=cache)


# ---------------------------------------------------------------------------
# cache I/O


def _checksum(body_bytes):
    return hashlib.sha256(body_bytes).hexdigest()


def read_cache(path, surface=None):
    """Records from a cache file, with checksum and format validation."""
    with open(path, "rb") as fh:
        raw = fh.read()
    text = raw.decode("ascii")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0] != CACHE_HEADER:
        raise CacheError(f"{path}:1: bad or missing header")
    if not lines[-1].startswith("#sha256="):
        raise CacheError(f"{path}:{len(lines)}: missing checksum line")
    body = "\n".join(lines[:-1]) + "\n"
    want = lines[-1][len("#sha256=") :]
    got = _checksum(body.encode("ascii"))
    if want != got:
        raise CacheError(f"{path}:{len(lines)}: checksum mismatch")
    records = []
    for i, line in enumerate(lines[1:-1], start=2):
        try:
            rec = TraceRecord.from_csv_line(line)
        except Exception as exc:
            raise CacheError(f"{path}:{i}: corrupt record line ({exc})") from exc
        if surface is not None and rec.surface != surface:
            raise CacheError(f"{path}:{i}: record for {rec.surface}, expected {surface}")
        if records and rec.key <= records[-1].key:
            raise CacheError(f"{path}:{i}: records out of ascending order")
        records.append(rec)
    return records


def write_cache(path, surface, records):
    lines = [CACHE_HEADER] + [r.csv_line() for r in records]
    body = "\n".join(lines) + "\n"
    data = body + f"#sha256={_checksum(body.encode('ascii'))}\n"
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="ascii", newline="\n") as fh:
        fh.write(data)
    os.replace(tmp, path)


def append_cache(path, surface, existing, new_records):
    """Append records (which must sort after everything present) and rewrite
    the trailing checksum line."""
    if existing and new_records and new_records[0].key <= existing[-1].key:
        raise CacheError(f"{path}: new records do not extend the cache")
    write_cache(path, surface, existing + new_records)
