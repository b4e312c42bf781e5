"""Command-line front end.

Subcommands: catalog, survey, verify, hist, predict.  All flags are
long-form.  Exit codes: 0 success, 1 verification failure or hard anomaly,
2 usage error, 3 I/O error.  K3LAB_CACHE_DIR sets the default cache
directory (default ./k3lab-cache).
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from fractions import Fraction

from . import models, monodromy, stats, traces
from .counting import count_double_cover_raw
from .models import EndoFieldDesc, catalog, reduce_branch
from .numfield import factor_prime, kronecker
from .traces import AnomalyError, CacheError, read_cache, survey

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_IO = 3

# safety ceilings on --max-norm: surveys on surfaces count O(q^2) points per
# slot, curve-backed surveys O(q); --i-know-this-is-big overrides
CEILING_SURFACE = 10**4
CEILING_CURVE = 10**6


class UsageError(Exception):
    pass


def default_cache_dir():
    return os.environ.get("K3LAB_CACHE_DIR", os.path.join(os.getcwd(), "k3lab-cache"))


def _surface(name):
    try:
        spec = catalog().get(name)
    except KeyError as exc:
        raise UsageError(str(exc)) from None
    if isinstance(spec, models.CurveSpec):
        raise UsageError(f"{spec.name} is a curve; surveys and predictions apply to surfaces")
    return spec


def _ceiling_for(spec):
    return CEILING_CURVE if spec.kind.startswith("KUMMER") else CEILING_SURFACE


# -- catalog ------------------------------------------------------------------


def cmd_catalog(args):
    cat = catalog()
    rows = []
    for s in cat.surfaces:
        endo = s.endo
        conj = " (conjectural)" if endo.conjectural else ""
        try:
            ch = monodromy.jump_character_predict(endo, s.picard_rank).display()
        except monodromy.PredictorScopeError:
            ch = "- (RM: out of predictor scope)"
        order, flag = monodromy.component_group_order(endo)
        rows.append((s.name, s.kind, s.base_field.name, str(s.picard_rank),
                     endo.name + conj, ch, f"{order} ({flag})", s.equation))
    for c in cat.curves:
        rows.append((c.name, c.kind, "Q", "-", c.cm_by or "-", "-", "-", c.equation))
    header = ("name", "kind", "base", "rho", "endomorphism field", "jump char",
              "component order", "equation")
    widths = [max(len(header[i]), *(len(r[i]) for r in rows)) for i in range(len(header))]
    line = "  ".join(h.ljust(w) for h, w in zip(header, widths))
    print(line)
    print("-" * len(line))
    for r in rows:
        print("  ".join(v.ljust(w) for v, w in zip(r, widths)))
    return EXIT_OK


# -- survey -------------------------------------------------------------------


def cmd_survey(args):
    spec = _surface(args.surface)
    ceiling = _ceiling_for(spec)
    if args.max_norm > ceiling and not args.i_know_this_is_big:
        raise UsageError(
            f"--max-norm {args.max_norm} exceeds the safety ceiling {ceiling} "
            f"for {spec.name}; pass --i-know-this-is-big to proceed")
    cache = args.cache
    if cache is None:
        os.makedirs(default_cache_dir(), exist_ok=True)
        cache = os.path.join(default_cache_dir(), f"{spec.name}.csv")
    result = survey(spec, args.max_norm, workers=args.workers, cache=cache)
    by_tags = {}
    for r in result.records:
        k = ";".join(r.tags) or "-"
        z, n = by_tags.get(k, (0, 0))
        by_tags[k] = (z + (r.trace == 0), n + (r.trace != 0))
    print(f"surface {spec.name}: {len(result.records)} records with norm <= {args.max_norm} "
          f"({result.new_count} new slots, {len(result.skipped)} skipped)")
    for k in sorted(by_tags):
        z, n = by_tags[k]
        print(f"  [{k}] zero: {z}  nonzero: {n}")
    print(f"cache: {cache}")
    return EXIT_OK


# -- verify -------------------------------------------------------------------


def _check_weil_bound(spec, records):
    bad = [r for r in records
           if "uncalibrated" not in r.tags and abs(r.trace) > spec.dim_t]
    return bad


def _check_denominator_law(spec, records):
    return [r for r in records if r.trace.denominator not in (1, r.p)]


def _check_zero_congruence(residues, modulus):
    def check(spec, records):
        return [r for r in records
                if r.norm % modulus not in residues and r.trace != 0]
    return check


def _check_x4_zero(spec, records):
    return [r for r in records
            if not (r.p % 4 == 1 and r.p % 9 in (1, 8)) and r.trace != 0]


def _check_valuation_table(spec, records):
    bad = []
    for r in records:
        if r.norm % 4 == 3:  # inert in k(i)
            if r.trace != 0:
                bad.append(r)
            continue
        t = r.trace * r.norm
        if t == 0:
            bad.append(r)  # split slots must have nonzero trace
            continue
        num = int(t)
        v = 0
        while num % r.p == 0:
            num //= r.p
            v += 1
        if v != r.f - 1:
            bad.append(r)
    return bad


def _check_twist_identity(spec, records):
    """Recount both singular models at the cache's primes and compare with
    the displayed twist formula."""
    cat = catalog()
    x6 = cat.get("X6")
    x6t = cat.get(x6.twist_base)
    bad = []
    for r in records:
        slot = factor_prime(models.QQ, r.p)[0]
        raw_t = count_double_cover_raw(reduce_branch(x6t, slot))
        raw_6 = count_double_cover_raw(reduce_branch(x6, slot))
        want = raw_t if kronecker(-1974, r.p) == 1 else 2 * (r.p**2 + r.p + 1) - raw_t
        if raw_6 != want:
            bad.append(r)
    return bad


CHECKS = {
    "X1": [("zero-congruence-mod4", _check_zero_congruence({1}, 4), False)],
    "X2": [("zero-congruence-mod5", _check_zero_congruence({1}, 5), False)],
    "X3": [("zero-congruence-mod8", _check_zero_congruence({1}, 8), False)],
    "X4": [("zero-congruence-mod36", _check_x4_zero, False)],
    "X5": [("valuation-table", _check_valuation_table, False)],
    "X6": [("twist-identity", _check_twist_identity, False),
           ("zero-congruence-mod12", _check_zero_congruence({1, 11}, 12), True)],
    "X6t": [("twist-identity", _check_twist_identity, False),
            ("zero-congruence-mod12", _check_zero_congruence({1, 11}, 12), True)],
}


def cmd_verify(args):
    spec = _surface(args.surface)
    cache = args.cache or os.path.join(default_cache_dir(), f"{spec.name}.csv")
    if not os.path.exists(cache):
        print(f"error: cache {cache} does not exist", file=sys.stderr)
        return EXIT_IO
    records = read_cache(cache, surface=spec.name)
    checks = [("weil-bound", _check_weil_bound, False),
              ("denominator-law", _check_denominator_law, False)]
    checks += CHECKS.get(spec.name, [])
    selected = None
    if args.checks:
        selected = set(args.checks.split(","))
        unknown = selected - {name for name, _, _ in checks}
        if unknown:
            raise UsageError(f"unknown checks: {', '.join(sorted(unknown))}")
    failures = 0
    for name, fn, experimental in checks:
        if selected and name not in selected:
            continue
        bad = fn(spec, records)
        status = "pass" if not bad else "FAIL"
        suffix = " [experimental]" if experimental else ""
        print(f"{spec.name} {name}{suffix}: {status} ({len(records)} records)")
        for r in bad[:5]:
            print(f"    counterexample: {r.csv_line()}")
        if bad and len(bad) > 5:
            print(f"    ... and {len(bad) - 5} more")
        if bad and not experimental:
            failures += 1
    return EXIT_VERIFY if failures else EXIT_OK


# -- hist ---------------------------------------------------------------------


def cmd_hist(args):
    spec = _surface(args.surface)
    cache = args.cache or os.path.join(default_cache_dir(), f"{spec.name}.csv")
    if not os.path.exists(cache):
        print(f"error: cache {cache} does not exist", file=sys.stderr)
        return EXIT_IO
    records = read_cache(cache, surface=spec.name)
    model = None
    if args.density != "none":
        model = stats.MODELS[args.density]
        nonzero = sum(1 for r in records if r.trace != 0)
        if nonzero < args.bins:
            raise UsageError(
                f"overlay mode needs at least --bins={args.bins} nonzero traces, have {nonzero}")
    hist = stats.build_histogram(records, args.bins, model, surface=spec.name)
    stats.write_histogram_csv(hist, args.out)
    print(f"histogram: {args.out} (spike {hist.spike_fraction:.4f}, n {hist.sample_count})")
    if args.density_out and model is not None:
        stats.write_density_csv(model, args.density_out)
        print(f"density table: {args.density_out}")
    plot_path = args.plot
    if plot_path is None:
        plot_path = os.path.splitext(args.out)[0] + ".png"
    if plot_path != "none":
        from .plots import render_histogram

        render_histogram(hist, model, plot_path)
        print(f"figure: {plot_path}")
    return EXIT_OK


# -- predict ------------------------------------------------------------------


def _parse_endo(text):
    kind, _, param = text.partition(":")
    if kind == "imagquad":
        delta = int(param)
        if delta <= 0:
            raise UsageError("imagquad:<delta> needs a positive delta (E = Q(sqrt(-delta)))")
        return EndoFieldDesc(
            name=f"Q(sqrt(-{delta}))", kind="imag_quadratic", degree=2, d=1,
            galois_gens=(((0,), (1,)),), kE_over_k=2, delta=delta)
    raise UsageError(f"unsupported endomorphism descriptor {text!r} (use imagquad:<delta>)")


def cmd_predict(args):
    if args.surface:
        spec = _surface(args.surface)
        endo, rho = spec.endo, spec.picard_rank
        label = spec.name
    elif args.E:
        if args.rank is None:
            raise UsageError("--E also needs --rank")
        endo, rho, label = _parse_endo(args.E), args.rank, args.E
    else:
        raise UsageError("predict needs --surface or --E with --rank")
    order, flag = monodromy.component_group_order(endo)
    r = 22 - rho
    print(f"{label}: endomorphism field {endo.name}"
          + (" (conjectural)" if endo.conjectural else ""))
    if r % endo.degree == 0:
        ratio = r // endo.degree
        parity = "even" if ratio % 2 == 0 else "odd"
        print(f"  dim T = {r}, d = {endo.d}, (22-rho)/[E:Q] = {ratio} ({parity})")
    else:
        print(f"  dim T = {r} (not a multiple of [E:Q] = {endo.degree})")
    print(f"  component group order: {order} ({flag})")
    try:
        ch = monodromy.jump_character_predict(endo, rho)
        print(f"  jump character: {ch.display()}")
    except monodromy.PredictorScopeError as exc:
        print(f"  jump character: not predicted ({exc})")
    return EXIT_OK


# -- entry point ----------------------------------------------------------------


def build_parser():
    ap = argparse.ArgumentParser(
        prog="k3lab",
        description="Frobenius traces and component groups for the K3 catalog")
    sub = ap.add_subparsers(dest="command", required=True)

    sub.add_parser("catalog", help="print the surface/curve catalog")

    sv = sub.add_parser("survey", help="run a trace survey into a cache file")
    sv.add_argument("--surface", required=True)
    sv.add_argument("--max-norm", type=int, required=True)
    sv.add_argument("--workers", type=int, default=1)
    sv.add_argument("--cache")
    sv.add_argument("--i-know-this-is-big", action="store_true")

    vf = sub.add_parser("verify", help="run law checks against a trace cache")
    vf.add_argument("--surface", required=True)
    vf.add_argument("--cache")
    vf.add_argument("--checks", help="comma-separated check names (default: all)")

    hs = sub.add_parser("hist", help="histogram CSV, density table and figure")
    hs.add_argument("--surface", required=True)
    hs.add_argument("--cache")
    hs.add_argument("--out", required=True)
    hs.add_argument("--bins", type=int, default=60)
    hs.add_argument("--density", choices=["cm4", "rm", "none"], default="none")
    hs.add_argument("--density-out")
    hs.add_argument("--plot", help="figure path, or 'none' (default: <out>.png)")

    pr = sub.add_parser("predict", help="jump character and component group")
    pr.add_argument("--surface")
    pr.add_argument("--E", dest="E", help="endomorphism descriptor, e.g. imagquad:163")
    pr.add_argument("--rank", type=int, help="geometric Picard rank")
    return ap


def main(argv=None):
    logging.basicConfig(level=logging.INFO, format="%(name)s: %(message)s")
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    handlers = {
        "catalog": cmd_catalog,
        "survey": cmd_survey,
        "verify": cmd_verify,
        "hist": cmd_hist,
        "predict": cmd_predict,
    }
    try:
        return handlers[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AnomalyError as exc:
        print(f"hard anomaly: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except stats.SupportAnomalyError as exc:
        print(f"hard anomaly: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except CacheError as exc:
        print(f"cache error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
