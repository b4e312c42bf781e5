"""Sato-Tate densities via AGM elliptic integrals, empirical histograms
with spike separation, mass checks, and a Kolmogorov-Smirnov distance.

Two theoretical densities occur in the catalog:

    CM4 (surfaces with G^0 a two-torus, dim T = 4):
        density(t) = K(1 - t^2/16) / (8 pi^2)          on (-4, 4),
        point mass 3/4 at t = 0.
    RM  (dim T = 6, RM by a real quadratic field):
        density(t) = ((2-t) K(m) + 4 E(m)) / (8 pi^2),  m = 1 - (t-2)^2/16,
        on (-2, 6), point mass 1/2 at t = 0.

K and E take the parameter m = k^2.  Traces enter this module as exact
rationals and are converted to floats here, nowhere earlier.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

_AGM_TOL = 1e-15


def agm_K(m):
    """Complete elliptic integral of the first kind, parameter m in [0, 1)."""
    if not 0 <= m < 1:
        raise ValueError("K(m) requires 0 <= m < 1")
    a, b = 1.0, math.sqrt(1.0 - m)
    while abs(a - b) > _AGM_TOL * a:
        a, b = (a + b) / 2.0, math.sqrt(a * b)
    return math.pi / (2.0 * a)


def agm_E(m):
    """Complete elliptic integral of the second kind, parameter m in [0, 1];
    E(1) = 1 exactly."""
    if not 0 <= m <= 1:
        raise ValueError("E(m) requires 0 <= m <= 1")
    if m == 1:
        return 1.0
    a, b = 1.0, math.sqrt(1.0 - m)
    c2_sum = 0.5 * m  # 2^{n-1} c_n^2 accumulated, starting at c_0 = sqrt(m)
    power = 0.5
    while abs(a - b) > _AGM_TOL * a:
        c = (a - b) / 2.0
        a, b = (a + b) / 2.0, math.sqrt(a * b)
        power *= 2.0
        c2_sum += power * c * c
    K = math.pi / (2.0 * a)
    return K * (1.0 - c2_sum)


@dataclass(frozen=True)
class DensityModel:
    name: str
    lo: float
    hi: float
    spike_mass: float
    singular: tuple  # interior points where the density blows up or kinks

    def pdf(self, t):
        raise NotImplementedError


class _CM4(DensityModel):
    def pdf(self, t):
        return agm_K(1.0 - t * t / 16.0) / (8.0 * math.pi**2)


class _RM(DensityModel):
    def pdf(self, t):
        m = 1.0 - (t - 2.0) ** 2 / 16.0
        return ((2.0 - t) * agm_K(m) + 4.0 * agm_E(m)) / (8.0 * math.pi**2)


CM4 = _CM4(name="cm4", lo=-4.0, hi=4.0, spike_mass=0.75, singular=(0.0,))
RM = _RM(name="rm", lo=-2.0, hi=6.0, spike_mass=0.5, singular=(2.0,))

MODELS = {"cm4": CM4, "rm": RM}


def density_eval(model: DensityModel, t):
    """Pointwise density; open support, singular points excluded."""
    if not model.lo < t < model.hi or t in model.singular:
        raise ValueError(f"t = {t} outside the open support of {model.name}")
    return model.pdf(t)


# -- quadrature ---------------------------------------------------------------


def _simpson_refine(f, a, b, tol):
    """Composite Simpson with interval doubling and Richardson stop."""
    n = 8
    prev = None
    while n <= (1 << 22):
        xs = np.linspace(a, b, n + 1)
        ys = np.array([f(x) for x in xs])
        h = (b - a) / n
        s = h / 3 * (ys[0] + ys[-1] + 4 * ys[1:-1:2].sum() + 2 * ys[2:-1:2].sum())
        if prev is not None and abs(s - prev) <= tol:
            return s + (s - prev) / 15.0
        prev = s
        n *= 2
    raise RuntimeError("quadrature failed to converge")


_LOG_CUT = 1e-7


def _integrate_log_endpoint(f, sing, other, tol):
    """Integral of f over the interval between `sing` and `other`, where f
    may blow up logarithmically at `sing`: substitute t = sing +- e^{-u} so
    the integrand decays like u e^{-u}, then close the last 1e-7 with the
    fitted asymptotic A - B log|t - sing| (error O(cut^2 log cut))."""
    width = abs(other - sing)
    sgn = 1.0 if other > sing else -1.0
    u0 = -math.log(width)
    u1 = -math.log(_LOG_CUT)

    def g(u):
        return f(sing + sgn * math.exp(-u)) * math.exp(-u)

    body = _simpson_refine(g, u0, u1, tol)
    f1 = f(sing + sgn * _LOG_CUT)
    f2 = f(sing + sgn * _LOG_CUT / math.e)
    tail = _LOG_CUT * (f1 + (f2 - f1))  # = cut * (A - B log cut + B)
    return body + tail


def density_mass(model: DensityModel, tol=1e-9):
    """Continuous mass: integral of the density over its support, splitting
    at interior singular points (absolute error well below 1e-8)."""
    cuts = [model.lo, *model.singular, model.hi]
    total = 0.0
    for a, b in zip(cuts, cuts[1:]):
        if a in model.singular:
            total += _integrate_log_endpoint(model.pdf, a, b, tol)
        elif b in model.singular:
            total += _integrate_log_endpoint(model.pdf, b, a, tol)
        else:
            total += _simpson_refine(model.pdf, a, b, tol)
    return total


def model_cdf_grid(model: DensityModel, panels_per_piece=2048):
    """(grid, cdf) of the continuous part normalised to total mass 1."""
    cuts = [model.lo, *model.singular, model.hi]
    xs_all = [np.array([model.lo])]
    masses = [np.array([0.0])]
    for a, b in zip(cuts, cuts[1:]):
        xs = np.linspace(a, b, panels_per_piece + 1)
        piece = np.zeros(panels_per_piece)
        for i in range(panels_per_piece):
            lo_x, hi_x = xs[i], xs[i + 1]
            if lo_x == a and a in model.singular:
                piece[i] = _integrate_log_endpoint(model.pdf, a, hi_x, 1e-11)
            elif hi_x == b and b in model.singular:
                piece[i] = _integrate_log_endpoint(model.pdf, b, lo_x, 1e-11)
            else:
                # 3-point Simpson per panel is ample away from the singularity
                mid = (lo_x + hi_x) / 2
                piece[i] = (hi_x - lo_x) / 6 * (
                    model.pdf(lo_x) + 4 * model.pdf(mid) + model.pdf(hi_x))
        xs_all.append(xs[1:])
        masses.append(piece)
    grid = np.concatenate(xs_all)
    cdf = np.concatenate(masses).cumsum()
    cdf /= cdf[-1]
    return grid, cdf


# -- histograms ---------------------------------------------------------------


@dataclass
class Histogram:
    edges: np.ndarray  # length bins + 1
    empirical: np.ndarray  # per-bin mass, fraction of all records
    theoretical: np.ndarray = None  # per-bin model mass, or None
    spike_fraction: float = 0.0
    sample_count: int = 0
    surface: str = ""
    model_name: str = None


class SupportAnomalyError(ValueError):
    pass


def _trace_floats(records):
    return np.array([r.trace.numerator / r.trace.denominator for r in records], dtype=float)


def build_histogram(records, bins, model: DensityModel = None, surface=""):
    """Bin the nonzero traces uniformly over the model support (or the data
    range); zero traces go to the spike.  Ties at bin edges fall to the
    lower bin.  A nonzero trace outside the model support is a hard anomaly."""
    if bins < 10:
        raise ValueError("need at least 10 bins")
    traces = _trace_floats(records)
    n = len(traces)
    if n == 0:
        raise ValueError("no records")
    nonzero = traces[traces != 0.0]
    if model is not None:
        lo, hi = model.lo, model.hi
        outside = nonzero[(nonzero < lo) | (nonzero > hi)]
        if outside.size:
            raise SupportAnomalyError(
                f"{outside.size} trace(s) outside the {model.name} support, e.g. {outside[0]}")
    elif nonzero.size:
        lo, hi = float(nonzero.min()), float(nonzero.max())
    else:
        lo, hi = -1.0, 1.0
    edges = np.linspace(lo, hi, bins + 1)
    if nonzero.size:
        idx = np.digitize(nonzero, edges, right=True) - 1
        idx = np.clip(idx, 0, bins - 1)
        counts = np.bincount(idx, minlength=bins).astype(float)
    else:
        counts = np.zeros(bins)
    hist = Histogram(
        edges=edges,
        empirical=counts / n,
        spike_fraction=float((traces == 0.0).sum()) / n,
        sample_count=n,
        surface=surface,
        model_name=model.name if model else None,
    )
    if model is not None:
        grid, cdf = model_cdf_grid(model)
        cont = 1.0 - model.spike_mass
        at_edges = np.interp(edges, grid, cdf) * cont
        hist.theoretical = np.diff(at_edges)
    return hist


def ks_distance(records, model: DensityModel):
    """Sup distance between the empirical CDF of the nonzero traces and the
    model CDF normalised to mass 1."""
    traces = _trace_floats(records)
    nonzero = np.sort(traces[traces != 0.0])
    if nonzero.size < 100:
        raise ValueError("need at least 100 nonzero traces")
    grid, cdf = model_cdf_grid(model)
    F = np.interp(nonzero, grid, cdf)
    n = nonzero.size
    i = np.arange(1, n + 1)
    return float(np.maximum(np.abs(F - i / n), np.abs(F - (i - 1) / n)).max())


# -- delimited output ---------------------------------------------------------


def write_histogram_csv(hist: Histogram, path):
    """Header bin_lo,bin_hi,empirical,theoretical; one line per bin; footer
    lines #spike= and #n=."""
    lines = ["bin_lo,bin_hi,empirical,theoretical"]
    for i in range(len(hist.empirical)):
        th = "" if hist.theoretical is None else repr(float(hist.theoretical[i]))
        lines.append(f"{float(hist.edges[i])!r},{float(hist.edges[i + 1])!r},"
                     f"{float(hist.empirical[i])!r},{th}")
    lines.append(f"#spike={float(hist.spike_fraction)!r}")
    lines.append(f"#n={hist.sample_count}")
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_density_csv(model: DensityModel, path, samples=512):
    """Density table t,density for plotting (singular points skipped)."""
    lines = ["t,density"]
    ts = np.linspace(model.lo, model.hi, samples)
    for t in ts:
        t = float(t)
        if t in model.singular or not model.lo < t < model.hi:
            continue
        lines.append(f"{t!r},{model.pdf(t)!r}")
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
