"""Independent oracles used by the test suite.

Everything here recomputes expected values from first principles (atom
enumeration, adaptive quadrature, lattice convolution, dense maximization)
without touching the closed forms under test.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import quad
from scipy.special import ndtr

from cltkit import Distribution, Kind

_SQRT_2PI = math.sqrt(2.0 * math.pi)


def atoms_of(d: Distribution) -> tuple[tuple[float, float], ...]:
    """(value, probability) pairs rebuilt from the family parameters."""
    if d.kind is Kind.DEGENERATE:
        return ((d.p0, 1.0),)
    if d.kind is Kind.TWO_POINT:
        return ((d.p0 - d.p1, 0.5), (d.p0 + d.p1, 0.5))
    if d.kind is Kind.THREE_POINT:
        return ((d.p0 - d.p1, d.p2), (d.p0, 1.0 - 2.0 * d.p2),
                (d.p0 + d.p1, d.p2))
    raise ValueError(f"{d.kind} is not discrete")


def _pdf(d: Distribution):
    if d.kind is Kind.NORMAL:
        mean, sigma = d.p0, d.p1

        def pdf(x):
            z = (x - mean) / sigma
            return math.exp(-0.5 * z * z) / (sigma * _SQRT_2PI)

        return pdf
    if d.kind is Kind.UNIFORM:
        low, high = d.p0, d.p1
        density = 1.0 / (high - low)
        return lambda x: density if low <= x <= high else 0.0
    if d.kind is Kind.EXPONENTIAL:
        rate = d.p0
        return lambda x: rate * math.exp(-rate * x) if x >= 0.0 else 0.0
    raise ValueError(f"{d.kind} is not continuous")


def support_of(d: Distribution) -> tuple[float, float]:
    """Support interval of a continuous family (normal: 12-sigma box)."""
    if d.kind is Kind.NORMAL:
        return d.p0 - 12.0 * d.p1, d.p0 + 12.0 * d.p1
    if d.kind is Kind.UNIFORM:
        return d.p0, d.p1
    if d.kind is Kind.EXPONENTIAL:
        return 0.0, 50.0 / d.p0
    raise ValueError(f"{d.kind} is not continuous")


def tail_second_moment_oracle(d: Distribution, s: float) -> float:
    """Tail second moment by enumeration (discrete) or quadrature (continuous).

    Integration limits are clipped to the support so the adaptive rule never
    hunts for a compact support inside an infinite range.
    """
    mean = d.mean
    if d.kind in (Kind.DEGENERATE, Kind.TWO_POINT, Kind.THREE_POINT):
        return math.fsum(prob * (x - mean) ** 2
                         for x, prob in atoms_of(d)
                         if abs(x - mean) >= s)
    pdf = _pdf(d)
    integrand = lambda x: (x - mean) ** 2 * pdf(x)
    lo, hi = support_of(d)
    total = 0.0
    if mean + s < hi:
        total += quad(integrand, mean + s, hi, epsrel=1e-10, epsabs=1e-14,
                      limit=200)[0]
    if mean - s > lo:
        total += quad(integrand, lo, mean - s, epsrel=1e-10, epsabs=1e-14,
                      limit=200)[0]
    return total


def ks_discrete(samples: np.ndarray, atoms) -> float:
    """One-sample KS statistic against a purely atomic CDF.

    Compares empirical and true CDFs at every atom, from the right and from
    the left; this is the correct statistic when the target has jumps.
    """
    x = np.sort(np.asarray(samples, dtype=np.float64))
    m = x.size
    values = sorted(v for v, _ in atoms)
    prob = dict(atoms)
    best = 0.0
    cum = 0.0
    for v in values:
        left_emp = np.searchsorted(x, v, side="left") / m
        best = max(best, abs(left_emp - cum))
        cum += prob[v]
        right_emp = np.searchsorted(x, v, side="right") / m
        best = max(best, abs(right_emp - cum))
    return best


def ks_continuous(samples: np.ndarray, cdf) -> float:
    """Standard one-sample KS statistic against a continuous CDF callable."""
    x = np.sort(np.asarray(samples, dtype=np.float64))
    m = x.size
    f = np.array([cdf(v) for v in x])
    i = np.arange(1, m + 1)
    return float(max(np.max(i / m - f), np.max(f - (i - 1) / m)))


def ks_uniform_vs_normal() -> float:
    """sup |F_U - Phi| for U = Uniform(-sqrt(3), sqrt(3)), by dense search."""
    s3 = math.sqrt(3.0)
    xs = np.linspace(-s3, s3, 2_000_001)
    inside = float(np.max(np.abs((xs + s3) / (2.0 * s3) - ndtr(xs))))
    return max(inside, float(ndtr(-s3)))


def spike_sum_exact_ks(n: int, scale: float, window: int = 3000,
                       k_max: int = 2500) -> tuple[float, float]:
    """Exact-law KS to N(0,1) for the scaled integer spike sum.

    The sum of the first ``n`` spike terms lives on the integers; convolving
    the first ``k_max`` term laws on a lattice window gives its pmf up to a
    bounded escape mass.  Returns (ks, error_bound).
    """
    pmf = np.zeros(2 * window + 1)
    pmf[window - 1] = 0.5  # first term is forced +-1
    pmf[window + 1] = 0.5
    top = min(k_max, n)
    for k in range(2, top + 1):
        p = 0.5 / (k * k)
        new = pmf * (1.0 - 2.0 * p)
        new[:-k] += p * pmf[k:]
        new[k:] += p * pmf[:-k]
        pmf = new
    escaped = 1.0 - pmf.sum()
    beyond = math.fsum(1.0 / (k * k) for k in range(top + 1, n + 1))
    cdf_vals = np.cumsum(pmf)
    t = np.arange(-window, window + 1)
    phi_vals = ndtr(t / scale)
    ks = max(float(np.max(np.abs(cdf_vals - phi_vals))),
             float(np.max(np.abs(cdf_vals - pmf - phi_vals))))
    return ks, escaped + beyond
