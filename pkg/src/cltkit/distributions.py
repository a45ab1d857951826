"""Single random variables with finite second moments.

Six families are supported: point mass, normal, symmetric two-point,
symmetric three-point (two spikes around a center atom), uniform, and
exponential.  Each :class:`Distribution` carries its exact mean and
variance, a closed-form truncated second moment about the mean, a CDF, and
a one-uniform-per-draw sampling transform.  Instances are immutable and
safe to share across threads; sampling mutates only the caller's stream.

Conventions:

* ``tail_second_moment(d, s)`` integrates ``(x - mean)^2`` over
  ``|x - mean| >= s`` with the boundary *included*: atoms exactly at
  distance ``s`` count.
* The exponential family keeps its raw support ``[0, inf)`` with mean
  ``1/rate``; tail moments are taken about that mean, never by shifting
  the support.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from . import _kernels
from ._normal import normal_cdf


class Kind(enum.Enum):
    """Distribution family tag."""

    DEGENERATE = "degenerate"
    NORMAL = "normal"
    TWO_POINT = "two_point"
    THREE_POINT = "three_point"
    UNIFORM = "uniform"
    EXPONENTIAL = "exponential"


# Integer codes used by the compiled kernels.
KIND_CODE = {
    Kind.DEGENERATE: _kernels.DEGENERATE,
    Kind.NORMAL: _kernels.NORMAL,
    Kind.TWO_POINT: _kernels.TWO_POINT,
    Kind.THREE_POINT: _kernels.THREE_POINT,
    Kind.UNIFORM: _kernels.UNIFORM,
    Kind.EXPONENTIAL: _kernels.EXPONENTIAL,
}

_SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class Distribution:
    """One random variable: family tag, exact moments, family parameters.

    The parameter slots (p0, p1, p2) are family-specific:

    ==============  ==========  ===========  =================
    kind            p0          p1           p2
    ==============  ==========  ===========  =================
    DEGENERATE      value       --           --
    NORMAL          mean        std dev      --
    TWO_POINT       center      offset       --
    THREE_POINT     center      offset       spike prob (each)
    UNIFORM         low         high         --
    EXPONENTIAL     rate        --           --
    ==============  ==========  ===========  =================
    """

    kind: Kind
    mean: float
    variance: float
    p0: float
    p1: float = 0.0
    p2: float = 0.0

    @property
    def stddev(self) -> float:
        return math.sqrt(self.variance)


def degenerate(value: float) -> Distribution:
    """Point mass at ``value``; the only family with zero variance."""
    return Distribution(Kind.DEGENERATE, float(value), 0.0, float(value))


def normal(mean: float, variance: float) -> Distribution:
    """Normal law with the given mean and (strictly positive) variance."""
    if not variance > 0.0:
        raise ValueError(f"normal variance must be > 0, got {variance}")
    return Distribution(Kind.NORMAL, float(mean), float(variance),
                        float(mean), math.sqrt(variance))


def two_point(center: float, offset: float) -> Distribution:
    """Atoms at center +- offset, probability 1/2 each."""
    if not offset > 0.0:
        raise ValueError(f"two_point offset must be > 0, got {offset}")
    return Distribution(Kind.TWO_POINT, float(center), float(offset) ** 2,
                        float(center), float(offset))


def three_point(center: float, offset: float, spike_prob: float) -> Distribution:
    """Atoms at center +- offset with probability ``spike_prob`` *each*,
    remaining mass ``1 - 2 * spike_prob`` at the center.
    """
    if not offset > 0.0:
        raise ValueError(f"three_point offset must be > 0, got {offset}")
    if not 0.0 < spike_prob <= 0.5:
        raise ValueError(
            f"three_point spike_prob must be in (0, 0.5], got {spike_prob}")
    variance = 2.0 * spike_prob * offset * offset
    return Distribution(Kind.THREE_POINT, float(center), variance,
                        float(center), float(offset), float(spike_prob))


def uniform(low: float, high: float) -> Distribution:
    """Continuous uniform law on [low, high]."""
    if not high > low:
        raise ValueError(f"uniform requires high > low, got [{low}, {high}]")
    width = float(high) - float(low)
    return Distribution(Kind.UNIFORM, 0.5 * (float(low) + float(high)),
                        width * width / 12.0, float(low), float(high))


def exponential(rate: float) -> Distribution:
    """Exponential law on [0, inf) with mean and std dev 1/rate."""
    if not rate > 0.0:
        raise ValueError(f"exponential rate must be > 0, got {rate}")
    rate = float(rate)
    return Distribution(Kind.EXPONENTIAL, 1.0 / rate, 1.0 / (rate * rate), rate)


def _atoms(d: Distribution) -> tuple[tuple[float, float], ...]:
    """(value, probability) pairs for the discrete families."""
    if d.kind is Kind.DEGENERATE:
        return ((d.p0, 1.0),)
    if d.kind is Kind.TWO_POINT:
        return ((d.p0 - d.p1, 0.5), (d.p0 + d.p1, 0.5))
    if d.kind is Kind.THREE_POINT:
        return ((d.p0 - d.p1, d.p2), (d.p0, 1.0 - 2.0 * d.p2),
                (d.p0 + d.p1, d.p2))
    raise ValueError(f"{d.kind} has no atoms")


def tail_second_moment(d: Distribution, s: float) -> float:
    """Second moment of ``d`` about its mean restricted to ``|x - mean| >= s``.

    Closed form per family.  Nonincreasing in ``s``, equals the variance at
    ``s = 0`` and vanishes as ``s`` grows; the boundary is inclusive.
    """
    if s < 0.0:
        raise ValueError(f"threshold s must be >= 0, got {s}")
    kind = d.kind
    if kind is Kind.DEGENERATE:
        return 0.0
    if kind is Kind.TWO_POINT:
        return d.variance if s <= d.p1 else 0.0
    if kind is Kind.THREE_POINT:
        # The center atom sits at distance 0 and carries zero squared deviation.
        return 2.0 * d.p2 * d.p1 * d.p1 if s <= d.p1 else 0.0
    if kind is Kind.NORMAL:
        sigma = d.p1
        t = s / sigma
        density = math.exp(-0.5 * t * t) / _SQRT_2PI
        return 2.0 * d.variance * (t * density + normal_cdf(-t))
    if kind is Kind.UNIFORM:
        half = 0.5 * (d.p1 - d.p0)
        if s > half:
            return 0.0
        return (half * half * half - s * s * s) / (3.0 * half)
    # EXPONENTIAL: mean m = 1/rate; integrate (x - m)^2 rate e^{-rate x} over
    # [0, m - s] (present only when s <= m) and [m + s, inf).
    rate = d.p0
    mean = 1.0 / rate
    right = math.exp(-(1.0 + rate * s)) * (s * s + 2.0 * s / rate
                                           + 2.0 / (rate * rate))
    if s > mean:
        return right
    left = 1.0 / (rate * rate) - math.exp(-(1.0 - rate * s)) * (
        s * s - 2.0 * s / rate + 2.0 / (rate * rate))
    return right + left


def cdf(d: Distribution, x: float) -> float:
    """Right-continuous CDF of ``d`` at ``x``."""
    kind = d.kind
    if kind is Kind.NORMAL:
        return normal_cdf((x - d.p0) / d.p1)
    if kind is Kind.UNIFORM:
        if x < d.p0:
            return 0.0
        if x >= d.p1:
            return 1.0
        return (x - d.p0) / (d.p1 - d.p0)
    if kind is Kind.EXPONENTIAL:
        if x < 0.0:
            return 0.0
        return -math.expm1(-d.p0 * x)
    total = 0.0
    for value, prob in _atoms(d):
        if x >= value:
            total += prob
    return min(total, 1.0)


def sample(d: Distribution, stream) -> float:
    """Draw one variate, consuming exactly one uniform from ``stream``.

    ``stream`` is either a :class:`cltkit.montecarlo.RngStream` or any object
    with a ``random()`` method returning floats in [0, 1).
    """
    u = stream.random()
    return _kernels.transform_one(u, KIND_CODE[d.kind], d.p0, d.p1, d.p2)
