"""Infinite sequences of independent random variables and their prefix stats.

A :class:`RandomSequence` maps indices n >= 1 to distributions.  Optional
metadata makes otherwise-asymptotic checks decidable:

* ``envelope``: a certified function A(s) dominating every per-term
  tail-variance ratio, with A(s) -> 0 as s -> infinity;
* ``period``: when set, term(n) depends only on n modulo the period, so
  suprema over all n reduce to one period.

The built-in fixture registry covers every regime the condition checks and
the Monte Carlo studies distinguish: diverging vs. bounded total variance,
certified vs. impossible tail envelopes, and singular (all terms degenerate
or normal) vs. non-singular families.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .distributions import (Distribution, degenerate, normal,
                            tail_second_moment, three_point, two_point,
                            uniform)
from .errors import UnknownFixtureError

_SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class RandomSequence:
    """Sequence of independent term distributions, with optional metadata."""

    name: str
    term_fn: Callable[[int], Distribution]
    envelope: Optional[Callable[[float], float]] = None
    period: Optional[int] = None

    def term(self, n: int) -> Distribution:
        """Distribution of the n-th term, n >= 1."""
        if n < 1:
            raise ValueError(f"term index must be >= 1, got {n}")
        if self.period is not None:
            n = (n - 1) % self.period + 1
        return self.term_fn(n)


@dataclass(frozen=True)
class PartialSumStats:
    """Exact aggregates of the first n terms."""

    n: int
    sum_mean: float
    total_variance: float
    term_variances: np.ndarray = field(repr=False)

    @property
    def b_n(self) -> float:
        """Square root of the total variance."""
        return math.sqrt(self.total_variance)


def total_variance(seq: RandomSequence, n: int) -> PartialSumStats:
    """Mean of the prefix sum and its total variance, summed exactly."""
    if n < 1:
        raise ValueError(f"prefix length must be >= 1, got {n}")
    means = []
    variances = []
    for k in range(1, n + 1):
        d = seq.term(k)
        means.append(d.mean)
        variances.append(d.variance)
    return PartialSumStats(
        n=n,
        sum_mean=math.fsum(means),
        total_variance=math.fsum(variances),
        term_variances=np.asarray(variances, dtype=np.float64),
    )


def total_variance_trend(seq: RandomSequence, n_ref: int) -> str:
    """Classify total-variance growth by comparing prefixes n_ref and 8*n_ref.

    Returns one of ``zero``, ``bounded``, ``diverging`` or ``indeterminate``.
    A doubling-style probe cannot certify an asymptotic claim for arbitrary
    sequences; it is exact for the shipped fixtures, whose total variance is
    either constant, geometric-tailed, or linear.
    """
    if n_ref < 1:
        raise ValueError(f"n_ref must be >= 1, got {n_ref}")
    v1 = total_variance(seq, n_ref).total_variance
    v8 = total_variance(seq, 8 * n_ref).total_variance
    if v8 == 0.0:
        return "zero"
    if v8 >= 1.5 * v1:
        return "diverging"
    if v8 - v1 <= max(1e-9, 1e-6 * v1):
        return "bounded"
    return "indeterminate"


def _rademacher_alpha_envelope(s: float) -> float:
    return 1.0 if s <= 1.0 else 0.0


def _dyadic_alpha_envelope(s: float) -> float:
    # Largest term support is half-width 1/2 (n = 1); all others are smaller.
    return 1.0 if s <= 0.5 else 0.0


_STD_NORMAL = normal(0.0, 1.0)


def _normal_alpha_envelope(s: float) -> float:
    return tail_second_moment(_STD_NORMAL, s)


_UNIT_UNIFORM = uniform(-_SQRT3, _SQRT3)


def _mixed_alpha_envelope(s: float) -> float:
    if s <= 1.0:
        return 1.0
    return tail_second_moment(_UNIT_UNIFORM, s)


def _zero_envelope(s: float) -> float:
    return 0.0


def _bc_spike_term(n: int) -> Distribution:
    # Unit-variance spikes at +-n; for n = 1 the two spikes carry all mass.
    return three_point(0.0, float(n), 0.5 / (n * n))


def _dyadic_term(n: int) -> Distribution:
    half_width = 2.0 ** -n
    if half_width == 0.0:  # 2^-n underflows for n > 1074
        return degenerate(0.0)
    return two_point(0.0, half_width)


_FIXTURES: dict[str, tuple[str, Callable[[], RandomSequence]]] = {
    "iid_rademacher": (
        "ξ_n = ±1 equiprobable; total variance n; certified envelope",
        lambda: RandomSequence(
            name="iid_rademacher",
            term_fn=lambda n: two_point(0.0, 1.0),
            envelope=_rademacher_alpha_envelope,
            period=1,
        ),
    ),
    "dyadic_bounded": (
        "ξ_n = ±2^-n equiprobable; total variance -> 1/3; limit law Uniform(-√3, √3)",
        lambda: RandomSequence(
            name="dyadic_bounded",
            term_fn=_dyadic_term,
            envelope=_dyadic_alpha_envelope,
        ),
    ),
    "bc_spikes": (
        "ξ_n = ±n with probability 1/(2n²) each, else 0; unit variances, no tail envelope",
        lambda: RandomSequence(
            name="bc_spikes",
            term_fn=_bc_spike_term,
        ),
    ),
    "iid_normal": (
        "ξ_n ~ Normal(0, 1); singular family (every term normal)",
        lambda: RandomSequence(
            name="iid_normal",
            term_fn=lambda n: normal(0.0, 1.0),
            envelope=_normal_alpha_envelope,
            period=1,
        ),
    ),
    "all_degenerate": (
        "ξ_n = 1 surely; zero total variance, singular family",
        lambda: RandomSequence(
            name="all_degenerate",
            term_fn=lambda n: degenerate(1.0),
            envelope=_zero_envelope,
            period=1,
        ),
    ),
    "mixed_two_families": (
        "alternating ±1 two-point and Uniform(-√3, √3); unit variances, envelope = max of the two tails",
        lambda: RandomSequence(
            name="mixed_two_families",
            term_fn=lambda n: two_point(0.0, 1.0) if n % 2 == 1 else _UNIT_UNIFORM,
            envelope=_mixed_alpha_envelope,
            period=2,
        ),
    ),
}


def fixture_names() -> tuple[str, ...]:
    """Registry names, in declaration order."""
    return tuple(_FIXTURES)


def fixture_description(name: str) -> str:
    """One-line regime description of a registered fixture."""
    if name not in _FIXTURES:
        raise UnknownFixtureError(name, fixture_names())
    return _FIXTURES[name][0]


def fixture(name: str) -> RandomSequence:
    """Build the named sequence from the registry."""
    if name not in _FIXTURES:
        raise UnknownFixtureError(name, fixture_names())
    return _FIXTURES[name][1]()
