"""Tail-variance diagnostics for sequences of independent random variables.

For one distribution the tail-variance ratio ``alpha(d, s)`` is the share of
its variance carried by mass at distance >= s from the mean (zero, by
convention, for a zero-variance term).  A sequence satisfies the uniform
tail-decay condition when ``sup_n alpha_n(s) -> 0`` as s grows.

That supremum ranges over infinitely many n, so a finite computation can
certify it only through sequence metadata.  The checker therefore returns a
three-and-a-half-valued verdict:

* ``HoldsCertified``: an envelope or exact periodic supremum decays below
  tolerance at the largest grid point;
* ``HoldsOnPrefix``: only the supremum over the tested prefix does
  (explicitly weaker: says nothing beyond the prefix);
* ``Fails``: exact witnesses (terms with tail ratio >= 1/2) were found at a
  geometric escalation of thresholds past the grid, showing the supremum
  stays bounded away from zero as far as probed; an uncertified residual
  case (prefix supremum above tolerance, no witness) also reports ``Fails``
  with ``certified=False``;
* ``Singular-trivial``: every tail ratio is identically zero, i.e. all
  tested terms are point masses.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .distributions import Distribution, Kind, tail_second_moment
from .errors import DegenerateNormalizationError
from .sequences import RandomSequence, total_variance


class UniformityVerdict(enum.Enum):
    HOLDS_CERTIFIED = "HoldsCertified"
    HOLDS_ON_PREFIX = "HoldsOnPrefix"
    FAILS = "Fails"
    SINGULAR_TRIVIAL = "Singular-trivial"


class SingularityVerdict(enum.Enum):
    SINGULAR = "Singular"
    NON_SINGULAR = "NonSingular"
    SINGULAR_ON_PREFIX = "SingularOnPrefix"


_WITNESS_FLOOR = 0.5
_PROBE_DOUBLINGS = 4


def default_s_grid() -> np.ndarray:
    """Default threshold grid: 0 plus 49 log-spaced points in [0.01, 10]."""
    return np.concatenate([[0.0], np.geomspace(0.01, 10.0, 49)])


def alpha(d: Distribution, s: float) -> float:
    """Tail-variance ratio of ``d`` at threshold ``s``, in [0, 1].

    Zero for zero-variance terms; otherwise the truncated second moment over
    ``|x - mean| >= s`` divided by the variance.
    """
    if s < 0.0:
        raise ValueError(f"threshold s must be >= 0, got {s}")
    if d.variance == 0.0:
        return 0.0
    if s == 0.0:
        return 1.0  # whole variance is in the tail, exactly
    # The ratio is <= 1 by construction; clip the last-ulp overshoot of the
    # continuous-family closed forms.
    return min(1.0, tail_second_moment(d, s) / d.variance)


@dataclass(frozen=True)
class AlphaProfile:
    """Tabulated tail-variance ratios over a threshold grid.

    ``values[i, j]`` is alpha of term ``i + 1`` at ``s_grid[j]``; ``sup_row``
    is the per-threshold supremum (exact over all n when the sequence is
    periodic with period <= prefix, otherwise over the prefix only).
    """

    s_grid: np.ndarray
    values: np.ndarray
    sup_row: np.ndarray
    verdict: UniformityVerdict
    certified: bool
    detail: str

    @property
    def prefix(self) -> int:
        return self.values.shape[0]

    def write_csv(self, path) -> None:
        """CSV rows ``s, alpha_1, ..., alpha_N, sup``; verdict comment last."""
        lines = []
        n_terms = self.values.shape[0]
        header = "s," + ",".join(f"alpha_{i + 1}" for i in range(n_terms)) + ",sup"
        lines.append(header)
        for j, s in enumerate(self.s_grid):
            cells = [repr(float(s))]
            cells.extend(repr(float(v)) for v in self.values[:, j])
            cells.append(repr(float(self.sup_row[j])))
            lines.append(",".join(cells))
        lines.append(f"# verdict={self.verdict.value}")
        with open(path, "w", newline="\n") as handle:
            handle.write("\n".join(lines) + "\n")


def _failure_witnesses(seq: RandomSequence, s_start: float):
    """Exact witnesses that the tail supremum stays >= 1/2 past the grid.

    Probes thresholds s_start * 2^j; at each, scans term indices (slightly
    past the threshold itself, so spike-style terms are reachable) for a
    tail ratio >= 1/2.   All evaluations are closed-form, not sampled.
    """
    witnesses = []
    s_probe = max(s_start, 1.0)
    for _ in range(_PROBE_DOUBLINGS):
        limit = max(64, int(2.0 * s_probe) + 4)
        found = None
        for k in range(1, limit + 1):
            value = alpha(seq.term(k), s_probe)
            if value >= _WITNESS_FLOOR:
                found = (s_probe, k, value)
                break
        if found is None:
            return None
        witnesses.append(found)
        s_probe *= 2.0
    return witnesses


def check_uniform_convergence(seq: RandomSequence, s_grid, prefix: int,
                              tol: float = 1e-6) -> AlphaProfile:
    """Tabulate tail ratios on a grid and judge the uniform-decay condition.

    ``s_grid`` must be strictly increasing and nonnegative; ``prefix`` is the
    number of leading terms tabulated; the verdict tests decay below ``tol``
    at the largest grid point.
    """
    s_arr = np.asarray(list(s_grid), dtype=np.float64)
    if s_arr.size == 0:
        raise ValueError("s_grid must not be empty")
    if np.any(s_arr < 0.0) or np.any(np.diff(s_arr) <= 0.0):
        raise ValueError("s_grid must be nonnegative and strictly increasing")
    if prefix < 1:
        raise ValueError(f"prefix must be >= 1, got {prefix}")
    if not tol > 0.0:
        raise ValueError(f"tol must be > 0, got {tol}")

    values = np.empty((prefix, s_arr.size))
    for i in range(prefix):
        d = seq.term(i + 1)
        for j, s in enumerate(s_arr):
            values[i, j] = alpha(d, s)

    periodic_exact = seq.period is not None and seq.period <= prefix
    if periodic_exact:
        sup_row = values[: seq.period].max(axis=0)
    else:
        sup_row = values.max(axis=0)
    s_max = float(s_arr[-1])

    def build(verdict, certified, detail):
        return AlphaProfile(s_grid=s_arr, values=values, sup_row=sup_row,
                            verdict=verdict, certified=certified, detail=detail)

    if values.max(initial=0.0) == 0.0:
        if periodic_exact:
            return build(UniformityVerdict.SINGULAR_TRIVIAL, True,
                         "all tail ratios are identically zero (periodic, "
                         "all terms degenerate)")
        return build(UniformityVerdict.SINGULAR_TRIVIAL, False,
                     f"all tail ratios zero on the tested prefix (n <= {prefix})")

    if periodic_exact and sup_row[-1] <= tol:
        return build(UniformityVerdict.HOLDS_CERTIFIED, True,
                     f"exact periodic supremum at s={s_max:g} is "
                     f"{sup_row[-1]:.3g} <= tol")
    if seq.envelope is not None:
        env_at_max = seq.envelope(s_max)
        if env_at_max <= tol:
            return build(UniformityVerdict.HOLDS_CERTIFIED, True,
                         f"certified envelope at s={s_max:g} is "
                         f"{env_at_max:.3g} <= tol")

    witnesses = _failure_witnesses(seq, s_max)
    if witnesses is not None:
        parts = ", ".join(f"alpha_{k}({s:g})={v:g}" for s, k, v in witnesses)
        return build(UniformityVerdict.FAILS, True,
                     f"witness terms keep the supremum >= {_WITNESS_FLOOR} "
                     f"at escalating thresholds: {parts}")

    if sup_row[-1] <= tol:
        return build(UniformityVerdict.HOLDS_ON_PREFIX, False,
                     f"prefix supremum (n <= {prefix}) at s={s_max:g} is "
                     f"{sup_row[-1]:.3g} <= tol; no certificate beyond the prefix")
    return build(UniformityVerdict.FAILS, False,
                 f"prefix supremum at s={s_max:g} is {sup_row[-1]:.3g} > tol "
                 "and no certificate was found either way")


def classify_singularity(seq: RandomSequence, prefix: int) -> SingularityVerdict:
    """Singular means every term is a point mass or normal.

    A single other-family term among the first ``prefix`` settles the
    question; otherwise only period metadata covering all residues can
    certify singularity, and the verdict is prefix-qualified without it.
    """
    if prefix < 1:
        raise ValueError(f"prefix must be >= 1, got {prefix}")
    scan = prefix if seq.period is None else min(prefix, seq.period)
    for n in range(1, scan + 1):
        if seq.term(n).kind not in (Kind.DEGENERATE, Kind.NORMAL):
            return SingularityVerdict.NON_SINGULAR
    if seq.period is not None and seq.period <= prefix:
        return SingularityVerdict.SINGULAR
    return SingularityVerdict.SINGULAR_ON_PREFIX


def lindeberg_functional(seq: RandomSequence, n: int, eps: float) -> float:
    """Variance-weighted average of tail ratios at threshold eps * B_n.

    Equals (1/B_n^2) * sum over k <= n of the truncated second moment of
    term k beyond eps * B_n; always in [0, 1].  Requires positive total
    variance.
    """
    if not eps > 0.0:
        raise ValueError(f"eps must be > 0, got {eps}")
    stats = total_variance(seq, n)
    if stats.total_variance == 0.0:
        raise DegenerateNormalizationError(
            f"total variance is zero for the first {n} terms")
    threshold = eps * stats.b_n
    weighted = math.fsum(
        seq.term(k).variance * alpha(seq.term(k), threshold)
        for k in range(1, n + 1))
    # <= 1 mathematically; clip the last ulp of the division.
    return min(1.0, weighted / stats.total_variance)


def lindeberg_upper_bound(seq: RandomSequence, n: int, eps: float) -> float:
    """Largest tail ratio among the first n terms at threshold eps * B_n.

    Dominates :func:`lindeberg_functional` term by term.  With period
    metadata the scan shortens to one period.
    """
    if not eps > 0.0:
        raise ValueError(f"eps must be > 0, got {eps}")
    stats = total_variance(seq, n)
    if stats.total_variance == 0.0:
        raise DegenerateNormalizationError(
            f"total variance is zero for the first {n} terms")
    threshold = eps * stats.b_n
    scan = n if seq.period is None else min(n, seq.period)
    return max(alpha(seq.term(k), threshold) for k in range(1, scan + 1))


def envelope_upper_bound(seq: RandomSequence, n: int, eps: float) -> Optional[float]:
    """Envelope-tightened version of :func:`lindeberg_upper_bound`.

    Returns ``min(envelope(eps * B_n), prefix supremum)`` when the sequence
    carries an envelope, else ``None``.
    """
    if seq.envelope is None:
        return None
    stats = total_variance(seq, n)
    if stats.total_variance == 0.0:
        raise DegenerateNormalizationError(
            f"total variance is zero for the first {n} terms")
    return min(seq.envelope(eps * stats.b_n),
               lindeberg_upper_bound(seq, n, eps))
