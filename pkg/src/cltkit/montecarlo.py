"""Reproducible Monte Carlo for normalized sums of independent sequences.

Randomness comes from counter-based Philox streams.  A stream is a pure
function of ``(root_seed, study_id, n, replicate)``: the 128-bit Philox key
mixes the root seed with a hash of the study id and ``n``, and the counter
starts at the replicate's 256-bit-aligned block offset (each replicate owns
a contiguous span of ``4 * ceil(draws_per_replicate / 4)`` draws).  Stream
derivation is O(1), replicates never overlap, and the engine's bulk
generation reproduces the per-replicate streams exactly, so results do not
depend on worker count or evaluation order.

Simulated draws are deterministic for a fixed backend; the numba and numpy
kernel paths agree to floating-point roundoff but are not bit-identical.
"""

from __future__ import annotations

import hashlib
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from ._backend import active_backend
from ._normal import normal_cdf_array
from .conditions import (check_uniform_convergence, classify_singularity,
                         default_s_grid, envelope_upper_bound,
                         lindeberg_functional, lindeberg_upper_bound)
from .distributions import KIND_CODE
from .errors import DegenerateNormalizationError
from .sequences import RandomSequence, total_variance

SCHEMA_VERSION = 1

_MASK64 = (1 << 64) - 1
_DRAWS_PER_BLOCK = 4  # Philox-4x64 emits 4 64-bit words per counter step
_CHUNK_DOUBLES = 4_000_000  # uniforms generated per engine chunk


def _splitmix64(z: int) -> int:
    z = (z + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def _study_word(study_id: str) -> int:
    digest = hashlib.blake2b(study_id.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def _stream_key(root_seed: int, study_id: str, n: int) -> np.ndarray:
    """128-bit Philox key: (root_seed, mix(study_id, n))."""
    word = _splitmix64(_study_word(study_id) ^ _splitmix64(n))
    return np.array([root_seed, word], dtype=np.uint64)


def _blocks_per_replicate(draws: int) -> int:
    return (draws + _DRAWS_PER_BLOCK - 1) // _DRAWS_PER_BLOCK


def _positioned_generator(root_seed: int, study_id: str, n: int,
                          replicate: int, draws: int) -> np.random.Generator:
    bitgen = np.random.Philox(key=_stream_key(root_seed, study_id, n))
    offset = replicate * _blocks_per_replicate(draws)
    if offset:
        bitgen.advance(offset)
    return np.random.Generator(bitgen)


class RngStream:
    """One replicate's substream of the package generator.

    Identical ``(root_seed, study_id, n, replicate)`` always reproduces the
    identical variate sequence.  ``draws_per_replicate`` (default ``n``)
    fixes the counter stride between consecutive replicates and must match
    the number of uniforms each replicate actually consumes.
    """

    def __init__(self, root_seed: int, study_id: str = "", n: int = 1,
                 replicate: int = 0, draws_per_replicate: Optional[int] = None):
        if not 0 <= root_seed <= _MASK64:
            raise ValueError(f"root_seed must fit in 64 bits, got {root_seed}")
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        if replicate < 0:
            raise ValueError(f"replicate must be >= 0, got {replicate}")
        draws = n if draws_per_replicate is None else draws_per_replicate
        if draws < 1:
            raise ValueError(f"draws_per_replicate must be >= 1, got {draws}")
        self.root_seed = root_seed
        self.study_id = study_id
        self.n = n
        self.replicate = replicate
        self.draws_per_replicate = draws
        self._generator: Optional[np.random.Generator] = None

    @property
    def generator(self) -> np.random.Generator:
        if self._generator is None:
            self._generator = _positioned_generator(
                self.root_seed, self.study_id, self.n, self.replicate,
                self.draws_per_replicate)
        return self._generator

    def random(self) -> float:
        """Next uniform draw in [0, 1)."""
        return float(self.generator.random())

    def uniforms(self, count: int) -> np.ndarray:
        """Next ``count`` uniform draws."""
        return self.generator.random(count)


def _term_params(seq: RandomSequence, first: int, last: int):
    """Kernel parameter arrays for terms ``first..last`` inclusive."""
    count = last - first + 1
    kinds = np.empty(count, dtype=np.int64)
    p0 = np.empty(count)
    p1 = np.empty(count)
    p2 = np.empty(count)
    for i, k in enumerate(range(first, last + 1)):
        d = seq.term(k)
        kinds[i] = KIND_CODE[d.kind]
        p0[i] = d.p0
        p1[i] = d.p1
        p2[i] = d.p2
    return kinds, p0, p1, p2


def _run_blocks(m: int, rows_per_block: int, run_block, workers: int) -> None:
    """Dispatch block indices; output placement makes scheduling irrelevant.

    ``workers`` is a throughput hint, never a semantic one.  Threads only pay
    off for the nogil numba kernels; the pure-numpy fallback holds the GIL
    for most of its work, so it always runs blocks serially.
    """
    n_blocks = (m + rows_per_block - 1) // rows_per_block
    if workers <= 1 or n_blocks <= 1 or active_backend() != "numba":
        for b in range(n_blocks):
            run_block(b)
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for _ in pool.map(run_block, range(n_blocks)):
            pass


def sample_normalized_sum(seq: RandomSequence, n: int, stream: RngStream) -> float:
    """One draw of the centered, variance-normalized prefix sum.

    Consumes exactly ``n`` uniforms from ``stream``; terms are accumulated
    left to right, matching the batch engine replicate by replicate.
    """
    stats = total_variance(seq, n)
    if stats.total_variance == 0.0:
        raise DegenerateNormalizationError(
            f"total variance is zero for the first {n} terms")
    kinds, p0, p1, p2 = _term_params(seq, 1, n)
    u = stream.uniforms(n)
    acc = 0.0
    for k in range(n):
        acc += _kernels.transform_one(u[k], kinds[k], p0[k], p1[k], p2[k])
    return (acc - stats.sum_mean) / stats.b_n


def simulate_normalized_sums(seq: RandomSequence, n: int, m: int,
                             root_seed: int, study_id: Optional[str] = None,
                             workers: int = 1) -> np.ndarray:
    """``m`` independent draws of the normalized prefix sum at length ``n``.

    Replicate ``r`` consumes the stream
    ``RngStream(root_seed, study_id, n, r)``; the result is a pure function
    of those keys, whatever ``workers`` is.
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    stats = total_variance(seq, n)
    if stats.total_variance == 0.0:
        raise DegenerateNormalizationError(
            f"total variance is zero for the first {n} terms")
    sid = seq.name if study_id is None else study_id
    kinds, p0, p1, p2 = _term_params(seq, 1, n)
    b_n = stats.b_n
    mean_sum = stats.sum_mean

    padded = _blocks_per_replicate(n) * _DRAWS_PER_BLOCK
    rows_per_block = max(1, _CHUNK_DOUBLES // padded)
    out = np.empty(m)

    def run_block(b: int) -> None:
        r0 = b * rows_per_block
        r1 = min(m, r0 + rows_per_block)
        gen = _positioned_generator(root_seed, sid, n, r0, n)
        u = gen.random((r1 - r0) * padded).reshape(r1 - r0, padded)[:, :n]
        sums = _kernels.sum_rows(u, kinds, p0, p1, p2)
        out[r0:r1] = (sums - mean_sum) / b_n

    _run_blocks(m, rows_per_block, run_block, workers)
    return out


def ks_distance_to_normal(samples) -> float:
    """Exact one-sample Kolmogorov-Smirnov statistic against N(0, 1)."""
    x = np.sort(np.asarray(samples, dtype=np.float64))
    m = x.size
    if m == 0:
        raise ValueError("samples must not be empty")
    cdf_vals = normal_cdf_array(x)
    i = np.arange(1, m + 1, dtype=np.float64)
    d_plus = float(np.max(i / m - cdf_vals))
    d_minus = float(np.max(cdf_vals - (i - 1.0) / m))
    return max(d_plus, d_minus)


def cauchy_in_probability_bound(b_n: float, b_l: float, eps: float) -> float:
    """Chebyshev-style bound on P(|gap of rescaled partial sums| > eps).

    For normalizers ``0 < b_n <= b_l`` the bound is
    ``(1/b_l - 1/b_n)^2 * 4 b_n^2 / eps^2 + 4 (b_l^2 - b_n^2) / (b_l^2 eps^2)``.
    It may exceed 1; callers clamp for display only.
    """
    if not 0.0 < b_n <= b_l:
        raise ValueError(f"need 0 < b_n <= b_l, got b_n={b_n}, b_l={b_l}")
    if not eps > 0.0:
        raise ValueError(f"eps must be > 0, got {eps}")
    first = (1.0 / b_l - 1.0 / b_n) ** 2 * 4.0 * b_n * b_n / (eps * eps)
    second = 4.0 * (b_l * b_l - b_n * b_n) / (b_l * b_l * eps * eps)
    return first + second


def estimate_cauchy_gap_probability(seq: RandomSequence, n: int, l: int,
                                    eps: float, m: int, root_seed: int,
                                    study_id: Optional[str] = None,
                                    workers: int = 1) -> float:
    """Monte Carlo estimate of P(|g_l - g_n| > eps) with common variates.

    ``g_k`` is the centered sum of terms 2..k divided by the full normalizer
    B_k.  Both prefixes are evaluated on the same draws (the two sums live
    on one probability space), which is what the Chebyshev-style bound of
    :func:`cauchy_in_probability_bound` controls.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if l < n:
        raise ValueError(f"need l >= n, got n={n}, l={l}")
    if not eps > 0.0:
        raise ValueError(f"eps must be > 0, got {eps}")
    if m < 1000:
        raise ValueError(f"m must be >= 1000, got {m}")
    stats_n = total_variance(seq, n)
    if stats_n.total_variance == 0.0:
        raise DegenerateNormalizationError(
            f"total variance is zero for the first {n} terms")
    if l == n:
        return 0.0
    stats_l = total_variance(seq, l)

    sid = f"{seq.name}:gap:{n}:{l}" if study_id is None else study_id
    kinds, p0, p1, p2 = _term_params(seq, 2, l)
    draws = l - 1
    n_cut = n - 1
    mean_short = math.fsum(seq.term(k).mean for k in range(2, n + 1))
    mean_long = math.fsum(seq.term(k).mean for k in range(2, l + 1))
    inv_b_short = 1.0 / stats_n.b_n
    inv_b_long = 1.0 / stats_l.b_n

    padded = _blocks_per_replicate(draws) * _DRAWS_PER_BLOCK
    rows_per_block = max(1, _CHUNK_DOUBLES // padded)
    counts = np.zeros((m + rows_per_block - 1) // rows_per_block, dtype=np.int64)

    def run_block(b: int) -> None:
        r0 = b * rows_per_block
        r1 = min(m, r0 + rows_per_block)
        gen = _positioned_generator(root_seed, sid, l, r0, draws)
        u = gen.random((r1 - r0) * padded).reshape(r1 - r0, padded)[:, :draws]
        counts[b] = _kernels.gap_exceed_count(
            u, kinds, p0, p1, p2, n_cut, mean_short, mean_long,
            inv_b_short, inv_b_long, eps)

    _run_blocks(m, rows_per_block, run_block, workers)
    return float(counts.sum()) / m


@dataclass(frozen=True)
class ReportRow:
    """One study row; ``lindeberg``, ``bound`` and ``ks`` are NaN when the
    prefix is degenerate (zero total variance)."""

    n: int
    b_n: float
    lindeberg: float
    bound: float
    ks: float
    samples: int
    seed: int
    degenerate: bool = False
    envelope_bound: Optional[float] = None


@dataclass(frozen=True)
class ConvergenceReport:
    """Per-n condition values and empirical KS distances for one study."""

    fixture: str
    eps: float
    n_grid: tuple[int, ...]
    samples: int
    root_seed: int
    backend: str
    singularity: str
    uniform_convergence: str
    rows: tuple[ReportRow, ...] = field(repr=False)
    schema_version: int = SCHEMA_VERSION

    def write_csv(self, path) -> None:
        lines = ["n,B_n,lindeberg,bound,ks,m,seed"]
        for row in self.rows:
            lines.append(",".join([
                str(row.n), repr(row.b_n), repr(row.lindeberg),
                repr(row.bound), repr(row.ks), str(row.samples), str(row.seed),
            ]))
        with open(path, "w", newline="\n") as handle:
            handle.write("\n".join(lines) + "\n")

    def to_dict(self) -> dict:
        def opt(x):
            return None if x is None or (isinstance(x, float) and math.isnan(x)) else x

        return {
            "schema_version": self.schema_version,
            "fixture": self.fixture,
            "eps": self.eps,
            "n_grid": list(self.n_grid),
            "samples": self.samples,
            "root_seed": self.root_seed,
            "backend": self.backend,
            "singularity": self.singularity,
            "uniform_convergence": self.uniform_convergence,
            "rows": [
                {
                    "n": row.n,
                    "B_n": row.b_n,
                    "lindeberg": opt(row.lindeberg),
                    "bound": opt(row.bound),
                    "envelope_bound": opt(row.envelope_bound),
                    "ks": opt(row.ks),
                    "m": row.samples,
                    "seed": row.seed,
                    "degenerate": row.degenerate,
                }
                for row in self.rows
            ],
        }

    def write_json(self, path) -> None:
        with open(path, "w", newline="\n") as handle:
            json.dump(self.to_dict(), handle, indent=2, sort_keys=True)
            handle.write("\n")


def convergence_study(seq: RandomSequence, n_grid: Sequence[int], m: int,
                      eps: float, root_seed: int,
                      study_id: Optional[str] = None, workers: int = 1,
                      s_grid=None, alpha_prefix: int = 50,
                      tol: float = 1e-6) -> ConvergenceReport:
    """Run the full per-n study: condition values plus empirical KS distance.

    Rows with zero total variance are kept but marked degenerate.  The
    report is a pure function of its inputs for a fixed kernel backend.
    """
    if m < 100:
        raise ValueError(f"m must be >= 100, got {m}")
    if not eps > 0.0:
        raise ValueError(f"eps must be > 0, got {eps}")
    grid = tuple(int(n) for n in n_grid)
    if not grid or any(n < 1 for n in grid):
        raise ValueError(f"n_grid must be nonempty positive integers, got {n_grid}")

    sid = seq.name if study_id is None else study_id
    singularity = classify_singularity(seq, prefix=alpha_prefix)
    profile = check_uniform_convergence(
        seq, default_s_grid() if s_grid is None else s_grid,
        prefix=alpha_prefix, tol=tol)

    rows = []
    for n in grid:
        stats = total_variance(seq, n)
        if stats.total_variance == 0.0:
            rows.append(ReportRow(n=n, b_n=0.0, lindeberg=math.nan,
                                  bound=math.nan, ks=math.nan, samples=m,
                                  seed=root_seed, degenerate=True))
            continue
        draws = simulate_normalized_sums(seq, n, m, root_seed, study_id=sid,
                                         workers=workers)
        ks = ks_distance_to_normal(draws)
        lind = lindeberg_functional(seq, n, eps)
        bound = lindeberg_upper_bound(seq, n, eps)
        if lind > bound + 1e-12:
            raise RuntimeError(
                f"tail-average bound violated at n={n}: {lind} > {bound}")
        rows.append(ReportRow(n=n, b_n=stats.b_n, lindeberg=lind, bound=bound,
                              ks=ks, samples=m, seed=root_seed,
                              envelope_bound=envelope_upper_bound(seq, n, eps)))

    return ConvergenceReport(
        fixture=seq.name, eps=eps, n_grid=grid, samples=m,
        root_seed=root_seed, backend=active_backend(),
        singularity=singularity.value,
        uniform_convergence=profile.verdict.value,
        rows=tuple(rows),
    )
