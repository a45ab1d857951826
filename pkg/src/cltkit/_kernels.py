"""Hot numeric kernels: variate transforms and partial-sum accumulation.

Every variate consumes exactly one uniform draw, mapped through an
inverse-CDF style transform of its family.  The kernels exist in two
interchangeable implementations, a numba ``@njit`` fast path and a pure
numpy fallback; :mod:`cltkit._backend` picks which one backs the public
handles ``sum_rows`` and ``gap_exceed_count``.

Both implementations accumulate each row strictly left to right, so results
differ between backends only by the roundoff of the elementwise transforms
(same-backend runs are bit-reproducible).
"""

import math

import numpy as np

from . import _backend
from ._normal import normal_inv_cdf, normal_inv_cdf_array

# Family codes shared with :mod:`cltkit.distributions`.
DEGENERATE = 0
NORMAL = 1
TWO_POINT = 2
THREE_POINT = 3
UNIFORM = 4
EXPONENTIAL = 5


def transform_one(u, kind, p0, p1, p2):
    """Map one uniform draw in [0, 1) to one variate of the coded family."""
    if kind == DEGENERATE:
        return p0
    if kind == NORMAL:
        return p0 + p1 * normal_inv_cdf(u)
    if kind == TWO_POINT:
        return p0 - p1 if u < 0.5 else p0 + p1
    if kind == THREE_POINT:
        if u < p2:
            return p0 - p1
        if u < 2.0 * p2:
            return p0 + p1
        return p0
    if kind == UNIFORM:
        return p0 + u * (p1 - p0)
    return -math.log1p(-u) / p0  # EXPONENTIAL


def _transform_column_numpy(u, kind, p0, p1, p2, out):
    """Vectorized ``transform_one`` over one column of uniforms."""
    if kind == DEGENERATE:
        out[:] = p0
    elif kind == NORMAL:
        out[:] = p0 + p1 * normal_inv_cdf_array(u)
    elif kind == TWO_POINT:
        out[:] = np.where(u < 0.5, p0 - p1, p0 + p1)
    elif kind == THREE_POINT:
        out[:] = np.where(u < p2, p0 - p1, np.where(u < 2.0 * p2, p0 + p1, p0))
    elif kind == UNIFORM:
        out[:] = p0 + u * (p1 - p0)
    else:
        out[:] = -np.log1p(-u) / p0


def sum_rows_numpy(u, kinds, p0, p1, p2):
    """Row sums of transformed variates; ``u`` has shape (replicates, terms).

    Column ``k`` is transformed under family ``kinds[k]`` with parameters
    ``(p0[k], p1[k], p2[k])``.  Columns are accumulated left to right.
    """
    n_rows, n_cols = u.shape
    acc = np.zeros(n_rows)
    col = np.empty(n_rows)
    for k in range(n_cols):
        _transform_column_numpy(u[:, k], kinds[k], p0[k], p1[k], p2[k], col)
        acc += col
    return acc


def gap_exceed_count_numpy(u, kinds, p0, p1, p2, n_cut, mean_short, mean_long,
                           inv_b_short, inv_b_long, eps):
    """Count rows where the two rescaled centered prefix sums differ by > eps.

    The short prefix covers columns [0, n_cut); the long one all columns.
    """
    n_rows, n_cols = u.shape
    acc = np.zeros(n_rows)
    col = np.empty(n_rows)
    short = None
    for k in range(n_cols):
        _transform_column_numpy(u[:, k], kinds[k], p0[k], p1[k], p2[k], col)
        acc += col
        if k == n_cut - 1:
            short = acc.copy()
    if short is None:  # n_cut == 0: empty short prefix
        short = np.zeros(n_rows)
    gap = (acc - mean_long) * inv_b_long - (short - mean_short) * inv_b_short
    return int(np.count_nonzero(np.abs(gap) > eps))


if _backend.NUMBA_AVAILABLE:
    import numba

    _inv_cdf_nb = numba.njit(cache=True)(normal_inv_cdf)

    @numba.njit(cache=True, inline="always")
    def _transform_one_nb(u, kind, p0, p1, p2):
        if kind == DEGENERATE:
            return p0
        if kind == NORMAL:
            return p0 + p1 * _inv_cdf_nb(u)
        if kind == TWO_POINT:
            return p0 - p1 if u < 0.5 else p0 + p1
        if kind == THREE_POINT:
            if u < p2:
                return p0 - p1
            if u < 2.0 * p2:
                return p0 + p1
            return p0
        if kind == UNIFORM:
            return p0 + u * (p1 - p0)
        return -math.log1p(-u) / p0

    @numba.njit(cache=True, nogil=True)
    def sum_rows_numba(u, kinds, p0, p1, p2):
        n_rows, n_cols = u.shape
        out = np.empty(n_rows)
        for i in range(n_rows):
            acc = 0.0
            for k in range(n_cols):
                acc += _transform_one_nb(u[i, k], kinds[k], p0[k], p1[k], p2[k])
            out[i] = acc
        return out

    @numba.njit(cache=True, nogil=True)
    def gap_exceed_count_numba(u, kinds, p0, p1, p2, n_cut, mean_short,
                               mean_long, inv_b_short, inv_b_long, eps):
        n_rows, n_cols = u.shape
        count = 0
        for i in range(n_rows):
            acc = 0.0
            short = 0.0
            for k in range(n_cols):
                acc += _transform_one_nb(u[i, k], kinds[k], p0[k], p1[k], p2[k])
                if k == n_cut - 1:
                    short = acc
            gap = (acc - mean_long) * inv_b_long - (short - mean_short) * inv_b_short
            if abs(gap) > eps:
                count += 1
        return count
else:
    sum_rows_numba = None
    gap_exceed_count_numba = None


if _backend.ACTIVE == "numba":
    sum_rows = sum_rows_numba
    gap_exceed_count = gap_exceed_count_numba
else:
    sum_rows = sum_rows_numpy
    gap_exceed_count = gap_exceed_count_numpy
