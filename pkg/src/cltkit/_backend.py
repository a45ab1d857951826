"""Kernel backend selection.

The hot numeric kernels in :mod:`cltkit._kernels` exist twice: a numba
``@njit`` fast path and a pure-numpy fallback.  Which one backs the public
kernel handles is decided once, at import time, from the ``CLTKIT_BACKEND``
environment variable:

* ``auto`` (default, or unset): numba when importable, numpy otherwise.
* ``numba``: require numba; raise if it cannot be imported.
* ``numpy``: force the fallback even when numba is installed.
"""

import os

ENV_VAR = "CLTKIT_BACKEND"


def _numba_importable() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


def _select() -> str:
    requested = os.environ.get(ENV_VAR, "auto").strip().lower() or "auto"
    if requested not in ("auto", "numba", "numpy"):
        raise ValueError(
            f"{ENV_VAR} must be 'auto', 'numba' or 'numpy', got {requested!r}"
        )
    if requested == "numpy":
        return "numpy"
    if _numba_importable():
        return "numba"
    if requested == "numba":
        raise ImportError(f"{ENV_VAR}=numba but numba is not importable")
    return "numpy"


ACTIVE = _select()
NUMBA_AVAILABLE = _numba_importable()


def active_backend() -> str:
    """Name of the backend the kernels were bound to: 'numba' or 'numpy'."""
    return ACTIVE
