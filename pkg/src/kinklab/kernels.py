"""Linear-algebra kernels for the Newton solvers.

The compiled extension ``kinklab._kernels`` is used when it was built; the
pure-Python module ``kinklab._kernels_py`` is the fallback.  ``BACKEND`` names
the one selected at import time.
"""
from __future__ import annotations

import numpy as np

from kinklab import _kernels_py
from kinklab.errors import SingularJacobian

try:
    from kinklab import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

BACKENDS = {"python": _kernels_py}
if _compiled is not None:
    BACKENDS["cython"] = _compiled

BACKEND = "cython" if _compiled is not None else "python"
_impl = BACKENDS[BACKEND]


def use_backend(name: str) -> None:
    """Switch the active backend (``"cython"`` or ``"python"``)."""
    global BACKEND, _impl
    if name not in BACKENDS:
        raise ValueError(f"backend {name!r} unavailable; have {sorted(BACKENDS)}")
    BACKEND, _impl = name, BACKENDS[name]


def solve_tridiagonal(sub, diag, sup, rhs, backend: str | None = None) -> np.ndarray:
    """Solve ``T x = rhs`` with ``T`` given by its three diagonals (no pivoting)."""
    impl = BACKENDS[backend] if backend else _impl
    diag = np.ascontiguousarray(diag, dtype=float)
    sub = np.ascontiguousarray(sub, dtype=float)
    sup = np.ascontiguousarray(sup, dtype=float)
    rhs = np.ascontiguousarray(rhs, dtype=float)
    n = diag.size
    if sub.size != n - 1 or sup.size != n - 1 or rhs.size != n:
        raise ValueError("inconsistent tridiagonal sizes")
    out = np.empty(n)
    status = impl.thomas(sub, diag, sup, rhs, out)
    if status:
        raise SingularJacobian(f"zero pivot at row {status - 1}")
    return out


def solve_block_tridiagonal(sub, diag, sup, rhs, backend: str | None = None) -> np.ndarray:
    """Solve a block-tridiagonal system with 2x2 blocks.

    ``diag`` has shape (n, 2, 2), ``sub``/``sup`` shape (n-1, 2, 2), ``rhs``
    shape (n, 2).
    """
    impl = BACKENDS[backend] if backend else _impl
    diag = np.ascontiguousarray(diag, dtype=float)
    rhs = np.ascontiguousarray(rhs, dtype=float)
    n = diag.shape[0]
    sub = np.ascontiguousarray(np.reshape(sub, (max(n - 1, 0), 2, 2)), dtype=float)
    sup = np.ascontiguousarray(np.reshape(sup, (max(n - 1, 0), 2, 2)), dtype=float)
    if diag.shape != (n, 2, 2) or rhs.shape != (n, 2):
        raise ValueError("inconsistent block sizes")
    out = np.empty((n, 2))
    status = impl.block_thomas2(sub, diag, sup, rhs, out)
    if status:
        raise SingularJacobian(f"singular pivot block at node {status - 1}")
    return out
