"""Kernel dispatch: the compiled extension when importable, numpy otherwise.

Set ``WPROJ_PURE_PYTHON=1`` to force the numpy fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("WPROJ_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        pass
    else:
        _impl = _compiled
        BACKEND = "compiled"


def get_backend(name: str | None = None):
    """Return a kernel module by name ("compiled", "python") or the active one."""
    if name is None:
        return _impl
    if name == "python":
        return _kernels_py
    if name == "compiled":
        from . import _kernels
        return _kernels
    raise ValueError(f"unknown kernel backend {name!r}")


def canonicalize_ranks(vecs, bmat, umat, q):
    return _impl.canonicalize_ranks(vecs, bmat, umat, q)


def eval_ranks(coeffs, vals, zech, q):
    return _impl.eval_ranks(coeffs, vals, zech, q)


def count_candidates(vals, zech, q, indices):
    return _impl.count_candidates(vals, zech, q, indices)


def search_range(vals, zech, q, start, stop, cap):
    return _impl.search_range(vals, zech, q, start, stop, cap)


decode_candidates = _kernels_py.decode_candidates
block_start = _kernels_py.block_start
