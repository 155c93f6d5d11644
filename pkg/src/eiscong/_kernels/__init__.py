"""Point-counting kernels: compiled extension if built, pure Python otherwise.

Set ``EISCONG_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("EISCONG_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # noqa: F811
    except ImportError:
        _impl = _pykernels
    else:
        BACKEND = "cython"

# the compiled kernels work in signed 64-bit arithmetic; sums of four p^2-sized terms must not overflow
_C_LIMIT = 1 << 30


def count_affine_exhaustive(a1, a2, a3, a4, a6, p):
    args = [c % p for c in (a1, a2, a3, a4, a6)]
    if p < _C_LIMIT:
        return _impl.count_affine_exhaustive(*args, p)
    return _pykernels.count_affine_exhaustive(*args, p)


def count_affine_short(A, B, p):
    if p % 2 == 0:
        raise ValueError("short-model count needs an odd prime")
    if p < _C_LIMIT:
        return _impl.count_affine_short(A % p, B % p, p)
    return _pykernels.count_affine_short(A % p, B % p, p)
