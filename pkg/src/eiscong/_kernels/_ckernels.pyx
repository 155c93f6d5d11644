# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled point-counting kernels; same contract as ``_pykernels``.

Arguments must already be reduced into ``[0, p)`` and ``p < 2**30`` so that
every intermediate fits in a signed 64-bit integer.
"""

from libc.stdlib cimport calloc, free


def count_affine_exhaustive(long long a1, long long a2, long long a3,
                            long long a4, long long a6, long long p):
    cdef long long x, y, rhs, lin, dx, x2
    cdef long long on_curve = 0, singular = 0
    for x in range(p):
        x2 = x * x % p
        rhs = (x2 * x + a2 * x2 + a4 * x + a6) % p
        lin = (a1 * x + a3) % p
        dx = (3 * x2 + 2 * a2 * x + a4) % p
        for y in range(p):
            if (y * y + lin * y - rhs) % p != 0:
                continue
            on_curve += 1
            if (2 * y + lin) % p == 0 and (a1 * y - dx) % p == 0:
                singular += 1
    return on_curve, singular


def count_affine_short(long long A, long long B, long long p):
    cdef unsigned char *is_square = <unsigned char *> calloc(p, 1)
    cdef long long x, y, v
    cdef long long total = 0
    if is_square == NULL:
        raise MemoryError()
    try:
        for y in range(1, p):
            is_square[y * y % p] = 1
        for x in range(p):
            v = (x * x % p * x + A * x + B) % p
            if v == 0:
                total += 1
            elif is_square[v]:
                total += 2
    finally:
        free(is_square)
    return total
