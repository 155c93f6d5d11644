"""Pure-Python point-counting kernels (reference and fallback)."""


def count_affine_exhaustive(a1, a2, a3, a4, a6, p):
    """Count affine points of the reduced curve over F_p by brute force.

    Returns ``(on_curve, singular)`` where ``singular`` counts the affine
    points at which both partial derivatives vanish.
    """
    on_curve = 0
    singular = 0
    for x in range(p):
        rhs = (x * x * x + a2 * x * x + a4 * x + a6) % p
        lin = (a1 * x + a3) % p
        dx = (3 * x * x + 2 * a2 * x + a4) % p
        for y in range(p):
            if (y * y + lin * y - rhs) % p:
                continue
            on_curve += 1
            if (2 * y + lin) % p == 0 and (a1 * y - dx) % p == 0:
                singular += 1
    return on_curve, singular


def count_affine_short(A, B, p):
    """Affine points on ``y^2 = x^3 + A x + B`` over F_p, for odd ``p``, via a square table."""
    is_square = bytearray(p)
    for y in range(1, p):
        is_square[y * y % p] = 1
    total = 0
    for x in range(p):
        v = (x * x * x + A * x + B) % p
        if v == 0:
            total += 1
        elif is_square[v]:
            total += 2
    return total
