"""Small integer helpers.

Primality and factoring are delegated to sympy; everything here is a thin
layer that fixes return types and caches the common small-argument cases.
"""

from functools import lru_cache

from sympy import factorint as _factorint
from sympy import isprime as _isprime
from sympy import primerange as _primerange


def is_prime(n):
    return isinstance(n, int) and n > 1 and bool(_isprime(n))


def primes_upto(bound, start=2):
    """Primes ``p`` with ``start <= p <= bound``."""
    return [int(p) for p in _primerange(start, bound + 1)]


@lru_cache(maxsize=65536)
def factor(n):
    """Factorisation of ``|n|`` as a sorted tuple of ``(prime, exponent)``."""
    n = abs(int(n))
    if n == 0:
        raise ValueError("cannot factor 0")
    return tuple(sorted((int(p), int(e)) for p, e in _factorint(n).items()))


def prime_divisors(n):
    return [p for p, _ in factor(n)]


def is_squarefree(n):
    return n >= 1 and all(e == 1 for _, e in factor(n))


def valuation(n, p):
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def split_off(n, primes):
    """Write ``n = m * prod(p**e_p)`` with ``m`` coprime to ``primes``.

    Returns ``(m, {p: e_p})``.
    """
    exps = {}
    for p in primes:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        exps[p] = e
    return n, exps


def inverse_mod(a, r):
    return pow(a, -1, r)
