"""Time the compiled and pure-Python point-counting kernels on 11a1.

Counts a_p for every good prime p <= --bound with both backends, checks
that they agree, and prints the wall time of each.

    python bench/bench_kernels.py --bound 10000
"""

import argparse
import time

from eiscong._kernels import _pykernels
from eiscong.arith import primes_upto
from eiscong.curves import WeierstrassCurve, short_model


def run(impl, A, B, primes):
    start = time.perf_counter()
    counts = [impl.count_affine_short(A % p, B % p, p) for p in primes]
    return time.perf_counter() - start, counts


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--bound", type=int, default=10_000)
    parser.add_argument("--curve", default="0,-1,1,-10,-20", help="a-invariants, comma separated")
    args = parser.parse_args(argv)

    c = WeierstrassCurve.from_ainvs([int(v) for v in args.curve.split(",")])
    A, B = short_model(c)
    primes = [p for p in primes_upto(args.bound, 5) if (4 * A**3 + 27 * B**2) % p]

    t_py, py_counts = run(_pykernels, A, B, primes)
    print(f"python : {t_py:8.3f} s  ({len(primes)} primes up to {args.bound})")
    try:
        from eiscong._kernels import _ckernels
    except ImportError:
        print("cython : extension not built")
        return 0
    t_c, c_counts = run(_ckernels, A, B, primes)
    if c_counts != py_counts:
        raise SystemExit("backends disagree")
    print(f"cython : {t_c:8.3f} s  speedup x{t_py / t_c:.1f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
