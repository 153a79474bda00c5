"""Compare the numba and numpy backends on the three hot kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Reports the best wall time per kernel and backend plus the speed ratio, and
checks that both backends return identical arrays.  The first numba call is
made before timing so compilation is excluded.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from twheis import kernels
from twheis.cohomology import d2_matrix
from twheis.field import field_make
from twheis.heisenberg import TwistedParams, restricted_from_params


def best_time(fn, repeat: int) -> tuple[float, object]:
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def cases():
    rng = np.random.default_rng(0)
    F = field_make(5, 2)
    params = TwistedParams.make(F, 3, ["x", "2x", "3x"], F.random(rng, 8))
    L, P = restricted_from_params(params)
    D2 = d2_matrix(L)
    M = F.random(rng, (150, 150))
    G = L.random_elements(rng, 20000)
    H = L.random_elements(rng, 20000)
    A, B = F.random(rng, (120, 120)), F.random(rng, (120, 120))
    yield "rref d^2 (56x28, GF(25))", lambda: kernels.rref(F, D2)
    yield "rref random 150x150, GF(25)", lambda: kernels.rref(F, M)
    yield "bracket batch 20000 x dim 8", lambda: kernels.bracket_batch(F, G, H, L.terms, L.n)
    yield "p-map batch 20000 (uses brackets)", lambda: P(G)
    yield "matmul 120x120, GF(25)", lambda: kernels.matmul(F, A, B)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if not kernels.NUMBA_AVAILABLE:
        print("numba is not importable; nothing to compare")
        return 1
    previous = kernels.get_backend()
    print(f"{'kernel':36s} {'numba ms':>10s} {'numpy ms':>10s} {'ratio':>7s}  same")
    try:
        for name, fn in cases():
            kernels.set_backend("numba")
            fn()  # compile
            t_nb, out_nb = best_time(fn, args.repeat)
            kernels.set_backend("numpy")
            t_np, out_np = best_time(fn, args.repeat)
            if isinstance(out_nb, tuple):
                same = all(np.array_equal(a, b) for a, b in zip(out_nb, out_np))
            else:
                same = np.array_equal(out_nb, out_np)
            print(f"{name:36s} {1e3 * t_nb:10.2f} {1e3 * t_np:10.2f} {t_np / t_nb:7.1f}x  {same}")
    finally:
        kernels.set_backend(previous)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
