"""Compare the compiled and pure-Python shell kernels.

Run from the repository root after an editable install:

    python3 benchmarks/bench_kernel.py [--shells 25 50 100] [--repeat 3]

Reports the best wall time per shell for each backend, the speedup, and
whether both backends returned byte-identical term arrays.
"""

import argparse
import sys
import time

import numpy as np

from shintani_cones.nf_core import construct_field, embed, minkowski_coords
from shintani_cones.shintani import AlphaTable, UnitSystem, build_signed_domain
from shintani_cones.zeta import IdealLattice, ZetaJob, partial_zeta
from shintani_cones.zeta import _kernel_py

try:
    from shintani_cones.zeta import _shell_kernel
except ImportError:
    _shell_kernel = None


def example1_domain():
    k = construct_field([-1, 0, 1, 1])
    g = k.gen
    units = UnitSystem.from_units([g])
    alphas = AlphaTable.from_alphas([k.one, 2 * g * g + 2 * g + 1, 2 * g + 1])
    return build_signed_domain(k, units, alphas)


def coords(x):
    return np.array([float(c.mid()) for c in minkowski_coords(embed(x))])


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--shells", type=int, nargs="+", default=[25, 50, 100, 200])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--s", type=float, default=2.0)
    args = parser.parse_args(argv)
    if _shell_kernel is None:
        print("compiled kernel not built; rebuild with `pip install -e . --no-build-isolation`", file=sys.stderr)
        return 1

    dom = example1_domain()
    cone = dom.active_cones[0]
    base = coords(dom.field.one)
    gens = np.ascontiguousarray(np.vstack([coords(f) for f in cone.generators]))

    print(f"{'shell':>6} {'terms':>8} {'python s':>10} {'cython s':>10} {'speedup':>8} identical")
    for shell in args.shells:
        tp, a = best_of(lambda: _kernel_py.shell_terms(base, gens, shell, args.s), args.repeat)
        tc, b = best_of(lambda: _shell_kernel.shell_terms(base, gens, shell, args.s), args.repeat)
        same = a.tobytes() == np.asarray(b).tobytes()
        print(f"{shell:>6} {len(a):>8} {tp:>10.4f} {tc:>10.4f} {tp / tc:>8.1f} {same}")

    job = ZetaJob(dom, IdealLattice.power_basis(dom.field), args.s, 1e-5, 2000)
    print("\npartial zeta, example-1 domain, tol 1e-5")
    results = {}
    for backend in ("python", "cython"):
        t, res = best_of(lambda: partial_zeta(job, backend=backend), 1)
        results[backend] = res
        print(f"  {backend:>6}: {t:8.3f}s  value {res.value!r}  shells {res.shells}")
    print(f"  identical values: {results['python'].value == results['cython'].value}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
