"""Time the numba kernels against the numpy fallbacks.

Kernel timings run both backends in one process (numba is warmed up first,
so compilation is reported separately). The end-to-end foliation timing
needs a fresh interpreter per backend because ``DEGENGR_NUMBA`` is read at
import.

    python3 benchmarks/bench_kernels.py [--repeat N] [--json]
"""
import argparse
import json
import os
import subprocess
import sys
import time
import timeit

import numpy as np

from degengr import kernels
from degengr.catalog import get_metric
from degengr.einstein import levi_civita_symbol
from degengr.geometry import riemann_at
from degengr.scfoliate import preset

FOLIATE = (
    "import time\n"
    "from degengr import kernels\n"
    "from degengr.scfoliate import foliation, preset\n"
    "t0 = time.perf_counter()\n"
    "foliation(preset('superman'), 20)\n"
    "print(kernels.BACKEND, time.perf_counter() - t0)\n"
)


def kernel_cases():
    prev, expo, side, end_coef = preset("superman").kernel_arrays
    rng = np.random.default_rng(0)
    offs = rng.uniform(-3, 3, 15) + 1j * rng.uniform(-0.45, 0.45, 15)
    eps = levi_civita_symbol(4)
    spec = get_metric("kerr_newman", {"m": 1, "a": 0.5, "e": 0.5})
    p = [0.1, 3.2, 1.1, 0.3]
    g = np.ascontiguousarray(spec.evaluate(p))
    R = np.ascontiguousarray(riemann_at(spec, p).components)
    return {
        "sc_log_integrand (15 nodes)": lambda k: k.sc_log_integrand(0.5j, offs, prev, expo, side, end_coef),
        "integrate_segment (tol 1e-12)": lambda k: k.integrate_segment(
            complex(prev[0]), 2.5 + 0.5j, prev, expo, side, end_coef, float(expo[0]), 1e-12),
        "levi_civita_density (4d)": lambda k: k.levi_civita_density(g, R, eps),
    }


def time_kernels(repeat):
    rows = []
    backends = {"numpy": kernels.backend("numpy")}
    try:
        backends["numba"] = kernels.backend("numba")
    except ImportError:
        pass
    for name, fn in kernel_cases().items():
        row = {"kernel": name}
        for label, mod in backends.items():
            t0 = time.perf_counter()
            fn(mod)  # first call compiles under numba
            row[f"{label}_first_s"] = time.perf_counter() - t0
            number = max(1, int(0.2 / max(timeit.timeit(lambda: fn(mod), number=1), 1e-7)))
            best = min(timeit.repeat(lambda: fn(mod), number=number, repeat=repeat)) / number
            row[f"{label}_s"] = best
        if "numba_s" in row:
            row["speedup"] = row["numpy_s"] / row["numba_s"]
        rows.append(row)
    return rows


def time_foliation():
    out = {}
    for flag in ("0", "1"):
        env = dict(os.environ, DEGENGR_NUMBA=flag)
        proc = subprocess.run([sys.executable, "-c", FOLIATE], env=env, capture_output=True,
                              text=True, check=True)
        backend, secs = proc.stdout.split()
        out[backend] = float(secs)
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)
    result = {"kernels": time_kernels(args.repeat), "foliation_superman_20_s": time_foliation()}
    if args.json:
        print(json.dumps(result, indent=2))
        return
    print(f"{'kernel':32} {'numpy':>12} {'numba':>12} {'speedup':>8}")
    for row in result["kernels"]:
        nb = row.get("numba_s")
        print(f"{row['kernel']:32} {row['numpy_s'] * 1e6:10.1f}us "
              + (f"{nb * 1e6:10.1f}us {row['speedup']:7.1f}x" if nb else f"{'n/a':>12}"))
    for row in result["kernels"]:
        if "numba_first_s" in row:
            print(f"  numba compile + first call, {row['kernel']}: {row['numba_first_s']:.2f}s")
    print("foliation(superman, 20 leaves), including compile:",
          ", ".join(f"{k} {v:.2f}s" for k, v in result["foliation_superman_20_s"].items()))


if __name__ == "__main__":
    main()
