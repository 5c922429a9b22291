"""Benchmark: compiled kernel core vs the pure-numpy fallback.

Micro-benchmarks call both backend modules directly on identical inputs;
the end-to-end rows rerun a real workload in a subprocess with
QMANIN_BACKEND forced, so the import-time selection is what is measured.

Run from the repository root:

    python benchmarks/bench_kernels.py
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np


def _time(fn, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def micro_rows():
    from qmanin import _pykernels
    backends = [("numpy", _pykernels)]
    try:
        from qmanin import _ckernels
        backends.append(("cython", _ckernels))
    except ImportError:
        print("note: compiled backend not built; micro rows show numpy only",
              file=sys.stderr)

    rng = np.random.default_rng(0)
    logmag = rng.uniform(-80, 10, size=1_000_000)
    phase = rng.uniform(0, 7, size=1_000_000)
    z = rng.standard_normal(20_000) + 1j * rng.standard_normal(20_000)
    V = z[:, None] ** np.arange(48)[None, :]
    wts = rng.standard_normal(20_000) + 0j
    log_nodes = np.log(rng.uniform(0.1, 40, size=1_000))
    log_masses = np.log(rng.uniform(0.01, 1, size=1_000))

    cases = [
        ("csum_logpolar 1e6", lambda m: m.csum_logpolar(logmag, phase)),
        ("power_matrix 20k x 48", lambda m: m.power_matrix(z, 47)),
        ("weighted_gram 20k x 48", lambda m: m.weighted_gram(V, wts)),
        ("log_power_sums 1k x 200", lambda m: m.log_power_sums(
            log_nodes, log_masses, 200)),
    ]
    rows = []
    for label, call in cases:
        timings = {name: _time(lambda: call(mod)) for name, mod in backends}
        rows.append((label, timings))
    return rows


END_TO_END = {
    "kernel grid 48x48": """
import numpy as np
from qmanin import WeightSequence, kernel
w = WeightSequence.factorial()
pts = (np.linspace(0.05, 2.0, 48)[:, None]
       * np.exp(1j * np.linspace(0, 6.28, 48))[None, :]).ravel()
for z in pts:
    kernel(1 + 1j, z, w, 1j, tol=1e-12)
""",
    "coherent states x 400": """
import numpy as np
from qmanin import WeightSequence, coherent_coefficients, eigen_residual
w = WeightSequence.factorial()
for r in np.linspace(0.05, 2.5, 400):
    st = coherent_coefficients(r * 1j, w, 1j, tol=1e-13)
    eigen_residual(st, w, 1j)
""",
    "resolution gram 18/20/64": """
from qmanin import (MomentSequence, WeightSequence,
                    gauss_quadrature_from_moments, verify_resolution_identity)
w = WeightSequence.factorial()
quad = gauss_quadrature_from_moments(MomentSequence.from_weights(w, 1.0, 39), 20)
for _ in range(10):
    verify_resolution_identity(quad, w, 1.0, 18, 64)
""",
}


def end_to_end_rows():
    rows = []
    for label, code in END_TO_END.items():
        timings = {}
        for backend in ("numpy", "cython"):
            env = dict(os.environ, QMANIN_BACKEND=backend)
            t0 = time.perf_counter()
            proc = subprocess.run([sys.executable, "-c", code], env=env,
                                  capture_output=True, text=True)
            if proc.returncode != 0:
                timings[backend] = None
                if "cython" in proc.stderr and backend == "cython":
                    continue                      # extension not built
                print(proc.stderr, file=sys.stderr)
                continue
            timings[backend] = time.perf_counter() - t0
        rows.append((label, timings))
    return rows


def print_table(rows, title):
    print(f"\n{title}")
    print(f"{'workload':<28} {'numpy':>10} {'cython':>10} {'speedup':>9}")
    for label, t in rows:
        tn, tc = t.get("numpy"), t.get("cython")
        fn = f"{tn * 1e3:9.2f}ms" if tn else "       --"
        fc = f"{tc * 1e3:9.2f}ms" if tc else "       --"
        ratio = f"{tn / tc:8.2f}x" if tn and tc else "       --"
        print(f"{label:<28} {fn} {fc} {ratio}")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--json", action="store_true",
                        help="emit raw timings as JSON")
    args = parser.parse_args()
    micro = micro_rows()
    e2e = end_to_end_rows()
    if args.json:
        print(json.dumps({"micro": [{"label": l, **t} for l, t in micro],
                          "end_to_end": [{"label": l, **t} for l, t in e2e]},
                         indent=2))
        return
    print_table(micro, "kernel micro-benchmarks (best of 5)")
    print_table(e2e, "end-to-end (subprocess, includes interpreter startup)")


if __name__ == "__main__":
    main()
