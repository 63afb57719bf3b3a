"""Timing of the compiled Laguerre kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from strichartz import _kernels_py

try:
    from strichartz import _kernels
except ImportError:
    _kernels = None

CASES = [
    ("laguerre_table", dict(x=np.linspace(0, 200, 2000), alpha=0.0, kmax=256)),
    ("laguerre_table", dict(x=np.linspace(0, 2000, 4000), alpha=2.0, kmax=1024)),
    ("laguerre_projections", dict(mu=np.linspace(0.01, 20, 64), r2=np.linspace(0, 30, 400) ** 2,
                                  g=np.ones((64, 400)), alpha=0.0, kmax=256)),
]


def run(repeat):
    rows = []
    for name, kw in CASES:
        py = getattr(_kernels_py, name)
        t_py = min(timeit.repeat(lambda: py(**kw), number=1, repeat=repeat))
        if _kernels is None:
            rows.append((name, kw.get("kmax"), t_py, float("nan"), float("nan")))
            continue
        cy = getattr(_kernels, name)
        a, b = py(**kw), cy(**kw)
        assert np.allclose(a, b, rtol=1e-12, atol=1e-300), f"{name}: backends disagree"
        t_cy = min(timeit.repeat(lambda: cy(**kw), number=1, repeat=repeat))
        rows.append((name, kw.get("kmax"), t_py, t_cy, t_py / t_cy))
    return rows


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"{'kernel':<22}{'kmax':>6}{'numpy [s]':>12}{'cython [s]':>12}{'speedup':>9}")
    for name, kmax, t_py, t_cy, sp in run(args.repeat):
        print(f"{name:<22}{kmax:>6}{t_py:>12.4f}{t_cy:>12.4f}{sp:>9.1f}")


if __name__ == "__main__":
    main()
