"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 3]
"""
import argparse
import sys
import timeit

import numpy as np

from dichotomy import _pykernels
from dichotomy.series import choose_truncation, em_coefficients
from dichotomy.sphere import DOUBLE


def cases(rng):
    t = choose_truncation(1.9, 1e-9)
    coeffs = np.asarray(em_coefficients(1.9, t.order, DOUBLE), dtype=float)
    xs = rng.uniform(0.01, 1.56, 4000)
    ys = np.exp(rng.uniform(-7, 7, 4000))
    theta = np.linspace(0, 2 * np.pi, 2001)
    pts = np.stack([np.cos(theta) * 0.9, np.sin(3 * theta) * 0.9], axis=1)
    segs = np.ascontiguousarray(np.hstack([pts[:-1], pts[1:]]))
    curve = (rng.random((256, 256)) < 0.3).astype(np.uint8)
    return {
        "haagerup_batch (4000 pts)": lambda k: k.haagerup_batch(xs, ys, 1.9, t.pairs, coeffs),
        "rasterize (2000 segs, 256^2)": lambda k: k.rasterize(segs, -1.0, -1.0, 1.0, 1.0, 256, 256),
        "label4 (256^2)": lambda k: k.label4(curve),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    a = ap.parse_args(argv)
    try:
        from dichotomy import _kernels
    except ImportError:
        print("compiled extension not built; nothing to compare", file=sys.stderr)
        return 1
    rng = np.random.default_rng(0)
    print(f"{'kernel':32s} {'python s':>10s} {'cython s':>10s} {'speedup':>8s}")
    for name, fn in cases(rng).items():
        py = min(timeit.repeat(lambda: fn(_pykernels), number=1, repeat=a.repeat))
        cy = min(timeit.repeat(lambda: fn(_kernels), number=1, repeat=a.repeat))
        print(f"{name:32s} {py:10.4f} {cy:10.4f} {py / cy:8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
