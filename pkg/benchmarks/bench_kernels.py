"""Compare the compiled kernels with the pure-Python fallback.

Run with ``python3 benchmarks/bench_kernels.py``. Both modules are imported
directly, so the environment switch that picks the runtime backend does not
matter here. Each case reports the best of several repeats.
"""

import argparse
import math
import timeit

from dwtunnel import _kernels_py

try:
    from dwtunnel import _kernels
except ImportError:  # extension not built
    _kernels = None

CASES = [
    ("kummer M(-3.7, 5.2; 2.5)", "kummer_series", (-3.7, 5.2, 2.5, 2_000_000)),
    ("kummer M(0.5, 1.5; 40)", "kummer_series", (0.5, 1.5, 40.0, 2_000_000)),
    ("kummer M(-12.3, 1.8; 900)", "kummer_series", (-12.3, 1.8, 900.0, 2_000_000)),
    ("hermite H_20(1.3)", "hermite", (20, 1.3)),
    ("hermite H_200(4.0)", "hermite", (200, 4.0)),
]


def _time(fn, args, number, repeat):
    return min(timeit.repeat(lambda: fn(*args), number=number, repeat=repeat)) / number


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--number", type=int, default=2000)
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args(argv)

    print(f"{'case':<28}{'python (us)':>14}{'compiled (us)':>16}{'speed-up':>10}  agree")
    for name, attr, call in CASES:
        py = getattr(_kernels_py, attr)
        t_py = _time(py, call, args.number, args.repeat) * 1e6
        if _kernels is None:
            print(f"{name:<28}{t_py:>14.2f}{'n/a':>16}{'':>10}")
            continue
        cy = getattr(_kernels, attr)
        t_cy = _time(cy, call, args.number, args.repeat) * 1e6
        a, b = py(*call), cy(*call)
        if isinstance(a, tuple):
            # (mantissa, log_scale, max_term, n_terms); compare in scaled form
            va, vb = a[0] * math.exp(a[1] - b[1]), b[0]
        else:
            va, vb = a, b
        agree = abs(va - vb) <= 1e-13 * max(1.0, abs(va))
        print(f"{name:<28}{t_py:>14.2f}{t_cy:>16.2f}{t_py / t_cy:>9.1f}x  {agree}")


if __name__ == "__main__":
    main()
