"""Compare the compiled training kernel against the numpy reference.

Times forward_batch and epoch_grad on realistic problem sizes and checks
that both implementations agree to near machine precision. Run after an
editable install:

    python3 benchmarks/kernel_benchmark.py
"""

from __future__ import annotations

import time

import numpy as np

from nmprobe.kernels import backend_name, reference

try:
    from nmprobe.kernels import _compiled
except ImportError:
    _compiled = None


def _best_of(fn, repeats: int = 5) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _bench_case(kind: int, n_inter: int, n_points: int, rng) -> None:
    phis = rng.uniform(0.0, np.pi, n_inter + 1)
    times = rng.uniform(0.5, 8.0, n_inter)
    u = np.log(np.expm1(times))
    xs = rng.uniform(0.15, 0.7 if kind else 2.5, n_points)
    ys = rng.uniform(0.0, 1.0, n_points)
    label = f"kind={'pd' if kind else 'ad'} n={n_inter} points={n_points}"

    impls = [("reference", reference)]
    if _compiled is not None:
        impls.append(("compiled", _compiled))

    fwd_ref = reference.forward_batch(kind, phis, times, xs)
    grad_ref = reference.epoch_grad(kind, phis, u, 0.1, 0.9, xs, ys, 1e-5)

    print(f"\n{label}")
    rows = {}
    for name, mod in impls:
        if name == "compiled":
            fwd = mod.forward_batch(kind, phis, times, xs)
            cost, grad = mod.epoch_grad(kind, phis, u, 0.1, 0.9, xs, ys, 1e-5)
            dev_f = float(np.max(np.abs(fwd - fwd_ref)))
            dev_g = max(abs(cost - grad_ref[0]),
                        float(np.max(np.abs(grad - grad_ref[1]))))
            print(f"  agreement vs reference: forward {dev_f:.2e}, grad {dev_g:.2e}")
        t_f = _best_of(lambda m=mod: m.forward_batch(kind, phis, times, xs))
        t_g = _best_of(lambda m=mod: m.epoch_grad(kind, phis, u, 0.1, 0.9,
                                                  xs, ys, 1e-5))
        rows[name] = (t_f, t_g)
        print(f"  {name:>9}: forward {t_f * 1e3:8.3f} ms   epoch_grad {t_g * 1e3:8.3f} ms")
    if len(rows) == 2:
        rf, rg = rows["reference"]
        cf, cg = rows["compiled"]
        print(f"  speedup: forward {rf / cf:5.2f}x   epoch_grad {rg / cg:5.2f}x")


def main() -> None:
    print(f"active kernel backend: {backend_name()}")
    if _compiled is None:
        print("compiled kernel not available; timing the reference only")
    rng = np.random.default_rng(7)
    for kind in (0, 1):
        for n_inter, n_points in ((1, 800), (2, 800), (2, 5000)):
            _bench_case(kind, n_inter, n_points, rng)


if __name__ == "__main__":
    main()
