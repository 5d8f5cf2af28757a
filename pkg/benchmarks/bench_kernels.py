"""Compare the compiled and numpy layout kernels, alone and inside a training step.

    python benchmarks/bench_kernels.py [--repeat 20]
"""
import argparse
import time

import numpy as np

from cream.netdef import build_condensed
from cream.objectives import depth_loss
from cream.tensor_core import Tape, Tensor4, kernels

# (name, (C, N, H, W), kh, kw, stride, pad) shapes seen by the condensed net at 64x48, batch 12
CASES = [
    ("3x1 conv, 64ch 32x24", (64, 12, 12, 16), 3, 1, 1, 1),
    ("1x7 conv, 128ch 8x6", (128, 12, 6, 8), 1, 7, 1, 3),
    ("3x3 s2 downsample, 16ch", (16, 12, 24, 32), 3, 3, 2, 1),
    ("3x3 predictor, 64ch 64x48", (64, 12, 48, 64), 3, 3, 1, 1),
]


def timeit(fn, repeat):
    fn()
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best * 1000


def kernel_rows(repeat):
    rng = np.random.default_rng(0)
    rows = []
    for name, shape, kh, kw, s, p in CASES:
        x = rng.random(shape, dtype=np.float32)
        c, n, h, w = shape
        if s == 1:  # symmetric "same" padding
            pt, pl = (kh - 1) // 2, (kw - 1) // 2
            oh, ow = h, w
        else:  # downsampler: pad top/left only
            pt, pl = p, p
            oh, ow = (h + p - kh) // s + 1, (w + p - kw) // s + 1
        cols = kernels.im2col(x, kh, kw, s, s, pt, pl, oh, ow)
        times = {}
        for b in sorted(kernels.BACKENDS):
            kernels.set_backend(b)
            times[b] = (timeit(lambda: kernels.im2col(x, kh, kw, s, s, pt, pl, oh, ow), repeat),
                        timeit(lambda: kernels.col2im(cols, shape, kh, kw, s, s, pt, pl, oh, ow), repeat))
        rows.append((name, times))
    pool_in = rng.random((64, 12, 48, 64), dtype=np.float32)
    times = {}
    for b in sorted(kernels.BACKENDS):
        kernels.set_backend(b)
        out, idx = kernels.maxpool2x2(pool_in)
        times[b] = (timeit(lambda: kernels.maxpool2x2(pool_in), repeat),
                    timeit(lambda: kernels.maxpool2x2_backward(out, idx), repeat))
    rows.append(("maxpool 2x2 fwd/bwd, 64ch 64x48", times))
    return rows


def step_time(repeat):
    net = build_condensed((48, 64), seed=0)
    rng = np.random.default_rng(0)
    x = Tensor4(rng.random((12, 3, 48, 64), dtype=np.float32))
    y = Tensor4(rng.uniform(1, 5, (12, 1, 48, 64)).astype(np.float32))

    def step():
        with Tape() as tape:
            out = net.forward(x).prediction
            _, g = depth_loss(out, y)
        tape.backward(out, g.data)
        net.zero_grad()

    out = {}
    for b in sorted(kernels.BACKENDS):
        kernels.set_backend(b)
        out[b] = timeit(step, max(2, repeat // 5))
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()
    original = kernels.backend()
    backends = sorted(kernels.BACKENDS)
    if len(backends) < 2:
        print("compiled extension not built; only the numpy backend is available")
    print(f"{'kernel':36s}" + "".join(f"{b + ' fwd/bwd ms':>24s}" for b in backends))
    for name, times in kernel_rows(args.repeat):
        print(f"{name:36s}" + "".join(f"{times[b][0]:11.2f} /{times[b][1]:9.2f}  " for b in backends))
    steps = step_time(args.repeat)
    print(f"{'train step, batch 12 at 64x48':36s}" + "".join(f"{steps[b]:20.1f} ms  " for b in backends))
    kernels.set_backend(original)


if __name__ == "__main__":
    main()
