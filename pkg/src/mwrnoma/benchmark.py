"""Benchmark the compiled kernel against the pure-numpy fallback.

Run as ``python -m mwrnoma.benchmark``.  Reports per-backend throughput of
the pair-rate kernel and of a full Monte Carlo run; when only one backend
is importable the comparison column is skipped.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from . import _kernels
from ._kernels import _pyfallback
from .channel import FadingParams
from .montecarlo import TrialConfig, simulate_asr
from .signal import ImpairmentProfile, NetworkConfig


def _available_backends():
    backends = {}
    try:
        from ._kernels import _pair_rates

        backends["cython"] = _pair_rates.pair_rate_chunk
    except ImportError:
        pass
    backends["python"] = _pyfallback.pair_rate_chunk
    return backends


def _alloc(n_users: int) -> tuple[float, ...]:
    raw = [2.0 ** -(i + 1) for i in range(n_users)]
    raw[-1] = raw[-2] / 2  # keep strict decrease after normalization
    total = sum(raw)
    return tuple(r / total for r in raw)


def _time(fn, repeats: int = 5) -> float:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_kernel(trials: int, n_users: int) -> list[str]:
    rng = np.random.default_rng(0)
    rho = np.sort(rng.gamma(2.0, 3.0, size=(trials, n_users)), axis=1) / 2.0
    a = np.asarray(_alloc(n_users))
    args = (rho, a, 1000.0, 1000.0, 0.04, 0.04, 0.04, 0.04)
    lines = [f"pair-rate kernel, {trials} trials, M={n_users}:"]
    times = {}
    for name, fn in _available_backends().items():
        times[name] = _time(lambda fn=fn: fn(*args))
        lines.append(
            f"  {name:7s} {times[name] * 1e3:8.2f} ms  "
            f"({trials / times[name] / 1e6:6.2f} M trials/s)"
        )
    if len(times) == 2:
        lines.append(f"  speedup cython/python: {times['python'] / times['cython']:.2f}x")
    return lines


def bench_simulation(trials: int, n_users: int, workers: int) -> list[str]:
    cfg = NetworkConfig(n_users=n_users, a=_alloc(n_users), r1=1000.0)
    fading = FadingParams(alpha=2, beta=3.0, nu=3.0, distances=(1.0,) * n_users)
    imp = ImpairmentProfile.uniform(0.2)
    tc = TrialConfig(trials=trials, seed=1, workers=workers)
    elapsed = _time(lambda: simulate_asr(cfg, fading, imp, tc), repeats=3)
    return [
        f"simulate_asr ({_kernels.backend_name()} backend, workers={workers}): "
        f"{elapsed * 1e3:.1f} ms ({trials / elapsed / 1e6:.2f} M trials/s)"
    ]


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=200_000)
    parser.add_argument("--users", type=int, default=4)
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args(argv)

    print(f"active backend: {_kernels.backend_name()}")
    for line in bench_kernel(args.trials, args.users):
        print(line)
    for line in bench_simulation(args.trials, args.users, args.workers):
        print(line)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
