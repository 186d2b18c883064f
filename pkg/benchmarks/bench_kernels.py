"""Time the compiled integration kernels against the pure-numpy fallback.

Run from the repository root:

    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --nodes 40 --steps 20000

Each kernel is timed best-of-N on a fixed workload, so the numbers are
stable enough to compare across machines or after a rebuild.  When the
compiled module is unavailable the script still runs and reports the
fallback alone.
"""

import argparse
import timeit

import numpy as np

from oscnet import EchoParams, complete_graph, laplacian_set
from oscnet._kernels import compiled, pure


def _wave_block(lap: np.ndarray) -> np.ndarray:
    n = lap.shape[0]
    block = np.zeros((2 * n, 2 * n))
    block[:n, n:] = np.eye(n)
    block[n:, :n] = -lap
    return block


def build_workloads(nodes: int, steps: int) -> list[tuple[str, str, tuple]]:
    """(kernel name, workload label, call args) triples."""
    rng = np.random.default_rng(0)
    ls = laplacian_set(complete_graph(nodes, 1.0))
    lap = np.asarray(ls.L)
    dt = 0.05 / np.sqrt(nodes)
    gen = -1j * np.kron(lap, np.diag([1.0, -1.0]))
    y0c = rng.normal(size=2 * nodes) + 1j * rng.normal(size=2 * nodes)
    y0r = rng.normal(size=2 * nodes)
    x0 = rng.normal(size=nodes)
    v0 = rng.normal(size=nodes)
    p = EchoParams(10, 1.0)
    theta0 = np.array([0.1, 0.2, 0.3, -0.1])
    phase_steps = steps * 10
    return [
        ("rk4_linear_complex", f"2n={2 * nodes}, {steps} steps",
         (gen, y0c, dt, steps, steps)),
        ("rk4_linear_real", f"2n={2 * nodes}, {steps} steps",
         (_wave_block(lap), y0r, dt, steps, steps)),
        ("leapfrog_wave", f"n={nodes}, {steps} steps",
         (lap, x0, v0, dt, steps, steps)),
        ("rk4_phase", f"{phase_steps} steps",
         (p.drift, p.coupling, theta0, 1e-3, phase_steps, phase_steps)),
        ("rk4_locked_imag", f"{phase_steps} steps",
         (p.coupling, 1.0, 0.1, 0.05, 1e-3, phase_steps, phase_steps)),
    ]


def best_of(fn, repeats: int) -> float:
    return min(timeit.repeat(fn, number=1, repeat=repeats))


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--nodes", type=int, default=24, help="graph size")
    parser.add_argument("--steps", type=int, default=5000, help="linear-kernel steps")
    parser.add_argument("--repeats", type=int, default=5, help="best-of repeats")
    args = parser.parse_args()

    if compiled is None:
        print("compiled backend not available; timing the fallback only")
    header = f"{'kernel':<20} {'workload':<22} {'pure':>10} {'compiled':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, label, call_args in build_workloads(args.nodes, args.steps):
        t_pure = best_of(lambda: getattr(pure, name)(*call_args), args.repeats)
        if compiled is None:
            print(f"{name:<20} {label:<22} {t_pure * 1e3:>8.2f}ms {'-':>10} {'-':>8}")
            continue
        t_comp = best_of(lambda: getattr(compiled, name)(*call_args), args.repeats)
        print(
            f"{name:<20} {label:<22} {t_pure * 1e3:>8.2f}ms {t_comp * 1e3:>8.2f}ms"
            f" {t_pure / t_comp:>7.1f}x"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
