"""Side-by-side timing of the compiled and pure kernel lanes.

Imports both lane modules directly (bypassing the PRONY_PURE dispatch) so
one process can compare them on identical inputs.  Before timing anything
the script replays every workload through both lanes and requires
bit-identical outputs; a speedup table without that check would be
meaningless, since the lanes are only interchangeable because they perform
the same floating-point operations in the same order.

Run:  python3 benchmarks/bench_kernels.py [--polys N] [--repeats R]
"""

import argparse
import time

import numpy as np

from prony._kernels import pure

try:
    from prony._kernels import _fast as fast
except ImportError:
    fast = None


def make_inputs(n_polys, seed=0):
    rng = np.random.default_rng(seed)
    polys = []
    for _ in range(n_polys):
        deg = int(rng.integers(2, 9))
        c = rng.uniform(-5.0, 5.0, deg + 1)
        while abs(c[-1]) < 0.1:
            c[-1] = rng.uniform(-5.0, 5.0)
        polys.append([float(v) for v in c])
    points = [float(v) for v in rng.uniform(-4.0, 4.0, 64)]
    shifts = [float(v) for v in rng.uniform(-2.0, 2.0, 8)]
    return polys, points, shifts


def brackets_for(impl, polys):
    # one sign-change bracket per poly that has one on a coarse grid
    found = []
    grid = [(-4.0 + 0.5 * k) for k in range(17)]
    for c in polys:
        prev_x = grid[0]
        prev_v = impl.horner(c, prev_x)
        for x in grid[1:]:
            v = impl.horner(c, x)
            if prev_v != 0.0 and v != 0.0 and (prev_v > 0.0) != (v > 0.0):
                found.append((c, prev_x, x, prev_v > 0.0))
                break
            prev_x, prev_v = x, v
    return found


def workloads(impl, polys, points, shifts, brackets):
    out = []
    for c in polys:
        for x in points:
            out.append(impl.horner(c, x))
    for c in polys:
        for x0 in shifts:
            out.extend(impl.shifted_coeffs(c, x0))
    chains = [impl.sturm_chain(c) for c in polys]
    for chain in chains:
        out.append(impl.chain_variations_inf(chain, True))
        out.append(impl.chain_variations_inf(chain, False))
        for x in points[:16]:
            out.append(impl.chain_variations(chain, x))
    for c, lo, hi, lo_pos in brackets:
        lo2, hi2 = impl.bisect_refine(c, lo, hi, lo_pos, 1e-13)
        dc = impl.poly_derivative(c)
        out.append(impl.newton_polish(c, dc, 0.5 * (lo2 + hi2), lo, hi, 40))
    return out, chains


def bench(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--polys", type=int, default=300)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    polys, points, shifts = make_inputs(args.polys)
    brackets = brackets_for(pure, polys)
    lanes = [("pure", pure)] + ([("fast", fast)] if fast is not None else [])

    ref, ref_chains = workloads(pure, polys, points, shifts, brackets)
    if fast is not None:
        got, got_chains = workloads(fast, polys, points, shifts, brackets)
        if got != ref or got_chains != ref_chains:
            raise SystemExit("lanes disagree: refusing to time")
        print(f"agreement: {len(ref)} scalar outputs and "
              f"{len(ref_chains)} Sturm chains bit-identical across lanes")
    else:
        print("compiled lane not built; timing the pure lane only")

    tasks = [
        ("horner", lambda impl: [impl.horner(c, x)
                                 for c in polys for x in points]),
        ("shifted_coeffs", lambda impl: [impl.shifted_coeffs(c, x0)
                                         for c in polys for x0 in shifts]),
        ("sturm_chain", lambda impl: [impl.sturm_chain(c) for c in polys]),
        ("chain_variations", lambda impl: [
            impl.chain_variations(chain, x)
            for chain in ref_chains for x in points[:16]]),
        ("bisect+newton", lambda impl: [
            impl.newton_polish(
                c, impl.poly_derivative(c),
                0.5 * sum(impl.bisect_refine(c, lo, hi, lo_pos, 1e-13)),
                lo, hi, 40)
            for c, lo, hi, lo_pos in brackets]),
    ]

    print(f"\n{'kernel':<18}" + "".join(f"{name + ' (ms)':>12}"
                                        for name, _ in lanes)
          + ("{:>10}".format("speedup") if fast is not None else ""))
    for task_name, task in tasks:
        times = [bench(lambda impl=impl: task(impl), args.repeats) * 1e3
                 for _, impl in lanes]
        row = f"{task_name:<18}" + "".join(f"{t:>12.2f}" for t in times)
        if fast is not None:
            row += f"{times[0] / times[1]:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
