"""Measuring the complexity claims with the benchmark harness.

Solving from scratch costs O(n m r): cubic on full-rank square inputs but
only quadratic when the rank stays fixed, which is where this solver beats
dense factorizations.  A single dependent-branch update costs O(m r), linear
in the rank at fixed width.  The harness times a size grid (median of
interleaved repetitions, warmup discarded) and fits the exponent on the
largest half.
"""

from rankrls.bench import make_plan, run_plan

for label, plan, expect in [
    ("full-rank square solve", make_plan("square", [64, 128, 256, 512],
                                         repetitions=5), "~n^3"),
    ("fixed-rank (r=20) solve", make_plan("rank-fixed-r", [256, 512, 1024, 2048],
                                          fixed_r=20, repetitions=5), "~n^2"),
    ("dependent update at m=2000", make_plan("update-cost", [50, 100, 200, 400],
                                             fixed_m=2000, repetitions=5), "~r^1"),
]:
    samples, fit = run_plan(plan)
    print(f"{label} (expected {expect}):")
    for cell in plan.grid:
        cell_times = [s.seconds for s in samples if (s.n, s.m, s.r) == cell]
        median = sorted(cell_times)[len(cell_times) // 2]
        print(f"  n={cell[0]:5d} m={cell[1]:5d} r={cell[2]:4d}: {median * 1e3:9.3f} ms")
    print(f"  exponent fitted on the largest grid sizes: {fit.exponent:.2f}")
    print()
