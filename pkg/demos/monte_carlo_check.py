"""Cross-check the exact table against seeded simulation, then prove determinism.

The simulator splits excursions into fixed blocks, each driven by its own
counter-based stream keyed (seed, block), so the tallies are byte-identical
for any worker count.  compare() scores each bin at 4 standard errors and
aggregates a chi-square over the well-populated ones.
"""

import numpy as np

from lmax import ConstantWalk, SimConfig, build, compare, max_pmf_table, run

SPEC = ConstantWalk(0.5)
EXCURSIONS = 200_000
SEED = 20260816
CAP_HEIGHT = 128


def main():
    cfg = SimConfig(SPEC, EXCURSIONS, seed=SEED, cap_steps=100_000, cap_height=CAP_HEIGHT)
    result = run(cfg)
    table = max_pmf_table(build(SPEC, CAP_HEIGHT - 1), CAP_HEIGHT - 1)
    report = compare(result, table)

    print(f"{EXCURSIONS} excursions, seed {SEED}")
    print(f"censored: {result.censored_height} at height, {result.censored_steps} at steps\n")
    print(f"  {'n':>3} {'exact':>10} {'empirical':>10} {'z':>6}")
    for i in range(8):
        print(
            f"  {report.n[i]:>3} {report.exact[i]:>10.6f}"
            f" {report.empirical[i]:>10.6f} {report.z[i]:>6.2f}"
        )
    print(
        f"\nflagged bins: {report.n_flagged};"
        f" chi-square {report.chi_square:.1f} on {report.chi_square_dof} dof"
        f" (p = {report.chi_square_pvalue:.3f})"
    )

    parallel = run(
        SimConfig(SPEC, EXCURSIONS, seed=SEED, workers=8, cap_steps=100_000, cap_height=CAP_HEIGHT)
    )
    same = np.array_equal(result.counts, parallel.counts)
    print(f"8-worker rerun tally-identical: {same}")


if __name__ == "__main__":
    main()
