"""Walk the classification grid and compare labels with the numeric diagnostic.

The trichotomy is decided in closed form from the parameters.  The series
diagnostic only reports how fast the tabulated prefix sums grow at finite
n; for walks whose divergence hides behind iterated logarithms it can look
convergent without overriding the label, which is why it is advisory.
"""

from lmax import ConstantWalk, PerturbedWalk, build, classify, series_diagnostic

DIAG_N = 200_000


def describe(spec):
    c = classify(spec)
    d = series_diagnostic(build(spec, DIAG_N))
    return c.label.value, c.justification.value, d.verdict, d.growth_exponent


def short(spec):
    if isinstance(spec, ConstantWalk):
        return f"constant p={spec.p:g}"
    return f"{spec.sign} K={spec.k} B={spec.b:g}"


def main():
    specs = [ConstantWalk(p) for p in (0.4, 0.5, 0.6)]
    specs += [
        PerturbedWalk(k, b, sign)
        for k in (1, 2)
        for b in (-2.0, 0.5, 2.0)
        for sign in ("plus", "minus")
    ]
    header = f"{'walk':<22} {'label':<20} {'why':<10} {'series looks':<22} {'exponent':>8}"
    print(header)
    print("-" * len(header))
    for spec in specs:
        label, why, verdict, expo = describe(spec)
        print(f"{short(spec):<22} {label:<20} {why:<10} {verdict:<22} {expo:>8.3g}")


if __name__ == "__main__":
    main()
