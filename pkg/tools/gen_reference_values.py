"""Regenerate tests/_dist_reference.py.

Computes reference CDF and quantile values for the distribution tests with
mpmath at 40 significant digits, then writes them out as double-precision
literals.  The frozen pairs are (x, F(x)) where x is the exact double handed
to the implementation under test, so both sides evaluate the same input.

Run from the repository root:

    python3 tools/gen_reference_values.py
"""

import os

import mpmath as mp

mp.mp.dps = 40

OUT = os.path.join(os.path.dirname(__file__), os.pardir, "tests", "_dist_reference.py")

CHISQ_DFS = (1, 3, 45, 19900)
GRID_LEVELS = [0.001 + i * (0.999 - 0.001) / 99.0 for i in range(100)]
QUANTILE_ALPHAS = (0.001, 0.01, 0.05, 0.25, 0.5, 0.75, 0.95, 0.99, 0.999)


def phi(x):
    return 0.5 * mp.erfc(-mp.mpf(x) / mp.sqrt(2))


def phi_inv(level):
    # solve Phi(z) = level
    z = mp.sqrt(2) * mp.erfinv(2 * mp.mpf(level) - 1)
    assert mp.almosteq(phi(z), level, rel_eps=mp.mpf("1e-35"))
    return z


def chisq_cdf(x, df):
    return mp.gammainc(mp.mpf(df) / 2, 0, mp.mpf(x) / 2, regularized=True)


def chisq_pdf(x, df):
    a = mp.mpf(df) / 2
    return mp.exp((a - 1) * mp.log(x / 2) - x / 2 - mp.loggamma(a)) / 2


def chisq_inv(level, df):
    df = mp.mpf(df)
    level = mp.mpf(level)
    # Wilson-Hilferty start, then Newton clamped to the positive axis
    z = phi_inv(level)
    t = 2 / (9 * df)
    x = df * (1 - t + z * mp.sqrt(t)) ** 3
    if x <= 0:
        x = 2 * mp.exp((mp.log(level) + mp.loggamma(df / 2 + 1)) / (df / 2))
    for _ in range(200):
        f = chisq_cdf(x, df) - level
        step = f / chisq_pdf(x, df)
        nxt = x - step
        if nxt <= 0:
            nxt = x / 2
        if abs(nxt - x) < abs(x) * mp.mpf("1e-36"):
            x = nxt
            break
        x = nxt
    assert mp.almosteq(chisq_cdf(x, df), level, rel_eps=mp.mpf("1e-30"))
    return x


def fmt(v):
    return repr(float(v))


def main():
    lines = []
    lines.append('"""Frozen reference values for distribution tests.')
    lines.append("")
    lines.append("Generated by tools/gen_reference_values.py (mpmath, 40 significant")
    lines.append("digits).  Do not edit by hand; regenerate with the tool.")
    lines.append('"""')
    lines.append("")

    # standard normal CDF on a fixed 100-point grid covering both tails
    lines.append("STD_NORMAL_CDF = [")
    for i in range(100):
        x = float(-8.0 + 16.0 * i / 99.0)
        lines.append("    (%s, %s)," % (fmt(x), fmt(phi(x))))
    lines.append("]")
    lines.append("")

    # chi-square CDF: per df, 100 points spread over cdf levels 0.001..0.999
    lines.append("CHISQ_CDF = {")
    for df in CHISQ_DFS:
        lines.append("    %d: [" % df)
        for level in GRID_LEVELS:
            x = float(chisq_inv(level, df))  # double input under test
            lines.append("        (%s, %s)," % (fmt(x), fmt(chisq_cdf(x, df))))
        lines.append("    ],")
    lines.append("}")
    lines.append("")

    # upper-tail quantiles: z_alpha with Phi(z_alpha) = 1 - alpha
    lines.append("STD_NORMAL_QUANTILE = [")
    for alpha in QUANTILE_ALPHAS:
        z = phi_inv(1 - mp.mpf(repr(alpha)))
        lines.append("    (%s, %s)," % (fmt(alpha), fmt(z)))
    lines.append("]")
    lines.append("")

    lines.append("CHISQ_QUANTILE = {")
    for df in CHISQ_DFS:
        lines.append("    %d: [" % df)
        for alpha in QUANTILE_ALPHAS:
            q = chisq_inv(1 - mp.mpf(repr(alpha)), df)
            lines.append("        (%s, %s)," % (fmt(alpha), fmt(q)))
        lines.append("    ],")
    lines.append("}")
    lines.append("")

    with open(OUT, "w") as fh:
        fh.write("\n".join(lines))
    print("wrote", os.path.normpath(OUT))


if __name__ == "__main__":
    main()
