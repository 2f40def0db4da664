"""Independent brute-force reference implementations and frozen constants.

Everything here deliberately avoids the package's own code paths: ranks are
computed by counting, Pearson by the direct sums formula, noise ceilings by
explicit leave-one-out loops, and t-distribution tails via mpmath's
regularized incomplete beta evaluated at 30 decimal digits. Frozen scalars
were produced by running these oracles (and mpmath) before the corresponding
package code existed.
"""
import math

import mpmath


def brute_ranks(values):
    """Average ranks, 1-based, by counting: rank = #smaller + (#equal + 1)/2."""
    out = []
    for v in values:
        less = sum(1 for w in values if w < v)
        equal = sum(1 for w in values if w == v)
        out.append(less + (equal + 1) / 2.0)
    return out


def brute_pearson(x, y):
    n = len(x)
    mx = sum(x) / n
    my = sum(y) / n
    sxy = sum((a - mx) * (b - my) for a, b in zip(x, y))
    sxx = sum((a - mx) ** 2 for a in x)
    syy = sum((b - my) ** 2 for b in y)
    if sxx == 0.0 or syy == 0.0:
        return math.nan
    return sxy / math.sqrt(sxx * syy)


def brute_spearman(x, y):
    return brute_pearson(brute_ranks(x), brute_ranks(y))


def brute_sem(values):
    n = len(values)
    m = sum(values) / n
    var = sum((v - m) ** 2 for v in values) / (n - 1)
    return math.sqrt(var / n)


def brute_t_statistic(values, mu):
    n = len(values)
    m = sum(values) / n
    s = brute_sem(values)
    if s == 0.0:
        return math.nan
    return (m - mu) / s


def mp_t_p_two_sided(t, df):
    """Two-sided Student-t tail, I_x(df/2, 1/2) with x = df/(df + t^2)."""
    with mpmath.workdps(30):
        tt = mpmath.mpf(repr(float(t)))
        x = df / (df + tt * tt)
        p = mpmath.betainc(mpmath.mpf(df) / 2, mpmath.mpf(1) / 2,
                           0, x, regularized=True)
        return float(p)


def brute_ttest(values, mu):
    t = brute_t_statistic(values, mu)
    if math.isnan(t):
        return (math.nan, math.nan)
    return (t, mp_t_p_two_sided(t, len(values) - 1))


def brute_vectorize(matrix):
    """Upper triangle, row-major, as a plain list."""
    n = len(matrix)
    return [matrix[i][j] for i in range(n) for j in range(i + 1, n)]


def brute_noise_ceiling(vectors):
    """(lower, upper) from vectorized per-instrument RDMs via explicit loops."""
    n = len(vectors)
    mean_all = [sum(col) / n for col in zip(*vectors)]
    lowers, uppers = [], []
    for i in range(n):
        others = [sum(col) / (n - 1)
                  for col in zip(*(v for j, v in enumerate(vectors) if j != i))]
        lowers.append(brute_spearman(vectors[i], others))
        uppers.append(brute_spearman(vectors[i], mean_all))
    return (sum(lowers) / n, sum(uppers) / n)


def brute_correlation_distance(a, b):
    r = brute_pearson(a, b)
    if math.isnan(r):
        return 1.0
    return 1.0 - abs(r)


# -- frozen constants (oracle runs predate the implementations under test) ----

# one_sample_ttest([1,2,3,4,5], mu=0): t = 3*sqrt(2), p from I_{2/11}(2, 1/2)
TTEST_12345 = (4.242640687119285, 0.013235599563682694)

# two-sided p at fixed t for the two acceptance degrees of freedom
T_P_TABLE = {
    4: {
        0.5: 0.64332996318186324,
        1.0: 0.37390096630005894,
        2.0: 0.11611652351681559,
        4.242640687119285: 0.013235599563682694,
        7.5: 0.0016908715323222977,
    },
    29: {
        0.5: 0.62084808419378199,
        1.0: 0.3255819880161936,
        2.0: 0.054943637182967186,
        4.242640687119285: 0.00020627165014235922,
        7.5: 2.8841891530650527e-8,
    },
}

# spearman: the defining contract is Pearson-of-ranks; for the first pair the
# rank differences are (0,-1,1,-1,1) so sum d^2 = 4 and rho = 1 - 24/120 = 0.8.
# The second pair is the d^2 = 6 configuration, rho = 0.7.
SPEARMAN_CASES = (
    (((1, 2, 3, 4, 5), (1, 3, 2, 5, 4)), 0.8),
    (((1, 2, 3, 4, 5), (3, 1, 2, 4, 5)), 0.7),
)

MIDI60_HZ = 261.6255653005986  # 440 * 2^(-9/12)

# ERB-number midpoint of (50 Hz, 8000 Hz), inverted in closed form
ERB_MIDPOINT_50_8000_HZ = 1285.91778103

CQT_Q_48 = 68.75056533900923  # 1 / (2^(1/48) - 1)
CQT_N0_C1_16K = 33637  # ceil(Q * 16000 / 32.703), longest kernel at C1

# chroma model: unordered MIDI pairs in 60..95 with interval 12 or 24
CHROMA_ZERO_PAIRS_60_95 = 36
