"""RSA statistics: Spearman comparisons, noise ceilings, t-tests, Bonferroni.

Spearman, the t statistic, and the Student-t tail probability (via the
regularized incomplete beta function, evaluated with a modified-Lentz
continued fraction) are implemented here from first principles; the test
suite checks them against independent brute-force and arbitrary-precision
oracles. NaN is the single not-a-result marker for degenerate inputs and is
propagated, never silently replaced.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateError
from .rdm_engine import RDM


def vectorize(rdm: RDM) -> np.ndarray:
    """Upper triangle (excluding diagonal) in row-major order, length n(n-1)/2."""
    n = rdm.n
    iu = np.triu_indices(n, k=1)
    return rdm.values[iu]


def average_ranks(x) -> np.ndarray:
    """Ranks 1..n with ties sharing the average of their positions."""
    x = np.asarray(x, dtype=np.float64)
    order = np.argsort(x, kind="stable")
    ranks = np.empty(x.size, dtype=np.float64)
    sx = x[order]
    i = 0
    while i < x.size:
        j = i
        while j + 1 < x.size and sx[j + 1] == sx[i]:
            j += 1
        ranks[order[i:j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def _pearson(a: np.ndarray, b: np.ndarray) -> float:
    ac = a - a.mean()
    bc = b - b.mean()
    na = float(np.linalg.norm(ac))
    nb = float(np.linalg.norm(bc))
    if na == 0.0 or nb == 0.0:
        return math.nan
    return float(np.dot(ac, bc)) / (na * nb)


def spearman(x, y) -> float:
    """Pearson correlation of average ranks; NaN when either input is constant."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise DegenerateError("spearman inputs must have equal length")
    if x.ndim != 1 or x.size < 3:
        raise DegenerateError("spearman needs 1-D vectors of length >= 3")
    rho = _pearson(average_ranks(x), average_ranks(y))
    if math.isnan(rho):
        return math.nan
    return float(min(max(rho, -1.0), 1.0))


def compare_study(instrument_rdms, model: RDM):
    """Spearman between each instrument RDM and the model RDM, in instrument order."""
    out = []
    mv = vectorize(model)
    for rdm in instrument_rdms:
        if rdm.labels != model.labels:
            raise DegenerateError("instrument/model RDM label mismatch")
        out.append(spearman(vectorize(rdm), mv))
    return out


def noise_ceiling(instrument_rdms):
    """Leave-one-out Spearman bounds on achievable model correlation.

    lower: each RDM against the mean of the others; upper: each RDM against
    the mean including itself. Any degenerate comparison propagates NaN.
    """
    vecs = [vectorize(r) for r in instrument_rdms]
    if len(vecs) < 2:
        raise DegenerateError("noise ceiling needs at least 2 RDMs")
    stack = np.stack(vecs)
    total = stack.sum(axis=0)
    n = stack.shape[0]
    mean_all = total / n
    lower_terms = []
    upper_terms = []
    for i in range(n):
        mean_without = (total - stack[i]) / (n - 1)
        lower_terms.append(spearman(stack[i], mean_without))
        upper_terms.append(spearman(stack[i], mean_all))
    return float(np.mean(lower_terms)), float(np.mean(upper_terms))


# ---------------------------------------------------------------------------
# Student-t machinery

_BETACF_MAX_ITER = 300
_BETACF_EPS = 3e-16
_BETACF_TINY = 1e-300


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz iteration)."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _BETACF_TINY:
        d = _BETACF_TINY
    d = 1.0 / d
    h = d
    for m in range(1, _BETACF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _BETACF_TINY:
            d = _BETACF_TINY
        c = 1.0 + aa / c
        if abs(c) < _BETACF_TINY:
            c = _BETACF_TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _BETACF_TINY:
            d = _BETACF_TINY
        c = 1.0 + aa / c
        if abs(c) < _BETACF_TINY:
            c = _BETACF_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _BETACF_EPS:
            return h
    raise DegenerateError("incomplete beta continued fraction failed to converge")


def betainc_regularized(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1]."""
    if a <= 0 or b <= 0:
        raise DegenerateError("betainc parameters must be positive")
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                + a * math.log(x) + b * math.log1p(-x))
    front = math.exp(ln_front)
    # the continued fraction converges fast only below the distribution bulk
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def student_t_p_two_sided(t: float, df: int) -> float:
    """P(|T| >= |t|) for T ~ Student-t(df), via I_x(df/2, 1/2), x = df/(df+t^2)."""
    if df < 1:
        raise DegenerateError("degrees of freedom must be >= 1")
    if math.isnan(t):
        return math.nan
    x = df / (df + t * t)
    return betainc_regularized(df / 2.0, 0.5, x)


def one_sample_ttest(values, mu: float):
    """(t, two-sided p) of the sample mean against mu; NaN markers if degenerate."""
    v = np.asarray(values, dtype=np.float64)
    if v.ndim != 1 or v.size < 2:
        raise DegenerateError("t-test needs at least 2 values")
    if np.any(np.isnan(v)) or math.isnan(mu):
        return math.nan, math.nan
    sd = float(v.std(ddof=1))
    if sd == 0.0:
        return math.nan, math.nan
    t = (float(v.mean()) - mu) / (sd / math.sqrt(v.size))
    return t, student_t_p_two_sided(t, v.size - 1)


def sem(values) -> float:
    """Standard error of the mean: sample sd (n-1 denominator) / sqrt(n)."""
    v = np.asarray(values, dtype=np.float64)
    if v.ndim != 1 or v.size < 2:
        raise DegenerateError("sem needs at least 2 values")
    return float(v.std(ddof=1) / math.sqrt(v.size))


def bonferroni(p_values, alpha: float, n_comparisons: int = 0):
    """flag_i = p_i < alpha / m; m defaults to the family size len(p_values)."""
    if not 0.0 < alpha < 1.0:
        raise DegenerateError("alpha must lie in (0, 1)")
    p_values = list(p_values)
    m = n_comparisons if n_comparisons > 0 else len(p_values)
    threshold = alpha / m
    return [bool(not math.isnan(p) and p < threshold) for p in p_values]


@dataclass(frozen=True)
class RsaResult:
    """Everything the results figure and tables need for one (representation, model)."""

    representation_name: str
    model_name: str
    per_instrument_rho: tuple
    mean_rho: float
    sem: float
    p_vs_zero: float
    sig_vs_zero: bool
    noise_lower: float
    noise_upper: float
    p_vs_ceiling: float
    sig_below_ceiling: bool
    alpha: float
    n_comparisons: int

    def to_dict(self) -> dict:
        def scrub(x):
            if isinstance(x, float) and math.isnan(x):
                return None
            return x
        return {
            "representation_name": self.representation_name,
            "model_name": self.model_name,
            "per_instrument_rho": [scrub(float(r)) for r in self.per_instrument_rho],
            "mean_rho": scrub(self.mean_rho),
            "sem": scrub(self.sem),
            "p_vs_zero": scrub(self.p_vs_zero),
            "sig_vs_zero": self.sig_vs_zero,
            "noise_lower": scrub(self.noise_lower),
            "noise_upper": scrub(self.noise_upper),
            "p_vs_ceiling": scrub(self.p_vs_ceiling),
            "sig_below_ceiling": self.sig_below_ceiling,
            "alpha": self.alpha,
            "n_comparisons": self.n_comparisons,
        }


def evaluate_representation(representation_name: str, instrument_rdms, models: dict,
                            alpha: float, n_comparisons: int):
    """Full RSA for one representation against each hypothesis model.

    The noise ceiling depends only on the instrument RDMs, so it is shared by
    all models of the representation. Significance flags use the Bonferroni
    threshold alpha / n_comparisons, where n_comparisons counts every
    (representation, model) test shown in one results figure.
    """
    lower, upper = noise_ceiling(instrument_rdms)
    results = []
    for model_name, model in models.items():
        rhos = compare_study(instrument_rdms, model)
        arr = np.asarray(rhos, dtype=np.float64)
        has_nan = bool(np.any(np.isnan(arr)))
        mean_rho = math.nan if has_nan else float(arr.mean())
        rho_sem = math.nan if has_nan else sem(arr)
        t0, p0 = one_sample_ttest(arr, 0.0) if not has_nan else (math.nan, math.nan)
        tc, pc = (one_sample_ttest(arr, lower)
                  if not has_nan and not math.isnan(lower) else (math.nan, math.nan))
        threshold = alpha / n_comparisons
        sig_zero = bool(not math.isnan(p0) and p0 < threshold)
        # direction matters: only a mean below the ceiling counts as "below"
        sig_below = bool(not math.isnan(pc) and pc < threshold
                         and not math.isnan(mean_rho) and mean_rho < lower)
        results.append(RsaResult(
            representation_name=representation_name,
            model_name=model_name,
            per_instrument_rho=tuple(float(r) for r in rhos),
            mean_rho=mean_rho,
            sem=rho_sem,
            p_vs_zero=p0,
            sig_vs_zero=sig_zero,
            noise_lower=lower,
            noise_upper=upper,
            p_vs_ceiling=pc,
            sig_below_ceiling=sig_below,
            alpha=alpha,
            n_comparisons=n_comparisons,
        ))
    return results
